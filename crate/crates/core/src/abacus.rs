//! β-numbers, abacus displays, cores, weights and quotients.
//!
//! Positions on the abacus are `level * e + runner`. Quotient components are
//! ordered by the lowest-bead positions of the core, largest first: component
//! 0 lives on the runner holding `p_{e-1}`, the last component on the runner
//! holding `p_0`. That ordering does not depend on the bead count.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HeckeError, Result};
use crate::partitions::{partitions_of, Partition};

/// Strictly decreasing bead positions of a partition on `r` beads.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BetaSet {
    beads: Vec<i64>,
}

impl BetaSet {
    /// Wraps bead positions, sorting them into decreasing order.
    pub fn from_positions(mut beads: Vec<i64>) -> Result<Self> {
        beads.sort_unstable_by(|a, b| b.cmp(a));
        if beads.windows(2).any(|w| w[0] == w[1]) {
            return Err(HeckeError::Invalid("repeated bead position".into()));
        }
        if beads.last().is_some_and(|&x| x < 0) {
            return Err(HeckeError::Invalid("negative bead position".into()));
        }
        Ok(BetaSet { beads })
    }

    pub fn beads(&self) -> &[i64] {
        &self.beads
    }

    pub fn bead_count(&self) -> usize {
        self.beads.len()
    }

    pub fn contains(&self, pos: i64) -> bool {
        self.beads.binary_search_by(|x| pos.cmp(x)).is_ok()
    }

    pub fn to_partition(&self) -> Partition {
        let r = self.beads.len() as i64;
        let parts = self
            .beads
            .iter()
            .enumerate()
            .map(|(i, &b)| (b + i as i64 + 1 - r) as u32)
            .collect();
        Partition::from_unsorted(parts)
    }
}

pub fn beta_numbers(lambda: &Partition, r: usize) -> Result<BetaSet> {
    if r < lambda.len() {
        return Err(HeckeError::BeadCountTooSmall {
            r,
            len: lambda.len(),
        });
    }
    let beads = (1..=r)
        .map(|i| lambda.part(i) as i64 - i as i64 + r as i64)
        .collect();
    Ok(BetaSet { beads })
}

pub fn from_beta(beta: &BetaSet) -> Partition {
    beta.to_partition()
}

/// Bead levels on each runner of an `e`-runner abacus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbacusDisplay {
    pub e: usize,
    pub r: usize,
    /// `runners[j]` holds the occupied levels of runner `j`, increasing.
    pub runners: Vec<Vec<usize>>,
}

impl AbacusDisplay {
    pub fn new(lambda: &Partition, e: usize, r: usize) -> Result<Self> {
        let beta = beta_numbers(lambda, r)?;
        let mut runners = vec![Vec::new(); e];
        for &b in beta.beads().iter().rev() {
            runners[(b as usize) % e].push(b as usize / e);
        }
        Ok(AbacusDisplay { e, r, runners })
    }

    pub fn counts(&self) -> Vec<usize> {
        self.runners.iter().map(Vec::len).collect()
    }

    pub fn positions(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .runners
            .iter()
            .enumerate()
            .flat_map(|(j, lv)| lv.iter().map(move |&l| (l * self.e + j) as i64))
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn to_partition(&self) -> Partition {
        BetaSet {
            beads: self.positions(),
        }
        .to_partition()
    }

    /// One row per level: `b` for a bead, `-` for a gap.
    pub fn render(&self) -> String {
        let depth = self
            .runners
            .iter()
            .filter_map(|lv| lv.last())
            .max()
            .map_or(0, |&m| m + 1);
        let mut out = String::new();
        for level in 0..depth {
            for lv in &self.runners {
                out.push(if lv.binary_search(&level).is_ok() {
                    'b'
                } else {
                    '-'
                });
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for AbacusDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Smallest bead count `r ≥ len(λ)` with `r ≡ 0 (mod e)`.
pub fn default_bead_count(lambda: &Partition, e: usize) -> usize {
    lambda.len().div_ceil(e) * e
}

/// Per-runner bead counts at bead count `r`.
pub fn runner_counts(lambda: &Partition, e: usize, r: usize) -> Result<Vec<usize>> {
    Ok(AbacusDisplay::new(lambda, e, r)?.counts())
}

/// The partition whose display has `counts[j]` beads pushed to the top of runner `j`.
pub fn core_from_counts(counts: &[usize]) -> Partition {
    let e = counts.len();
    let beads = counts
        .iter()
        .enumerate()
        .flat_map(|(j, &c)| (0..c).map(move |l| (l * e + j) as i64))
        .collect();
    BetaSet::from_positions(beads)
        .expect("distinct positions")
        .to_partition()
}

/// The `e`-core and weight of `λ`.
pub fn core_and_weight(lambda: &Partition, e: usize) -> (Partition, usize) {
    assert!(e >= 2, "e must be at least 2");
    let ab = AbacusDisplay::new(lambda, e, lambda.len()).expect("r = len is valid");
    let mut weight = 0;
    for lv in &ab.runners {
        for (rank, &level) in lv.iter().enumerate() {
            weight += level - rank;
        }
    }
    (core_from_counts(&ab.counts()), weight)
}

pub fn is_core(lambda: &Partition, e: usize) -> bool {
    core_and_weight(lambda, e).1 == 0
}

/// A block, named by its `e`-core and weight.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockId {
    pub core: Partition,
    pub weight: usize,
    pub e: usize,
}

impl BlockId {
    pub fn new(core: Partition, weight: usize, e: usize) -> Result<Self> {
        if !is_core(&core, e) {
            return Err(HeckeError::NotACore(core.to_string(), e));
        }
        Ok(BlockId { core, weight, e })
    }

    pub fn of(lambda: &Partition, e: usize) -> Self {
        let (core, weight) = core_and_weight(lambda, e);
        BlockId { core, weight, e }
    }

    /// Size `n = |core| + e·w` of the partitions in the block.
    pub fn size(&self) -> usize {
        self.core.size() + self.e * self.weight
    }

    pub fn contains(&self, lambda: &Partition) -> bool {
        lambda.size() == self.size() && BlockId::of(lambda, self.e) == *self
    }
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B(({}),{}) at e={}", self.core, self.weight, self.e)
    }
}

/// Lowest-bead position of each runner of a core display, `j - e` for an
/// empty runner.
fn lowest_positions(counts: &[usize]) -> Vec<i64> {
    let e = counts.len() as i64;
    counts
        .iter()
        .enumerate()
        .map(|(j, &c)| (c as i64 - 1) * e + j as i64)
        .collect()
}

/// `p_0 < p_1 < … < p_{e-1}` for the core `ρ` displayed on `r` beads, with
/// `r` raised by multiples of `e` until every runner carries a bead.
pub fn runner_positions(rho: &Partition, e: usize, r: usize) -> Result<Vec<i64>> {
    if !is_core(rho, e) {
        return Err(HeckeError::NotACore(rho.to_string(), e));
    }
    let mut counts = runner_counts(rho, e, r)?;
    // add full levels of beads until no runner is empty
    while counts.contains(&0) {
        counts.iter_mut().for_each(|c| *c += 1);
    }
    let mut p = lowest_positions(&counts);
    p.sort_unstable();
    Ok(p)
}

/// Runner indices ordered by decreasing lowest-bead position of the core.
/// Entry `k` is the runner carrying quotient component `k`.
pub fn runner_order(counts: &[usize]) -> Vec<usize> {
    let low = lowest_positions(counts);
    let mut idx: Vec<usize> = (0..counts.len()).collect();
    idx.sort_by(|&a, &b| low[b].cmp(&low[a]));
    idx
}

/// An `e`-quotient in the `p_i`-ordered convention.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Quotient(pub Vec<Partition>);

impl Quotient {
    pub fn new(components: Vec<Partition>) -> Self {
        Quotient(components)
    }

    pub fn components(&self) -> &[Partition] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(Partition::size).sum()
    }

    /// Component sizes, in quotient order.
    pub fn profile(&self) -> Vec<usize> {
        self.0.iter().map(Partition::size).collect()
    }

    /// Parses `"(1),(2,1),∅,∅"`-style text or `"1;2,1;;"` lists.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = if outer_parens_wrap(s) {
            &s[1..s.len() - 1]
        } else {
            s
        };
        let comps = if s.contains(';') {
            s.split(';').map(str::to_string).collect()
        } else {
            split_top_level(s)?
        };
        let parts = comps
            .iter()
            .map(|c| c.parse())
            .collect::<Result<Vec<Partition>>>()?;
        Ok(Quotient(parts))
    }
}

/// True if `s` is `( … )` with the first parenthesis closing at the end and
/// the inside a list of components.
fn outer_parens_wrap(s: &str) -> bool {
    if !s.starts_with('(') || !s.ends_with(')') {
        return false;
    }
    let mut depth = 0i32;
    for (pos, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    let inner = s[1..pos].trim_start();
                    return pos == s.len() - 1
                        && (inner.starts_with('(')
                            || inner.starts_with('∅')
                            || inner.starts_with('-'));
                }
            }
            _ => {}
        }
    }
    false
}

fn split_top_level(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for (pos, ch) in s.char_indices() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(HeckeError::Parse {
                        pos,
                        msg: "unbalanced ')'".into(),
                    });
                }
                cur.push(ch);
            }
            ',' if depth == 0 => out.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    out.push(cur);
    Ok(out)
}

impl fmt::Display for Quotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if c.is_empty() {
                write!(f, "∅")?;
            } else {
                write!(f, "({c})")?;
            }
        }
        write!(f, ")")
    }
}

/// Reads the partition on a single runner from its increasing bead levels.
fn runner_partition(levels: &[usize]) -> Partition {
    let c = levels.len();
    let parts = levels
        .iter()
        .enumerate()
        .map(|(k, &l)| (l - k) as u32)
        .rev()
        .collect::<Vec<_>>();
    debug_assert_eq!(parts.len(), c);
    Partition::from_unsorted(parts)
}

pub fn quotient(lambda: &Partition, e: usize) -> Quotient {
    let ab = AbacusDisplay::new(lambda, e, lambda.len()).expect("r = len is valid");
    let order = runner_order(&ab.counts());
    Quotient(
        order
            .iter()
            .map(|&j| runner_partition(&ab.runners[j]))
            .collect(),
    )
}

/// The unique partition with core `ρ` and quotient `q`.
pub fn from_quotient(rho: &Partition, q: &Quotient, e: usize) -> Result<Partition> {
    if q.0.len() != e {
        return Err(HeckeError::Invalid(format!(
            "quotient has {} components, expected {e}",
            q.0.len()
        )));
    }
    if !is_core(rho, e) {
        return Err(HeckeError::NotACore(rho.to_string(), e));
    }
    let longest = q.0.iter().map(Partition::len).max().unwrap_or(0);
    let r = rho.len() + e * longest.max(1);
    let counts = runner_counts(rho, e, r)?;
    let order = runner_order(&counts);
    let mut beads = Vec::with_capacity(r);
    for (k, &j) in order.iter().enumerate() {
        let c = counts[j];
        let comp = &q.0[k];
        debug_assert!(comp.len() <= c);
        for t in 1..=c {
            let level = comp.part(t) as usize + c - t;
            beads.push((level * e + j) as i64);
        }
    }
    Ok(BetaSet::from_positions(beads)?.to_partition())
}

/// All `e`-multipartitions of `w` (as component vectors).
pub fn multipartitions(e: usize, w: usize) -> Vec<Vec<Partition>> {
    let by_size: Vec<Vec<Partition>> = (0..=w).map(partitions_of).collect();
    let mut out = Vec::new();
    let mut cur: Vec<Partition> = Vec::with_capacity(e);
    fn rec(
        k: usize,
        e: usize,
        rem: usize,
        by_size: &[Vec<Partition>],
        cur: &mut Vec<Partition>,
        out: &mut Vec<Vec<Partition>>,
    ) {
        if k == e - 1 {
            for p in &by_size[rem] {
                cur.push(p.clone());
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for s in 0..=rem {
            for p in &by_size[s] {
                cur.push(p.clone());
                rec(k + 1, e, rem - s, by_size, cur, out);
                cur.pop();
            }
        }
    }
    rec(0, e, w, &by_size, &mut cur, &mut out);
    out
}

/// Every partition of the block, in decreasing lexicographic order (which
/// refines dominance: dominant partitions come first).
pub fn block_partitions(b: &BlockId) -> Vec<Partition> {
    let mut out: Vec<Partition> = multipartitions(b.e, b.weight)
        .into_iter()
        .map(|q| from_quotient(&b.core, &Quotient(q), b.e).expect("valid core"))
        .collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn worked_example() {
        let rho = p("5,2,2");
        let lambda = p("9,9,3,3,1");
        assert_eq!(
            beta_numbers(&rho, 7).unwrap().beads(),
            &[11, 7, 6, 3, 2, 1, 0]
        );
        assert_eq!(
            beta_numbers(&lambda, 7).unwrap().beads(),
            &[15, 14, 7, 6, 3, 1, 0]
        );
        assert_eq!(core_and_weight(&lambda, 4), (rho.clone(), 4));
        assert_eq!(runner_positions(&rho, 4, 7).unwrap(), vec![0, 1, 6, 11]);
        assert_eq!(quotient(&lambda, 4).to_string(), "((1),(2,1),∅,∅)");
        let q = Quotient::parse("(1),(2,1),∅,∅").unwrap();
        assert_eq!(from_quotient(&rho, &q, 4).unwrap(), lambda);
    }

    #[test]
    fn beta_edge_cases() {
        assert_eq!(
            beta_numbers(&Partition::empty(), 3).unwrap().beads(),
            &[2, 1, 0]
        );
        assert_eq!(
            beta_numbers(&p("3,2,1"), 2),
            Err(HeckeError::BeadCountTooSmall { r: 2, len: 3 })
        );
    }

    #[test]
    fn cores_and_weights() {
        assert_eq!(core_and_weight(&p("7,1"), 3), (p("1,1"), 2));
        assert_eq!(core_and_weight(&p("5,2,2"), 4), (p("5,2,2"), 0));
        assert!(matches!(
            runner_positions(&p("9,9,3,3,1"), 4, 7),
            Err(HeckeError::NotACore(..))
        ));
    }

    #[test]
    fn runner_positions_examples() {
        let rho = p("10,6,4,3,2,2,1,1,1,1");
        assert_eq!(
            runner_positions(&rho, 5, 10).unwrap(),
            vec![0, 8, 12, 16, 24]
        );
        assert_eq!(
            runner_positions(&Partition::empty(), 3, 3).unwrap(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn quotient_of_core_is_empty() {
        let q = quotient(&p("5,2,2"), 4);
        assert!(q.components().iter().all(Partition::is_empty));
        let b = from_quotient(&p("5,2,2"), &q, 4).unwrap();
        assert_eq!(b, p("5,2,2"));
    }

    #[test]
    fn block_partition_examples() {
        let b = BlockId::new(Partition::empty(), 1, 3).unwrap();
        assert_eq!(block_partitions(&b), vec![p("3"), p("2,1"), p("1,1,1")]);
        let b = BlockId::new(p("1,1"), 1, 3).unwrap();
        assert_eq!(block_partitions(&b), vec![p("4,1"), p("3,2"), p("1^5")]);
    }

    #[test]
    fn render_matches_display() {
        let ab = AbacusDisplay::new(&p("5,2,2"), 4, 7).unwrap();
        assert_eq!(ab.render(), "bbbb\n--bb\n---b\n");
        let ab = AbacusDisplay::new(&p("9,9,3,3,1"), 4, 7).unwrap();
        assert_eq!(ab.render(), "bb-b\n--bb\n----\n--bb\n");
    }

    #[test]
    fn core_from_counts_example() {
        // one bead on runner 0, four on runner 1, seven on runner 2
        let core = core_from_counts(&[1, 4, 7]);
        assert_eq!(core, p("9,7,5,3,3,2,2,1,1"));
        assert_eq!(core.size(), 33);
    }
}
