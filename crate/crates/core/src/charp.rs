//! Bounds on ungraded decomposition numbers `d^{e,p}_{λμ}(1)` derived from
//! characteristic-0 data.
//!
//! Every entry carries lower and upper bounds with the chain of rules that
//! produced them. External facts are named axioms and are only consulted
//! when the engine is built with axioms enabled.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::abacus::{block_partitions, quotient, BlockId};
use crate::error::{HeckeError, Result};
use crate::jantzen::{dominance_interval, jantzen_coeffs};
use crate::llt::{shared_engine, LltEngine};
use crate::partitions::{Node, Partition};
use crate::scopes::{swap_runners, ScopesClass, ScopesStep};

pub const AXIOM_FAYWT2: &str = "faywt2:Cor2.4";
pub const AXIOM_WT2_ODD: &str = "weight2:odd-p-char-free";
pub const AXIOM_WT1: &str = "weight1:char-free";
pub const AXIOM_FAYTAN06: &str = "faytan06";

/// One rule application.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: String,
    pub anchor: String,
    pub inputs: Vec<String>,
    pub lower: u64,
    pub upper: Option<u64>,
}

/// What is known about `d^{e,p}_{λμ}(1)`; `upper = None` means unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryKnowledge {
    pub lambda: Partition,
    pub mu: Partition,
    pub lower: u64,
    pub upper: Option<u64>,
    /// `d^{e,p}_{λμ}(v) = d^{e,0}_{λμ}(v)` is forced, not just at `v = 1`.
    pub graded: bool,
    pub provenance: Vec<Step>,
    pub assumptions: BTreeSet<String>,
}

impl EntryKnowledge {
    fn new(lambda: &Partition, mu: &Partition) -> Self {
        EntryKnowledge {
            lambda: lambda.clone(),
            mu: mu.clone(),
            lower: 0,
            upper: None,
            graded: false,
            provenance: Vec::new(),
            assumptions: BTreeSet::new(),
        }
    }

    pub fn is_certified(&self) -> bool {
        self.upper == Some(self.lower)
    }

    pub fn value(&self) -> Option<u64> {
        self.is_certified().then_some(self.lower)
    }

    fn record(&mut self, rule: &str, anchor: &str, inputs: Vec<String>) {
        self.provenance.push(Step {
            rule: rule.into(),
            anchor: anchor.into(),
            inputs,
            lower: self.lower,
            upper: self.upper,
        });
    }

    fn raise_lower(&mut self, x: u64) -> bool {
        if x > self.lower {
            self.lower = x;
            true
        } else {
            false
        }
    }

    fn cap_upper(&mut self, x: u64) -> bool {
        if self.upper.is_none_or(|u| x < u) {
            self.upper = Some(x);
            true
        } else {
            false
        }
    }

    /// Adopts the bounds of an entry known to be equal to this one.
    fn adopt(&mut self, other: &EntryKnowledge) -> bool {
        let a = self.raise_lower(other.lower);
        let b = other.upper.is_some_and(|u| self.cap_upper(u));
        if a || b {
            self.assumptions.extend(other.assumptions.iter().cloned());
        }
        a || b
    }

    fn check(&self) -> Result<()> {
        match self.upper {
            Some(u) if u < self.lower => Err(HeckeError::DeductionInconsistency(
                self.lambda.to_string(),
                self.mu.to_string(),
                self.lower,
                u,
            )),
            _ => Ok(()),
        }
    }
}

/// A restriction step: the class `source` with the beads on runner `runner`
/// slid onto runner `runner − 1` is the (unnormalized) class `raw`, which is
/// Scopes equivalent to the normalized `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub target: Vec<usize>,
    pub raw: Vec<usize>,
    pub source: Vec<usize>,
    pub runner: usize,
    pub weight: usize,
}

impl ChainStep {
    pub fn new(source: &[usize], runner: usize, weight: usize) -> Self {
        let mut raw = source.to_vec();
        raw.swap(runner - 1, runner);
        let target = ScopesClass {
            counts: raw.clone(),
            weight,
        }
        .normalize()
        .counts;
        ChainStep {
            target,
            raw,
            source: source.to_vec(),
            runner,
            weight,
        }
    }

    /// Residue of the nodes removed by the restriction.
    pub fn residue(&self) -> usize {
        let e = self.source.len();
        let r: usize = self.source.iter().sum();
        (self.runner + e * r - r) % e
    }

    /// Number of nodes removed.
    pub fn k(&self) -> usize {
        self.source[self.runner] - self.source[self.runner - 1]
    }
}

/// The restriction chain from the weight-4 Rouquier block at `e = 3`:
/// `[1,4,7] → [1,7,4] ~ [1,4,6]`, `[1,4,7] → [4,1,7] ~ [1,3,6]` and
/// `[1,3,6] → [1,6,3] ~ [1,3,5]`.
pub fn near_rouquier_chain() -> Vec<ChainStep> {
    vec![
        ChainStep::new(&[1, 4, 7], 2, 4),
        ChainStep::new(&[1, 4, 7], 1, 4),
        ChainStep::new(&[1, 3, 6], 2, 4),
    ]
}

/// Breadth-first search for restriction steps from any of `sources` to
/// `target` (all normalized), at most `max_len` steps.
pub fn find_chain(
    target: &ScopesClass,
    sources: &[ScopesClass],
    max_len: usize,
) -> Option<Vec<ChainStep>> {
    let w = target.weight;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue: VecDeque<(Vec<usize>, Vec<ChainStep>)> = VecDeque::new();
    for s in sources {
        if seen.insert(s.counts.clone()) {
            queue.push_back((s.counts.clone(), Vec::new()));
        }
    }
    while let Some((cur, path)) = queue.pop_front() {
        if cur == target.counts {
            return Some(path);
        }
        if path.len() >= max_len {
            continue;
        }
        for j in 1..cur.len() {
            if cur[j] <= cur[j - 1] || cur[j] - cur[j - 1] >= w {
                continue;
            }
            let step = ChainStep::new(&cur, j, w);
            if seen.insert(step.target.clone()) {
                let mut p = path.clone();
                let next = step.target.clone();
                p.push(step);
                queue.push_back((next, p));
            }
        }
    }
    None
}

/// Removes `k` removable `i`-nodes; checks the restriction preconditions:
/// `λ`, `μ` have exactly `k` removable `i`-nodes, `μ` is `e`-regular and the
/// results have exactly `k` addable `i`-nodes. Then `d_{λμ} ≥ d_{λ̄μ̄}`.
pub fn restriction_bound(
    lambda: &Partition,
    mu: &Partition,
    e: usize,
    i: usize,
    k: usize,
) -> Result<(Partition, Partition)> {
    if !mu.is_e_regular(e) {
        return Err(HeckeError::NotRegular(mu.to_string(), e));
    }
    let strip = |x: &Partition, name: &str| -> Result<Partition> {
        let (_, rem) = x.boundary_nodes(e, i);
        if rem.len() != k {
            return Err(HeckeError::Restriction(format!(
                "{name} = {x} has {} removable {i}-nodes, expected {k}",
                rem.len()
            )));
        }
        let mut y = x.clone();
        for n in rem.iter().rev() {
            y = y.without_node(*n);
        }
        let (add, _) = y.boundary_nodes(e, i);
        if add.len() != k {
            return Err(HeckeError::Restriction(format!(
                "{name} after removal = {y} has {} addable {i}-nodes, expected {k}",
                add.len()
            )));
        }
        Ok(y)
    };
    let lb = strip(lambda, "λ")?;
    let mb = strip(mu, "μ")?;
    debug_assert!(mb.is_e_regular(e));
    Ok((lb, mb))
}

/// Adds every addable `i`-node.
fn add_all(x: &Partition, e: usize, i: usize) -> (Partition, usize) {
    let (add, _) = x.boundary_nodes(e, i);
    let mut y = x.clone();
    for n in &add {
        y = y.with_node(Node::new(n.row, n.col));
    }
    (y, add.len())
}

/// Whether the block is a Rouquier block: consecutive runners of the core
/// differ by at least `w − 1` beads.
pub fn is_rouquier(b: &BlockId) -> bool {
    let c = ScopesClass::of_block(b);
    c.counts.windows(2).all(|x| x[1] + 1 >= x[0] + b.weight)
}

/// Engine configuration.
#[derive(Clone, Debug)]
pub struct CharpOptions {
    pub allow_axioms: bool,
    /// Row and column removal.
    pub removal: bool,
    pub chains: Vec<ChainStep>,
    pub jantzen_depth: usize,
}

impl Default for CharpOptions {
    fn default() -> Self {
        CharpOptions {
            allow_axioms: false,
            removal: true,
            chains: near_rouquier_chain(),
            jantzen_depth: 3,
        }
    }
}

impl CharpOptions {
    /// Only adjustment positivity, the Rouquier quotient rule, Jantzen
    /// vanishing, Scopes transport and the restriction chains.
    pub fn without_removal() -> Self {
        CharpOptions {
            removal: false,
            ..Self::default()
        }
    }
}

fn pair(l: &Partition, m: &Partition) -> String {
    format!("({l} | {m})")
}

/// Goal-directed deduction engine for fixed `e` and `p`.
pub struct CharpEngine {
    e: usize,
    p: usize,
    opts: CharpOptions,
    llt: Arc<LltEngine>,
    memo: HashMap<(Partition, Partition), EntryKnowledge>,
    active: HashSet<(Partition, Partition)>,
    depth: usize,
    // bumped whenever an answer is truncated by the cycle guard or depth cap
    truncations: usize,
}

impl CharpEngine {
    pub fn new(e: usize, p: usize, opts: CharpOptions) -> Self {
        CharpEngine {
            e,
            p,
            opts,
            llt: shared_engine(e),
            memo: HashMap::new(),
            active: HashSet::new(),
            depth: 0,
            truncations: 0,
        }
    }

    pub fn with_llt(e: usize, p: usize, opts: CharpOptions, llt: Arc<LltEngine>) -> Self {
        let mut s = Self::new(e, p, opts);
        s.llt = llt;
        s
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn axioms_allowed(&self) -> bool {
        self.opts.allow_axioms
    }

    fn d0(&self, lambda: &Partition, mu: &Partition) -> Result<crate::laurent::LaurentPoly> {
        Ok(self.llt.column(mu)?.coeff(lambda))
    }

    /// Bounds for `d^{e,p}_{λμ}(1)`.
    pub fn entry(&mut self, lambda: &Partition, mu: &Partition) -> Result<EntryKnowledge> {
        let key = (lambda.clone(), mu.clone());
        if let Some(k) = self.memo.get(&key) {
            return Ok(k.clone());
        }
        if self.active.contains(&key) {
            // a cycle: answer with the unconditional bounds only
            self.truncations += 1;
            let mut k = EntryKnowledge::new(lambda, mu);
            if mu.is_e_regular(self.e) && lambda.size() == mu.size() {
                k.raise_lower(self.d0(lambda, mu)?.eval_at_one().max(0) as u64);
            }
            return Ok(k);
        }
        self.active.insert(key.clone());
        let before = self.truncations;
        let res = self.derive(lambda, mu);
        self.active.remove(&key);
        let k = res?;
        k.check()?;
        // partial answers obtained under truncation may improve later
        if k.is_certified() || self.truncations == before {
            self.memo.insert(key, k.clone());
        }
        Ok(k)
    }

    fn derive(&mut self, lambda: &Partition, mu: &Partition) -> Result<EntryKnowledge> {
        let e = self.e;
        let mut k = EntryKnowledge::new(lambda, mu);
        if lambda.size() != mu.size() {
            return Err(HeckeError::IncomparableSizes(lambda.size(), mu.size()));
        }
        if lambda == mu {
            k.lower = 1;
            k.upper = Some(1);
            k.graded = true;
            k.record("diagonal", "unitriangularity", vec![]);
            return Ok(k);
        }
        if !mu.dominates_unchecked(lambda) || BlockId::of(lambda, e) != BlockId::of(mu, e) {
            k.upper = Some(0);
            k.graded = true;
            k.record("dominance", "unitriangularity", vec![]);
            return Ok(k);
        }
        if !mu.is_e_regular(e) {
            return Err(HeckeError::NotRegular(mu.to_string(), e));
        }
        let d0 = self.d0(lambda, mu)?;
        let d0_1 = d0.eval_at_one() as u64;
        k.raise_lower(d0_1);
        k.record(
            "adjustment-positivity",
            "bk09:Thm5.17",
            vec![format!("d0 = {d0}")],
        );
        if self.p == 0 {
            k.cap_upper(d0_1);
            k.graded = true;
            k.record("characteristic-zero", "LLT", vec![]);
            return Ok(k);
        }

        // row removal
        if self.opts.removal && !lambda.is_empty() && lambda.part(1) == mu.part(1) {
            let (lb, mb) = (lambda.without_first_row(), mu.without_first_row());
            let sub = self.entry(&lb, &mb)?;
            if k.adopt(&sub) {
                k.record("row-removal", "donkin", vec![pair(&lb, &mb)]);
            }
            if k.is_certified() {
                return Ok(k);
            }
        }
        // column removal
        if self.opts.removal && lambda.len() == mu.len() && !lambda.is_empty() {
            let (lb, mb) = (lambda.without_first_column(), mu.without_first_column());
            let sub = self.entry(&lb, &mb)?;
            if k.adopt(&sub) {
                k.record("column-removal", "donkin", vec![pair(&lb, &mb)]);
            }
            if k.is_certified() {
                return Ok(k);
            }
        }

        let block = BlockId::of(mu, e);
        let class = ScopesClass::of_block(&block);
        let (norm, path) = class.normalize_with_path();

        // Scopes transport into the normalized class
        if !path.is_empty() {
            let lt = crate::scopes::transport(lambda, e, &path)?;
            let mt = crate::scopes::transport(mu, e, &path)?;
            let sub = self.entry(&lt, &mt)?;
            if k.adopt(&sub) {
                k.graded |= sub.graded;
                k.record(
                    "scopes",
                    "as22:Prop3.2",
                    vec![pair(&lt, &mt), norm.to_string()],
                );
            }
            return Ok(k);
        }

        if is_rouquier(&block) && block.weight >= 1 {
            self.rouquier_rule(lambda, mu, d0_1, &block, &mut k)?;
            if k.is_certified() {
                return Ok(k);
            }
        }

        let chains: Vec<ChainStep> = self
            .opts
            .chains
            .iter()
            .filter(|c| c.target == norm.counts && c.weight == block.weight && c.source.len() == e)
            .cloned()
            .collect();
        for step in chains {
            self.chain_rule(lambda, mu, &step, &mut k)?;
            if k.is_certified() {
                return Ok(k);
            }
        }

        if k.lower == 0 && k.upper != Some(0) {
            if self.depth < self.opts.jantzen_depth {
                self.jantzen_rule(lambda, mu, &mut k)?;
                if k.is_certified() {
                    return Ok(k);
                }
            } else {
                self.truncations += 1;
            }
        }

        if self.opts.allow_axioms {
            self.axiom_rule(&block, d0_1, &mut k);
        }
        Ok(k)
    }

    fn rouquier_rule(
        &mut self,
        lambda: &Partition,
        mu: &Partition,
        d0_1: u64,
        block: &BlockId,
        k: &mut EntryKnowledge,
    ) -> Result<()> {
        let e = self.e;
        let profile = quotient(mu, e).profile();
        let mut survivors = Vec::new();
        for nu in block_partitions(block) {
            if nu == *mu
                || !nu.is_e_regular(e)
                || !mu.dominates_unchecked(&nu)
                || !nu.dominates_unchecked(lambda)
                || quotient(&nu, e).profile() != profile
            {
                continue;
            }
            if self.d0(lambda, &nu)?.is_zero() {
                continue;
            }
            survivors.push(nu);
        }
        let mut killed = Vec::new();
        let mut extra = BTreeSet::new();
        for nu in &survivors {
            let sub = self.entry(nu, mu)?;
            if sub.upper != Some(0) {
                return Ok(());
            }
            extra.extend(sub.assumptions.iter().cloned());
            killed.push(pair(nu, mu));
        }
        k.raise_lower(d0_1);
        k.cap_upper(d0_1);
        k.graded = true;
        k.assumptions.extend(extra);
        let mut inputs = vec![format!("surviving adjustment terms: {}", survivors.len())];
        inputs.extend(killed);
        k.record("rouquier-quotient", "jlm:Prop4.4", inputs);
        Ok(())
    }

    fn chain_rule(
        &mut self,
        lambda: &Partition,
        mu: &Partition,
        step: &ChainStep,
        k: &mut EntryKnowledge,
    ) -> Result<()> {
        let e = self.e;
        let raw = ScopesClass {
            counts: step.raw.clone(),
            weight: step.weight,
        };
        let (_, path) = raw.normalize_with_path();
        let back = |x: &Partition| -> Partition {
            let mut y = x.clone();
            for s in path.iter().rev() {
                y = swap_back(&y, e, s);
            }
            y
        };
        let (a, b) = (back(lambda), back(mu));
        let i = step.residue();
        let (la, na) = add_all(&a, e, i);
        let (mb, nb) = add_all(&b, e, i);
        if na != step.k() || nb != step.k() {
            return Ok(());
        }
        let Ok((ra, rb)) = restriction_bound(&la, &mb, e, i, step.k()) else {
            return Ok(());
        };
        if ra != a || rb != b {
            return Ok(());
        }
        let sub = self.entry(&la, &mb)?;
        if let Some(u) = sub.upper {
            if k.cap_upper(u) {
                k.assumptions.extend(sub.assumptions.iter().cloned());
                k.record(
                    "restriction",
                    "mathas:6.1",
                    vec![
                        format!(
                            "{} -> {}",
                            ScopesClass {
                                counts: step.source.clone(),
                                weight: step.weight
                            },
                            raw
                        ),
                        format!("residue {i}, k = {}", step.k()),
                        pair(&a, &b),
                        pair(&la, &mb),
                    ],
                );
            }
        }
        Ok(())
    }

    fn jantzen_rule(
        &mut self,
        lambda: &Partition,
        mu: &Partition,
        k: &mut EntryKnowledge,
    ) -> Result<()> {
        let row = jantzen_coeffs(lambda, self.e, self.p);
        let interval = dominance_interval(lambda, mu, self.e);
        let mut killed = Vec::new();
        let mut extra = BTreeSet::new();
        for sigma in &interval {
            if row.get(sigma) == 0 {
                continue;
            }
            if sigma == mu {
                return Ok(());
            }
            self.depth += 1;
            let sub = self.entry(sigma, mu);
            self.depth -= 1;
            let sub = sub?;
            if sub.upper != Some(0) {
                return Ok(());
            }
            extra.extend(sub.assumptions.iter().cloned());
            killed.push(pair(sigma, mu));
        }
        k.cap_upper(0);
        k.assumptions.extend(extra);
        let mut inputs = vec![format!("interval size {}", interval.len())];
        inputs.extend(killed);
        k.record("jantzen-vanishing", "mathas:5.2", inputs);
        Ok(())
    }

    fn axiom_rule(&mut self, block: &BlockId, d0_1: u64, k: &mut EntryKnowledge) {
        let e = self.e;
        let name = match (block.weight, self.p) {
            (0 | 1, _) => Some(AXIOM_WT1),
            (2, p) if p != 2 => Some(AXIOM_WT2_ODD),
            (2, 2) => {
                let c = ScopesClass::of_block(block).normalize().counts;
                (e >= 4 || c != [1, 2, 3]).then_some(AXIOM_FAYWT2)
            }
            (3, 2) if e == 3 => {
                let c = ScopesClass::of_block(block).normalize().counts;
                (c == [1, 3, 4] || c == [1, 2, 3]).then_some(AXIOM_FAYTAN06)
            }
            _ => None,
        };
        if let Some(name) = name {
            if k.cap_upper(d0_1) {
                k.raise_lower(d0_1);
                k.assumptions.insert(name.to_string());
                k.record("axiom", name, vec![]);
            }
        }
    }
}

fn swap_back(x: &Partition, e: usize, s: &ScopesStep) -> Partition {
    let mut r = s.beads;
    while r < x.len() {
        r += e;
    }
    swap_runners(x, e, s.runner, r)
}

/// Bounds for every entry `(rows_i, rows_j)`; `None` when `rows_j` is not
/// `e`-regular and the entry is not forced by triangularity.
pub fn deduce_charp_submatrix(
    engine: &mut CharpEngine,
    rows: &[Partition],
) -> Result<Vec<Vec<Option<EntryKnowledge>>>> {
    let mut out = Vec::with_capacity(rows.len());
    for lambda in rows {
        let mut row = Vec::with_capacity(rows.len());
        for mu in rows {
            match engine.entry(lambda, mu) {
                Ok(k) => row.push(Some(k)),
                Err(HeckeError::NotRegular(..)) => row.push(None),
                Err(err) => return Err(err),
            }
        }
        out.push(row);
    }
    Ok(out)
}

/// Lower bounds from positivity of the adjustment matrix alone.
pub fn adjustment_lower_bound(
    char0: &[Vec<Option<crate::laurent::LaurentPoly>>],
) -> Vec<Vec<Option<u64>>> {
    char0
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| c.as_ref().map(|x| x.eval_at_one().max(0) as u64))
                .collect()
        })
        .collect()
}

/// `true` iff every adjustment term that could change `d_{λμ}` in a
/// Rouquier block has a quotient profile different from `μ`'s, except for
/// those returned; errors if the block is not Rouquier.
pub fn rouquier_constraint(
    block: &BlockId,
    lambda: &Partition,
    mu: &Partition,
) -> Result<Vec<Partition>> {
    if !is_rouquier(block) {
        return Err(HeckeError::NotRouquier(
            ScopesClass::of_block(block).to_string(),
        ));
    }
    let e = block.e;
    let llt = shared_engine(e);
    let profile = quotient(mu, e).profile();
    let mut out = Vec::new();
    for nu in block_partitions(block) {
        if nu != *mu
            && nu.is_e_regular(e)
            && mu.dominates_unchecked(&nu)
            && nu.dominates_unchecked(lambda)
            && quotient(&nu, e).profile() == profile
            && !llt.column(&nu)?.coeff(lambda).is_zero()
        {
            out.push(nu);
        }
    }
    Ok(out)
}
