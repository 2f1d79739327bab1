//! Scopes equivalences between blocks and the classes they generate.
//!
//! A class is written by the bead counts of the core on runners `0..e`,
//! e.g. `[1,4,7]` at `e = 3`. Its bead count is the sum of the entries.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::abacus::{
    beta_numbers, core_and_weight, core_from_counts, runner_counts, BetaSet, BlockId,
};
use crate::error::{HeckeError, Result};
use crate::partitions::Partition;

/// Bead counts per runner for a core, together with the block weight.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ScopesClass {
    pub counts: Vec<usize>,
    pub weight: usize,
}

/// One application of `Φ`: swap runners `runner − 1` and `runner` of a
/// display with `beads` beads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScopesStep {
    pub runner: usize,
    pub beads: usize,
}

impl ScopesClass {
    pub fn new(counts: Vec<usize>, weight: usize) -> Result<Self> {
        if counts.len() < 2 {
            return Err(HeckeError::Invalid(
                "a class needs at least two runners".into(),
            ));
        }
        Ok(ScopesClass { counts, weight })
    }

    pub fn e(&self) -> usize {
        self.counts.len()
    }

    pub fn beads(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn core(&self) -> Partition {
        core_from_counts(&self.counts)
    }

    pub fn block(&self) -> BlockId {
        BlockId {
            core: self.core(),
            weight: self.weight,
            e: self.e(),
        }
    }

    /// The class of a block's core, displayed with every runner nonempty and
    /// then rebased (not yet normalized).
    pub fn of_block(b: &BlockId) -> Self {
        let r = b.core.len() + b.e;
        let counts = runner_counts(&b.core, b.e, r).expect("r exceeds the length");
        ScopesClass {
            counts,
            weight: b.weight,
        }
        .rebased()
    }

    /// `[a, b, …, z] → [b, …, z, a − 1]`: the same core with one fewer bead.
    pub fn rotate(&self) -> Result<Self> {
        if self.counts[0] < 2 {
            return Err(HeckeError::RotationUnderflow);
        }
        let mut counts = self.counts[1..].to_vec();
        counts.push(self.counts[0] - 1);
        Ok(ScopesClass {
            counts,
            weight: self.weight,
        })
    }

    /// Drops the beads above the smallest lowest-bead position, so that
    /// runner 0 carries exactly one bead.
    pub fn rebased(&self) -> Self {
        let e = self.e();
        let mut c = self.clone();
        while c.counts.contains(&0) {
            c.counts.iter_mut().for_each(|x| *x += 1);
        }
        let (j, lvl) = c
            .counts
            .iter()
            .enumerate()
            .map(|(j, &n)| (j, n - 1))
            .min_by_key(|&(j, l)| l * e + j)
            .expect("nonempty");
        let counts = (0..e)
            .map(|t| {
                let src = (t + j) % e;
                if src >= j {
                    c.counts[src] - lvl
                } else {
                    c.counts[src] - lvl - 1
                }
            })
            .collect();
        ScopesClass {
            counts,
            weight: self.weight,
        }
    }

    /// Whether `Φ` may swap runners `i − 1` and `i`.
    pub fn can_swap(&self, i: usize) -> bool {
        self.weight > 0
            && i >= 1
            && i < self.e()
            && self.counts[i] >= self.counts[i - 1] + self.weight
    }

    /// The class after `Φ` swaps runners `i − 1` and `i`.
    pub fn swap(&self, i: usize) -> Result<Self> {
        if i == 0 || i >= self.e() {
            return Err(HeckeError::Invalid(format!(
                "runner {i} out of range 1..{}",
                self.e()
            )));
        }
        if !self.can_swap(i) {
            return Err(HeckeError::ScopesConditionViolated {
                runner: i,
                prev: i - 1,
                k: self.counts[i] as i64 - self.counts[i - 1] as i64,
                w: self.weight,
            });
        }
        let mut counts = self.counts.clone();
        counts.swap(i - 1, i);
        Ok(ScopesClass {
            counts,
            weight: self.weight,
        })
    }

    /// Canonical representative together with the `Φ`-moves reaching it.
    pub fn normalize_with_path(&self) -> (ScopesClass, Vec<ScopesStep>) {
        let mut c = self.rebased();
        let mut path = Vec::new();
        let bound = self.e()
            * self.weight.max(1)
            * (self.counts.iter().max().copied().unwrap_or(1) + self.e())
            + 8;
        loop {
            let best = (1..c.e())
                .filter(|&i| c.can_swap(i))
                .max_by_key(|&i| (c.counts[i] - c.counts[i - 1], std::cmp::Reverse(i)));
            let Some(i) = best else { break };
            path.push(ScopesStep {
                runner: i,
                beads: c.beads(),
            });
            c = c.swap(i).expect("checked").rebased();
            assert!(
                path.len() <= bound,
                "Scopes normalization did not terminate"
            );
        }
        (c, path)
    }

    pub fn normalize(&self) -> ScopesClass {
        self.normalize_with_path().0
    }

    pub fn is_normalized(&self) -> bool {
        self.normalize() == *self
    }

    /// The class of the block with conjugate core.
    pub fn conjugate(&self) -> ScopesClass {
        let b = BlockId {
            core: self.core().conjugate(),
            weight: self.weight,
            e: self.e(),
        };
        normalize_class(&b)
    }

    /// `counts[e−1] − counts[e−2]` style differences of the lowest-bead
    /// positions: `p_{e−1} − p_{e−1−k}` for `k = 1..e`.
    pub fn position_gaps(&self) -> Vec<i64> {
        let p = crate::abacus::runner_positions(&self.core(), self.e(), self.beads())
            .expect("core of a class");
        let top = p[p.len() - 1];
        (1..p.len()).map(|k| top - p[p.len() - 1 - k]).collect()
    }
}

impl fmt::Display for ScopesClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Parses `"[1,4,7]"`; the weight is supplied separately.
pub fn parse_counts(s: &str) -> Result<Vec<usize>> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or(HeckeError::Parse {
            pos: 0,
            msg: "expected [c0,c1,...]".into(),
        })?;
    let mut out = Vec::new();
    let mut pos = 1;
    for field in inner.split(',') {
        let n: usize = field.trim().parse().map_err(|_| HeckeError::Parse {
            pos,
            msg: format!("expected a positive integer, found {:?}", field.trim()),
        })?;
        if n == 0 {
            return Err(HeckeError::Parse {
                pos,
                msg: "runner counts must be positive".into(),
            });
        }
        out.push(n);
        pos += field.len() + 1;
    }
    Ok(out)
}

impl FromStr for ScopesClass {
    type Err = HeckeError;

    /// `"[1,4,7]"` with weight 0, or `"[1,4,7]@4"` with weight 4.
    fn from_str(s: &str) -> Result<Self> {
        let (c, w) = match s.split_once('@') {
            Some((c, w)) => (
                c,
                w.trim().parse().map_err(|_| HeckeError::Parse {
                    pos: c.len() + 1,
                    msg: "bad weight".into(),
                })?,
            ),
            None => (s, 0),
        };
        ScopesClass::new(parse_counts(c)?, w)
    }
}

/// `Φ(λ)`: swap runners `i − 1` and `i` of the display of `λ` on `r` beads
/// (raised by multiples of `e` if `λ` has more parts).
pub fn phi(lambda: &Partition, e: usize, i: usize, r: usize) -> Result<Partition> {
    if i == 0 || i >= e {
        return Err(HeckeError::Invalid(format!(
            "runner {i} out of range 1..{e}"
        )));
    }
    let mut r = r;
    while r < lambda.len() {
        r += e;
    }
    let (_, w) = core_and_weight(lambda, e);
    let counts = runner_counts(lambda, e, r)?;
    if counts[i] < counts[i - 1] + w {
        return Err(HeckeError::ScopesConditionViolated {
            runner: i,
            prev: i - 1,
            k: counts[i] as i64 - counts[i - 1] as i64,
            w,
        });
    }
    Ok(swap_runners(lambda, e, i, r))
}

/// Exchanges the beads of runners `i − 1` and `i`, without any precondition.
pub fn swap_runners(lambda: &Partition, e: usize, i: usize, r: usize) -> Partition {
    let beta = beta_numbers(lambda, r).expect("r is large enough");
    let e64 = e as i64;
    let moved = beta
        .beads()
        .iter()
        .map(|&b| {
            let j = (b % e64) as usize;
            if j == i {
                b - 1
            } else if j + 1 == i {
                b + 1
            } else {
                b
            }
        })
        .collect();
    BetaSet::from_positions(moved)
        .expect("a permutation of positions")
        .to_partition()
}

/// Applies a path of `Φ`-moves to a partition.
pub fn transport(lambda: &Partition, e: usize, path: &[ScopesStep]) -> Result<Partition> {
    let mut x = lambda.clone();
    for step in path {
        x = phi(&x, e, step.runner, step.beads)?;
    }
    Ok(x)
}

/// The canonical class of a block.
pub fn normalize_class(b: &BlockId) -> ScopesClass {
    ScopesClass::of_block(b).normalize()
}

/// The `Φ`-moves taking `b` to its canonical representative.
pub fn scopes_path(b: &BlockId) -> Vec<ScopesStep> {
    ScopesClass::of_block(b).normalize_with_path().1
}

/// All normalized classes for `e` and weight `w`: `counts[0] = 1`,
/// `counts[1] ≤ w` and `counts[j] ≤ counts[j−1] + w − 1`.
pub fn normalized_classes(e: usize, w: usize) -> Vec<ScopesClass> {
    let mut out = Vec::new();
    let mut cur = vec![1usize];
    fn rec(e: usize, w: usize, cur: &mut Vec<usize>, out: &mut Vec<ScopesClass>) {
        if cur.len() == e {
            out.push(ScopesClass {
                counts: cur.clone(),
                weight: w,
            });
            return;
        }
        let prev = *cur.last().expect("nonempty");
        for c in 1..=prev + w.max(1) - 1 {
            cur.push(c);
            rec(e, w, cur, out);
            cur.pop();
        }
    }
    rec(e, w, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abacus::block_partitions;

    fn cls(s: &str, w: usize) -> ScopesClass {
        ScopesClass::new(parse_counts(s).unwrap(), w).unwrap()
    }

    #[test]
    fn rotation_identities() {
        assert_eq!(cls("[7,1,4]", 4).rotate().unwrap(), cls("[1,4,6]", 4));
        assert_eq!(
            cls("[4,7,1]", 4).rotate().unwrap().rotate().unwrap(),
            cls("[1,3,6]", 4)
        );
        assert_eq!(cls("[6,1,3]", 4).rotate().unwrap(), cls("[1,3,5]", 4));
        assert_eq!(
            cls("[1,4,7]", 4).rotate(),
            Err(HeckeError::RotationUnderflow)
        );
        for s in ["[7,1,4]", "[4,7,1]", "[6,1,3]"] {
            let c = cls(s, 4);
            assert_eq!(c.rotate().unwrap().core(), c.core());
            assert_eq!(c.rebased(), c.rotate().unwrap().rebased());
        }
    }

    #[test]
    fn normalization() {
        assert_eq!(cls("[1,7,4]", 4).normalize(), cls("[1,4,6]", 4));
        assert_eq!(cls("[4,1,7]", 4).normalize(), cls("[1,3,6]", 4));
        assert_eq!(cls("[1,6,3]", 4).normalize(), cls("[1,3,5]", 4));
        // [1,4,8] → [1,8,4] → [8,1,4] = [1,4,7]
        assert_eq!(cls("[1,4,8]", 4).normalize_with_path().1.len(), 2);
        assert_eq!(cls("[1,4,8]", 4).swap(2).unwrap(), cls("[1,8,4]", 4));
        assert_eq!(cls("[1,4,8]", 4).normalize(), cls("[1,4,7]", 4));
        for s1 in 3..9 {
            assert_eq!(
                cls(&format!("[1,{s1},{}]", s1 + 1), 3).normalize(),
                cls("[1,3,4]", 3)
            );
        }
        let rho = core_from_counts(&[1, 4, 7]);
        assert_eq!(
            normalize_class(&BlockId::new(rho.clone(), 4, 3).unwrap()),
            cls("[1,4,7]", 4)
        );
        assert_eq!(
            normalize_class(&BlockId::new(rho, 0, 3).unwrap()).counts,
            vec![1, 4, 7]
        );
        assert!(scopes_path(&BlockId::new(core_from_counts(&[1, 4, 7]), 4, 3).unwrap()).is_empty());
    }

    #[test]
    fn class_counts() {
        assert_eq!(normalized_classes(3, 4).len(), 22);
        assert_eq!(normalized_classes(3, 2).len(), 5);
        for w in 1..6 {
            let n: usize = (1..=w).map(|s1| s1 + w - 1).sum();
            assert_eq!(normalized_classes(3, w).len(), n);
        }
        for c in normalized_classes(3, 4) {
            assert!(c.is_normalized(), "{c}");
        }
        for c in normalized_classes(4, 3) {
            assert!(c.is_normalized(), "{c}");
        }
    }

    #[test]
    fn conjugation() {
        assert_eq!(cls("[1,1,3]", 4).conjugate(), cls("[1,3,3]", 4));
        assert_eq!(cls("[1,2,4]", 4).conjugate(), cls("[1,3,4]", 4));
        assert_eq!(cls("[1,4,1]", 4).conjugate(), cls("[1,4,3]", 4));
        assert_eq!(cls("[1,4,7]", 4).conjugate(), cls("[1,4,7]", 4));
        for w in 2..6 {
            for c in normalized_classes(3, w) {
                let (s1, s2) = (c.counts[1], c.counts[2]);
                let expect = if s1 <= s2 {
                    vec![1, s2 - s1 + 1, s2]
                } else {
                    vec![1, s1, s1 - s2]
                };
                assert_eq!(c.conjugate().counts, expect, "{c} w={w}");
                assert_eq!(c.conjugate().conjugate(), c);
            }
        }
    }

    #[test]
    fn phi_involutive_and_bijective() {
        for w in 1..=3 {
            let c = cls("[1,1,5]", w);
            let b = c.block();
            let parts = block_partitions(&b);
            let r = c.beads() + 3 * w;
            let mut images: Vec<Partition> =
                parts.iter().map(|l| phi(l, 3, 2, r).unwrap()).collect();
            for (l, m) in parts.iter().zip(&images) {
                assert_eq!(swap_runners(m, 3, 2, r), *l);
                assert_eq!(l.is_e_regular(3), m.is_e_regular(3));
            }
            let target = c.swap(2).unwrap().block();
            images.sort();
            let mut expect = block_partitions(&target);
            expect.sort();
            assert_eq!(images, expect);
        }
        let rho = core_from_counts(&[1, 1, 5]);
        assert_eq!(phi(&rho, 3, 2, 7).unwrap(), core_from_counts(&[1, 5, 1]));
        assert!(phi(&core_from_counts(&[1, 2, 3]), 3, 2, 6).is_ok());
        let b = BlockId::new(core_from_counts(&[1, 2, 3]), 2, 3).unwrap();
        let l = &block_partitions(&b)[0];
        assert!(matches!(
            phi(l, 3, 2, 6),
            Err(HeckeError::ScopesConditionViolated { .. })
        ));
    }

    #[test]
    fn parse_and_display() {
        let c: ScopesClass = "[1,4,7]@4".parse().unwrap();
        assert_eq!(c.to_string(), "[1,4,7]");
        assert_eq!(c.weight, 4);
        assert!("[1,0,2]".parse::<ScopesClass>().is_err());
        assert!("1,2,3".parse::<ScopesClass>().is_err());
    }
}
