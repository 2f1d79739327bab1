//! The level-one Fock space and the action of the divided powers `f_i^{(k)}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{HeckeError, Result};
use crate::laurent::LaurentPoly;
use crate::partitions::{Node, Partition};

/// Which side of an added node is counted in its `v`-exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Convention {
    /// `#addable i-nodes below − #removable i-nodes below`.
    Below,
    /// `#addable i-nodes above − #removable i-nodes above`.
    #[default]
    Above,
}

/// A finitely supported `ℤ[v,v⁻¹]`-combination of partitions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockVector {
    terms: BTreeMap<Partition, LaurentPoly>,
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector::default()
    }

    pub fn basis(lambda: Partition) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(lambda, LaurentPoly::one());
        FockVector { terms }
    }

    pub fn from_terms(terms: BTreeMap<Partition, LaurentPoly>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        FockVector { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `λ` (zero if absent).
    pub fn coeff(&self, lambda: &Partition) -> LaurentPoly {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    pub fn get(&self, lambda: &Partition) -> Option<&LaurentPoly> {
        self.terms.get(lambda)
    }

    /// Terms in increasing lexicographic order of partitions.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Partition, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Partition> {
        self.terms.keys()
    }

    pub fn into_terms(self) -> BTreeMap<Partition, LaurentPoly> {
        self.terms
    }

    pub fn add_term(&mut self, lambda: Partition, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(lambda) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, other: &FockVector, c: &LaurentPoly) {
        for (lambda, x) in &other.terms {
            self.add_term(lambda.clone(), &(c * x));
        }
    }

    /// Coefficient-wise `v ↦ v⁻¹`.
    pub fn bar_coefficients(&self) -> FockVector {
        FockVector {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.bar()))
                .collect(),
        }
    }

    /// Every coefficient evaluated at `v = 1`.
    pub fn at_one(&self) -> BTreeMap<Partition, i64> {
        self.terms
            .iter()
            .map(|(k, c)| (k.clone(), c.eval_at_one()))
            .collect()
    }
}

/// Addable `i`-nodes of `λ` with, for each, its exponent contribution when
/// it is the only node added.
struct ResidueBoundary {
    addable: Vec<Node>,
    /// For each addable node, `#removable i-nodes` on the counted side.
    removable_side: Vec<i32>,
}

fn residue_boundary(lambda: &Partition, e: usize, i: usize, conv: Convention) -> ResidueBoundary {
    let (addable, removable) = lambda.boundary_nodes(e, i);
    let removable_side = addable
        .iter()
        .map(|a| {
            removable
                .iter()
                .filter(|r| match conv {
                    Convention::Below => r.row > a.row,
                    Convention::Above => r.row < a.row,
                })
                .count() as i32
        })
        .collect();
    ResidueBoundary {
        addable,
        removable_side,
    }
}

/// `f_i` applied to a vector.
pub fn f_apply(x: &FockVector, i: usize, e: usize, conv: Convention) -> FockVector {
    f_divided(x, i, 1, e, conv)
}

/// The divided power `f_i^{(k)}`, by the k-subset rule: each `k`-subset `S` of
/// the addable `i`-nodes contributes `v^{N(S)} (λ ∪ S)` where `N(S)` sums, over
/// `A ∈ S`, the addable nodes outside `S` minus the removable nodes on the
/// counted side of `A`.
pub fn f_divided(x: &FockVector, i: usize, k: usize, e: usize, conv: Convention) -> FockVector {
    if k == 0 {
        return x.clone();
    }
    let mut out = FockVector::zero();
    for (lambda, c) in x.iter() {
        let rb = residue_boundary(lambda, e, i, conv);
        let a = rb.addable.len();
        if a < k {
            continue;
        }
        for subset in KSubsets::new(a, k) {
            let mut exp = 0i32;
            for (pos, &t) in subset.iter().enumerate() {
                // addable nodes on the counted side of node t that are not in S
                let side_total = match conv {
                    Convention::Below => (a - 1 - t) as i32,
                    Convention::Above => t as i32,
                };
                let side_in_s = match conv {
                    Convention::Below => (k - 1 - pos) as i32,
                    Convention::Above => pos as i32,
                };
                exp += side_total - side_in_s - rb.removable_side[t];
            }
            let mut parts = lambda.parts().to_vec();
            for &t in &subset {
                let node = rb.addable[t];
                if node.row > parts.len() {
                    parts.push(1);
                } else {
                    parts[node.row - 1] += 1;
                }
            }
            out.add_term(Partition::from_parts_unchecked(parts), &c.shift(exp));
        }
    }
    if cfg!(debug_assertions) && k >= 2 && x.len() <= 16 {
        let mut iterated = x.clone();
        for _ in 0..k {
            iterated = f_divided(&iterated, i, 1, e, conv);
        }
        let mut scaled = FockVector::zero();
        scaled.add_scaled(&out, &LaurentPoly::quantum_factorial(k));
        assert_eq!(iterated, scaled, "f_i^k != [k]! f_i^(k): convention bug");
    }
    out
}

/// `f_i^k x` divided exactly by `[k]!`; errors if the division is inexact.
pub fn f_divided_by_division(
    x: &FockVector,
    i: usize,
    k: usize,
    e: usize,
    conv: Convention,
) -> Result<FockVector> {
    let mut iterated = x.clone();
    for _ in 0..k {
        iterated = f_apply(&iterated, i, e, conv);
    }
    let fact = LaurentPoly::quantum_factorial(k);
    let mut out = BTreeMap::new();
    for (lambda, c) in iterated.into_terms() {
        let q = c.exact_div(&fact).ok_or_else(|| {
            HeckeError::Invalid(format!(
                "[{k}]! does not divide the coefficient of {lambda}"
            ))
        })?;
        out.insert(lambda, q);
    }
    Ok(FockVector::from_terms(out))
}

/// Lexicographic k-subsets of `0..n`.
struct KSubsets {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl KSubsets {
    fn new(n: usize, k: usize) -> Self {
        KSubsets {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for KSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut j = k;
        loop {
            if j == 0 {
                self.done = true;
                break;
            }
            j -= 1;
            if self.idx[j] < self.n - k + j {
                self.idx[j] += 1;
                for t in j + 1..k {
                    self.idx[t] = self.idx[t - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Ladder of a node: `row + (e − 1)(col − 1)`.
pub fn ladder_of(node: Node, e: usize) -> usize {
    node.row + (e - 1) * (node.col - 1)
}

/// `(residue, multiplicity)` for each nonempty ladder of `μ`, in increasing
/// ladder order.
pub fn ladder_sequence(mu: &Partition, e: usize) -> Result<Vec<(usize, usize)>> {
    if !mu.is_e_regular(e) {
        return Err(HeckeError::NotRegular(mu.to_string(), e));
    }
    let mut by_ladder: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for node in mu.nodes() {
        let entry = by_ladder
            .entry(ladder_of(node, e))
            .or_insert((node.residue(e), 0));
        debug_assert_eq!(entry.0, node.residue(e));
        entry.1 += 1;
    }
    Ok(by_ladder.into_values().collect())
}

/// The ladder approximation `A(μ) = f^{(k_s)}_{i_s} ⋯ f^{(k_1)}_{i_1} ∅`.
pub fn ladder_vector(mu: &Partition, e: usize, conv: Convention) -> Result<FockVector> {
    let mut x = FockVector::basis(Partition::empty());
    for (i, k) in ladder_sequence(mu, e)? {
        x = f_divided(&x, i, k, e, conv);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn f_examples() {
        let c = Convention::default();
        let empty = FockVector::basis(Partition::empty());
        assert_eq!(f_apply(&empty, 0, 3, c), FockVector::basis(p("1")));
        assert!(f_apply(&FockVector::basis(p("1,1")), 2, 3, c).is_zero());
        assert_eq!(
            f_apply(&FockVector::basis(p("1")), 1, 3, c),
            FockVector::basis(p("2"))
        );

        let x = f_apply(&FockVector::basis(p("2")), 2, 3, c);
        assert!(x.coeff(&p("3")).is_one());
        assert_eq!(x.coeff(&p("2,1")), LaurentPoly::v_pow(1));
        let x = f_apply(&FockVector::basis(p("2")), 2, 3, Convention::Below);
        assert_eq!(x.coeff(&p("3")), LaurentPoly::v_pow(1));
        assert!(x.coeff(&p("2,1")).is_one());
    }

    #[test]
    fn divided_powers() {
        let empty = FockVector::basis(Partition::empty());
        assert_eq!(
            f_divided(&empty, 0, 1, 3, Convention::Below),
            f_apply(&empty, 0, 3, Convention::Below)
        );
        for i in 0..3 {
            assert!(f_divided(&empty, i, 2, 3, Convention::Below).is_zero());
        }
        for conv in [Convention::Below, Convention::Above] {
            let x = FockVector::basis(p("1,1"));
            let direct = f_divided(&x, 1, 2, 3, conv);
            let divided = f_divided_by_division(&x, 1, 2, 3, conv).unwrap();
            assert_eq!(direct, divided);
        }
    }

    #[test]
    fn ladders() {
        assert_eq!(ladder_sequence(&p("1"), 3).unwrap(), vec![(0, 1)]);
        assert_eq!(ladder_sequence(&p("1"), 5).unwrap(), vec![(0, 1)]);
        assert_eq!(
            ladder_sequence(&p("2,1"), 3).unwrap(),
            vec![(0, 1), (2, 1), (1, 1)]
        );
        assert_eq!(
            ladder_sequence(&p("3"), 3).unwrap(),
            vec![(0, 1), (1, 1), (2, 1)]
        );
        assert!(ladder_sequence(&p("1,1,1"), 3).is_err());
        let mu = p("6,3,2,2");
        let total: usize = ladder_sequence(&mu, 3).unwrap().iter().map(|x| x.1).sum();
        assert_eq!(total, mu.size());
    }

    #[test]
    fn ladder_vector_has_unit_leading_term() {
        for mu in [p("2,1"), p("3,1"), p("4,2,1"), p("5,3,3,1")] {
            let a = ladder_vector(&mu, 3, Convention::default()).unwrap();
            assert!(a.coeff(&mu).is_one(), "{mu}");
            assert!(a.support().all(|nu| mu.dominates_unchecked(nu)), "{mu}");
        }
    }

    #[test]
    fn k_subsets() {
        let all: Vec<_> = KSubsets::new(4, 2).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        assert_eq!(KSubsets::new(2, 3).count(), 0);
    }
}
