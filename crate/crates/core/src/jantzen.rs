//! Jantzen sum formula coefficients for Specht modules.
//!
//! `Σ_{k>0} [S^λ(k)] = Σ_σ J_{λσ} [S^σ]`. The coefficients are computed from
//! the sum formula for the Weyl module labelled by `λ'` in the `q`-Schur
//! algebra, then relabelled by conjugation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::abacus::{block_partitions, BlockId};
use crate::error::{HeckeError, Result};
use crate::partitions::Partition;

/// `0` if `e ∤ h`, else `1` if `p = 0`, else `1 + v_p(h / e)`.
pub fn nu(h: u64, e: u64, p: u64) -> u64 {
    assert!(h >= 1, "nu needs a positive argument");
    if !h.is_multiple_of(e) {
        return 0;
    }
    if p == 0 {
        return 1;
    }
    let mut q = h / e;
    let mut v = 0;
    while q.is_multiple_of(p) {
        q /= p;
        v += 1;
    }
    1 + v
}

/// `J_{λσ}` for all `σ` with nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JantzenRow {
    pub lambda: Partition,
    pub e: usize,
    pub p: usize,
    pub coeffs: BTreeMap<Partition, i64>,
}

impl JantzenRow {
    pub fn get(&self, sigma: &Partition) -> i64 {
        self.coeffs.get(sigma).copied().unwrap_or(0)
    }
}

/// Sign of the permutation sorting `v` into decreasing order, or `None` if
/// two entries coincide.
fn sort_sign(v: &mut [i64]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] < v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some(sign)
}

pub fn jantzen_coeffs(lambda: &Partition, e: usize, p: usize) -> JantzenRow {
    let mu = lambda.conjugate();
    let n = lambda.size().max(1);
    let beta: Vec<i64> = (0..n)
        .map(|i| mu.parts().get(i).copied().unwrap_or(0) as i64 + (n - 1 - i) as i64)
        .collect();
    let mut coeffs: BTreeMap<Partition, i64> = BTreeMap::new();
    for a in 0..n {
        for b in a + 1..n {
            let gap = beta[a] - beta[b];
            for m in 1..gap {
                let c = nu(m as u64, e as u64, p as u64) as i64;
                if c == 0 {
                    continue;
                }
                let mut nb = beta.clone();
                nb[a] = beta[b] + m;
                nb[b] = beta[a] - m;
                let Some(sign) = sort_sign(&mut nb) else {
                    continue;
                };
                let parts: Vec<u32> = nb
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| (x - (n - 1 - i) as i64) as u32)
                    .collect();
                let sigma = Partition::from_unsorted(parts).conjugate();
                *coeffs.entry(sigma).or_insert(0) += sign * c;
            }
        }
    }
    coeffs.retain(|_, c| *c != 0);
    JantzenRow {
        lambda: lambda.clone(),
        e,
        p,
        coeffs,
    }
}

/// Certificate that `d^{e,p}_{λμ}(1) = 0` because every `σ` with
/// `λ ◁ σ ⊴ μ` has `J_{λσ} = 0` or a zero upper bound on `d_{σμ}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JantzenZero {
    pub lambda: Partition,
    pub mu: Partition,
    pub e: usize,
    pub p: usize,
    /// `σ` in the interval with `J_{λσ} ≠ 0`, each killed by an upper bound.
    pub nonzero_killed: Vec<Partition>,
    pub interval_size: usize,
}

/// `λ ◁ σ ⊴ μ` inside the block of `λ`.
pub fn dominance_interval(lambda: &Partition, mu: &Partition, e: usize) -> Vec<Partition> {
    let b = BlockId::of(lambda, e);
    block_partitions(&b)
        .into_iter()
        .filter(|s| s != lambda && s.dominates_unchecked(lambda) && mu.dominates_unchecked(s))
        .collect()
}

/// The vanishing deduction using only `J_{λσ} = 0`.
pub fn jantzen_zero_deduction(
    lambda: &Partition,
    mu: &Partition,
    e: usize,
    p: usize,
) -> Result<Option<JantzenZero>> {
    jantzen_zero_deduction_with(lambda, mu, e, p, |_| None)
}

/// The vanishing deduction; `upper(σ)` is a known upper bound on
/// `d^{e,p}_{σμ}(1)`, if any.
pub fn jantzen_zero_deduction_with(
    lambda: &Partition,
    mu: &Partition,
    e: usize,
    p: usize,
    upper: impl Fn(&Partition) -> Option<u64>,
) -> Result<Option<JantzenZero>> {
    if lambda.size() != mu.size() {
        return Err(HeckeError::IncomparableSizes(lambda.size(), mu.size()));
    }
    if lambda == mu {
        return Err(HeckeError::Invalid("the diagonal entry is 1".into()));
    }
    if BlockId::of(lambda, e) != BlockId::of(mu, e) {
        return Err(HeckeError::MixedBlocks);
    }
    if !mu.is_e_regular(e) {
        return Err(HeckeError::NotRegular(mu.to_string(), e));
    }
    if !mu.dominates_unchecked(lambda) {
        return Err(HeckeError::WrongDominanceDirection(
            mu.to_string(),
            lambda.to_string(),
        ));
    }
    let row = jantzen_coeffs(lambda, e, p);
    let interval = dominance_interval(lambda, mu, e);
    let mut killed = Vec::new();
    for sigma in &interval {
        if row.get(sigma) == 0 {
            continue;
        }
        match upper(sigma) {
            Some(0) => killed.push(sigma.clone()),
            _ => return Ok(None),
        }
    }
    Ok(Some(JantzenZero {
        lambda: lambda.clone(),
        mu: mu.clone(),
        e,
        p,
        nonzero_killed: killed,
        interval_size: interval.len(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abacus::{core_from_counts, from_quotient, Quotient};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(5, 3, 2), 0);
        assert_eq!(nu(3, 3, 2), 1);
        assert_eq!(nu(12, 3, 2), 3);
        assert_eq!(nu(12, 3, 0), 1);
        assert_eq!(nu(9, 3, 3), 2);
    }

    #[test]
    fn two_nodes() {
        let row = jantzen_coeffs(&p("1,1"), 2, 0);
        assert_eq!(row.get(&p("2")), 1);
        assert_eq!(row.coeffs.len(), 1);
        assert!(jantzen_coeffs(&p("2"), 2, 0).coeffs.is_empty());
        assert!(jantzen_coeffs(&p("1,1"), 3, 0).coeffs.is_empty());
    }

    #[test]
    fn rouquier_vanishing() {
        let rho = core_from_counts(&[1, 4, 7]);
        let l2 = from_quotient(&rho, &Quotient::parse("((1),(2,1),∅)").unwrap(), 3).unwrap();
        let l3 = from_quotient(&rho, &Quotient::parse("((1),(1^3),∅)").unwrap(), 3).unwrap();
        assert_eq!(jantzen_coeffs(&l3, 3, 2).get(&l2), 0);
        let tok = jantzen_zero_deduction(&l3, &l2, 3, 2).unwrap().unwrap();
        // only μ itself lies in the interval
        assert_eq!(tok.interval_size, 1);
        assert!(matches!(
            jantzen_zero_deduction(&l2, &l3, 3, 2),
            Err(HeckeError::WrongDominanceDirection(..))
        ));
    }

    #[test]
    fn nonzero_coefficient_blocks_token() {
        // (2,1) and (3) at e=3: J_{(2,1),(3)} ≠ 0 and the interval is just (3)
        let row = jantzen_coeffs(&p("2,1"), 3, 0);
        assert_ne!(row.get(&p("3")), 0);
        assert_eq!(
            jantzen_zero_deduction(&p("2,1"), &p("3"), 3, 0).unwrap(),
            None
        );
    }

    #[test]
    fn sort_sign_cases() {
        let mut v = vec![1, 3, 2];
        assert_eq!(sort_sign(&mut v), Some(1));
        assert_eq!(v, vec![3, 2, 1]);
        let mut v = vec![1, 2];
        assert_eq!(sort_sign(&mut v), Some(-1));
        let mut v = vec![2, 1, 2];
        assert_eq!(sort_sign(&mut v), None);
    }
}
