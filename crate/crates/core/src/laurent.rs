//! Exact Laurent polynomials in `v` with integer coefficients.
//!
//! Stored densely from the lowest nonzero exponent; the zero polynomial has
//! no coefficients. All arithmetic is overflow-checked.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<i64>,
}

fn checked(x: Option<i64>) -> i64 {
    x.expect("Laurent coefficient overflow")
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(1, 0)
    }

    /// `c·v^k`.
    pub fn monomial(c: i64, k: i32) -> Self {
        if c == 0 {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            low: k,
            coeffs: vec![c],
        }
    }

    /// `v^k`.
    pub fn v_pow(k: i32) -> Self {
        LaurentPoly::monomial(1, k)
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Self {
        let mut acc = LaurentPoly::zero();
        for (k, c) in terms {
            acc += &LaurentPoly::monomial(c, k);
        }
        acc
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead == self.coeffs.len() {
            return LaurentPoly::zero();
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs == [1]
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_degree(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_degree(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    pub fn coeff(&self, k: i32) -> i64 {
        let idx = k as i64 - self.low as i64;
        if idx < 0 {
            return 0;
        }
        self.coeffs.get(idx as usize).copied().unwrap_or(0)
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.low + i as i32, c))
    }

    /// `p(v^{-1})`.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let high = self.max_degree().unwrap();
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        LaurentPoly { low: -high, coeffs }
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs
            .iter()
            .fold(0i64, |acc, &c| checked(acc.checked_add(c)))
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    /// Lies in `v·ℕ[v]`.
    pub fn in_v_nat_v(&self) -> bool {
        self.min_degree().is_none_or(|d| d >= 1) && self.has_nonnegative_coefficients()
    }

    /// The part of degree `≤ 0`, made bar-invariant: `c_0 + Σ_{k>0} c_{-k}(v^k + v^{-k})`.
    pub fn bar_invariant_correction(&self) -> Self {
        let mut terms = Vec::new();
        for (k, c) in self.terms() {
            if k < 0 {
                terms.push((k, c));
                terms.push((-k, c));
            } else if k == 0 {
                terms.push((0, c));
            }
        }
        LaurentPoly::from_terms(terms)
    }

    /// Exact division by a polynomial with unit leading coefficient; `None`
    /// when the remainder is nonzero.
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!divisor.is_zero(), "division by zero");
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let dlead = *divisor.coeffs.last().unwrap();
        let dhigh = divisor.max_degree().unwrap();
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while !rem.is_zero() {
            let rhigh = rem.max_degree().unwrap();
            let rlead = *rem.coeffs.last().unwrap();
            if rlead % dlead != 0 || rem.coeffs.len() < divisor.coeffs.len() {
                return None;
            }
            let t = LaurentPoly::monomial(rlead / dlead, rhigh - dhigh);
            rem -= &(&t * divisor);
            quot += &t;
        }
        Some(quot)
    }

    /// Quantum integer `[k] = v^{k-1} + v^{k-3} + … + v^{1-k}`.
    pub fn quantum_int(k: usize) -> Self {
        LaurentPoly::from_terms((0..k).map(|j| (k as i32 - 1 - 2 * j as i32, 1)))
    }

    /// Quantum factorial `[k]!`.
    pub fn quantum_factorial(k: usize) -> Self {
        (1..=k).fold(LaurentPoly::one(), |acc, j| {
            &acc * &LaurentPoly::quantum_int(j)
        })
    }

    /// Exponent-to-coefficient map, the serialized form.
    pub fn to_map(&self) -> BTreeMap<i32, i64> {
        self.terms().collect()
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        if rhs.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = rhs.clone();
            return;
        }
        let low = self.low.min(rhs.low);
        let high = self.max_degree().unwrap().max(rhs.max_degree().unwrap());
        if low < self.low {
            let pad = (self.low - low) as usize;
            self.coeffs.splice(0..0, std::iter::repeat_n(0, pad));
            self.low = low;
        }
        let need = (high - low + 1) as usize;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, 0);
        }
        let off = (rhs.low - self.low) as usize;
        for (i, &c) in rhs.coeffs.iter().enumerate() {
            self.coeffs[off + i] = checked(self.coeffs[off + i].checked_add(c));
        }
        *self = std::mem::take(self).trimmed();
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        *self += &(-rhs);
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            low: self.low,
            coeffs: self
                .coeffs
                .iter()
                .map(|&c| checked(c.checked_neg()))
                .collect(),
        }
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let prod = checked(a.checked_mul(b));
                coeffs[i + j] = checked(coeffs[i + j].checked_add(prod));
            }
        }
        LaurentPoly {
            low: self.low + rhs.low,
            coeffs,
        }
        .trimmed()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let a = c.unsigned_abs();
            let mono = match k {
                0 => String::new(),
                1 => "v".to_string(),
                _ => format!("v^{k}"),
            };
            let body = match (a, mono.is_empty()) {
                (_, true) => a.to_string(),
                (1, false) => mono,
                (_, false) => format!("{a}{mono}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, i64> = self.terms().map(|(k, c)| (k.to_string(), c)).collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let map = BTreeMap::<String, i64>::deserialize(d)?;
        let mut terms = Vec::with_capacity(map.len());
        for (k, c) in map {
            let k: i32 = k.parse().map_err(serde::de::Error::custom)?;
            terms.push((k, c));
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(k: i32) -> LaurentPoly {
        LaurentPoly::v_pow(k)
    }

    #[test]
    fn arithmetic_basics() {
        let a = &v(1) + &v(-1);
        assert_eq!(a, LaurentPoly::quantum_int(2));
        assert_eq!((&a * &a).to_string(), "v^2+2+v^-2");
        assert!((&a - &a).is_zero());
        assert_eq!(a.eval_at_one(), 2);
        assert!(a.is_bar_invariant());
        assert_eq!(v(3).bar(), v(-3));
        assert_eq!(LaurentPoly::monomial(0, 5), LaurentPoly::zero());
    }

    #[test]
    fn quantum_factorial_division() {
        let f3 = LaurentPoly::quantum_factorial(3);
        let x = &f3 * &(&v(2) + &LaurentPoly::monomial(3, -1));
        assert_eq!(
            x.exact_div(&f3).unwrap(),
            &v(2) + &LaurentPoly::monomial(3, -1)
        );
        assert!(v(1).exact_div(&LaurentPoly::quantum_int(2)).is_none());
    }

    #[test]
    fn correction_is_bar_invariant() {
        let c = LaurentPoly::from_terms([(-2, 3), (0, 1), (1, 5)]);
        let m = c.bar_invariant_correction();
        assert!(m.is_bar_invariant());
        assert!((&c - &m).min_degree().unwrap() >= 1);
    }

    #[test]
    fn serde_map_form() {
        let p = LaurentPoly::from_terms([(2, 1), (-1, -3)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"-1":-3,"2":1}"#);
        let q: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }
}
