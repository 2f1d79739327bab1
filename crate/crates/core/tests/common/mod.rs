//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library except for converting results at the boundary.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use hecke_core::{LaurentPoly, Partition};

pub type Poly = BTreeMap<i32, i64>;
pub type Vector = BTreeMap<Vec<u32>, Poly>;

fn poly_add(a: &mut Poly, b: &Poly, scale: i64, shift: i32) {
    for (&k, &c) in b {
        let x = a.entry(k + shift).or_insert(0);
        *x += scale * c;
        if *x == 0 {
            a.remove(&(k + shift));
        }
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&k, &c) in a {
        poly_add(&mut out, b, c, k);
    }
    out
}

fn qint(k: usize) -> Poly {
    (0..k).map(|j| (k as i32 - 1 - 2 * j as i32, 1)).collect()
}

/// Exact division; panics if the remainder is nonzero.
fn poly_div(a: &Poly, d: &Poly) -> Poly {
    let mut rem = a.clone();
    let mut q = Poly::new();
    let (&dtop, &dc) = d.iter().next_back().expect("nonzero divisor");
    while let Some((&top, &c)) = rem.iter().next_back() {
        assert_eq!(c % dc, 0, "inexact division");
        let t: Poly = [(top - dtop, c / dc)].into_iter().collect();
        q.insert(top - dtop, c / dc);
        let sub = poly_mul(&t, d);
        poly_add(&mut rem, &sub, -1, 0);
        assert!(rem.keys().next_back().is_none_or(|&k| k < top));
    }
    q
}

pub fn to_laurent(p: &Poly) -> LaurentPoly {
    LaurentPoly::from_terms(p.iter().map(|(&k, &c)| (k, c)))
}

pub fn partitions(n: usize) -> Vec<Vec<u32>> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for x in (1..=max.min(rem)).rev() {
            cur.push(x);
            rec(rem - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n as u32, n as u32, &mut Vec::new(), &mut out);
    out
}

pub fn dominates(a: &[u32], b: &[u32]) -> bool {
    let (mut sa, mut sb) = (0u32, 0u32);
    for i in 0..a.len().max(b.len()) {
        sa += a.get(i).copied().unwrap_or(0);
        sb += b.get(i).copied().unwrap_or(0);
        if sa < sb {
            return false;
        }
    }
    true
}

pub fn regular(a: &[u32], e: usize) -> bool {
    a.windows(e).all(|w| w[0] != w[e - 1])
}

fn residue(row: usize, col: usize, e: usize) -> usize {
    ((col as i64 - row as i64).rem_euclid(e as i64)) as usize
}

/// `(row, is_addable)` for every addable or removable `i`-node, rows from 0.
fn i_nodes(lam: &[u32], i: usize, e: usize) -> Vec<(usize, bool)> {
    let mut out = Vec::new();
    for r in 0..=lam.len() {
        let len = lam.get(r).copied().unwrap_or(0) as usize;
        let above = if r == 0 {
            usize::MAX
        } else {
            lam[r - 1] as usize
        };
        if len < above && residue(r, len, e) == i {
            out.push((r, true));
        }
        let below = lam.get(r + 1).copied().unwrap_or(0) as usize;
        if len > 0 && len > below && residue(r, len - 1, e) == i {
            out.push((r, false));
        }
    }
    out
}

/// One `f_i`, with the exponent counting addable minus removable `i`-nodes
/// in rows above the added node.
pub fn f(x: &Vector, i: usize, e: usize) -> Vector {
    let mut out = Vector::new();
    for (lam, c) in x {
        let nodes = i_nodes(lam, i, e);
        for &(r, add) in &nodes {
            if !add {
                continue;
            }
            let exp: i32 = nodes
                .iter()
                .filter(|(r2, _)| *r2 < r)
                .map(|(_, a)| if *a { 1 } else { -1 })
                .sum();
            let mut nu = lam.clone();
            if r == nu.len() {
                nu.push(1);
            } else {
                nu[r] += 1;
            }
            let slot = out.entry(nu).or_default();
            poly_add(slot, c, 1, exp);
        }
    }
    out.retain(|_, c| !c.is_empty());
    out
}

/// `f_i^k / [k]!`.
pub fn f_div(x: &Vector, i: usize, k: usize, e: usize) -> Vector {
    let mut y = x.clone();
    for _ in 0..k {
        y = f(&y, i, e);
    }
    let mut fact: Poly = [(0, 1)].into_iter().collect();
    for j in 1..=k {
        fact = poly_mul(&fact, &qint(j));
    }
    y.into_iter()
        .map(|(l, c)| (l, poly_div(&c, &fact)))
        .collect()
}

/// Ladder vector of an `e`-regular partition.
pub fn ladder(mu: &[u32], e: usize) -> Vector {
    let mut ladders: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (r, &len) in mu.iter().enumerate() {
        for c in 0..len as usize {
            let l = r + (e - 1) * c;
            let ent = ladders.entry(l).or_insert((residue(r, c, e), 0));
            ent.1 += 1;
        }
    }
    let mut x: Vector = [(vec![], [(0, 1)].into_iter().collect())]
        .into_iter()
        .collect();
    for (_, (i, k)) in ladders {
        x = f_div(&x, i, k, e);
    }
    x
}

/// Canonical basis columns by the standard triangular correction.
pub struct Oracle {
    pub e: usize,
    memo: HashMap<Vec<u32>, Vector>,
}

impl Oracle {
    pub fn new(e: usize) -> Self {
        Oracle {
            e,
            memo: HashMap::new(),
        }
    }

    pub fn g(&mut self, mu: &[u32]) -> Vector {
        if let Some(v) = self.memo.get(mu) {
            return v.clone();
        }
        let mut x = ladder(mu, self.e);
        loop {
            let bad = x
                .iter()
                .rev()
                .find(|(nu, c)| nu.as_slice() != mu && c.keys().next().is_some_and(|&k| k <= 0))
                .map(|(nu, c)| (nu.clone(), c.clone()));
            let Some((nu, c)) = bad else { break };
            let mut m = Poly::new();
            for (&k, &v) in &c {
                if k < 0 {
                    m.insert(k, v);
                    m.insert(-k, v);
                } else if k == 0 {
                    m.insert(0, v);
                }
            }
            let gn = self.g(&nu);
            for (l, p) in &gn {
                let prod = poly_mul(&m, p);
                let slot = x.entry(l.clone()).or_default();
                poly_add(slot, &prod, -1, 0);
            }
            x.retain(|_, c| !c.is_empty());
        }
        self.memo.insert(mu.to_vec(), x.clone());
        x
    }

    pub fn entry(&mut self, lambda: &[u32], mu: &[u32]) -> Poly {
        self.g(mu).get(lambda).cloned().unwrap_or_default()
    }
}

pub fn part(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}
