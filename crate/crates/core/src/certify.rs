//! Certificates that a block is Schurian-infinite: a few partitions whose
//! decomposition submatrix is one of three fixed unitriangular shapes, in
//! characteristic 0 and (at `v = 1`) in characteristic `p`.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abacus::{
    block_partitions, core_and_weight, from_quotient, quotient, BlockId, Quotient,
};
use crate::charp::{deduce_charp_submatrix, CharpEngine, CharpOptions, EntryKnowledge};
use crate::error::{HeckeError, Result};
use crate::laurent::LaurentPoly;
use crate::llt::{decomp_submatrix_with, shared_engine, LltEngine};
use crate::partitions::Partition;
use crate::scopes::{normalized_classes, transport, ScopesClass};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TargetMatrix {
    Dagger,
    Ddagger,
    Spade,
}

impl TargetMatrix {
    pub const ALL: [TargetMatrix; 3] = [
        TargetMatrix::Dagger,
        TargetMatrix::Ddagger,
        TargetMatrix::Spade,
    ];

    pub fn size(self) -> usize {
        match self {
            TargetMatrix::Spade => 5,
            _ => 4,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            TargetMatrix::Dagger => "†",
            TargetMatrix::Ddagger => "‡",
            TargetMatrix::Spade => "♠",
        }
    }

    /// Exponents of `v`, `None` for a zero entry.
    fn pattern(self) -> Vec<Vec<Option<i32>>> {
        let (z, o, v, v2) = (None, Some(0), Some(1), Some(2));
        match self {
            TargetMatrix::Dagger => vec![
                vec![o, z, z, z],
                vec![v, o, z, z],
                vec![z, v, o, z],
                vec![v, v2, v, o],
            ],
            TargetMatrix::Ddagger => vec![
                vec![o, z, z, z],
                vec![v, o, z, z],
                vec![v, z, o, z],
                vec![v2, v, v, o],
            ],
            TargetMatrix::Spade => vec![
                vec![o, z, z, z, z],
                vec![z, o, z, z, z],
                vec![v, v, o, z, z],
                vec![z, v2, v, o, z],
                vec![v2, z, v, z, o],
            ],
        }
    }

    pub fn entries(self) -> Vec<Vec<LaurentPoly>> {
        self.pattern()
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| x.map_or_else(LaurentPoly::zero, LaurentPoly::v_pow))
                    .collect()
            })
            .collect()
    }

    pub fn matches(self, m: &[Vec<Option<LaurentPoly>>]) -> bool {
        let t = self.entries();
        m.len() == t.len()
            && m.iter().zip(&t).all(|(r, tr)| {
                r.len() == tr.len() && r.iter().zip(tr).all(|(x, y)| x.as_ref() == Some(y))
            })
    }
}

impl std::fmt::Display for TargetMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Removes the common first row.
pub fn row_removal(lambda: &Partition, mu: &Partition) -> Result<(Partition, Partition)> {
    if lambda.part(1) != mu.part(1) {
        return Err(HeckeError::RowRemoval);
    }
    Ok((lambda.without_first_row(), mu.without_first_row()))
}

/// Removes the common first column.
pub fn column_removal(lambda: &Partition, mu: &Partition) -> Result<(Partition, Partition)> {
    if lambda.len() != mu.len() {
        return Err(HeckeError::ColumnRemoval);
    }
    Ok((lambda.without_first_column(), mu.without_first_column()))
}

/// Differences of lowest-bead positions of a core.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gaps {
    pub e: i64,
    /// `p_{e−1} − p_{e−2}`
    pub d1: i64,
    /// `p_{e−2} − p_{e−3}`
    pub d2: i64,
    /// `p_{e−1} − p_{e−3}`
    pub d13: i64,
    /// `p_{e−1} − p_{e−4}`, absent for `e = 3`
    pub d14: Option<i64>,
}

impl Gaps {
    pub fn of(class: &ScopesClass) -> Self {
        let g = class.position_gaps();
        Gaps {
            e: class.e() as i64,
            d1: g[0],
            d2: g[1] - g[0],
            d13: g[1],
            d14: g.get(2).copied(),
        }
    }

    fn alpha(&self, x: i64) -> bool {
        x < self.e
    }

    fn beta(&self, x: i64) -> bool {
        self.e < x && x < 2 * self.e
    }

    fn gamma(&self, x: i64) -> bool {
        x > 2 * self.e
    }

    fn delta(&self, x: i64) -> bool {
        x > self.e
    }
}

/// A partition given by its quotient; component 0 gets `w − pad` prepended
/// when `pad` is set.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub pad: Option<usize>,
    pub comps: &'static [(usize, &'static [u32])],
}

const fn sh(comps: &'static [(usize, &'static [u32])]) -> Shape {
    Shape {
        pad: Some(2),
        comps,
    }
}

impl Shape {
    pub fn quotient(&self, e: usize, w: usize) -> Option<Quotient> {
        let mut parts: Vec<Vec<u32>> = vec![Vec::new(); e];
        if let Some(pad) = self.pad {
            if w < pad {
                return None;
            }
            parts[0].push((w - pad) as u32);
        }
        for &(i, ps) in self.comps {
            if i >= e {
                return None;
            }
            parts[i].extend_from_slice(ps);
        }
        Some(Quotient(
            parts.into_iter().map(Partition::from_unsorted).collect(),
        ))
    }
}

/// One row of the case table: a condition on the gaps, four or five shapes
/// and the expected matrix.
pub struct TableRow {
    pub name: &'static str,
    pub anchor: &'static str,
    pub target: TargetMatrix,
    pub applies: fn(&Gaps, usize, usize) -> bool,
    pub shapes: &'static [Shape],
}

const S_W22: Shape = sh(&[(0, &[2])]);
const S_W2_2: Shape = sh(&[(1, &[2])]);
const S_W2_0_2: Shape = sh(&[(2, &[2])]);
const S_W2_00_2: Shape = sh(&[(3, &[2])]);
const S_W21_0_1: Shape = sh(&[(0, &[1]), (2, &[1])]);
const S_W21_1: Shape = sh(&[(0, &[1]), (1, &[1])]);
const S_W211: Shape = sh(&[(0, &[1, 1])]);
const S_W2_11: Shape = sh(&[(1, &[1, 1])]);
const S_W2_1_1: Shape = sh(&[(1, &[1]), (2, &[1])]);
const S_W2_1_0_1: Shape = sh(&[(1, &[1]), (3, &[1])]);

pub static TABLE: &[TableRow] = &[
    TableRow {
        name: "R1",
        anchor: "as22:4.1",
        target: TargetMatrix::Dagger,
        applies: |g, _, _| g.beta(g.d1) && g.alpha(g.d2) && g.beta(g.d13),
        shapes: &[S_W22, S_W2_2, S_W2_0_2, S_W21_0_1],
    },
    TableRow {
        name: "R2",
        anchor: "as22:4.2",
        target: TargetMatrix::Dagger,
        applies: |g, _, _| g.beta(g.d1) && g.alpha(g.d2) && g.gamma(g.d13),
        shapes: &[S_W22, S_W2_2, S_W21_1, S_W211],
    },
    TableRow {
        name: "R3",
        anchor: "as22:4.3",
        target: TargetMatrix::Dagger,
        applies: |g, _, p| g.gamma(g.d1) && g.alpha(g.d2) && p != 2,
        shapes: &[S_W22, S_W21_1, S_W2_2, S_W2_0_2],
    },
    TableRow {
        name: "R4",
        anchor: "jm02:Thm3.2",
        target: TargetMatrix::Ddagger,
        applies: |g, e, p| g.gamma(g.d1) && g.alpha(g.d2) && p == 2 && e >= 4,
        shapes: &[S_W21_1, S_W21_0_1, S_W2_2, S_W2_0_2],
    },
    TableRow {
        name: "R5",
        anchor: "as22:4.4",
        target: TargetMatrix::Dagger,
        applies: |g, _, _| g.beta(g.d1) && g.delta(g.d2),
        shapes: &[S_W22, S_W2_2, S_W21_1, S_W211],
    },
    TableRow {
        name: "R6",
        anchor: "as22:4.5",
        target: TargetMatrix::Spade,
        applies: |g, _, p| g.gamma(g.d1) && g.delta(g.d2) && p != 2,
        shapes: &[S_W22, S_W211, S_W21_1, S_W2_2, S_W2_11],
    },
    TableRow {
        name: "R7",
        anchor: "jm02:Thm3.2",
        target: TargetMatrix::Ddagger,
        applies: |g, e, p| g.gamma(g.d1) && g.delta(g.d2) && p == 2 && e >= 4,
        shapes: &[S_W21_1, S_W21_0_1, S_W2_11, S_W2_1_1],
    },
    TableRow {
        name: "R8",
        anchor: "as22:4.1",
        target: TargetMatrix::Dagger,
        applies: |g, _, _| g.d14.is_some_and(|x| g.alpha(x)),
        shapes: &[S_W2_2, S_W2_0_2, S_W2_00_2, S_W2_1_0_1],
    },
    TableRow {
        name: "R9",
        anchor: "as22:4.1",
        target: TargetMatrix::Dagger,
        applies: |g, _, _| g.alpha(g.d13) && g.d14.is_none_or(|x| g.delta(x)),
        // third shape as printed, ((w−2,1),∅^{e−1}), has one node too few
        shapes: &[S_W2_2, S_W2_0_2, S_W22, S_W21_1],
    },
    TableRow {
        name: "R10",
        anchor: "as22:4.1",
        target: TargetMatrix::Dagger,
        applies: |g, _, _| g.alpha(g.d1) && g.alpha(g.d2) && g.beta(g.d13),
        shapes: &[S_W2_2, S_W22, S_W2_0_2, S_W2_1_1],
    },
    TableRow {
        name: "R11",
        anchor: "as22:4.2",
        target: TargetMatrix::Dagger,
        applies: |g, _, _| g.alpha(g.d1) && g.delta(g.d2),
        shapes: &[S_W2_2, S_W22, S_W21_1, S_W2_11],
    },
];

/// The row of the case table for a class, if any.
pub fn table_row(class: &ScopesClass, p: usize) -> Option<&'static TableRow> {
    let g = Gaps::of(class);
    TABLE.iter().find(|r| (r.applies)(&g, class.e(), p))
}

const fn plain(comps: &'static [(usize, &'static [u32])]) -> Shape {
    Shape { pad: None, comps }
}

const fn padded(pad: usize, comps: &'static [(usize, &'static [u32])]) -> Shape {
    Shape {
        pad: Some(pad),
        comps,
    }
}

/// Quotients of the weight-4 Rouquier block witness.
pub static ROUQUIER_SHAPES: &[Shape] = &[
    plain(&[(0, &[1, 1]), (1, &[1, 1])]),
    plain(&[(0, &[1]), (1, &[2, 1])]),
    plain(&[(0, &[1]), (1, &[1, 1, 1])]),
    plain(&[(1, &[2, 1, 1])]),
];

/// The same shapes with a padded first component, for larger weights.
pub static ROUQUIER_PADDED_SHAPES: &[Shape] = &[
    padded(4, &[(0, &[1, 1]), (1, &[1, 1])]),
    padded(4, &[(0, &[1]), (1, &[2, 1])]),
    padded(4, &[(0, &[1]), (1, &[1, 1, 1])]),
    padded(4, &[(1, &[2, 1, 1])]),
];

/// Weight-3 witness for the classes `[1,3,4]` and `[1,2,3]`.
pub static WT3_SHAPES: &[Shape] = &[
    plain(&[(0, &[2]), (1, &[1])]),
    plain(&[(1, &[3])]),
    plain(&[(0, &[1]), (1, &[2])]),
    plain(&[(0, &[1, 1]), (1, &[1])]),
];

pub static WT3_PADDED_SHAPES: &[Shape] = &[
    padded(3, &[(0, &[2]), (1, &[1])]),
    padded(3, &[(1, &[3])]),
    padded(3, &[(0, &[1]), (1, &[2])]),
    padded(3, &[(0, &[1, 1]), (1, &[1])]),
];

/// Weight-2 witnesses with a long first runner gap, `e ≥ 4`.
pub static WT2_GAP_ALPHA: &[Shape] = &[
    plain(&[(0, &[1]), (1, &[1])]),
    plain(&[(0, &[1]), (2, &[1])]),
    plain(&[(1, &[2])]),
    plain(&[(2, &[2])]),
];

pub static WT2_GAP_DELTA: &[Shape] = &[
    plain(&[(0, &[1]), (1, &[1])]),
    plain(&[(0, &[1]), (2, &[1])]),
    plain(&[(1, &[1, 1])]),
    plain(&[(1, &[1]), (2, &[1])]),
];

/// A witness to try: shapes in the class `witness`.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub route: &'static str,
    pub anchor: &'static str,
    pub target: TargetMatrix,
    pub witness: ScopesClass,
    pub shapes: &'static [Shape],
}

impl Candidate {
    /// The witness partitions in the block with core `rho`.
    pub fn partitions(&self, rho: &Partition) -> Option<Vec<Partition>> {
        let e = self.witness.e();
        let w = self.witness.weight;
        let b = BlockId::new(rho.clone(), w, e).ok()?;
        self.shapes
            .iter()
            .map(|s| {
                let q = s.quotient(e, w)?;
                let x = from_quotient(rho, &q, e).ok()?;
                b.contains(&x).then_some(x)
            })
            .collect()
    }
}

/// Candidate witnesses for a normalized class, most specific first.
pub fn dispatch(e: usize, p: usize, class: &ScopesClass) -> Result<Vec<Candidate>> {
    check_scope(e, class.weight)?;
    let w = class.weight;
    let g = Gaps::of(class);
    let c = class.counts.as_slice();
    let mut out = Vec::new();
    let cand = |route, anchor, target, shapes| Candidate {
        route,
        anchor,
        target,
        witness: class.clone(),
        shapes,
    };
    if e == 3 && p == 2 && w >= 4 && g.gamma(g.d1) {
        if w == 4 {
            match c {
                [1, 4, 7] => out.push(cand(
                    "rouquier",
                    "jlm:Prop4.4",
                    TargetMatrix::Ddagger,
                    ROUQUIER_SHAPES,
                )),
                [1, 3, 5] | [1, 3, 6] | [1, 4, 6] => out.push(cand(
                    "near-rouquier-chain",
                    "mathas:6.1",
                    TargetMatrix::Ddagger,
                    ROUQUIER_SHAPES,
                )),
                _ => {}
            }
        } else {
            let (s1, s2) = (c[1] as i64, c[2] as i64);
            let d = s2 - s1;
            if d == 2 || d == -3 {
                out.push(cand(
                    "wt3-reduction",
                    "cmt02",
                    TargetMatrix::Dagger,
                    WT3_PADDED_SHAPES,
                ));
            } else if d >= 3 || d <= -4 {
                out.push(cand(
                    "near-rouquier-reduction",
                    "cmt02",
                    TargetMatrix::Ddagger,
                    ROUQUIER_PADDED_SHAPES,
                ));
            }
        }
        return Ok(out);
    }
    if e == 3 && w == 3 && (c == [1, 3, 4] || c == [1, 2, 3]) {
        out.push(cand(
            "wt3-column-removal",
            "cmt02",
            TargetMatrix::Dagger,
            WT3_SHAPES,
        ));
    }
    if w == 2 && e >= 4 && g.delta(g.d1) {
        let shapes = if g.alpha(g.d2) {
            WT2_GAP_ALPHA
        } else {
            WT2_GAP_DELTA
        };
        out.push(cand(
            "wt2-rouquierish",
            "jm02:Thm3.2",
            TargetMatrix::Ddagger,
            shapes,
        ));
    }
    if let Some(row) = table_row(class, p) {
        out.push(cand(row.name, row.anchor, row.target, row.shapes));
    }
    Ok(out)
}

fn check_scope(e: usize, w: usize) -> Result<()> {
    if e < 3 {
        return Err(HeckeError::QuantumCharacteristic(e));
    }
    if w < 2 {
        return Err(HeckeError::RepresentationFinite(w));
    }
    Ok(())
}

fn check_p(p: usize) -> Result<()> {
    if p == 1
        || (p > 1
            && (2..p)
                .take_while(|d| d * d <= p)
                .any(|d| p.is_multiple_of(d)))
    {
        return Err(HeckeError::Invalid(format!(
            "characteristic {p} is neither 0 nor a prime"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    SchurianInfinite,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::SchurianInfinite => "SCHURIAN_INFINITE",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockInfo {
    pub core: Partition,
    pub weight: usize,
}

/// A characteristic-`p` entry with its position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub row: usize,
    pub col: usize,
    #[serde(flatten)]
    pub knowledge: Option<EntryKnowledge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub e: usize,
    pub p: usize,
    pub block: BlockInfo,
    pub class: String,
    pub route: String,
    pub anchor: String,
    /// Block containing the partitions; differs from `block` only for the
    /// conjugate-class route.
    pub witness_block: BlockInfo,
    pub partitions: Vec<Partition>,
    pub reductions: Vec<String>,
    pub reduced_partitions: Vec<Partition>,
    pub char0: Vec<Vec<Option<LaurentPoly>>>,
    pub target: Option<TargetMatrix>,
    pub evidence: Vec<Evidence>,
    pub assumptions: Vec<String>,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Clone, Debug, Default)]
pub struct CertifyOptions {
    /// Cross-checked runner removal for `e > 4`.
    pub runner_reduction: bool,
    /// Engine to use; the shared one for `e` by default.
    pub llt: Option<Arc<LltEngine>>,
}

impl CertifyOptions {
    fn llt(&self, e: usize) -> Arc<LltEngine> {
        match &self.llt {
            Some(x) if x.e() == e => Arc::clone(x),
            _ => shared_engine(e),
        }
    }
}

/// Whole-set row and column removal, then Scopes normalization.
pub fn reduce_rows(rows: &[Partition], e: usize) -> Result<(Vec<Partition>, Vec<String>)> {
    let mut cur = rows.to_vec();
    let mut log = Vec::new();
    let same_block = |xs: &[Partition]| {
        let k = core_and_weight(&xs[0], e);
        xs.iter().all(|x| core_and_weight(x, e) == k)
    };
    loop {
        if cur.is_empty() || cur.iter().any(Partition::is_empty) {
            break;
        }
        let first = cur[0].part(1);
        if cur.iter().all(|x| x.part(1) == first) {
            let next: Vec<Partition> = cur.iter().map(Partition::without_first_row).collect();
            if same_block(&next) {
                log.push(format!("row-removal (first row {first}) [cmt02, donkin]"));
                cur = next;
                continue;
            }
        }
        let len = cur[0].len();
        if cur.iter().all(|x| x.len() == len) {
            let next: Vec<Partition> = cur.iter().map(Partition::without_first_column).collect();
            if same_block(&next) {
                log.push(format!(
                    "column-removal (first column {len}) [cmt02, donkin]"
                ));
                cur = next;
                continue;
            }
        }
        break;
    }
    if let Some(first) = cur.first() {
        let b = BlockId::of(first, e);
        if b.weight > 0 {
            let (norm, path) = ScopesClass::of_block(&b).normalize_with_path();
            if !path.is_empty() {
                cur = cur
                    .iter()
                    .map(|x| transport(x, e, &path))
                    .collect::<Result<_>>()?;
                log.push(format!(
                    "scopes {} -> {norm} [as22:Prop3.2]",
                    ScopesClass::of_block(&b)
                ));
            }
        }
    }
    Ok((cur, log))
}

/// Drops runner `j` of the abacus (`e` → `e − 1` runners).
pub fn remove_runner(lambda: &Partition, e: usize, j: usize) -> Partition {
    let r = lambda.len() + e;
    let beta = crate::abacus::beta_numbers(lambda, r).expect("r ≥ len");
    let e64 = e as i64;
    let beads = beta
        .beads()
        .iter()
        .filter(|&&b| (b % e64) as usize != j)
        .map(|&b| {
            let (lvl, run) = (b / e64, b % e64);
            let run = if run as usize > j { run - 1 } else { run };
            lvl * (e64 - 1) + run
        })
        .collect();
    crate::abacus::BetaSet::from_positions(beads)
        .expect("distinct")
        .to_partition()
}

fn runner_reduction_check(
    rows: &[Partition],
    e: usize,
    char0: &[Vec<Option<LaurentPoly>>],
) -> Option<String> {
    if e <= 4 {
        return None;
    }
    let first = rows.first()?;
    let r = first.len() + e;
    let counts = crate::abacus::runner_counts(first, e, r).ok()?;
    let order = crate::abacus::runner_order(&counts);
    let last = *order.last()?;
    if rows
        .iter()
        .any(|x| !quotient(x, e).components()[e - 1].is_empty())
    {
        return Some("runner-removal: not applicable".into());
    }
    let reduced: Vec<Partition> = rows
        .iter()
        .map(|x| {
            let r = x.len() + e;
            let c = crate::abacus::runner_counts(x, e, r).expect("r ≥ len");
            let o = crate::abacus::runner_order(&c);
            remove_runner(x, e, o[e - 1])
        })
        .collect();
    let _ = last;
    let m = crate::llt::decomp_submatrix(&reduced, e - 1).ok()?;
    Some(if m.entries == char0 {
        "runner-removal [jm02:Thm3.2]: verified against direct computation".into()
    } else {
        "runner-removal [jm02:Thm3.2]: disagrees with direct computation, not used".into()
    })
}

struct Attempt {
    reduced: Vec<Partition>,
    reductions: Vec<String>,
    char0: Vec<Vec<Option<LaurentPoly>>>,
    evidence: Vec<Evidence>,
    assumptions: Vec<String>,
    ok: bool,
    notes: Vec<String>,
}

fn hypothesis_holds(
    char0: &[Vec<Option<LaurentPoly>>],
    charp: &[Vec<Option<EntryKnowledge>>],
) -> bool {
    for (i, row) in charp.iter().enumerate() {
        for (j, k) in row.iter().enumerate() {
            if i == j {
                continue;
            }
            let Some(d0) = char0[i][j].as_ref() else {
                return false;
            };
            let v = d0.eval_at_one();
            if !(0..=1).contains(&v) {
                return false;
            }
            match k {
                Some(k) if k.value() == Some(v as u64) => {}
                _ => return false,
            }
        }
    }
    true
}

fn attempt(
    e: usize,
    p: usize,
    rows: &[Partition],
    target: TargetMatrix,
    opts: &CertifyOptions,
) -> Result<Attempt> {
    let (reduced, reductions) = reduce_rows(rows, e)?;
    let llt = opts.llt(e);
    let char0 = decomp_submatrix_with(&llt, &reduced)?.entries;
    let mut notes = Vec::new();
    if opts.runner_reduction {
        if let Some(n) = runner_reduction_check(&reduced, e, &char0) {
            notes.push(n);
        }
    }
    if !target.matches(&char0) {
        notes.push(format!("characteristic-0 submatrix is not {target}"));
        return Ok(Attempt {
            reduced,
            reductions,
            char0,
            evidence: vec![],
            assumptions: vec![],
            ok: false,
            notes,
        });
    }
    let mut charp = None;
    for allow_axioms in [false, true] {
        let copts = CharpOptions {
            allow_axioms,
            ..CharpOptions::default()
        };
        let mut eng = CharpEngine::with_llt(e, p, copts, Arc::clone(&llt));
        let m = deduce_charp_submatrix(&mut eng, &reduced)?;
        let ok = hypothesis_holds(&char0, &m);
        charp = Some((m, ok));
        if ok {
            break;
        }
    }
    let (m, ok) = charp.expect("at least one pass");
    if !ok {
        notes.push(format!("characteristic-{p} entries not all certified"));
    }
    let mut assumptions = BTreeSet::new();
    let mut evidence = Vec::new();
    for (i, row) in m.into_iter().enumerate() {
        for (j, k) in row.into_iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some(k) = &k {
                assumptions.extend(k.assumptions.iter().cloned());
            }
            evidence.push(Evidence {
                row: i,
                col: j,
                knowledge: k,
            });
        }
    }
    Ok(Attempt {
        reduced,
        reductions,
        char0,
        evidence,
        assumptions: assumptions.into_iter().collect(),
        ok,
        notes,
    })
}

/// Exhaustive search for a witness among partitions of `class` whose first
/// quotient component has a part of size at least `w − 2`.
fn search(
    e: usize,
    p: usize,
    class: &ScopesClass,
    opts: &CertifyOptions,
) -> Result<Option<(Vec<Partition>, TargetMatrix, Attempt)>> {
    const MAX_POOL: usize = 90;
    const MAX_TRIES: usize = 40;
    let b = class.block();
    let w = class.weight;
    let mut pool: Vec<Partition> = block_partitions(&b)
        .into_iter()
        .filter(|x| w < 4 || quotient(x, e).components()[0].part(1) as usize >= w - 2)
        .collect();
    pool.truncate(MAX_POOL);
    let llt = opts.llt(e);
    let regular: Vec<Partition> = pool.iter().filter(|x| x.is_e_regular(e)).cloned().collect();
    let cols = llt.columns(&regular)?;
    let col_of = |mu: &Partition| regular.iter().position(|x| x == mu).map(|k| &cols[k]);
    let d = |l: &Partition, m: &Partition| -> Option<LaurentPoly> {
        if l == m {
            return Some(LaurentPoly::one());
        }
        if !m.dominates_unchecked(l) {
            return Some(LaurentPoly::zero());
        }
        col_of(m).map(|g| g.coeff(l))
    };
    let mut tries = 0;
    for target in TargetMatrix::ALL {
        let t = target.entries();
        let k = target.size();
        let mut stack: Vec<usize> = Vec::new();
        let mut next = 0usize;
        loop {
            if stack.len() == k {
                let rows: Vec<Partition> = stack.iter().map(|&i| pool[i].clone()).collect();
                tries += 1;
                let a = attempt(e, p, &rows, target, opts)?;
                if a.ok {
                    return Ok(Some((rows, target, a)));
                }
                if tries >= MAX_TRIES {
                    return Ok(None);
                }
                next = stack.pop().expect("nonempty") + 1;
                continue;
            }
            if next >= pool.len() {
                match stack.pop() {
                    Some(i) => {
                        next = i + 1;
                        continue;
                    }
                    None => break,
                }
            }
            let i = stack.len();
            let x = &pool[next];
            let fits = !stack.contains(&next)
                && stack.iter().enumerate().all(|(j, &s)| {
                    let y = &pool[s];
                    d(x, y).as_ref() == Some(&t[i][j]) && d(y, x).as_ref() == Some(&t[j][i])
                });
            if fits {
                stack.push(next);
                next = 0;
            } else {
                next += 1;
            }
        }
    }
    Ok(None)
}

fn relabel(rows: &[Partition], from: &ScopesClass, rho: &Partition) -> Vec<Partition> {
    let e = from.e();
    rows.iter()
        .map(|x| from_quotient(rho, &quotient(x, e), e).expect("same quotient shape"))
        .collect()
}

/// Certifies the block in characteristic `p`.
pub fn certify_block(e: usize, p: usize, block: &BlockId) -> Result<Certificate> {
    certify_block_with(e, p, block, &CertifyOptions::default())
}

pub fn certify_block_with(
    e: usize,
    p: usize,
    block: &BlockId,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    check_scope(e, block.weight)?;
    check_p(p)?;
    if block.e != e {
        return Err(HeckeError::Invalid(format!(
            "block is for e = {}, not {e}",
            block.e
        )));
    }
    let class = ScopesClass::of_block(block);
    let norm = class.normalize();
    let conj = norm.conjugate();
    let conj_core = block.core.conjugate();
    let info = |core: &Partition| BlockInfo {
        core: core.clone(),
        weight: block.weight,
    };
    let mut diagnostics = Vec::new();

    let conj_first =
        e == 3 && p == 2 && block.weight >= 4 && Gaps::of(&norm).gamma(Gaps::of(&norm).d1) && {
            let own = dispatch(e, p, &norm)?;
            own.is_empty()
        };
    let mut plans: Vec<(bool, ScopesClass)> = vec![(false, norm.clone())];
    if conj != norm {
        plans.push((true, conj.clone()));
    }
    if conj_first {
        plans.reverse();
    }

    let build = |via_conj: bool,
                 route: &str,
                 anchor: &str,
                 rows_norm: &[Partition],
                 witness: &ScopesClass,
                 target: TargetMatrix,
                 a: Attempt,
                 diagnostics: Vec<String>| {
        let (rho, route) = if via_conj {
            (conj_core.clone(), format!("conjugate-class:{route}"))
        } else {
            (block.core.clone(), route.to_string())
        };
        let partitions = relabel(rows_norm, witness, &rho);
        let mut reductions = Vec::new();
        if via_conj {
            reductions.push(format!(
                "conjugate class {} of {} [as22:Cor6.5]",
                witness, norm
            ));
        }
        reductions.extend(a.reductions);
        Certificate {
            schema_version: SCHEMA_VERSION,
            e,
            p,
            block: info(&block.core),
            class: class.to_string(),
            route,
            anchor: anchor.to_string(),
            witness_block: info(&rho),
            partitions,
            reductions,
            reduced_partitions: a.reduced,
            char0: a.char0,
            target: Some(target),
            evidence: a.evidence,
            assumptions: a.assumptions,
            verdict: if a.ok {
                Verdict::SchurianInfinite
            } else {
                Verdict::Inconclusive
            },
            diagnostics: {
                let mut d = diagnostics;
                d.extend(a.notes);
                d
            },
        }
    };

    let mut fallback: Option<Certificate> = None;
    for (via_conj, witness) in &plans {
        for cand in dispatch(e, p, witness)? {
            let rho = witness.core();
            let Some(rows) = cand.partitions(&rho) else {
                diagnostics.push(format!("{}: shapes do not fit {}", cand.route, witness));
                continue;
            };
            let a = attempt(e, p, &rows, cand.target, opts)?;
            let ok = a.ok;
            let notes = a.notes.join("; ");
            let cert = build(
                *via_conj,
                cand.route,
                cand.anchor,
                &rows,
                witness,
                cand.target,
                a,
                diagnostics.clone(),
            );
            if ok {
                return Ok(cert);
            }
            diagnostics.push(format!("{} on {}: {notes}", cand.route, witness));
            fallback.get_or_insert(cert);
        }
    }
    for (via_conj, witness) in &plans {
        if let Some((rows, target, a)) = search(e, p, witness, opts)? {
            return Ok(build(
                *via_conj,
                "search",
                "LLT",
                &rows,
                witness,
                target,
                a,
                diagnostics,
            ));
        }
        diagnostics.push(format!("search on {witness}: no witness found"));
    }
    Ok(match fallback {
        Some(mut c) => {
            c.diagnostics = diagnostics;
            c.verdict = Verdict::Inconclusive;
            c
        }
        None => Certificate {
            schema_version: SCHEMA_VERSION,
            e,
            p,
            block: info(&block.core),
            class: class.to_string(),
            route: "none".into(),
            anchor: String::new(),
            witness_block: info(&block.core),
            partitions: vec![],
            reductions: vec![],
            reduced_partitions: vec![],
            char0: vec![],
            target: None,
            evidence: vec![],
            assumptions: vec![],
            verdict: Verdict::Inconclusive,
            diagnostics,
        },
    })
}

/// One certificate per normalized class of weight `w`, in class order.
pub fn sweep(e: usize, p: usize, w: usize) -> Result<Vec<Certificate>> {
    sweep_with(e, p, w, &CertifyOptions::default())
}

pub fn sweep_with(e: usize, p: usize, w: usize, opts: &CertifyOptions) -> Result<Vec<Certificate>> {
    check_scope(e, w)?;
    check_p(p)?;
    normalized_classes(e, w)
        .par_iter()
        .map(|c| certify_block_with(e, p, &c.block(), opts))
        .collect()
}

/// Recomputes a certificate from its block with a fresh engine and compares.
pub fn replay(cert: &Certificate) -> Result<bool> {
    let block = BlockId::new(cert.block.core.clone(), cert.block.weight, cert.e)?;
    let opts = CertifyOptions {
        runner_reduction: false,
        llt: Some(Arc::new(LltEngine::new(cert.e))),
    };
    let again = certify_block_with(cert.e, cert.p, &block, &opts)?;
    Ok(again == *cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abacus::core_from_counts;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn targets_are_unitriangular() {
        for t in TargetMatrix::ALL {
            let m = t.entries();
            assert_eq!(m.len(), t.size());
            for (i, row) in m.iter().enumerate() {
                assert!(row[i].is_one());
                assert!(row[i + 1..].iter().all(LaurentPoly::is_zero));
            }
        }
    }

    #[test]
    fn removal_ops() {
        assert_eq!(
            row_removal(&p("4,2"), &p("4,1,1")).unwrap(),
            (p("2"), p("1,1"))
        );
        assert_eq!(
            row_removal(&p("4,2"), &p("3,3")),
            Err(HeckeError::RowRemoval)
        );
        assert_eq!(
            column_removal(&p("1,1,1"), &p("1,1,1")).unwrap(),
            (p(""), p(""))
        );
        assert_eq!(
            column_removal(&p("2,1"), &p("3")),
            Err(HeckeError::ColumnRemoval)
        );
    }

    #[test]
    fn example_core_row() {
        let class = ScopesClass::of_block(&BlockId::new(p("10,6,4,3,2,2,1,1,1,1"), 5, 5).unwrap());
        let row = table_row(&class, 0).unwrap();
        assert_eq!(row.name, "R2");
        let g = Gaps::of(&class);
        assert_eq!((g.d1, g.d2, g.d13), (8, 4, 12));
    }

    #[test]
    fn scope_errors() {
        let b = BlockId::new(p("1"), 1, 3).unwrap();
        assert_eq!(
            certify_block(3, 0, &b).unwrap_err(),
            HeckeError::RepresentationFinite(1)
        );
        let b = BlockId::new(p(""), 2, 2).unwrap();
        assert_eq!(
            certify_block(2, 0, &b).unwrap_err(),
            HeckeError::QuantumCharacteristic(2)
        );
        let b = BlockId::new(p(""), 2, 3).unwrap();
        assert!(certify_block(3, 4, &b).is_err());
    }

    #[test]
    fn remove_runner_keeps_other_runners() {
        let x = from_quotient(
            &core_from_counts(&[1, 2, 3, 4, 5]),
            &Quotient::parse("((1),(1),∅,∅,∅)").unwrap(),
            5,
        )
        .unwrap();
        let y = remove_runner(&x, 5, 0);
        assert_eq!(core_and_weight(&y, 4).1, 2);
    }
}
