//! The LLT algorithm: canonical basis elements `G(μ)` of the level-one Fock
//! space, memoized per quantum characteristic.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use rayon::prelude::*;

use crate::abacus::core_and_weight;
use crate::cache::{verify_column, CacheStore};
use crate::error::{HeckeError, Result};
use crate::fock::{ladder_vector, Convention, FockVector};
use crate::laurent::LaurentPoly;
use crate::partitions::Partition;

/// Memoizing LLT engine for a fixed `e`.
#[derive(Debug)]
pub struct LltEngine {
    e: usize,
    conv: Convention,
    columns: RwLock<HashMap<Partition, Arc<FockVector>>>,
    /// Columns not yet written to the persistent store.
    dirty: Mutex<Vec<Partition>>,
}

impl LltEngine {
    pub fn new(e: usize) -> Self {
        Self::with_convention(e, Convention::default())
    }

    pub fn with_convention(e: usize, conv: Convention) -> Self {
        LltEngine {
            e,
            conv,
            columns: RwLock::new(HashMap::new()),
            dirty: Mutex::new(Vec::new()),
        }
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn convention(&self) -> Convention {
        self.conv
    }

    pub fn cached_columns(&self) -> usize {
        self.columns.read().expect("cache lock").len()
    }

    /// Loads previously stored columns (each re-verified by the store).
    pub fn preload(&self, store: &CacheStore) -> Result<usize> {
        let loaded = store.load(self.e)?;
        let n = loaded.len();
        let mut cols = self.columns.write().expect("cache lock");
        for (mu, g) in loaded {
            cols.entry(mu).or_insert_with(|| Arc::new(g));
        }
        Ok(n)
    }

    /// Writes columns computed since the last flush.
    pub fn flush(&self, store: &CacheStore) -> Result<usize> {
        let pending: Vec<Partition> = std::mem::take(&mut *self.dirty.lock().expect("dirty lock"));
        if pending.is_empty() {
            return Ok(0);
        }
        let cols = self.columns.read().expect("cache lock");
        let out: HashMap<Partition, FockVector> = pending
            .iter()
            .filter_map(|mu| cols.get(mu).map(|g| (mu.clone(), (**g).clone())))
            .collect();
        drop(cols);
        store.save(self.e, &out)?;
        Ok(out.len())
    }

    /// `G(μ)`.
    pub fn column(&self, mu: &Partition) -> Result<Arc<FockVector>> {
        if !mu.is_e_regular(self.e) {
            return Err(HeckeError::NotRegular(mu.to_string(), self.e));
        }
        if let Some(g) = self.columns.read().expect("cache lock").get(mu) {
            return Ok(Arc::clone(g));
        }
        let g = Arc::new(self.compute(mu)?);
        let mut cols = self.columns.write().expect("cache lock");
        let g = Arc::clone(cols.entry(mu.clone()).or_insert_with(|| {
            self.dirty.lock().expect("dirty lock").push(mu.clone());
            g
        }));
        Ok(g)
    }

    /// Columns for several `μ`, computed in parallel.
    pub fn columns(&self, mus: &[Partition]) -> Result<Vec<Arc<FockVector>>> {
        mus.par_iter().map(|mu| self.column(mu)).collect()
    }

    fn compute(&self, mu: &Partition) -> Result<FockVector> {
        let mut x = ladder_vector(mu, self.e, self.conv)?;
        // Subtracting G(ν) only changes coefficients strictly below ν in the
        // lexicographic order, so one descending sweep suffices.
        let mut cursor = mu.clone();
        loop {
            let next = x
                .iter()
                .rev()
                .find(|(nu, _)| **nu < cursor)
                .map(|(nu, c)| (nu.clone(), c.clone()));
            let Some((nu, c)) = next else { break };
            if c.min_degree().is_some_and(|d| d <= 0) {
                assert!(
                    nu.is_e_regular(self.e),
                    "LLT: non-positive coefficient at the non-regular {nu} in A({mu})"
                );
                let m = c.bar_invariant_correction();
                let g = self.column(&nu)?;
                x.add_scaled(&g, &(-&m));
            }
            cursor = nu;
        }
        verify_column(mu, &x).unwrap_or_else(|e| panic!("LLT positivity failed: {e}"));
        Ok(x)
    }
}

fn registry() -> &'static Mutex<HashMap<usize, Arc<LltEngine>>> {
    static REG: OnceLock<Mutex<HashMap<usize, Arc<LltEngine>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The process-wide engine for `e`.
pub fn shared_engine(e: usize) -> Arc<LltEngine> {
    let mut reg = registry().lock().expect("registry lock");
    Arc::clone(reg.entry(e).or_insert_with(|| Arc::new(LltEngine::new(e))))
}

/// `G(μ)` via the shared engine.
pub fn llt_column(mu: &Partition, e: usize) -> Result<Arc<FockVector>> {
    shared_engine(e).column(mu)
}

/// A square submatrix of the graded decomposition matrix in characteristic 0.
/// Entry `(i, j)` is `None` when the column partition is not `e`-regular and
/// the entry is not forced by triangularity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompMatrix {
    pub rows: Vec<Partition>,
    pub entries: Vec<Vec<Option<LaurentPoly>>>,
}

impl DecompMatrix {
    pub fn get(&self, i: usize, j: usize) -> Option<&LaurentPoly> {
        self.entries[i][j].as_ref()
    }

    /// Entries as fully known polynomials, if every entry is known.
    pub fn known(&self) -> Option<Vec<Vec<LaurentPoly>>> {
        self.entries
            .iter()
            .map(|row| row.iter().cloned().collect::<Option<Vec<_>>>())
            .collect()
    }

    pub fn at_one(&self) -> Vec<Vec<Option<i64>>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.as_ref().map(LaurentPoly::eval_at_one))
                    .collect()
            })
            .collect()
    }
}

/// Decomposition numbers `d_{rows_i, rows_j}(v)` using `engine`.
pub fn decomp_submatrix_with(engine: &LltEngine, rows: &[Partition]) -> Result<DecompMatrix> {
    let e = engine.e();
    if let Some(first) = rows.first() {
        let key = core_and_weight(first, e);
        if rows.iter().any(|r| core_and_weight(r, e) != key) {
            return Err(HeckeError::MixedBlocks);
        }
    }
    let regular: Vec<Partition> = rows.iter().filter(|r| r.is_e_regular(e)).cloned().collect();
    let cols = engine.columns(&regular)?;
    let by_mu: HashMap<&Partition, &Arc<FockVector>> = regular.iter().zip(cols.iter()).collect();
    let entries = rows
        .iter()
        .map(|lambda| {
            rows.iter()
                .map(|mu| match by_mu.get(mu) {
                    Some(g) => Some(g.coeff(lambda)),
                    None if lambda == mu => Some(LaurentPoly::one()),
                    None if !mu.dominates_unchecked(lambda) => Some(LaurentPoly::zero()),
                    None => None,
                })
                .collect()
        })
        .collect();
    Ok(DecompMatrix {
        rows: rows.to_vec(),
        entries,
    })
}

/// Decomposition numbers via the shared engine for `e`.
pub fn decomp_submatrix(rows: &[Partition], e: usize) -> Result<DecompMatrix> {
    decomp_submatrix_with(&shared_engine(e), rows)
}
