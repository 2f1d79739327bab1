//! Persistent text store for LLT columns, one file per `e`.
//!
//! ```text
//! LLTCACHE v1
//! e 3
//! G 7,1
//! T 7,1 0:1
//! T 6,2 1:1
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{HeckeError, Result};
use crate::fock::FockVector;
use crate::laurent::LaurentPoly;
use crate::partitions::Partition;

pub const CACHE_HEADER: &str = "LLTCACHE v1";
pub const CACHE_DIR_ENV: &str = "HECKE_CACHE_DIR";

/// A directory of cache files.
#[derive(Clone, Debug)]
pub struct CacheStore {
    dir: PathBuf,
}

/// Per-file statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheFileStats {
    pub e: usize,
    pub columns: usize,
    pub bytes: u64,
}

fn cache_err(msg: impl Into<String>) -> HeckeError {
    HeckeError::Cache(msg.into())
}

fn io_err(path: &Path, e: std::io::Error) -> HeckeError {
    HeckeError::Cache(format!("{}: {e}", path.display()))
}

/// Flag value, else `HECKE_CACHE_DIR`, else the platform data directory.
pub fn resolve_cache_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(CACHE_DIR_ENV) {
        if !p.is_empty() {
            return PathBuf::from(p);
        }
    }
    platform_data_dir().join("hecke")
}

fn platform_data_dir() -> PathBuf {
    let env = |k: &str| {
        std::env::var_os(k)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    };
    if cfg!(target_os = "windows") {
        if let Some(p) = env("LOCALAPPDATA") {
            return p;
        }
    } else if cfg!(target_os = "macos") {
        if let Some(h) = env("HOME") {
            return h.join("Library").join("Application Support");
        }
    } else {
        if let Some(p) = env("XDG_DATA_HOME") {
            return p;
        }
        if let Some(h) = env("HOME") {
            return h.join(".local").join("share");
        }
    }
    std::env::temp_dir()
}

/// Checks `G(μ)`: coefficient 1 at `μ`, all other coefficients in `vℕ[v]`,
/// support dominated by `μ` and of the same size.
pub fn verify_column(mu: &Partition, g: &FockVector) -> Result<()> {
    if !g.coeff(mu).is_one() {
        return Err(cache_err(format!("column {mu}: diagonal entry is not 1")));
    }
    for (lambda, c) in g.iter() {
        if lambda == mu {
            continue;
        }
        if lambda.size() != mu.size() || !mu.dominates_unchecked(lambda) {
            return Err(cache_err(format!(
                "column {mu}: {lambda} is not dominated by {mu}"
            )));
        }
        if !c.in_v_nat_v() {
            return Err(cache_err(format!(
                "column {mu}: entry at {lambda} is {c}, not in vN[v]"
            )));
        }
    }
    Ok(())
}

impl CacheStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CacheStore { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn file_for(&self, e: usize) -> PathBuf {
        self.dir.join(format!("llt-e{e}.txt"))
    }

    fn lock(&self, exclusive: bool) -> Result<File> {
        fs::create_dir_all(&self.dir).map_err(|e| io_err(&self.dir, e))?;
        let path = self.dir.join(".lock");
        let f = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&path)
            .map_err(|e| io_err(&path, e))?;
        let res = if exclusive { f.lock() } else { f.lock_shared() };
        res.map_err(|e| io_err(&path, e))?;
        Ok(f)
    }

    /// Columns stored for `e`, each re-verified. A missing file is empty.
    pub fn load(&self, e: usize) -> Result<HashMap<Partition, FockVector>> {
        let path = self.file_for(e);
        if !path.exists() {
            return Ok(HashMap::new());
        }
        let _guard = self.lock(false)?;
        let file = File::open(&path).map_err(|err| io_err(&path, err))?;
        parse_cache(BufReader::new(file), e, &path)
    }

    /// Merges `columns` into the file for `e` (atomic rename under an
    /// exclusive lock).
    pub fn save(&self, e: usize, columns: &HashMap<Partition, FockVector>) -> Result<()> {
        let _guard = self.lock(true)?;
        let path = self.file_for(e);
        let mut all: BTreeMap<Partition, FockVector> = BTreeMap::new();
        if path.exists() {
            let file = File::open(&path).map_err(|err| io_err(&path, err))?;
            // a corrupt file is replaced rather than merged
            if let Ok(old) = parse_cache(BufReader::new(file), e, &path) {
                all.extend(old);
            }
        }
        for (mu, g) in columns {
            all.insert(mu.clone(), g.clone());
        }
        let tmp = self
            .dir
            .join(format!(".llt-e{e}.{}.tmp", std::process::id()));
        {
            let f = File::create(&tmp).map_err(|err| io_err(&tmp, err))?;
            let mut w = BufWriter::new(f);
            write_cache(&mut w, e, &all).map_err(|err| io_err(&tmp, err))?;
            w.flush().map_err(|err| io_err(&tmp, err))?;
        }
        fs::rename(&tmp, &path).map_err(|err| io_err(&path, err))?;
        Ok(())
    }

    pub fn stats(&self) -> Result<Vec<CacheFileStats>> {
        let mut out = Vec::new();
        for e in self.stored_es()? {
            let path = self.file_for(e);
            let bytes = fs::metadata(&path).map_err(|err| io_err(&path, err))?.len();
            let columns = self.load(e).map(|m| m.len()).unwrap_or(0);
            out.push(CacheFileStats { e, columns, bytes });
        }
        Ok(out)
    }

    /// Re-verifies every stored column; returns the number of columns checked.
    pub fn verify(&self) -> Result<usize> {
        let mut n = 0;
        for e in self.stored_es()? {
            n += self.load(e)?.len();
        }
        Ok(n)
    }

    pub fn clear(&self) -> Result<usize> {
        let _guard = self.lock(true)?;
        let mut n = 0;
        for e in self.stored_es()? {
            let path = self.file_for(e);
            fs::remove_file(&path).map_err(|err| io_err(&path, err))?;
            n += 1;
        }
        Ok(n)
    }

    fn stored_es(&self) -> Result<Vec<usize>> {
        let mut es = Vec::new();
        let rd = match fs::read_dir(&self.dir) {
            Ok(rd) => rd,
            Err(err) if err.kind() == std::io::ErrorKind::NotFound => return Ok(es),
            Err(err) => return Err(io_err(&self.dir, err)),
        };
        for entry in rd {
            let entry = entry.map_err(|err| io_err(&self.dir, err))?;
            let name = entry.file_name();
            let name = name.to_string_lossy();
            if let Some(e) = name
                .strip_prefix("llt-e")
                .and_then(|s| s.strip_suffix(".txt"))
                .and_then(|s| s.parse().ok())
            {
                es.push(e);
            }
        }
        es.sort_unstable();
        Ok(es)
    }
}

fn write_cache(
    w: &mut impl Write,
    e: usize,
    columns: &BTreeMap<Partition, FockVector>,
) -> std::io::Result<()> {
    writeln!(w, "{CACHE_HEADER}")?;
    writeln!(w, "e {e}")?;
    for (mu, g) in columns {
        writeln!(w, "G {mu}")?;
        for (lambda, c) in g.iter().rev() {
            write!(w, "T {lambda}")?;
            for (exp, coef) in c.terms() {
                write!(w, " {exp}:{coef}")?;
            }
            writeln!(w)?;
        }
    }
    Ok(())
}

fn parse_cache(r: impl BufRead, e: usize, path: &Path) -> Result<HashMap<Partition, FockVector>> {
    let bad = |line: usize, msg: &str| cache_err(format!("{}:{line}: {msg}", path.display()));
    let mut lines = r.lines().enumerate();
    let mut next = || -> Result<Option<(usize, String)>> {
        match lines.next() {
            None => Ok(None),
            Some((i, Ok(s))) => Ok(Some((i + 1, s))),
            Some((i, Err(err))) => Err(bad(i + 1, &err.to_string())),
        }
    };
    match next()? {
        Some((_, h)) if h == CACHE_HEADER => {}
        _ => return Err(bad(1, "missing or unknown version header")),
    }
    match next()? {
        Some((_, s)) if s == format!("e {e}") => {}
        _ => return Err(bad(2, "quantum characteristic mismatch")),
    }
    let mut out = HashMap::new();
    let mut current: Option<(Partition, BTreeMap<Partition, LaurentPoly>)> = None;
    let finish = |cur: Option<(Partition, BTreeMap<Partition, LaurentPoly>)>,
                  out: &mut HashMap<Partition, FockVector>|
     -> Result<()> {
        if let Some((mu, terms)) = cur {
            let g = FockVector::from_terms(terms);
            verify_column(&mu, &g)?;
            out.insert(mu, g);
        }
        Ok(())
    };
    while let Some((no, line)) = next()? {
        if let Some(rest) = line.strip_prefix("G ") {
            finish(current.take(), &mut out)?;
            let mu: Partition = rest.trim().parse().map_err(|_| bad(no, "bad partition"))?;
            current = Some((mu, BTreeMap::new()));
        } else if let Some(rest) = line.strip_prefix("T ") {
            let (_, terms) = current
                .as_mut()
                .ok_or_else(|| bad(no, "term before column"))?;
            let mut fields = rest.split_whitespace();
            let lambda: Partition = fields
                .next()
                .ok_or_else(|| bad(no, "missing partition"))?
                .parse()
                .map_err(|_| bad(no, "bad partition"))?;
            let mut pairs = Vec::new();
            for f in fields {
                let (a, b) = f.split_once(':').ok_or_else(|| bad(no, "bad term"))?;
                let exp: i32 = a.parse().map_err(|_| bad(no, "bad exponent"))?;
                let coef: i64 = b.parse().map_err(|_| bad(no, "bad coefficient"))?;
                pairs.push((exp, coef));
            }
            terms.insert(lambda, LaurentPoly::from_terms(pairs));
        } else if !line.trim().is_empty() {
            return Err(bad(no, "unrecognised record"));
        }
    }
    finish(current, &mut out)?;
    Ok(out)
}
