use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hecke_core::abacus::{
    beta_numbers, core_and_weight, default_bead_count, quotient, runner_counts, runner_positions,
    AbacusDisplay, BlockId,
};
use hecke_core::cache::{resolve_cache_dir, CacheStore, CACHE_DIR_ENV};
use hecke_core::certify::{
    certify_block_with, sweep_with, table_row, Certificate, CertifyOptions, Gaps,
};
use hecke_core::jantzen::{jantzen_coeffs, jantzen_zero_deduction};
use hecke_core::llt::{decomp_submatrix_with, shared_engine};
use hecke_core::partitions::parse_partition_list;
use hecke_core::scopes::ScopesClass;
use hecke_core::{HeckeError, LaurentPoly, Partition};

#[derive(Parser, Debug)]
#[command(
    name = "hecke",
    version,
    about = "Decomposition numbers and Schurian-infiniteness certificates for type A Hecke algebras"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Directory of the LLT column cache.
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Render the abacus display of a partition.
    Abacus {
        #[arg(long)]
        e: usize,
        #[arg(long, value_parser = parse_partition)]
        partition: Partition,
        /// Number of beads (default: smallest multiple of e that fits).
        #[arg(long)]
        beads: Option<usize>,
    },
    /// Core, positions and Scopes data of a block.
    BlockInfo {
        #[command(flatten)]
        block: BlockArgs,
        #[arg(long)]
        beads: Option<usize>,
    },
    /// Core, weight and quotient of a partition.
    Quotient {
        #[arg(long)]
        e: usize,
        #[arg(long, value_parser = parse_partition)]
        partition: Partition,
    },
    /// Canonical representative of a Scopes class.
    ScopesNormalize {
        #[command(flatten)]
        block: BlockArgs,
    },
    /// Characteristic-0 graded decomposition submatrix.
    Decomp {
        #[arg(long)]
        e: usize,
        /// Partitions separated by ';', e.g. "7,1;6,2".
        #[arg(long, value_parser = parse_rows)]
        rows: Rows,
    },
    /// Jantzen coefficients of a Specht module.
    Jantzen {
        #[arg(long)]
        e: usize,
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long, value_parser = parse_partition)]
        partition: Partition,
        /// Also try to show d_{λμ}(1) = 0 for this μ.
        #[arg(long, value_parser = parse_partition)]
        mu: Option<Partition>,
    },
    /// Certificate for one block.
    Certify {
        #[command(flatten)]
        block: BlockArgs,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        enable_runner_reduction: bool,
    },
    /// Certificates for every Scopes class of a weight.
    Sweep {
        #[arg(long)]
        e: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        weight: usize,
        #[arg(long)]
        enable_runner_reduction: bool,
    },
    /// Inspect or reset the LLT cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    Stats,
    Clear,
    Verify,
}

#[derive(Args, Debug)]
struct BlockArgs {
    #[arg(long)]
    e: usize,
    #[arg(long)]
    weight: usize,
    #[arg(long, value_parser = parse_partition, conflicts_with = "class", required_unless_present = "class")]
    core: Option<Partition>,
    /// Runner bead counts, e.g. "[1,4,7]".
    #[arg(long)]
    class: Option<String>,
}

impl BlockArgs {
    fn block(&self) -> Result<BlockId> {
        check_e(self.e)?;
        match (&self.core, &self.class) {
            (Some(core), _) => Ok(BlockId::new(core.clone(), self.weight, self.e)?),
            (None, Some(c)) => {
                let class: ScopesClass = format!("{c}@{}", self.weight).parse()?;
                if class.e() != self.e {
                    bail!("class {c} has {} runners, expected {}", class.e(), self.e);
                }
                Ok(class.block())
            }
            (None, None) => bail!("one of --core or --class is required"),
        }
    }
}

#[derive(Clone, Debug)]
struct Rows(Vec<Partition>);

fn parse_partition(s: &str) -> std::result::Result<Partition, String> {
    s.parse::<Partition>().map_err(|e| e.to_string())
}

fn parse_rows(s: &str) -> std::result::Result<Rows, String> {
    parse_partition_list(s).map(Rows).map_err(|e| e.to_string())
}

fn check_e(e: usize) -> Result<()> {
    if e < 3 {
        return Err(HeckeError::QuantumCharacteristic(e).into());
    }
    Ok(())
}

fn poly_json(x: &Option<LaurentPoly>) -> Value {
    match x {
        Some(x) => serde_json::to_value(x).expect("serializable"),
        None => Value::Null,
    }
}

fn poly_text(x: &Option<LaurentPoly>) -> String {
    x.as_ref()
        .map_or_else(|| "?".to_string(), |p| p.to_string())
}

fn matrix_text(rows: &[Partition], m: &[Vec<Option<LaurentPoly>>]) -> String {
    let cells: Vec<Vec<String>> = m
        .iter()
        .map(|r| r.iter().map(poly_text).collect())
        .collect();
    let labels: Vec<String> = rows.iter().map(|x| format!("({x})")).collect();
    let lw = labels.iter().map(|s| s.chars().count()).max().unwrap_or(0);
    let cw = cells
        .iter()
        .flatten()
        .map(|s| s.chars().count())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for (label, row) in labels.iter().zip(&cells) {
        out.push_str(&format!("{label:<lw$} |"));
        for c in row {
            out.push_str(&format!(" {c:>cw$}"));
        }
        out.push('\n');
    }
    out
}

fn store(cli: &Cli) -> CacheStore {
    CacheStore::new(resolve_cache_dir(cli.cache_dir.as_deref()))
}

/// Runs `f` with the cache for `e` loaded, then writes back new columns.
fn with_cache<T>(cli: &Cli, e: usize, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let st = store(cli);
    let eng = shared_engine(e);
    eng.preload(&st).context("loading the LLT cache")?;
    let out = f()?;
    if let Err(err) = eng.flush(&st) {
        eprintln!("warning: could not write the LLT cache: {err}");
    }
    Ok(out)
}

fn certificate_text(c: &Certificate) -> String {
    let mut s = format!(
        "block: core ({}), weight {}, e = {}, p = {}\nclass: {}\nroute: {} [{}]\nverdict: {}\n",
        c.block.core, c.block.weight, c.e, c.p, c.class, c.route, c.anchor, c.verdict
    );
    if c.witness_block != c.block {
        s.push_str(&format!("witness block: core ({})\n", c.witness_block.core));
    }
    if let Some(t) = c.target {
        s.push_str(&format!("target: {t}\n"));
    }
    s.push_str("partitions:\n");
    for x in &c.partitions {
        s.push_str(&format!("  ({x})\n"));
    }
    for r in &c.reductions {
        s.push_str(&format!("reduction: {r}\n"));
    }
    if !c.char0.is_empty() {
        s.push_str("characteristic 0:\n");
        s.push_str(&matrix_text(&c.reduced_partitions, &c.char0));
    }
    let uncertified = c
        .evidence
        .iter()
        .filter(|ev| ev.knowledge.as_ref().is_none_or(|k| !k.is_certified()))
        .count();
    s.push_str(&format!(
        "characteristic {}: {} off-diagonal entries, {} uncertified\n",
        c.p,
        c.evidence.len(),
        uncertified
    ));
    let a = if c.assumptions.is_empty() {
        "none".to_string()
    } else {
        c.assumptions.join(", ")
    };
    s.push_str(&format!("assumptions: {a}\n"));
    for d in &c.diagnostics {
        s.push_str(&format!("note: {d}\n"));
    }
    s
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.cmd {
        Cmd::Abacus {
            e,
            partition,
            beads,
        } => {
            check_e(*e)?;
            let r = beads.unwrap_or_else(|| default_bead_count(partition, *e));
            let ab = AbacusDisplay::new(partition, *e, r)?;
            let beta = beta_numbers(partition, r)?;
            if cli.json {
                return Ok(json!({
                    "partition": partition,
                    "e": e,
                    "beads": r,
                    "beta": beta.beads(),
                    "counts": ab.counts(),
                    "display": ab.render().lines().collect::<Vec<_>>(),
                })
                .to_string());
            }
            let betas: Vec<String> = beta.beads().iter().map(i64::to_string).collect();
            Ok(format!(
                "beta numbers (r = {r}): {}\n{}",
                betas.join(","),
                ab.render()
            ))
        }
        Cmd::BlockInfo { block, beads } => {
            let b = block.block()?;
            let e = b.e;
            let mut r = beads.unwrap_or(b.core.len().max(1)).max(b.core.len());
            while runner_counts(&b.core, e, r)?.contains(&0) {
                r += e;
            }
            let pos = runner_positions(&b.core, e, r)?;
            let class = ScopesClass::of_block(&b);
            let norm = class.normalize();
            let g = Gaps::of(&class);
            let row = if b.weight >= 2 {
                table_row(&class, 0).map(|r| r.name)
            } else {
                None
            };
            let pos_s: Vec<String> = pos.iter().map(i64::to_string).collect();
            if cli.json {
                return Ok(json!({
                    "e": e,
                    "core": b.core,
                    "weight": b.weight,
                    "size": b.size(),
                    "beads": r,
                    "positions": pos,
                    "class": class.to_string(),
                    "normalized_class": norm.to_string(),
                    "gaps": {"d1": g.d1, "d2": g.d2, "d13": g.d13, "d14": g.d14},
                    "table_row": row,
                })
                .to_string());
            }
            Ok(format!(
                "core: ({})\nweight: {}\nsize: {}\npositions (r = {r}): ({})\nclass: {class}\nnormalized class: {norm}\ngaps: d1 = {}, d2 = {}, d13 = {}{}\ncase: {}\n",
                b.core,
                b.weight,
                b.size(),
                pos_s.join(","),
                g.d1,
                g.d2,
                g.d13,
                g.d14.map(|x| format!(", d14 = {x}")).unwrap_or_default(),
                row.unwrap_or("-"),
            ))
        }
        Cmd::Quotient { e, partition } => {
            check_e(*e)?;
            let (core, w) = core_and_weight(partition, *e);
            let q = quotient(partition, *e);
            if cli.json {
                return Ok(json!({"partition": partition, "e": e, "core": core, "weight": w, "quotient": q.components()}).to_string());
            }
            Ok(format!("core: ({core})\nweight: {w}\nquotient: {q}\n"))
        }
        Cmd::ScopesNormalize { block } => {
            let b = block.block()?;
            let class = ScopesClass::of_block(&b);
            let (norm, path) = class.normalize_with_path();
            if cli.json {
                let steps: Vec<Value> = path
                    .iter()
                    .map(|s| json!({"runner": s.runner, "beads": s.beads}))
                    .collect();
                return Ok(json!({
                    "class": class.to_string(),
                    "normalized": norm.to_string(),
                    "core": norm.core(),
                    "steps": steps,
                })
                .to_string());
            }
            let mut s = format!(
                "class: {class}\nnormalized: {norm}\ncore: ({})\nsteps: {}\n",
                norm.core(),
                path.len()
            );
            for st in &path {
                s.push_str(&format!(
                    "  swap runners {} and {} (r = {})\n",
                    st.runner - 1,
                    st.runner,
                    st.beads
                ));
            }
            Ok(s)
        }
        Cmd::Decomp { e, rows } => {
            check_e(*e)?;
            let m = with_cache(cli, *e, || {
                Ok(decomp_submatrix_with(&shared_engine(*e), &rows.0)?)
            })?;
            if cli.json {
                let ents: Vec<Vec<Value>> = m
                    .entries
                    .iter()
                    .map(|r| r.iter().map(poly_json).collect())
                    .collect();
                return Ok(json!({"e": e, "rows": m.rows, "matrix": ents}).to_string());
            }
            Ok(matrix_text(&m.rows, &m.entries))
        }
        Cmd::Jantzen {
            e,
            p,
            partition,
            mu,
        } => {
            check_e(*e)?;
            let row = jantzen_coeffs(partition, *e, *p);
            let token = match mu {
                Some(mu) => Some(jantzen_zero_deduction(partition, mu, *e, *p)?),
                None => None,
            };
            if cli.json {
                let coeffs: Vec<Value> = row
                    .coeffs
                    .iter()
                    .map(|(s, c)| json!({"sigma": s, "coeff": c}))
                    .collect();
                let mut v = json!({"lambda": partition, "e": e, "p": p, "coeffs": coeffs});
                if let Some(t) = &token {
                    v["zero_deduction"] = serde_json::to_value(t)?;
                }
                return Ok(v.to_string());
            }
            let mut s = String::new();
            for (sigma, c) in &row.coeffs {
                s.push_str(&format!("{c:>4}  ({sigma})\n"));
            }
            if row.coeffs.is_empty() {
                s.push_str("all coefficients vanish\n");
            }
            match (mu, token) {
                (Some(mu), Some(Some(_))) => {
                    s.push_str(&format!("d_{{({partition}),({mu})}}(1) = 0\n"))
                }
                (Some(_), Some(None)) => s.push_str("vanishing not shown\n"),
                _ => {}
            }
            Ok(s)
        }
        Cmd::Certify {
            block,
            p,
            enable_runner_reduction,
        } => {
            let b = block.block()?;
            let opts = CertifyOptions {
                runner_reduction: *enable_runner_reduction,
                llt: None,
            };
            let c = with_cache(cli, b.e, || Ok(certify_block_with(b.e, *p, &b, &opts)?))?;
            Ok(if cli.json {
                c.to_json()
            } else {
                certificate_text(&c)
            })
        }
        Cmd::Sweep {
            e,
            p,
            weight,
            enable_runner_reduction,
        } => {
            check_e(*e)?;
            let opts = CertifyOptions {
                runner_reduction: *enable_runner_reduction,
                llt: None,
            };
            let cs = with_cache(cli, *e, || Ok(sweep_with(*e, *p, *weight, &opts)?))?;
            if cli.json {
                return Ok(serde_json::to_string_pretty(&cs)?);
            }
            let mut s = String::new();
            for c in &cs {
                let a = if c.assumptions.is_empty() {
                    String::new()
                } else {
                    format!(" [{}]", c.assumptions.join(", "))
                };
                let t = c.target.map(|t| t.symbol()).unwrap_or("-");
                s.push_str(&format!(
                    "{:<16} {:<40} {t} {}{a}\n",
                    c.class, c.route, c.verdict
                ));
            }
            let ok = cs
                .iter()
                .filter(|c| c.verdict == hecke_core::certify::Verdict::SchurianInfinite)
                .count();
            s.push_str(&format!("{ok}/{} classes certified\n", cs.len()));
            Ok(s)
        }
        Cmd::Cache { action } => {
            let st = store(cli);
            match action {
                CacheAction::Stats => {
                    let stats = st.stats()?;
                    if cli.json {
                        let v: Vec<Value> = stats
                            .iter()
                            .map(|s| json!({"e": s.e, "columns": s.columns, "bytes": s.bytes}))
                            .collect();
                        return Ok(json!({"dir": st.dir(), "files": v}).to_string());
                    }
                    let mut s = format!("cache: {}\n", st.dir().display());
                    for f in &stats {
                        s.push_str(&format!(
                            "e = {}: {} columns, {} bytes\n",
                            f.e, f.columns, f.bytes
                        ));
                    }
                    Ok(s)
                }
                CacheAction::Clear => {
                    let n = st.clear()?;
                    Ok(if cli.json {
                        json!({"removed_files": n}).to_string()
                    } else {
                        format!("removed {n} files\n")
                    })
                }
                CacheAction::Verify => {
                    let n = st.verify()?;
                    Ok(if cli.json {
                        json!({"verified_columns": n}).to_string()
                    } else {
                        format!("{n} columns verified\n")
                    })
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
