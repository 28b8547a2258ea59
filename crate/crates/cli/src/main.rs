use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hodge_core::combinatorics::{character, parse_multiset};
use hodge_core::gauss::{int, parse_rational};
use hodge_core::genfun::{
    elsv_rhs, extract_cubic_table, extract_linear_table, gmv_rhs, qdim_series, seed_shared_linear_table,
    shared_linear_table, HodgeTable, TableJson,
};
use hodge_core::suites::{run_suite, Suite, SuiteConfig};
use hodge_core::{Error, Partition, Rational, Series};

const CACHE_ENV: &str = "HODGE_CACHE_DIR";
const CACHE_FILE: &str = "linear-table.json";

#[derive(Parser)]
#[command(name = "hodge", version, about = "Exact Hodge integrals and the identities between them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symmetric-group character χ^λ_μ.
    Char {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
    },
    /// q-dimension series of a partition, as JSON.
    Qdim {
        #[arg(long)]
        lambda: String,
        /// Exponents below this are returned.
        #[arg(long, default_value_t = 6)]
        order: i64,
    },
    /// Disconnected linear (no --a) or cubic series at μ, as JSON.
    Series {
        #[arg(long)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Defaults to valuation + 8.
        #[arg(long, allow_hyphen_values = true)]
        order: Option<i64>,
    },
    /// Linear and cubic Hodge tables.
    Tables {
        #[arg(long, default_value_t = 2)]
        g_max: usize,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        /// Comma-separated a-values for the cubic table; defaults to 1..(g_max+1)².
        #[arg(long, allow_hyphen_values = true)]
        a_nodes: Option<String>,
        #[arg(long, value_enum, default_value_t = TableKind::Both)]
        kind: TableKind,
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
        /// Output directory; tables go to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and emit a JSON report.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        g: usize,
        /// Comma-separated a-values.
        #[arg(long, allow_hyphen_values = true, default_value = "1,2,3")]
        a: String,
        /// Series are compared through valuation + this offset.
        #[arg(long, default_value_t = 8)]
        order: i64,
        /// Energy cutoff for the wedge checks.
        #[arg(long, default_value_t = 6)]
        cutoff: usize,
        #[arg(long, default_value_t = SuiteConfig::default().seed)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        /// Report file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Flip the sign of the localization edge factor (mutation check).
        #[arg(long, hide = true)]
        inject_edge_sign_error: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    Linear,
    Cubic,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Elsv,
    Gmv,
    Bilinear,
    Fock,
    Identities,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Elsv => Suite::Elsv,
            SuiteArg::Gmv => Suite::Gmv,
            SuiteArg::Bilinear => Suite::Bilinear,
            SuiteArg::Fock => Suite::Fock,
            SuiteArg::Identities => Suite::Identities,
            SuiteArg::All => Suite::All,
        }
    }
}

/// Failures that map to exit code 2.
#[derive(Debug)]
struct UsageError(anyhow::Error);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<E: Into<anyhow::Error>>(e: E) -> anyhow::Error {
    anyhow::Error::new(UsageError(e.into()))
}

/// Errors from the library are usage/budget problems unless they signal a
/// broken invariant.
fn classify(e: Error) -> anyhow::Error {
    match e {
        Error::Inconsistent(_) | Error::Parity { .. } => anyhow::Error::new(e),
        other => usage(other),
    }
}

fn partition_arg(flag: &str, s: &str) -> anyhow::Result<Partition> {
    let (p, reordered) = parse_multiset(s).map_err(|e| usage(anyhow::anyhow!("--{flag}: {e}")))?;
    if reordered {
        eprintln!("warning: --{flag} {s} is not weakly decreasing; using {p}");
    }
    Ok(p)
}

fn rational_list(flag: &str, s: &str) -> anyhow::Result<Vec<Rational>> {
    s.split(',')
        .map(|t| parse_rational(t).map_err(|e| usage(anyhow::anyhow!("--{flag}: {e}"))))
        .collect()
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn load_cache(dir: &Path) -> anyhow::Result<()> {
    let path = dir.join(CACHE_FILE);
    if !path.exists() {
        return Ok(());
    }
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let json: TableJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    seed_shared_linear_table(&HodgeTable::from_json(&json).map_err(usage)?);
    Ok(())
}

fn store_cache(dir: &Path) -> anyhow::Result<()> {
    let table = shared_linear_table(&[]).map_err(classify)?;
    if table.blocks().next().is_none() {
        return Ok(());
    }
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(CACHE_FILE);
    fs::write(&path, serde_json::to_string_pretty(&table.to_json())? + "\n")
        .with_context(|| format!("writing {}", path.display()))
}

fn emit(out: Option<&Path>, name: &str, body: &str) -> anyhow::Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(name);
            fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SeriesOut<'a> {
    partition: &'a Partition,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<String>,
    series: &'a Series,
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Char { lambda, mu } => {
            let l = partition_arg("lambda", &lambda)?;
            let m = partition_arg("mu", &mu)?;
            println!("{}", character(&l, &m).map_err(classify)?);
        }
        Command::Qdim { lambda, order } => {
            let l = partition_arg("lambda", &lambda)?;
            let q = qdim_series(&l, order);
            let out = SeriesOut { partition: &l, a: None, series: &q.series };
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Series { mu, a, order } => {
            let m = partition_arg("mu", &mu)?;
            if m.is_empty() {
                return Err(usage(anyhow::anyhow!("--mu must be nonempty")));
            }
            let order = order.unwrap_or(-(m.size() as i64) - m.length() as i64 + 8);
            let (a, s) = match a {
                None => (None, elsv_rhs(&m, order).map_err(classify)?),
                Some(text) => {
                    let a = parse_rational(&text).map_err(usage)?;
                    (Some(a.to_string()), gmv_rhs(&m, &a, order).map_err(classify)?)
                }
            };
            let out = SeriesOut { partition: &m, a, series: &s };
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Tables { g_max, n_max, a_nodes, kind, format, out } => {
            if let Some(dir) = cache_dir() {
                load_cache(&dir)?;
            }
            let nodes = match a_nodes {
                Some(s) => rational_list("a-nodes", &s)?,
                None => (1..=((g_max + 1) * (g_max + 1)) as i64).map(int).collect(),
            };
            let ext = if format == TableFormat::Json { "json" } else { "csv" };
            if matches!(kind, TableKind::Linear | TableKind::Both) {
                let t = extract_linear_table(g_max, n_max).map_err(classify)?;
                let body = match format {
                    TableFormat::Json => serde_json::to_string_pretty(&t.to_json())? + "\n",
                    TableFormat::Csv => t.to_csv(),
                };
                emit(out.as_deref(), &format!("linear.{ext}"), &body)?;
            }
            if matches!(kind, TableKind::Cubic | TableKind::Both) {
                let t = extract_cubic_table(g_max, n_max, &nodes).map_err(classify)?;
                let body = match format {
                    TableFormat::Json => serde_json::to_string_pretty(&t.to_json())? + "\n",
                    TableFormat::Csv => t.to_csv(),
                };
                emit(out.as_deref(), &format!("cubic.{ext}"), &body)?;
            }
            if let Some(dir) = cache_dir() {
                store_cache(&dir)?;
            }
        }
        Command::Verify { suite, d, g, a, order, cutoff, seed, format, out, inject_edge_sign_error } => {
            let cfg = SuiteConfig {
                d_max: d,
                g_max: g,
                a_values: rational_list("a", &a)?,
                order_offset: order,
                cutoff,
                seed,
                flip_edge_sign: inject_edge_sign_error,
            };
            if let Some(dir) = cache_dir() {
                load_cache(&dir)?;
            }
            let report = run_suite(suite.into(), &cfg).map_err(classify)?;
            if let Some(dir) = cache_dir() {
                store_cache(&dir)?;
            }
            let body = match format {
                ReportFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
                ReportFormat::Pretty => {
                    let mut s = String::new();
                    for c in &report.checks {
                        let status = if c.passed() { "PASS" } else { "FAIL" };
                        s.push_str(&format!("{status} {} [{}] compared={}\n", c.check, c.problem, c.compared));
                    }
                    s
                }
            };
            match &out {
                Some(path) => {
                    fs::write(path, &body).with_context(|| format!("writing {}", path.display()))?
                }
                None => std::io::stdout().lock().write_all(body.as_bytes())?,
            }
            eprintln!(
                "{}: {} checks, {} failed",
                report.suite, report.checks_run, report.checks_failed
            );
            if let Some(f) = &report.first_failure {
                match (&f.first_mismatch, &f.error) {
                    (Some(m), _) => eprintln!(
                        "first mismatch: {} [{}] at {}: expected {}, got {}",
                        f.check, f.problem, m.at, m.expected, m.actual
                    ),
                    (None, Some(e)) => eprintln!("first failure: {} [{}]: {e}", f.check, f.problem),
                    (None, None) => eprintln!("first failure: {} [{}]", f.check, f.problem),
                }
            }
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
