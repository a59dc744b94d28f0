//! Batch command-line interface over the `abshift` library: single-point
//! expansion and specification queries, witness construction, parameter
//! sweeps, and dimension bounds. All arithmetic is exact; every printed
//! rational round-trips through the `p/q` format.
//!
//! Exit codes are fixed for scripting: `0` success, `2` bad input,
//! `3` unsupported regime, `4` search failure.

use abshift::cantor::DEFAULT_INTERVAL_CAP;
use abshift::dynamics::{expansion_partial_sum, expansion_remainder, itinerary, Params, SymbolSeq};
use abshift::error::Error;
use abshift::numeric::{parse_rational, rational_to_string, Rational};
use abshift::paramlab::{dim_lower_bound, find_witness_capped, sweep_rows_capped, SweepRow};
use abshift::real::decimal_trunc;
use abshift::shiftspace::{classify_k_reports, k_sets, spec_check, SpecCheckReport};
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

fn rational_arg(s: &str) -> Result<Rational, Error> {
    parse_rational(s)
}

fn seq_arg(s: &str) -> Result<SymbolSeq, Error> {
    s.parse()
}

#[derive(Parser)]
#[command(
    name = "abshift",
    version,
    about = "Exact analysis of (α,β)-expansions, specification checking, and Cantor-set witnesses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a point: digits, exact partial sums, and the remainder bound.
    Expand {
        /// Translation α as an exact rational `p/q`.
        #[arg(long, value_parser = rational_arg)]
        alpha: Rational,
        /// Slope β as an exact rational `p/q`.
        #[arg(long, value_parser = rational_arg)]
        beta: Rational,
        /// Point in [0, 1) as an exact rational `p/q`.
        #[arg(long, value_parser = rational_arg)]
        x: Rational,
        /// Number of digits to compute.
        #[arg(long)]
        n: usize,
    },
    /// Check the specification property at one parameter pair, or classify
    /// an explicitly supplied critical pair.
    SpecCheck {
        /// Translation α as an exact rational `p/q`.
        #[arg(long, value_parser = rational_arg, required_unless_present = "u")]
        alpha: Option<Rational>,
        /// Slope β as an exact rational `p/q`.
        #[arg(long, value_parser = rational_arg, required_unless_present = "u")]
        beta: Option<Rational>,
        /// Prefix-length window for the synchronization sets.
        #[arg(long, default_value_t = 100)]
        depth: usize,
        /// Refuse regimes where no certificate theory applies (slope ≤ 2).
        #[arg(long)]
        certified_only: bool,
        /// Explicit lower critical sequence, e.g. `0,(1)` or `0,1,1` —
        /// bypasses the parameter pair (requires --v).
        #[arg(long, value_parser = seq_arg, requires = "v", conflicts_with_all = ["alpha", "beta"])]
        u: Option<SymbolSeq>,
        /// Explicit upper critical sequence (requires --u).
        #[arg(long, value_parser = seq_arg, requires = "u")]
        v: Option<SymbolSeq>,
    },
    /// Search for a witness translation at a slope; writes a witness
    /// report as JSON.
    Witness {
        /// Slope β as an exact rational `p/q`.
        #[arg(long, value_parser = rational_arg)]
        beta: Rational,
        /// Refinement depth (number of digit levels).
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a slope grid: thickness, dimension bound, window conditions,
    /// and witness status per grid point.
    Sweep {
        /// Stratum label ℓ ≥ 3.
        #[arg(long)]
        ell: u32,
        /// Grid start (exact rational, inside (ℓ−1, ℓ+1)).
        #[arg(long, value_parser = rational_arg)]
        start: Rational,
        /// Grid end (exclusive; exact rational).
        #[arg(long, value_parser = rational_arg)]
        end: Rational,
        /// Number of grid points: β_k = start + k·(end−start)/steps, k < steps.
        #[arg(long)]
        steps: usize,
        /// Witness-search refinement depth per row.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Cover level for the rigorous thickness column.
        #[arg(long, default_value_t = 2)]
        level: usize,
        /// Output path; stdout when omitted. Partial files are removed on failure.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// Worker threads (0 = all cores). Output is byte-identical for
        /// every worker count.
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Print the rigorous dimension lower bound for a stratum.
    DimBound {
        /// Stratum label ℓ ≥ 3.
        #[arg(long)]
        ell: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::UnsupportedRegime(_) => 3,
        Error::SearchFailed(_) | Error::CapExceeded { .. } => 4,
        _ => 2,
    }
}

/// Writes to stdout, ending the process quietly with status 0 when the
/// consumer has closed the pipe (`abshift ... | head`), and with status 2
/// on any other write failure. Keeps piped usage panic-free.
fn emit(args: std::fmt::Arguments<'_>, newline: bool) {
    use std::io::{ErrorKind, Write};
    let mut out = std::io::stdout().lock();
    let result = out
        .write_fmt(args)
        .and_then(|()| if newline { out.write_all(b"\n") } else { Ok(()) });
    if let Err(e) = result {
        drop(out);
        if e.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(2);
    }
}

macro_rules! outln {
    ($($t:tt)*) => { emit(format_args!($($t)*), true) };
}

macro_rules! outraw {
    ($($t:tt)*) => { emit(format_args!($($t)*), false) };
}

/// The live-interval cap, overridable through `ABSHIFT_MAX_INTERVALS`.
fn interval_cap() -> usize {
    std::env::var("ABSHIFT_MAX_INTERVALS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_INTERVAL_CAP)
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Expand { alpha, beta, x, n } => cmd_expand(alpha, beta, x, n),
        Command::SpecCheck { alpha, beta, depth, certified_only, u, v } => {
            cmd_spec_check(alpha, beta, depth, certified_only, u, v)
        }
        Command::Witness { beta, depth, out } => cmd_witness(beta, depth, out.as_deref()),
        Command::Sweep { ell, start, end, steps, depth, level, out, format, workers } => {
            cmd_sweep(ell, start, end, steps, depth, level, out.as_deref(), format, workers)
        }
        Command::DimBound { ell } => cmd_dim_bound(ell),
    }
}

fn cmd_expand(alpha: Rational, beta: Rational, x: Rational, n: usize) -> Result<(), Error> {
    if n == 0 {
        return Err(Error::InvalidParams("digit count must be at least 1".into()));
    }
    let p = Params::new(alpha, beta)?;
    let seq = itinerary(&p, &x, n)?;
    let digits = seq.digits(n)?;
    outln!(
        "{}",
        digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    );
    for k in 1..=n {
        let s_k = expansion_partial_sum(&p, &digits[..k]);
        outln!("S_{k} = {}", rational_to_string(&s_k));
    }
    let (_, diff, orbit_point, bound) = expansion_remainder(&p, &x, n)?;
    outln!(
        "remainder: {} < {}  (x - S_{n} = T^{n}(x)/beta^{n}, T^{n}(x) = {})",
        rational_to_string(&diff),
        rational_to_string(&bound),
        rational_to_string(&orbit_point),
    );
    Ok(())
}

fn cmd_spec_check(
    alpha: Option<Rational>,
    beta: Option<Rational>,
    depth: usize,
    certified_only: bool,
    u: Option<SymbolSeq>,
    v: Option<SymbolSeq>,
) -> Result<(), Error> {
    if depth == 0 {
        return Err(Error::InvalidParams("depth must be at least 1".into()));
    }
    let report: SpecCheckReport = match (u, v) {
        (Some(u), Some(v)) => {
            let (k_u, k_v) = k_sets(&u, &v, depth, 4 * depth)?;
            let verdict = classify_k_reports(&k_u, &k_v, depth);
            SpecCheckReport { verdict, u, v, k_u, k_v }
        }
        _ => {
            let (alpha, beta) = match (alpha, beta) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::InvalidParams(
                        "provide --alpha and --beta, or an explicit --u/--v pair".into(),
                    ))
                }
            };
            let p = Params::new(alpha, beta)?;
            spec_check(&p, depth, certified_only)?
        }
    };
    outln!("{}", report.verdict);
    outln!("{}", to_json(&report)?);
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string(value).map_err(|e| Error::ParseError(e.to_string()))
}

fn to_json_pretty<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(value).map_err(|e| Error::ParseError(e.to_string()))
}

fn cmd_witness(beta: Rational, depth: usize, out: Option<&Path>) -> Result<(), Error> {
    let report = find_witness_capped(&beta, depth, interval_cap())?;
    let json = to_json_pretty(&report)?;
    match out {
        Some(path) => write_atomic(path, &json)?,
        None => outln!("{json}"),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    ell: u32,
    start: Rational,
    end: Rational,
    steps: usize,
    depth: usize,
    level: usize,
    out: Option<&Path>,
    format: OutputFormat,
    workers: usize,
) -> Result<(), Error> {
    let cap = interval_cap();
    let rows = run_pooled(workers, || {
        sweep_rows_capped(ell, &start, &end, steps, depth, level, true, cap)
    })?;
    let body = match format {
        OutputFormat::Csv => rows_to_csv(&rows),
        OutputFormat::Json => {
            let mut s = to_json_pretty(&rows)?;
            s.push('\n');
            s
        }
    };
    match out {
        Some(path) => write_atomic(path, body.trim_end_matches('\n'))?,
        None => outraw!("{body}"),
    }
    Ok(())
}

/// Fixed, documented CSV layout for sweep output.
pub const SWEEP_CSV_HEADER: &str = "beta,ell,tau_rigorous,tau_paper_formula,newhouse,\
s_min_admissible,s_max_in_unit,slope_near_top,witness_status";

fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(SWEEP_CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            rational_to_string(&r.beta),
            r.ell,
            rational_to_string(&r.tau_rigorous),
            rational_to_string(&r.tau_paper_formula),
            r.newhouse,
            r.conditions.s_min_admissible,
            r.conditions.s_max_in_unit,
            r.conditions.slope_near_top,
            r.witness_status,
        ));
    }
    s
}

fn cmd_dim_bound(ell: u32) -> Result<(), Error> {
    let d = dim_lower_bound(ell)?;
    outln!("fiber >= {}", significant_trunc(&d.fiber.lo, 30));
    outln!("product >= {}", significant_trunc(&d.product.lo, 30));
    Ok(())
}

/// Decimal rendering truncated (rounded toward zero) to `sig` significant
/// digits, so the printed value never overstates a lower bound.
fn significant_trunc(r: &Rational, sig: usize) -> String {
    let full = decimal_trunc(r, sig + 15);
    let mut out = String::new();
    let mut significant = 0usize;
    let mut seen_nonzero = false;
    for c in full.chars() {
        if significant == sig {
            break;
        }
        out.push(c);
        if c.is_ascii_digit() {
            if c != '0' {
                seen_nonzero = true;
            }
            if seen_nonzero {
                significant += 1;
            }
        }
    }
    out
}

/// Writes through a sibling temp file and renames into place; removes the
/// temp file (the only partial output) on failure.
fn write_atomic(path: &Path, content: &str) -> Result<(), Error> {
    let tmp = path.with_extension("tmp");
    let attempt = (|| -> std::io::Result<()> {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(content.as_bytes())?;
        f.write_all(b"\n")?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    })();
    if let Err(e) = attempt {
        let _ = std::fs::remove_file(&tmp);
        return Err(Error::InvalidParams(format!(
            "cannot write {}: {e}",
            path.display()
        )));
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn run_pooled<T: Send>(
    workers: usize,
    job: impl FnOnce() -> Result<T, Error> + Send,
) -> Result<T, Error> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParams(format!("cannot build worker pool: {e}")))?;
    pool.install(job)
}

#[cfg(not(feature = "parallel"))]
fn run_pooled<T: Send>(
    _workers: usize,
    job: impl FnOnce() -> Result<T, Error> + Send,
) -> Result<T, Error> {
    job()
}
