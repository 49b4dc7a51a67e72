//! mertens-bias: command-line driver for the Mertens-bias computation.
//!
//! One binary orchestrating every module: field invariants, the prime-ideal
//! sieve, zero-data validation, explicit-formula checks, and the Poisson /
//! Monte-Carlo logarithmic density with its certified error budget.
//!
//! Exit codes: 0 success, 1 domain error (bad field, missing data, budget
//! or validation failure), 2 usage error (unknown flag, malformed config).

mod config;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use mertens_core::density::{
    delta_density, dissipation_row, monte_carlo_density, omega_hat, CompensatingPolynomial,
    DensityParams, DensityResult, DissipationRow,
};
use mertens_core::field::{FieldInvariants, QuadraticField};
use mertens_core::numerics::EULER_GAMMA;
use mertens_core::observables::{psi_explicit_estimate, scan, ScanReport};
use mertens_core::sieve::{sieve, CheckpointGrid, SieveResult};
use mertens_core::zeros::{load_zeros, merge, validate_counts, Component, ZeroSet};
use mertens_core::Field;

use config::Config;

/// Paper's Table 1: (q, δ to four decimals).
const TABLE1: [(u64, f64); 2] = [(5, 0.9876), (13, 0.9298)];
/// Acceptance tolerance on Table 1 reproduction.
const TABLE1_TOL: f64 = 5e-4;

// ---------------------------------------------------------------------------
// Error plumbing: usage errors exit 2, domain errors exit 1.
// ---------------------------------------------------------------------------

enum CliError {
    Usage(String),
    Domain(String),
}

type CliResult<T> = Result<T, CliError>;

impl From<mertens_core::Error> for CliError {
    fn from(e: mertens_core::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Domain(format!("io: {e}"))
    }
}

// ---------------------------------------------------------------------------
// Argument grammar.
// ---------------------------------------------------------------------------

/// Parses a count that may be written in scientific notation (`1e6`).
fn parse_count(s: &str) -> Result<u64, String> {
    let st = s.trim();
    if let Ok(v) = st.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = st.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if !f.is_finite() || !(0.0..1.8e19).contains(&f) || f.fract() != 0.0 {
        return Err(format!("`{s}` is not a whole non-negative count"));
    }
    Ok(f as u64)
}

#[derive(Parser)]
#[command(
    name = "mertens-bias",
    version,
    about = "Mertens-product bias over real quadratic fields Q(sqrt(q)): \
             prime-ideal sieves, zero-data validation, and the logarithmic \
             density of the set where the product beats its asymptote",
    arg_required_else_help = true
)]
struct Cli {
    /// Config file: flat `key = value` lines under `[section]` headers
    /// (sections named after subcommands); flags override file values
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Directory for CSV/SVG artifacts [default: out]
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    /// Directory with zeros_zeta.txt and zeros_chi_q{q}.txt
    /// [default: $MERTENS_BIAS_DATA or data]
    #[arg(long, global = true, value_name = "DIR")]
    zeros_dir: Option<PathBuf>,

    /// Worker threads for parallel stages (0 = one per core)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fundamental unit, regulator, class number, and kappa_K for Q(sqrt(q))
    Invariants {
        /// Squarefree q >= 2
        #[arg(long)]
        q: Option<u64>,
    },
    /// Sieve prime-ideal norms up to x-max; writes sieve.csv
    Sieve {
        /// Field selector (1 = Q, else squarefree q >= 2)
        #[arg(long)]
        q: Option<u64>,
        /// Sieve limit (accepts 1e6 style) [default: 1e6]
        #[arg(long, value_parser = parse_count)]
        x_max: Option<u64>,
    },
    /// Mertens product vs e^gamma kappa_K log x at every checkpoint; writes mertens.csv
    Mertens {
        /// Field selector (1 = Q, else squarefree q >= 2)
        #[arg(long)]
        q: Option<u64>,
        /// Sieve limit (accepts 1e6 style) [default: 1e6]
        #[arg(long, value_parser = parse_count)]
        x_max: Option<u64>,
    },
    /// E_K(x) scan: sign changes and empirical density; writes scan.csv + e_k_plot.svg
    Scan {
        /// Field selector (1 = Q, else squarefree q >= 2)
        #[arg(long)]
        q: Option<u64>,
        /// Sieve limit (accepts 1e6 style) [default: 1e6]
        #[arg(long, value_parser = parse_count)]
        x_max: Option<u64>,
    },
    /// Explicit-formula residual psi_K(x) - (x - 2 Re sum x^rho/rho) at heights T
    ExplicitCheck {
        /// Field selector (1 = Q, else squarefree q >= 2)
        #[arg(long)]
        q: Option<u64>,
        /// Evaluation point (accepts 1e4 style) [default: 1e4]
        #[arg(long, value_parser = parse_count)]
        x: Option<u64>,
        /// Comma-separated truncation heights [default: 100,1000,10000]
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
    },
    /// Validate zero-data files against the counting main term; writes zero_counts.csv
    VerifyZeros {
        /// Also check chi_q and the merged set (omit to check zeta only)
        #[arg(long)]
        q: Option<u64>,
        /// Count height T [default: largest ordinate in each file]
        #[arg(long)]
        t: Option<f64>,
        /// Slack factor in the count tolerance [default: 3]
        #[arg(long)]
        slack: Option<f64>,
    },
    /// Poisson-summation logarithmic density with certified budget; writes density.csv + omega_hat.svg
    Density {
        /// Squarefree q >= 2 with zero data available
        #[arg(long)]
        q: Option<u64>,
        /// Poisson spacing epsilon [default: 0.05]
        #[arg(long)]
        eps: Option<f64>,
        /// Poisson sum cutoff C [default: 25]
        #[arg(long)]
        cutoff: Option<f64>,
        /// J0-product ordinate cutoff X [default: 9999]
        #[arg(long)]
        product_cutoff: Option<f64>,
        /// Compensating polynomial degree in t^2 (0 or 1) [default: 1]
        #[arg(long)]
        a: Option<u32>,
        /// Zeros in the truncation bound [default: smallest M with bound < 1e-9]
        #[arg(long)]
        m: Option<usize>,
    },
    /// Monte-Carlo estimate of the density from the random model; writes mc_density.csv
    McDensity {
        /// Squarefree q >= 2 with zero data available
        #[arg(long)]
        q: Option<u64>,
        /// Sample count (accepts 1e6 style) [default: 1e6]
        #[arg(long, value_parser = parse_count)]
        samples: Option<u64>,
        /// RNG seed [default: 42]
        #[arg(long)]
        seed: Option<u64>,
        /// Use zeros with ordinate <= this cutoff [default: 1000]
        #[arg(long)]
        zero_cutoff: Option<f64>,
    },
    /// Density and the single-character dissipation bound for several q; writes dissipation.csv
    Dissipation {
        /// Comma-separated q list (missing data: skipped with a note)
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
    },
    /// Recompute Table 1 (q = 5, 13) and compare against the paper; writes table1.csv
    ReproduceTable1,
}

// ---------------------------------------------------------------------------
// Entry point.
// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Shared per-invocation context: parsed config and resolved directories.
struct Ctx {
    cfg: Config,
    out_dir: PathBuf,
    zeros_dir: PathBuf,
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path).map_err(CliError::Usage)?,
        None => Config::empty(),
    };

    // Thread pool must be fixed before any parallel stage runs.
    let threads = pick(cli.threads, &cfg, "", "threads")?.unwrap_or(0);
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Domain(format!("thread pool: {e}")))?;
    }

    let out_dir = cli
        .out_dir
        .or_else(|| cfg.get("", "out_dir").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let zeros_dir = cli
        .zeros_dir
        .or_else(|| cfg.get("", "zeros_dir").map(PathBuf::from))
        .or_else(|| std::env::var_os("MERTENS_BIAS_DATA").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("data"));
    let ctx = Ctx {
        cfg,
        out_dir,
        zeros_dir,
    };

    match cli.command {
        Command::Invariants { q } => cmd_invariants(&ctx, q),
        Command::Sieve { q, x_max } => cmd_sieve(&ctx, q, x_max),
        Command::Mertens { q, x_max } => cmd_mertens(&ctx, q, x_max),
        Command::Scan { q, x_max } => cmd_scan(&ctx, q, x_max),
        Command::ExplicitCheck { q, x, t } => cmd_explicit_check(&ctx, q, x, t),
        Command::VerifyZeros { q, t, slack } => cmd_verify_zeros(&ctx, q, t, slack),
        Command::Density {
            q,
            eps,
            cutoff,
            product_cutoff,
            a,
            m,
        } => cmd_density(&ctx, q, eps, cutoff, product_cutoff, a, m),
        Command::McDensity {
            q,
            samples,
            seed,
            zero_cutoff,
        } => cmd_mc_density(&ctx, q, samples, seed, zero_cutoff),
        Command::Dissipation { q } => cmd_dissipation(&ctx, q),
        Command::ReproduceTable1 => cmd_reproduce_table1(&ctx),
    }
}

// ---------------------------------------------------------------------------
// Config/flag resolution helpers.  Precedence: flag > config > default.
// ---------------------------------------------------------------------------

fn pick<T: std::str::FromStr>(
    flag: Option<T>,
    cfg: &Config,
    section: &str,
    key: &str,
) -> CliResult<Option<T>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match cfg.get(section, key) {
        None => Ok(None),
        Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
            CliError::Usage(format!(
                "config {section}.{key}: `{raw}` is not a valid value"
            ))
        }),
    }
}

/// Like `pick`, but the config value may use scientific notation.
fn pick_count(flag: Option<u64>, cfg: &Config, section: &str, key: &str) -> CliResult<Option<u64>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match cfg.get(section, key) {
        None => Ok(None),
        Some(raw) => parse_count(raw)
            .map(Some)
            .map_err(|e| CliError::Usage(format!("config {section}.{key}: {e}"))),
    }
}

fn require_q(flag: Option<u64>, cfg: &Config, section: &str) -> CliResult<u64> {
    pick(flag, cfg, section, "q")?.ok_or_else(|| {
        CliError::Usage(format!(
            "missing --q (or `q` under [{section}] in the config)"
        ))
    })
}

fn pick_list_f64(
    flag: Vec<f64>,
    cfg: &Config,
    section: &str,
    key: &str,
) -> CliResult<Option<Vec<f64>>> {
    if !flag.is_empty() {
        return Ok(Some(flag));
    }
    let Some(raw) = cfg.get(section, key) else {
        return Ok(None);
    };
    raw.split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| {
                CliError::Usage(format!("config {section}.{key}: `{s}` is not a number"))
            })
        })
        .collect::<CliResult<Vec<f64>>>()
        .map(Some)
}

fn pick_list_u64(
    flag: Vec<u64>,
    cfg: &Config,
    section: &str,
    key: &str,
) -> CliResult<Option<Vec<u64>>> {
    if !flag.is_empty() {
        return Ok(Some(flag));
    }
    let Some(raw) = cfg.get(section, key) else {
        return Ok(None);
    };
    raw.split(',')
        .map(|s| {
            s.trim().parse::<u64>().map_err(|_| {
                CliError::Usage(format!("config {section}.{key}: `{s}` is not an integer"))
            })
        })
        .collect::<CliResult<Vec<u64>>>()
        .map(Some)
}

// ---------------------------------------------------------------------------
// Shared plumbing.
// ---------------------------------------------------------------------------

fn field_name(field: &Field) -> String {
    match field {
        Field::Rational => "Q".to_string(),
        Field::Quadratic(f) => format!("Q(sqrt({}))", f.q()),
    }
}

/// kappa_K: the residue of zeta_K at s = 1 (1 for K = Q).
fn kappa_for(field: &Field) -> CliResult<f64> {
    match field {
        Field::Rational => Ok(1.0),
        Field::Quadratic(f) => Ok(FieldInvariants::compute(f)?.kappa),
    }
}

fn load_zeta(ctx: &Ctx) -> CliResult<ZeroSet> {
    Ok(load_zeros(
        &ctx.zeros_dir.join("zeros_zeta.txt"),
        Component::Zeta,
    )?)
}

fn load_chi(ctx: &Ctx, field: &QuadraticField) -> CliResult<ZeroSet> {
    let path = ctx.zeros_dir.join(format!("zeros_chi_q{}.txt", field.q()));
    Ok(load_zeros(&path, Component::LChi(field.discriminant()))?)
}

/// Zeros of zeta_K: the zeta set for K = Q, the merged multiset otherwise.
fn load_field_zeros(ctx: &Ctx, field: &Field) -> CliResult<ZeroSet> {
    let zeta = load_zeta(ctx)?;
    match field {
        Field::Rational => Ok(zeta),
        Field::Quadratic(f) => {
            let chi = load_chi(ctx, f)?;
            Ok(merge(&zeta, &chi)?)
        }
    }
}

/// RFC 4180-style quoting: wrap fields containing separators or quotes.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn write_artifact(dir: &Path, name: &str, content: &str) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, content)?;
    Ok(path)
}

fn report_written(path: &Path) {
    println!("wrote {}", path.display());
}

// ---------------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------------

fn cmd_invariants(ctx: &Ctx, q: Option<u64>) -> CliResult<()> {
    let q = require_q(q, &ctx.cfg, "invariants")?;
    if q < 2 {
        return Err(CliError::Domain(
            "q = 1 is the rational field; quadratic invariants need a squarefree q >= 2".into(),
        ));
    }
    let field = QuadraticField::new(q)?;
    let inv = FieldInvariants::compute(&field)?;
    let (ua, ub) = (&inv.unit.a, &inv.unit.b);
    println!("field             Q(sqrt({q}))");
    println!("discriminant      {}", field.discriminant());
    println!(
        "fundamental unit  ({ua} + {ub}*sqrt({}))/2",
        field.discriminant()
    );
    println!("regulator         {:.15}", inv.regulator);
    println!("class number      {}", inv.class_number);
    println!("kappa             {:.15}", inv.kappa);
    println!("L(1, chi)         {:.15}", inv.l1);

    let mut csv = String::from("q,discriminant,unit_a,unit_b,regulator,class_number,kappa,l1\n");
    csv.push_str(&format!(
        "{q},{},{ua},{ub},{:.17e},{},{:.17e},{:.17e}\n",
        field.discriminant(),
        inv.regulator,
        inv.class_number,
        inv.kappa,
        inv.l1,
    ));
    let path = write_artifact(&ctx.out_dir, "invariants.csv", &csv)?;
    report_written(&path);
    Ok(())
}

/// Shared sieve-command preamble: resolve q and x_max, run the sieve.
fn sieve_for(
    ctx: &Ctx,
    section: &str,
    q: Option<u64>,
    x_max: Option<u64>,
) -> CliResult<(Field, u64, SieveResult)> {
    let q = require_q(q, &ctx.cfg, section)?;
    let x_max = pick_count(x_max, &ctx.cfg, section, "x_max")?.unwrap_or(1_000_000);
    let field = Field::from_q(q)?;
    let grid = CheckpointGrid::default_grid(x_max);
    let result = sieve(&field, x_max, &grid)?;
    Ok((field, x_max, result))
}

fn cmd_sieve(ctx: &Ctx, q: Option<u64>, x_max: Option<u64>) -> CliResult<()> {
    let (field, x_max, result) = sieve_for(ctx, "sieve", q, x_max)?;
    let last = result.checkpoints.len() - 1;
    println!("field             {}", field_name(&field));
    println!("x_max             {x_max}");
    println!("checkpoints       {}", result.checkpoints.len());
    println!("pi_K(x_max)       {}", result.pi[last]);
    println!("Pi_K(x_max)       {:.6}", result.capital_pi(last));
    println!("psi_K(x_max)      {:.6}", result.psi[last]);
    println!("mertens product   {:.12}", result.mertens_product(x_max)?);
    let path = write_artifact(&ctx.out_dir, "sieve.csv", &result.to_csv())?;
    report_written(&path);
    Ok(())
}

fn cmd_mertens(ctx: &Ctx, q: Option<u64>, x_max: Option<u64>) -> CliResult<()> {
    let (field, x_max, result) = sieve_for(ctx, "mertens", q, x_max)?;
    let kappa = kappa_for(&field)?;
    let e_gamma = EULER_GAMMA.exp();

    let mut csv = String::from("x,product,asymptote,ratio\n");
    let mut min_ratio = f64::INFINITY;
    let mut min_at = 0u64;
    let mut above = 0usize;
    for (i, &x) in result.checkpoints.iter().enumerate() {
        let product = result.log_mertens_sum[i].exp();
        let asymptote = e_gamma * kappa * (x as f64).ln();
        let ratio = product / asymptote;
        if ratio < min_ratio {
            min_ratio = ratio;
            min_at = x;
        }
        if product > asymptote {
            above += 1;
        }
        csv.push_str(&format!(
            "{x},{product:.17e},{asymptote:.17e},{ratio:.17e}\n"
        ));
    }
    let last = result.checkpoints.len() - 1;
    let product = result.log_mertens_sum[last].exp();
    let asymptote = e_gamma * kappa * (x_max as f64).ln();
    println!("field             {}", field_name(&field));
    println!("x_max             {x_max}");
    println!("kappa_K           {kappa:.12}");
    println!("product(x_max)    {product:.12}");
    println!("asymptote(x_max)  {:.12}", asymptote);
    println!("ratio(x_max)      {:.12}", product / asymptote);
    println!("min ratio         {min_ratio:.12} at x = {min_at}");
    println!(
        "above asymptote   {above} / {} checkpoints",
        result.checkpoints.len()
    );
    let path = write_artifact(&ctx.out_dir, "mertens.csv", &csv)?;
    report_written(&path);
    Ok(())
}

fn cmd_scan(ctx: &Ctx, q: Option<u64>, x_max: Option<u64>) -> CliResult<()> {
    let (field, x_max, result) = sieve_for(ctx, "scan", q, x_max)?;
    let kappa = kappa_for(&field)?;
    let report: ScanReport = scan(&result, kappa, &result.checkpoints)?;

    println!("field             {}", field_name(&field));
    println!("x_max             {x_max}");
    println!("grid points       {}", report.grid.len());
    match (report.sign_changes.first(), report.sign_changes.last()) {
        (Some(first), Some(last)) => {
            println!("sign changes      {}", report.sign_changes.len());
            println!("  first           ({}, {})", first.0, first.1);
            println!("  last            ({}, {})", last.0, last.1);
        }
        _ => println!("sign changes      0"),
    }
    println!("E_K(x_max)        {:.9}", report.e_values.last().unwrap());
    println!("final density     {:.9}", report.final_density());

    let path = write_artifact(&ctx.out_dir, "scan.csv", &report.to_csv())?;
    report_written(&path);
    let points: Vec<(f64, f64)> = report
        .grid
        .iter()
        .zip(&report.e_values)
        .map(|(&x, &e)| ((x as f64).ln(), e))
        .collect();
    let plot = svg::line_plot(
        &format!("E_K(x) for K = {}", field_name(&field)),
        "log x",
        "E_K",
        &points,
    );
    let path = write_artifact(&ctx.out_dir, "e_k_plot.svg", &plot)?;
    report_written(&path);
    Ok(())
}

fn cmd_explicit_check(ctx: &Ctx, q: Option<u64>, x: Option<u64>, t: Vec<f64>) -> CliResult<()> {
    let section = "explicit-check";
    let q = require_q(q, &ctx.cfg, section)?;
    let x = pick_count(x, &ctx.cfg, section, "x")?.unwrap_or(10_000);
    let heights =
        pick_list_f64(t, &ctx.cfg, section, "t")?.unwrap_or_else(|| vec![100.0, 1000.0, 10_000.0]);
    if heights.is_empty() {
        return Err(CliError::Usage(
            "explicit-check needs at least one height in --t".into(),
        ));
    }

    let field = Field::from_q(q)?;
    let zeros = load_field_zeros(ctx, &field)?;
    let grid = CheckpointGrid::explicit(vec![x])?;
    let result = sieve(&field, x, &grid)?;
    let psi_actual = result.psi[0];
    let xf = x as f64;

    println!("field             {}", field_name(&field));
    println!("x                 {x}");
    println!("psi_K(x)          {psi_actual:.6}");
    println!(
        "zeros available   {} (max ordinate {:.3})",
        zeros.len(),
        zeros.max_ordinate()
    );
    println!();
    println!(
        "{:>12}  {:>18}  {:>14}  {:>12}",
        "T", "psi_estimate", "residual", "fitted_C"
    );
    let mut csv = String::from("x,T,psi_K,psi_estimate,residual,fitted_constant\n");
    for &t in &heights {
        let estimate = psi_explicit_estimate(&zeros, xf, t)?;
        let residual = psi_actual - estimate;
        // Cor. 2.2 remainder scale: residual = C * x log^2 x / T.
        let fitted = residual.abs() * t / (xf * xf.ln() * xf.ln());
        println!("{t:>12.1}  {estimate:>18.6}  {residual:>14.6}  {fitted:>12.6}");
        csv.push_str(&format!(
            "{x},{t:.6},{psi_actual:.17e},{estimate:.17e},{residual:.17e},{fitted:.17e}\n"
        ));
    }
    let path = write_artifact(&ctx.out_dir, "explicit.csv", &csv)?;
    report_written(&path);
    Ok(())
}

fn cmd_verify_zeros(
    ctx: &Ctx,
    q: Option<u64>,
    t: Option<f64>,
    slack: Option<f64>,
) -> CliResult<()> {
    let section = "verify-zeros";
    let q = pick(q, &ctx.cfg, section, "q")?;
    let t = pick(t, &ctx.cfg, section, "t")?;
    let slack = pick(slack, &ctx.cfg, section, "slack")?.unwrap_or(3.0);

    let mut sets = vec![load_zeta(ctx)?];
    if let Some(q) = q {
        let field = QuadraticField::new(q)?;
        let chi = load_chi(ctx, &field)?;
        let merged = merge(&sets[0], &chi)?;
        sets.push(chi);
        sets.push(merged);
    }

    let mut csv = String::from("component,T,observed,main_term,slack,window_violations,passed\n");
    let mut failed = Vec::new();
    for zs in &sets {
        let height = t.unwrap_or_else(|| zs.max_ordinate());
        let report = validate_counts(zs, height, slack)?;
        println!("== {} ==", zs.component);
        println!("{}", report.render_text());
        println!();
        csv.push_str(&format!(
            "{},{}\n",
            csv_field(&zs.component.to_string()),
            report.to_csv_row()
        ));
        if !report.passed {
            failed.push(zs.component.to_string());
        }
    }
    let path = write_artifact(&ctx.out_dir, "zero_counts.csv", &csv)?;
    report_written(&path);
    if !failed.is_empty() {
        return Err(CliError::Domain(format!(
            "zero-count validation failed for: {}",
            failed.join(", ")
        )));
    }
    Ok(())
}

/// Resolves DensityParams from flags, config, and defaults.
fn density_params(
    ctx: &Ctx,
    section: &str,
    eps: Option<f64>,
    cutoff: Option<f64>,
    product_cutoff: Option<f64>,
    a: Option<u32>,
    m: Option<usize>,
) -> CliResult<DensityParams> {
    let defaults = DensityParams::default();
    Ok(DensityParams {
        epsilon: pick(eps, &ctx.cfg, section, "eps")?.unwrap_or(defaults.epsilon),
        c: pick(cutoff, &ctx.cfg, section, "cutoff")?.unwrap_or(defaults.c),
        x: pick(product_cutoff, &ctx.cfg, section, "product_cutoff")?.unwrap_or(defaults.x),
        a: pick(a, &ctx.cfg, section, "a")?.unwrap_or(defaults.a),
        m: pick(m, &ctx.cfg, section, "m")?,
    })
}

fn cmd_density(
    ctx: &Ctx,
    q: Option<u64>,
    eps: Option<f64>,
    cutoff: Option<f64>,
    product_cutoff: Option<f64>,
    a: Option<u32>,
    m: Option<usize>,
) -> CliResult<()> {
    let section = "density";
    let q = require_q(q, &ctx.cfg, section)?;
    let params = density_params(ctx, section, eps, cutoff, product_cutoff, a, m)?;
    let field = Field::from_q(q)?;
    let Field::Quadratic(_) = field else {
        return Err(CliError::Domain(
            "density needs a quadratic field (the paper's delta is defined for K != Q)".into(),
        ));
    };
    let merged = load_field_zeros(ctx, &field)?;
    let result = delta_density(&params, &merged)?;

    println!("field             {}", field_name(&field));
    println!(
        "zeros             {} merged ordinates, product cutoff X = {}",
        merged.len(),
        params.x
    );
    println!("{}", result.render_text());

    let mut csv = String::from(DensityResult::csv_header());
    csv.push('\n');
    csv.push_str(&result.to_csv_row());
    csv.push('\n');
    let path = write_artifact(&ctx.out_dir, "density.csv", &csv)?;
    report_written(&path);

    // omega_hat over [-C, C] with the same truncated product and polynomial.
    let truncated = merged.truncated(params.x)?;
    let poly = if params.a == 0 {
        CompensatingPolynomial::unit()
    } else {
        CompensatingPolynomial::degree_one(result.b1)
    };
    let n_samples = 800usize;
    let points: Vec<(f64, f64)> = (0..=n_samples)
        .into_par_iter()
        .map(|i| {
            let t = -params.c + 2.0 * params.c * i as f64 / n_samples as f64;
            (t, omega_hat(t, truncated.ordinates(), &poly))
        })
        .collect();
    let plot = svg::line_plot(
        &format!("omega_hat for K = {} on [-C, C]", field_name(&field)),
        "t",
        "omega_hat(t)",
        &points,
    );
    let path = write_artifact(&ctx.out_dir, "omega_hat.svg", &plot)?;
    report_written(&path);
    Ok(())
}

fn cmd_mc_density(
    ctx: &Ctx,
    q: Option<u64>,
    samples: Option<u64>,
    seed: Option<u64>,
    zero_cutoff: Option<f64>,
) -> CliResult<()> {
    let section = "mc-density";
    let q = require_q(q, &ctx.cfg, section)?;
    let samples = pick_count(samples, &ctx.cfg, section, "samples")?.unwrap_or(1_000_000);
    let seed = pick(seed, &ctx.cfg, section, "seed")?.unwrap_or(42);
    let cutoff = pick(zero_cutoff, &ctx.cfg, section, "zero_cutoff")?.unwrap_or(1000.0);

    let field = Field::from_q(q)?;
    let zeros = load_field_zeros(ctx, &field)?.truncated(cutoff)?;
    let (estimate, std_error) = monte_carlo_density(&zeros, samples, seed)?;

    println!("field             {}", field_name(&field));
    println!("zeros used        {} (ordinates <= {cutoff})", zeros.len());
    println!("samples           {samples}");
    println!("seed              {seed}");
    println!("estimate          {estimate:.6}");
    println!("std error         {std_error:.3e}");

    let mut csv = String::from("q,samples,seed,zero_cutoff,estimate,std_error\n");
    csv.push_str(&format!(
        "{q},{samples},{seed},{cutoff:.6},{estimate:.12},{std_error:.6e}\n"
    ));
    let path = write_artifact(&ctx.out_dir, "mc_density.csv", &csv)?;
    report_written(&path);
    Ok(())
}

fn cmd_dissipation(ctx: &Ctx, q: Vec<u64>) -> CliResult<()> {
    let section = "dissipation";
    let qs = pick_list_u64(q, &ctx.cfg, section, "q")?
        .ok_or_else(|| CliError::Usage("dissipation needs --q q1,q2,... (or config)".into()))?;
    let params = DensityParams::default();

    let mut rows: Vec<DissipationRow> = Vec::new();
    for q in qs {
        let field = match QuadraticField::new(q) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("note: skipping q = {q}: {e}");
                continue;
            }
        };
        let loaded = load_zeta(ctx).and_then(|zeta| {
            let chi = load_chi(ctx, &field)?;
            let merged = merge(&zeta, &chi)?;
            Ok((merged, chi))
        });
        let (merged, chi) = match loaded {
            Ok(pair) => pair,
            Err(CliError::Domain(msg)) => {
                eprintln!("note: skipping q = {q}: {msg}");
                continue;
            }
            Err(e) => return Err(e),
        };
        rows.push(dissipation_row(q, &merged, &chi, &params)?);
    }

    println!(
        "{:>6}  {:>14}  {:>14}  {:>12}  {:>10}",
        "q", "delta", "|delta - 1/2|", "bound", "consistent"
    );
    let mut csv = String::from("q,delta,bound,consistent\n");
    for row in &rows {
        println!(
            "{:>6}  {:>14.9}  {:>14.9}  {:>12.6e}  {:>10}",
            row.q,
            row.delta,
            (row.delta - 0.5).abs(),
            row.bound,
            row.consistent
        );
        csv.push_str(&format!(
            "{},{:.12},{:.6e},{}\n",
            row.q, row.delta, row.bound, row.consistent
        ));
    }
    let path = write_artifact(&ctx.out_dir, "dissipation.csv", &csv)?;
    report_written(&path);
    if rows.iter().any(|r| !r.consistent) {
        return Err(CliError::Domain(
            "dissipation bound fell below |delta - 1/2| for some q (internal inconsistency)".into(),
        ));
    }
    Ok(())
}

fn cmd_reproduce_table1(ctx: &Ctx) -> CliResult<()> {
    let params = DensityParams::default();
    println!(
        "{:>4}  {:>10}  {:>8}  {:>10}  {:>14}  {:>8}",
        "q", "delta", "target", "|diff|", "b1", "status"
    );
    let mut csv = String::from("q,delta,target,abs_diff,b1,within_tolerance\n");
    let mut failures = Vec::new();
    for (q, target) in TABLE1 {
        let field = Field::from_q(q)?;
        let merged = load_field_zeros(ctx, &field)?;
        let result = delta_density(&params, &merged)?;
        let diff = (result.delta - target).abs();
        let ok = diff <= TABLE1_TOL && !result.low_confidence;
        println!(
            "{q:>4}  {:>10.4}  {target:>8.4}  {diff:>10.2e}  {:>14.6e}  {:>8}",
            result.delta,
            result.b1,
            if ok { "ok" } else { "FAIL" }
        );
        csv.push_str(&format!(
            "{q},{:.12},{target:.4},{diff:.6e},{:.9e},{ok}\n",
            result.delta, result.b1
        ));
        if !ok {
            failures.push(format!(
                "q = {q}: delta = {:.6} vs target {target:.4} (confidence {})",
                result.delta,
                if result.low_confidence {
                    "LOW"
                } else {
                    "certified"
                }
            ));
        }
    }
    let path = write_artifact(&ctx.out_dir, "table1.csv", &csv)?;
    report_written(&path);
    if !failures.is_empty() {
        return Err(CliError::Domain(format!(
            "Table 1 mismatch: {}",
            failures.join("; ")
        )));
    }
    Ok(())
}
