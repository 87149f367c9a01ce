//! `mosaic`: list catalog series, verify their supercongruences over prime
//! ranges, and evaluate them numerically.
//!
//! Exit codes: 0 when every check passed, 1 when a congruence (or a digit
//! requirement) failed, 2 on usage, catalog or internal consistency errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mosaic_core::analytic::compare_with_target;
use mosaic_core::catalog::{builtins, load_catalog, merge_catalogs, SeriesSpec};
use mosaic_core::congruence::report::{to_csv, to_json};
use mosaic_core::congruence::{verify_series, VerifyOptions, VerifyPath};
use mosaic_core::numeric::{HpComplex, HpReal};

#[derive(Parser)]
#[command(name = "mosaic", version, about = "Mosaic supercongruence checker for Ramanujan-type series")]
struct Cli {
    /// Extra catalog file merged after the built-in series.
    #[arg(long, global = true, env = "MOSAIC_CATALOG", value_name = "FILE")]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the available series.
    List {
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
    },
    /// Check the congruences of one or all series over a prime range.
    Verify {
        /// Series id, comma-separated ids, or `all`.
        #[arg(long, default_value = "all")]
        series: String,
        /// Smallest prime considered, or `auto` for each series' own threshold.
        #[arg(long, default_value = "auto", value_parser = parse_auto)]
        pmin: Auto,
        #[arg(long, default_value_t = 200)]
        pmax: u64,
        /// Modulus exponent for every check, or `auto` to use each target's own.
        #[arg(long = "mod-power", default_value = "auto", value_parser = parse_auto)]
        mod_power: Auto,
        /// Computation path; defaults to modular with an exact audit every 10th prime.
        #[arg(long, value_enum)]
        path: Option<PathArg>,
        /// Report destination; standard output when absent.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        /// Worker threads for the modular path.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        jobs: Option<u32>,
    },
    /// Sum a series numerically and compare it with its target constant.
    Evaluate {
        #[arg(long)]
        series: String,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        terms: u64,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(10..))]
        digits: u32,
        /// Minimum matched digits for a zero exit status.
        #[arg(long)]
        require: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ListFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Exact,
    Modular,
    Both,
}

#[derive(Clone, Copy, Debug)]
enum Auto {
    Auto,
    Value(u64),
}

fn parse_auto(s: &str) -> Result<Auto, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Auto::Auto);
    }
    match s.parse::<u64>() {
        Ok(v) => Ok(Auto::Value(v)),
        Err(_) => Err(format!("expected a nonnegative integer or `auto`, got `{s}`")),
    }
}

/// A failure mapped to an exit status.
enum Failure {
    /// A congruence or digit requirement did not hold.
    Check,
    /// Bad arguments, unreadable catalog, or an internal inconsistency.
    Usage(String),
}

fn usage(message: impl ToString) -> Failure {
    Failure::Usage(message.to_string())
}

fn load(catalog: Option<&PathBuf>) -> Result<Vec<SeriesSpec>, Failure> {
    let base = builtins();
    let Some(path) = catalog else {
        return Ok(base);
    };
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let extra = load_catalog(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    merge_catalogs(base, extra).map_err(usage)
}

fn select(specs: Vec<SeriesSpec>, series: &str) -> Result<Vec<SeriesSpec>, Failure> {
    if series.eq_ignore_ascii_case("all") {
        return Ok(specs);
    }
    series
        .split(',')
        .map(str::trim)
        .map(|id| {
            specs
                .iter()
                .find(|s| s.id.eq_ignore_ascii_case(id))
                .cloned()
                .ok_or_else(|| usage(format!("unknown series `{id}`")))
        })
        .collect()
}

#[derive(Serialize)]
struct ListRow {
    id: String,
    sequence: String,
    radicands: Vec<i64>,
    p_min: u64,
    target: String,
    arity: usize,
    convergent: bool,
}

fn list_rows(specs: &[SeriesSpec]) -> Vec<ListRow> {
    specs
        .iter()
        .map(|s| ListRow {
            id: s.id.clone(),
            sequence: s.kind.to_string(),
            radicands: s.radicands(),
            p_min: s.p_min,
            target: s.target.to_string(),
            arity: s.poly.len(),
            convergent: s.convergent,
        })
        .collect()
}

fn cmd_list(specs: &[SeriesSpec], format: ListFormat) -> Result<(), Failure> {
    let rows = list_rows(specs);
    match format {
        ListFormat::Json => println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialize")),
        ListFormat::Text => {
            println!("{:<8} {:<36} {:<16} {:>5} {:<7} {:>5} {:<10}", "id", "sequence", "radicands", "p_min", "target", "arity", "convergent");
            for r in rows {
                let radicands = r.radicands.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
                println!(
                    "{:<8} {:<36} {:<16} {:>5} {:<7} {:>5} {:<10}",
                    r.id, r.sequence, radicands, r.p_min, r.target, r.arity, r.convergent
                );
            }
        }
    }
    Ok(())
}

struct VerifyArgs {
    series: String,
    pmin: Auto,
    pmax: u64,
    mod_power: Auto,
    path: Option<PathArg>,
    out: Option<PathBuf>,
    format: ReportFormat,
    jobs: Option<u32>,
}

fn cmd_verify(specs: Vec<SeriesSpec>, args: VerifyArgs) -> Result<(), Failure> {
    let selected = select(specs, &args.series)?;
    let p_lo = match args.pmin {
        Auto::Auto => 2,
        Auto::Value(v) => v,
    };
    if p_lo > args.pmax {
        return Err(usage(format!("--pmin {p_lo} exceeds --pmax {}", args.pmax)));
    }
    let mod_power = match args.mod_power {
        Auto::Auto => None,
        Auto::Value(0) => return Err(usage("--mod-power must be at least 1")),
        Auto::Value(k) => Some(u32::try_from(k).map_err(|_| usage("--mod-power is too large"))?),
    };
    let path = match args.path {
        None => VerifyPath::default(),
        Some(PathArg::Exact) => VerifyPath::Exact,
        Some(PathArg::Modular) => VerifyPath::Modular,
        Some(PathArg::Both) => VerifyPath::Both,
    };
    let opts = VerifyOptions { mod_power, jobs: args.jobs.map(|j| j as usize), ..VerifyOptions::new(p_lo, args.pmax, path) };

    let mut reports = Vec::with_capacity(selected.len());
    for spec in &selected {
        let report = verify_series(spec, &opts).map_err(|e| usage(format!("{}: {e}", spec.id)))?;
        let s = report.summary;
        eprintln!(
            "{}: {} primes, {} checks passed, {} failed, {} inapplicable",
            report.series, s.primes, s.passed, s.failed, s.inapplicable
        );
        reports.push(report);
    }

    let text = match args.format {
        ReportFormat::Json => to_json(&reports),
        ReportFormat::Csv => to_csv(&reports),
    };
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if reports.iter().all(|r| r.all_passed()) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn render(value: &HpComplex, digits: u32) -> String {
    if value.im.is_zero() {
        value.re.to_decimal(digits)
    } else {
        let sign = if value.im.is_negative() { "-" } else { "+" };
        format!("{} {sign} {}i", value.re.to_decimal(digits), value.im.abs().to_decimal(digits))
    }
}

/// Whether `|z| = 1` to 30 digits, where the series converges too slowly for digit checks.
fn on_unit_circle(spec: &SeriesSpec) -> bool {
    let z = spec.z.embed(40);
    let conj = HpComplex { re: z.re.clone(), im: z.im.neg() };
    let norm = z.mul(&conj);
    norm.re.sub(&HpReal::one(norm.frac_bits())).decimal_smallness(30) >= 30
}

fn cmd_evaluate(specs: Vec<SeriesSpec>, series: &str, terms: u64, digits: u32, require: Option<u32>) -> Result<(), Failure> {
    let spec = select(specs, series)?.into_iter().next().ok_or_else(|| usage("no series selected"))?;
    if on_unit_circle(&spec) {
        eprintln!("warning: {} has |z| = 1 and converges very slowly; digit thresholds are not meaningful", spec.id);
    } else if !spec.convergent {
        eprintln!("warning: {} is marked divergent; the partial sums need not approach the target", spec.id);
    }
    let c = compare_with_target(&spec, terms, digits).map_err(|e| usage(format!("{}: {e}", spec.id)))?;
    println!("series: {}", spec.id);
    println!("terms: {terms}");
    println!("digits: {digits}");
    println!("value: {}", render(&c.value, digits));
    println!("target: {} = {}", spec.target, c.target.to_decimal(digits));
    println!("matched_digits: {}", c.matched_digits);
    match require {
        Some(r) if c.matched_digits < r => {
            eprintln!("{}: matched {} digits, {r} required", spec.id, c.matched_digits);
            Err(Failure::Check)
        }
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let specs = load(cli.catalog.as_ref())?;
    match cli.command {
        Command::List { format } => cmd_list(&specs, format),
        Command::Verify { series, pmin, pmax, mod_power, path, out, format, jobs } => {
            cmd_verify(specs, VerifyArgs { series, pmin, pmax, mod_power, path, out, format, jobs })
        }
        Command::Evaluate { series, terms, digits, require } => cmd_evaluate(specs, &series, terms, digits, require),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
