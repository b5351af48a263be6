//! Command-line front end: argument handling, input files, parameter scans
//! and deterministic reports.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nashcone_core::criterion::certify;
use nashcone_core::family::{classify, parameter_box, FamilyClassification, FamilyParams};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

pub mod report;
pub mod resolution_file;
pub mod selftest;

use report::{render_human, render_verdicts, to_json_string, Overall, Report, Verdicts};
use resolution_file::{parse_resolution_file, InputError, ResolutionFile};

pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) | AppError::Input(_) => EXIT_USAGE,
            AppError::Inconsistent(_) => EXIT_INTERNAL,
        }
    }

    pub fn from_core(e: nashcone_core::Error) -> Self {
        match e {
            nashcone_core::Error::Inconsistent(m) => AppError::Inconsistent(m),
            other => AppError::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "nashcone", version, about = "Certify essential divisors and Nash-map bijectivity by exact ampleness checks")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one member (g, d1, d2, x1, x2) of the two-component family.
    Classify(ClassifyArgs),
    /// Classify every tuple (d1, d2, x1, x2) in a box.
    Scan(ScanArgs),
    /// Certify arbitrary resolution data read from a JSON file.
    CheckResolution(CheckArgs),
    /// Print the toric model of the genus-0 member.
    ToricFan(FanArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct FanArgs {
    #[arg(long)]
    pub d1: u64,
    #[arg(long)]
    pub d2: u64,
    #[arg(long)]
    pub x1: u64,
    #[arg(long)]
    pub x2: u64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ClassifyArgs {
    /// Genus of the base curve C.
    #[arg(long)]
    pub genus: u64,
    #[command(flatten)]
    pub params: FanArgs,
    /// Cross-check every certificate search by brute force (bound from NASHCONE_BRUTE_BOUND).
    #[arg(long)]
    pub self_test: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 0)]
    pub genus: u64,
    /// `LO..HI` for all four parameters, or four comma-separated ranges for d1, d2, x1, x2.
    #[arg(long)]
    pub range: String,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub self_test: bool,
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String, code: i32) -> Self {
        Self { stdout, stderr: String::new(), code }
    }

    fn error(e: &AppError) -> Self {
        Self { stdout: String::new(), stderr: format!("nashcone: {e}\n"), code: e.exit_code() }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Classify(a) => run_classify(a).map(|r| emit_report(&r, cli.format)),
        Command::CheckResolution(a) => run_check_resolution(a).map(|r| emit_report(&r, cli.format)),
        Command::Scan(a) => run_scan(a).map(|s| emit_scan(&s, cli.format)),
        Command::ToricFan(a) => run_toric_fan(a, cli.format),
    };
    result.unwrap_or_else(|e| Outcome::error(&e))
}

fn emit_report(r: &Report, format: Format) -> Outcome {
    let text = match format {
        Format::Human => render_human(r),
        Format::Json => to_json_string(r),
    };
    let failed_self_test = r.self_test.as_ref().is_some_and(|s| !s.passed);
    let code = if failed_self_test { EXIT_INTERNAL } else { r.exit_code() };
    Outcome::ok(text, code)
}

pub fn family_params(genus: u64, a: &FanArgs) -> Result<FamilyParams, AppError> {
    FamilyParams::new(genus, a.d1, a.d2, a.x1, a.x2).map_err(|e| AppError::Usage(e.to_string()))
}

fn classified(p: &FamilyParams) -> Result<FamilyClassification, AppError> {
    classify(p).map_err(AppError::from_core)
}

pub fn run_classify(a: &ClassifyArgs) -> Result<Report, AppError> {
    let p = family_params(a.genus, &a.params)?;
    let c = classified(&p)?;
    let verdicts = report::verdicts(&c.data, &c.certification)?;
    let toric = if c.contractible { Some(report::toric_section(&p)?) } else { None };
    let self_test = if a.self_test { Some(selftest::run(&c.data, selftest::bound_from_env()?)?) } else { None };
    Ok(Report {
        command: "classify",
        input: json!({"genus": p.genus, "d1": p.d1, "d2": p.d2, "x1": p.x1, "x2": p.x2}),
        verdicts,
        toric,
        self_test,
    })
}

pub fn check_resolution_text(text: &str, self_test: bool) -> Result<Report, AppError> {
    let data = parse_resolution_file(text)?;
    let certification = certify(&data).map_err(AppError::from_core)?;
    let verdicts = report::verdicts(&data, &certification)?;
    let self_test = if self_test { Some(selftest::run(&data, selftest::bound_from_env()?)?) } else { None };
    Ok(Report {
        command: "check-resolution",
        input: serde_json::to_value(ResolutionFile::from_data(&data)).expect("serializable"),
        verdicts,
        toric: None,
        self_test,
    })
}

pub fn run_check_resolution(a: &CheckArgs) -> Result<Report, AppError> {
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| AppError::Usage(format!("cannot read {}: {e}", a.input.display())))?;
    check_resolution_text(&text, a.self_test)
}

/// Inclusive `(lo, hi)` bounds for d1, d2, x1, x2.
pub fn parse_ranges(text: &str) -> Result<[(u64, u64); 4], AppError> {
    let one = |s: &str| -> Result<(u64, u64), AppError> {
        let bad = || AppError::Usage(format!("range {s:?} is not of the form LO..HI"));
        let (lo, hi) = s.trim().split_once("..").ok_or_else(bad)?;
        let (lo, hi) = (lo.trim().parse::<u64>().map_err(|_| bad())?, hi.trim().parse::<u64>().map_err(|_| bad())?);
        if lo > hi {
            return Err(AppError::Usage(format!("range {s:?} is empty")));
        }
        if lo == 0 {
            return Err(AppError::Usage(format!(
                "range {s:?} includes 0; degrees and twists must be positive"
            )));
        }
        Ok((lo, hi))
    };
    let parts: Vec<&str> = text.split(',').collect();
    match parts.len() {
        1 => Ok([one(parts[0])?; 4]),
        4 => Ok([one(parts[0])?, one(parts[1])?, one(parts[2])?, one(parts[3])?]),
        n => Err(AppError::Usage(format!("--range takes 1 or 4 comma-separated ranges, got {n}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanLine {
    pub d1: u64,
    pub d2: u64,
    pub x1: u64,
    pub x2: u64,
    pub contractible: bool,
    pub components: [&'static str; 2],
    pub nash_bijective: &'static str,
    pub verdict: Overall,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ScanCounts {
    pub certified_bijective: usize,
    pub undetermined: usize,
    pub not_contractible: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub genus: u64,
    pub ranges: [(u64, u64); 4],
    pub results: Vec<ScanLine>,
    pub counts: ScanCounts,
}

pub fn run_scan(a: &ScanArgs) -> Result<ScanReport, AppError> {
    let ranges = parse_ranges(&a.range)?;
    let grid = parameter_box(a.genus, ranges);
    let mut results = grid
        .par_iter()
        .map(|p| {
            let c = classified(p)?;
            Ok(ScanLine {
                d1: p.d1,
                d2: p.d2,
                x1: p.x1,
                x2: p.x2,
                contractible: c.contractible,
                components: c.components.map(|v| v.as_str()),
                nash_bijective: c.nash.as_str(),
                verdict: Overall::of(&c.certification),
            })
        })
        .collect::<Result<Vec<_>, AppError>>()?;
    results.sort_by_key(|l| (l.d1, l.d2, l.x1, l.x2));
    let mut counts = ScanCounts::default();
    for l in &results {
        match l.verdict {
            Overall::CertifiedBijective => counts.certified_bijective += 1,
            Overall::Undetermined => counts.undetermined += 1,
            Overall::NotContractible => counts.not_contractible += 1,
        }
    }
    Ok(ScanReport { genus: a.genus, ranges, results, counts })
}

fn emit_scan(s: &ScanReport, format: Format) -> Outcome {
    let text = match format {
        Format::Json => to_json_string(s),
        Format::Human => {
            use std::fmt::Write as _;
            let mut out = String::new();
            let _ = writeln!(out, "{:>4}{:>4}{:>4}{:>4}  {:<14}{:<14}{:<14}verdict", "d1", "d2", "x1", "x2", "contractible", "S1", "S2");
            for l in &s.results {
                let _ = writeln!(
                    out,
                    "{:>4}{:>4}{:>4}{:>4}  {:<14}{:<14}{:<14}{}",
                    l.d1,
                    l.d2,
                    l.x1,
                    l.x2,
                    if l.contractible { "yes" } else { "no" },
                    l.components[0],
                    l.components[1],
                    l.verdict.label()
                );
            }
            let c = &s.counts;
            let _ = writeln!(
                out,
                "total {}  certified-bijective {}  undetermined {}  not-contractible {}",
                s.results.len(),
                c.certified_bijective,
                c.undetermined,
                c.not_contractible
            );
            out
        }
    };
    Outcome::ok(text, 0)
}

pub fn run_toric_fan(a: &FanArgs, format: Format) -> Result<Outcome, AppError> {
    let p = family_params(0, a)?;
    let fan = report::fan_section(&p)?;
    let code = if fan.intersections_verified { 0 } else { EXIT_INTERNAL };
    let text = match format {
        Format::Json => to_json_string(&json!({"params": {"d1": p.d1, "d2": p.d2, "x1": p.x1, "x2": p.x2}, "fan": fan})),
        Format::Human => {
            let mut out = format!("nashcone toric-fan  d1={} d2={} x1={} x2={}\n", p.d1, p.d2, p.x1, p.x2);
            report::render_fan(&mut out, &fan);
            out
        }
    };
    Ok(Outcome::ok(text, code))
}

/// The verdict section alone, as emitted in JSON reports.
pub fn verdict_json(v: &Verdicts) -> String {
    to_json_string(v)
}

/// The verdict section alone, as emitted in human reports.
pub fn verdict_human(v: &Verdicts) -> String {
    let mut out = String::new();
    render_verdicts(&mut out, v);
    out
}
