//! Command implementations behind the `kclass` binary. Every command writes
//! its machine-readable result to `out` and human diagnostics to `err`, and
//! returns the process exit code.

pub mod format;

pub use format::{decimal, decimal_vec};

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::abgroup::iso_equal;
use crate::fields::{Field, FieldSpec};
use crate::kdelta::{predicted_quotient, singleton_structure, Label, PrimeIdealDatum};
use crate::reconstruct::{self, build_bundle, InvariantBundle, TieBreak};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INSUFFICIENT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "kclass", version, about = "Class groups and zeta functions from Δ/Δ_F invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the class group and, for quadratic fields, the reduced forms.
    Classgroup(FieldArgs),
    /// Compute Δ/Δ_F entries and write an opaque bundle.
    Invariants(InvariantsArgs),
    /// Reconstruct blind from a bundle file.
    Reconstruct(ReconstructArgs),
    /// Build a bundle, reconstruct blind and compare with the ground truth.
    Roundtrip(RoundtripArgs),
    /// Compare two fields through their reconstructed invariants.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Negative fundamental discriminant.
    #[arg(short = 'D', long = "disc", allow_negative_numbers = true, conflicts_with = "spec")]
    pub disc: Option<i64>,
    /// Synthetic field specification (JSON).
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Comma-separated prime names (p_3, p_3', s_0, …) forming one set F;
    /// repeat for more sets.
    #[arg(long = "set")]
    pub set: Vec<String>,
    /// Use every prime ideal of norm ≤ X.
    #[arg(long)]
    pub primes: Option<u64>,
    /// Tie-break of the greedy pass whose entries are written; reconstruct
    /// with the same choice.
    #[arg(long, default_value = "first", value_parser = parse_tie)]
    pub tie: TieBreak,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Bundle file.
    pub bundle: PathBuf,
    /// Zeta truncation bound (default: largest recovered norm).
    #[arg(long)]
    pub zeta: Option<usize>,
    /// first, last or a numeric seed.
    #[arg(long, default_value = "first", value_parser = parse_tie)]
    pub tie: TieBreak,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub primes: u64,
    /// Zeta truncation bound (default: the prime bound).
    #[arg(long)]
    pub zeta: Option<usize>,
    #[arg(long, default_value = "first", value_parser = parse_tie)]
    pub tie: TieBreak,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(short = 'D', long = "disc", allow_negative_numbers = true, conflicts_with = "spec")]
    pub disc: Option<i64>,
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Second field; `-D2 <d>` is accepted as an alias.
    #[arg(long = "disc2", allow_negative_numbers = true, conflicts_with = "spec2")]
    pub disc2: Option<i64>,
    #[arg(long)]
    pub spec2: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub bound: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn parse_tie(s: &str) -> Result<TieBreak, String> {
    match s {
        "first" => Ok(TieBreak::First),
        "last" => Ok(TieBreak::Last),
        _ => s
            .strip_prefix("seed:")
            .unwrap_or(s)
            .parse()
            .map(TieBreak::Seeded)
            .map_err(|_| format!("expected first, last or a seed, got {s:?}")),
    }
}

/// Rewrites the short form `-D2` to `--disc2`.
pub fn preprocess_args<I: IntoIterator<Item = String>>(args: I) -> Vec<String> {
    args.into_iter()
        .map(|a| match a.as_str() {
            "-D2" => "--disc2".to_string(),
            _ => a,
        })
        .collect()
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I: IntoIterator<Item = String>>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match Cli::try_parse_from(preprocess_args(args)) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            code
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Classgroup(a) => cmd_classgroup(&a, out),
        Command::Invariants(a) => cmd_invariants(&a, out, err),
        Command::Reconstruct(a) => cmd_reconstruct(&a, out, err),
        Command::Roundtrip(a) => cmd_roundtrip(&a, out, err),
        Command::Compare(a) => cmd_compare(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(CliError { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InsufficientGenerators { .. } | Error::MissingEntry(_) => EXIT_INSUFFICIENT,
        Error::InvalidDiscriminant(..)
        | Error::Parse(_)
        | Error::InvalidArgument(_)
        | Error::UnknownLabel(_)
        | Error::NonPrimePowerNorm(_)
        | Error::OddNormClassesDoNotGenerate { .. }
        | Error::InvalidFactors(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

type CmdResult = Result<i32, CliError>;

fn io_err(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::usage(format!("{}: {e}", path.display()))
}

fn load_field(disc: Option<i64>, spec: Option<&PathBuf>) -> Result<Field, CliError> {
    let spec = match (disc, spec) {
        (Some(d), None) => FieldSpec::quadratic(d),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            format::synthetic_spec_from_json(&text)?
        }
        _ => return Err(CliError::usage("give exactly one of -D <disc> or --spec <file>")),
    };
    Ok(spec.realize()?)
}

fn emit(text: &str, output: Option<&PathBuf>, out: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| io_err(path, e)),
        None => writeln!(out, "{text}").map_err(|e| CliError {
            code: EXIT_FAIL,
            message: e.to_string(),
        }),
    }
}

pub fn cmd_classgroup(a: &FieldArgs, out: &mut dyn Write) -> CmdResult {
    let field = load_field(a.disc, a.spec.as_ref())?;
    let group = field.class_group().group().to_string();
    let line = match field.quadratic() {
        Some(q) => {
            let forms: Vec<String> = q.forms().iter().map(ToString::to_string).collect();
            format!("{group}; forms: {}", forms.join(","))
        }
        None => group,
    };
    emit(&line, None, out)?;
    Ok(EXIT_OK)
}

fn check_entries(field: &Field, primes: &[PrimeIdealDatum], b: &InvariantBundle) -> Result<(), Error> {
    let cl = field.class_group();
    for (set, group) in b.snapshot() {
        if set.is_empty() {
            continue;
        }
        let data: Vec<PrimeIdealDatum> = set
            .iter()
            .map(|l| primes.iter().find(|p| p.label == *l).cloned().expect("bundle label"))
            .collect();
        if data.len() == 1 && !iso_equal(&singleton_structure(cl, &data[0])?, &group) {
            return Err(Error::InternalContradiction(format!(
                "singleton {} disagrees with its closed form",
                data[0].name
            )));
        }
        if data.iter().all(PrimeIdealDatum::has_odd_norm) && !iso_equal(&predicted_quotient(cl, &data)?.group()?, &group)
        {
            return Err(Error::InternalContradiction(format!(
                "quotient for {set:?} disagrees with the inductive prediction"
            )));
        }
    }
    Ok(())
}

pub fn cmd_invariants(a: &InvariantsArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let field = load_field(a.field.disc, a.field.spec.as_ref())?;
    if a.set.is_empty() && a.primes.is_none() {
        return Err(CliError::usage("give --set <names> and/or --primes <X>"));
    }
    let universe_bound = match (a.primes, field.quadratic()) {
        (Some(x), _) => x,
        (None, Some(_)) => a
            .set
            .iter()
            .flat_map(|s| s.split(','))
            .map(|n| {
                n.trim()
                    .trim_start_matches("p_")
                    .trim_end_matches('\'')
                    .parse::<u64>()
                    .map(|q| q.saturating_mul(q))
                    .map_err(|_| CliError::usage(format!("bad prime name {n:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .max()
            .unwrap_or(1),
        (None, None) => u64::MAX,
    };
    let mut primes = field.enumerate_prime_ideals(universe_bound)?;
    let mut requested: Vec<Vec<Label>> = Vec::new();
    for set in &a.set {
        let mut subset = Vec::new();
        for name in set.split(',') {
            let p = primes
                .iter()
                .find(|p| p.name == name.trim())
                .ok_or_else(|| CliError::usage(format!("no prime named {name:?} in this field")))?;
            subset.push(p.label);
        }
        requested.push(subset);
    }
    if a.primes.is_none() {
        primes.retain(|p| requested.iter().flatten().any(|&l| l == p.label));
    }
    let bundle = build_bundle(field.class_group(), &primes, &requested)?;
    // evaluate the entries a blind reconstruction will ask for
    if let Err(e) = reconstruct::reconstruct_class_group(&bundle, a.tie) {
        let _ = writeln!(err, "warning: bundle does not determine the class group: {e}");
    }
    check_entries(&field, &primes, &bundle)?;
    emit(&format::bundle_to_json(&bundle), a.output.as_ref(), out)?;
    Ok(EXIT_OK)
}

pub fn cmd_reconstruct(a: &ReconstructArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let text = fs::read_to_string(&a.bundle).map_err(|e| io_err(&a.bundle, e))?;
    let bundle = format::bundle_from_json(&text)?;
    let report = reconstruct::reconstruct(&bundle, a.zeta, a.tie)?;
    let _ = writeln!(
        err,
        "class number {}, class group {}",
        report.class_number, report.class_group
    );
    emit(&format::report_to_json(&report), a.output.as_ref(), out)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

pub fn cmd_roundtrip(a: &RoundtripArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let field = load_field(a.field.disc, a.field.spec.as_ref())?;
    let zeta = a.zeta.unwrap_or(a.primes as usize);
    let report = reconstruct::roundtrip(&field, a.primes, zeta, a.tie)?;
    for v in &report.verdicts {
        let _ = writeln!(err, "{} {}: {}", if v.passed { "PASS" } else { "FAIL" }, v.name, v.message);
    }
    emit(&format::report_to_json(&report), a.output.as_ref(), out)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

pub fn cmd_compare(a: &CompareArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let left = load_field(a.disc, a.spec.as_ref())?;
    let right = load_field(a.disc2, a.spec2.as_ref())?;
    let c = reconstruct::compare_fields(&left, &right, a.bound)?;
    let summary = match &c.discrepancy {
        None => format!("equivalent up to {}", a.bound),
        Some(reconstruct::Discrepancy::Zeta { n, left, right }) => {
            format!("differ at n = {n}: a_{n} = {left} vs {right}")
        }
        Some(reconstruct::Discrepancy::ClassGroup { left, right }) => {
            format!("differ in class group: {left} vs {right}")
        }
    };
    let _ = writeln!(err, "{summary}");
    let file = format::ComparisonFile::from(&c);
    let json = serde_json::to_string_pretty(&file).expect("comparison serializes");
    emit(&json, a.output.as_ref(), out)?;
    Ok(if c.equivalent() { EXIT_OK } else { EXIT_FAIL })
}
