//! Command-line front end: `superplane <command> [flags]`.

mod parse;

use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

pub use parse::{parse_expression, parse_scalar, Expr, ExprKind, ParseError, Span};

use crate::algebra::{self, AlgebraKind, Family, Letter, Relations};
use crate::calculus;
use crate::coeffs::{Bindings, Param};
use crate::forms;
use crate::hopf::{self, AntipodeConvention, CoStructure};
use crate::report::{CheckRecord, Report};
use crate::rmatrix;

#[derive(Parser, Debug)]
#[command(name = "superplane", version, about = "Exact computations on the quantum superplane and its differential calculi")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Calculus family; verification and derivation run both when omitted.
    #[arg(long, global = true)]
    pub family: Option<Family>,
    /// Parameter substitution `k=v` with k one of q, p, r, s.
    #[arg(long = "set", global = true, value_name = "K=V")]
    pub set: Vec<String>,
    /// Number of random elements per property check.
    #[arg(long, global = true, default_value_t = 200)]
    pub fuel: usize,
    /// Seed for the random test elements.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Antipode convention.
    #[arg(long, global = true, value_enum, default_value_t = ConventionArg::Graded)]
    pub convention: ConventionArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ConventionArg {
    Graded,
    Ungraded,
}

impl From<ConventionArg> for AntipodeConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Graded => AntipodeConvention::Graded,
            ConventionArg::Ungraded => AntipodeConvention::Ungraded,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normal form of an expression.
    Normalize(ExprArg),
    /// Exterior derivative of an expression.
    Diff(ExprArg),
    /// Coproduct of an expression.
    Coproduct(ExprArg),
    /// Antipode of an expression.
    Antipode(ExprArg),
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Solve the consistency system for the calculus coefficients.
    Solve {
        #[arg(value_enum)]
        system: System,
    },
    /// Derive relations from the calculus.
    Derive {
        #[arg(value_enum)]
        what: Derivation,
    },
}

#[derive(Args, Debug)]
pub struct ExprArg {
    #[arg(long)]
    pub expr: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Consistency,
    Calculus,
    Hopf,
    Omega,
    Braid,
    All,
}

impl Suite {
    const EACH: [Suite; 5] = [Suite::Consistency, Suite::Calculus, Suite::Hopf, Suite::Omega, Suite::Braid];

    fn name(self) -> &'static str {
        match self {
            Suite::Consistency => "consistency",
            Suite::Calculus => "calculus",
            Suite::Hopf => "hopf",
            Suite::Omega => "omega",
            Suite::Braid => "braid",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum System {
    Consistency,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Derivation {
    Twoforms,
    Forms,
}

/// Failure before any report exists: bad flags or a bad expression.
#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error("--set {0}: expected k=v with k one of q, p, r, s")]
    Binding(String),
    #[error("--set {0}: {1}")]
    BindingValue(String, ParseError),
    #[error("--expr: {0}")]
    Expression(ParseError),
    #[error("{0}")]
    Algebra(#[from] algebra::AlgebraError),
}

pub fn parse_bindings(items: &[String]) -> Result<Bindings, UsageError> {
    let mut out = Bindings::new();
    for item in items {
        let (k, v) = item.split_once('=').ok_or_else(|| UsageError::Binding(item.clone()))?;
        let param = Param::ALL
            .into_iter()
            .find(|p| p.name() == k.trim())
            .ok_or_else(|| UsageError::Binding(item.clone()))?;
        let value = parse_scalar(v).map_err(|e| UsageError::BindingValue(item.clone(), e))?;
        out.insert(param, value);
    }
    Ok(out)
}

fn uses_forms(e: &Expr) -> bool {
    e.letters().iter().any(|l| matches!(l, Letter::W | Letter::U))
}

fn suite_records(
    suite: Suite,
    family: Family,
    bindings: &Bindings,
    opts: &Options,
) -> Result<Vec<CheckRecord>, String> {
    let (fuel, seed) = (opts.fuel, opts.seed);
    let err = |e: &dyn std::fmt::Display| e.to_string();
    match suite {
        Suite::Consistency => algebra::verify_consistency(family, bindings, fuel, seed).map_err(|e| err(&e)),
        Suite::Calculus => calculus::verify_calculus(family, bindings, fuel, seed).map_err(|e| err(&e)),
        Suite::Hopf => {
            hopf::verify_axioms(family, bindings, fuel, seed, opts.convention.into()).map_err(|e| err(&e))
        }
        Suite::Omega => {
            forms::verify_omega(family, bindings, fuel, seed, opts.convention.into()).map_err(|e| err(&e))
        }
        Suite::Braid => rmatrix::verify_braid(family, bindings).map_err(|e| err(&e)),
        Suite::All => {
            let parts: Vec<_> = Suite::EACH
                .par_iter()
                .map(|&s| {
                    suite_records(s, family, bindings, opts).map(|records| {
                        records
                            .into_iter()
                            .map(|mut r| {
                                r.name = format!("{}: {}", s.name(), r.name);
                                r
                            })
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            let mut out = Vec::new();
            for p in parts {
                out.extend(p?);
            }
            Ok(out)
        }
    }
}

fn error_record(message: String) -> CheckRecord {
    CheckRecord::fail("error", "", message)
}

/// Runs over the requested family, or over both (with names prefixed by the
/// family) when none was given.
fn per_family(
    opts: &Options,
    mut f: impl FnMut(Family) -> Result<Vec<CheckRecord>, String>,
) -> Vec<CheckRecord> {
    let families: Vec<Family> = opts.family.map_or(Family::ALL.to_vec(), |f| vec![f]);
    let prefix = opts.family.is_none();
    let mut out = Vec::new();
    for family in families {
        let records = f(family).unwrap_or_else(|e| vec![error_record(e)]);
        out.extend(records.into_iter().map(|mut r| {
            if prefix {
                r.name = format!("Family {family}: {}", r.name);
            }
            r
        }));
    }
    out
}

/// Runs one command and returns its report; usage errors come back as `Err`.
pub fn execute(cli: &Cli) -> Result<Report, UsageError> {
    let opts = &cli.opts;
    let bindings = parse_bindings(&opts.set)?;
    let family_name = opts.family.map(|f| f.to_string());
    match &cli.command {
        Command::Normalize(a) | Command::Diff(a) | Command::Coproduct(a) | Command::Antipode(a) => {
            let expr = parse_expression(&a.expr).map_err(UsageError::Expression)?;
            let family = opts.family.unwrap_or(Family::I);
            let name = match &cli.command {
                Command::Normalize(_) => "normalize",
                Command::Diff(_) => "diff",
                Command::Coproduct(_) => "coproduct",
                _ => "antipode",
            };
            let mut report = Report::new(name, Some(family.to_string()), &bindings, None);
            let result = compute(&cli.command, &expr, family, &bindings, opts.convention.into());
            report.checks.push(match result {
                Ok(text) => CheckRecord::info("result", "", text),
                Err(e) => error_record(e),
            });
            Ok(report)
        }
        Command::Verify { suite } => {
            let mut report = Report::new(format!("verify {}", suite.name()), family_name, &bindings, Some(opts.seed));
            report.checks = per_family(opts, |f| suite_records(*suite, f, &bindings, opts));
            Ok(report)
        }
        Command::Solve { system: System::Consistency } => {
            let mut report = Report::new("solve consistency", None, &bindings, None);
            report.checks = rmatrix::solve_records();
            Ok(report)
        }
        Command::Derive { what } => {
            let (name, records): (&str, Vec<CheckRecord>) = match what {
                Derivation::Twoforms => (
                    "derive twoforms",
                    per_family(opts, |f| calculus::two_form_records(f, &bindings).map_err(|e| e.to_string())),
                ),
                Derivation::Forms => (
                    "derive forms",
                    per_family(opts, |f| forms::derive_forms_records(f, &bindings).map_err(|e| e.to_string())),
                ),
            };
            let mut report = Report::new(name, family_name, &bindings, None);
            report.checks = records;
            Ok(report)
        }
    }
}

fn compute(
    command: &Command,
    expr: &Expr,
    family: Family,
    bindings: &Bindings,
    convention: AntipodeConvention,
) -> Result<String, String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    let rels: Arc<Relations> = if uses_forms(expr) {
        if matches!(command, Command::Diff(_)) {
            return Err("d is not defined on the forms w, u".into());
        }
        forms::omega_relations(family, bindings).map_err(|e| err(&e))?
    } else {
        Relations::differential(family, bindings).map_err(|e| err(&e))?
    };
    let element = expr.to_element(&rels).map_err(|e| err(&e))?.normalize();
    let costructure = || -> Result<CoStructure, String> {
        match rels.kind() {
            AlgebraKind::Differential => CoStructure::differential(&rels, convention),
            AlgebraKind::Forms => CoStructure::forms(&rels, convention),
        }
        .map_err(|e| err(&e))
    };
    Ok(match command {
        Command::Normalize(_) => element.to_string(),
        Command::Diff(_) => calculus::differentiate(&element).map_err(|e| err(&e))?.to_string(),
        Command::Coproduct(_) => costructure()?.coproduct(&element).to_string(),
        Command::Antipode(_) => costructure()?.antipode(&element).to_string(),
        _ => unreachable!("not a computation command"),
    })
}

/// Writes the report and returns the process exit code.
pub fn emit(report: &Report, json: bool, out: &mut impl Write) -> std::io::Result<i32> {
    let computation = report.seed.is_none()
        && report.checks.len() == 1
        && report.checks[0].name == "result"
        && !json;
    if computation {
        writeln!(out, "{}", report.checks[0].witness.as_deref().unwrap_or_default())?;
    } else if json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        write!(out, "{report}")?;
    }
    Ok(if report.failed() { 1 } else { 0 })
}

/// Entry point of the binary; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    emit(&report, cli.opts.json, &mut lock).unwrap_or(1)
}

#[cfg(test)]
mod tests;
