//! Command-line front end for `submat`: matrix files, certification checks,
//! identity sweeps, falsification searches, random-walk simulations and
//! instance generation.
//!
//! [`run`] is the whole program minus process exit, so tests can drive it
//! in-process.

pub mod commands;
pub mod error;
pub mod format;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use submat::scalar::parse_rational;
use submat::Rational;

pub use error::{exit, CliError};
pub use format::{Format, MatrixFile};
pub use report::RunReport;

#[derive(Debug, Parser)]
#[command(
    name = "submat",
    version,
    about = "Substochastic matrix identities: checks, sweeps and simulations"
)]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Record wall time in the report (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify a matrix as substochastic with spectral radius below one.
    Check(CheckArgs),
    /// Evaluate identities on a matrix file.
    Verify(VerifyArgs),
    /// Search seeded random instances for counterexamples.
    Falsify(FalsifyArgs),
    /// Estimate (I - P)^-1 by random walks and compare with the exact value.
    Simulate(SimulateArgs),
    /// Write a seeded random instance as a JSON matrix file.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdentityChoice {
    Thm1,
    Thm2,
    Eq13,
    Eq17,
    Eq20,
    Eq21,
    Lemma1,
    Lemma2,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Substochastic if the input certifies as one, general otherwise.
    Auto,
    /// Treat the input as P; general identities run on B = I - P.
    Substochastic,
    /// Treat the input as B itself.
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Substochastic,
    General,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Matrix file (.json exact or .csv float).
    pub path: PathBuf,
    /// Override format detection.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Seed for the power-iteration start vector.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "all")]
    pub identity: IdentityChoice,
    #[arg(long, value_enum, default_value = "exact")]
    pub backend: Backend,
    /// Relative tolerance for the float backend.
    #[arg(long, default_value_t = submat::Tolerance::DEFAULT_REL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: Mode,
    /// Certify every principal minor rather than only the ones divided by.
    #[arg(long)]
    pub strict: bool,
    /// Restrict to index m (1-based).
    #[arg(long)]
    pub m: Option<usize>,
    /// Restrict to index l (1-based).
    #[arg(long)]
    pub l: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    /// Probability that an entry is nonzero, as a rational or decimal.
    #[arg(long, value_parser = rational_arg, default_value = "1")]
    pub density: Rational,
    /// Upper bound on row sums of substochastic instances.
    #[arg(long, value_parser = rational_arg, default_value = "1")]
    pub max_row_sum: Rational,
    /// Entries are k/D with D this bound.
    #[arg(long, default_value_t = 12)]
    pub denominator_bound: u64,
}

#[derive(Debug, Args)]
pub struct FalsifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub identity: IdentityChoice,
    /// Order, or an inclusive range A..B.
    #[arg(long, value_parser = range_arg, default_value = "2..8")]
    pub n: (usize, usize),
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "exact")]
    pub backend: Backend,
    #[arg(long, default_value_t = submat::Tolerance::DEFAULT_REL)]
    pub tol: f64,
    #[command(flatten)]
    pub spec: SpecArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    /// Flag entries farther than this many half-widths from the exact value.
    #[arg(long, default_value_t = 4.0)]
    pub sigma: f64,
    #[arg(long, value_enum, default_value = "exact")]
    pub backend: Backend,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value = "substochastic")]
    pub kind: Kind,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational number: {s:?}"))
}

fn range_arg(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let n = parse(s)?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

/// Parses `args` (without the program name), runs the command, writes the
/// report to `out` and diagnostics to `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(
        std::iter::once(OsString::from("submat")).chain(args.iter().cloned()),
    ) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::PASS
            };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let echo = std::iter::once("submat".to_string())
        .chain(args.iter().map(|a| a.to_string_lossy().into_owned()))
        .collect::<Vec<_>>()
        .join(" ");
    let started = std::time::Instant::now();
    match commands::dispatch(&cli, echo) {
        Ok((mut report, code)) => {
            if cli.timing {
                report.wall_time_ms = Some(started.elapsed().as_secs_f64() * 1e3);
            }
            let text = match &cli.command {
                // the generated file itself goes to stdout
                Command::Gen(g) if g.out.is_none() && !cli.json => {
                    report.output.clone().unwrap_or_default()
                }
                _ if cli.json => report.to_json(),
                _ => report.to_text(),
            };
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(range_arg("2..8"), Ok((2, 8)));
        assert_eq!(range_arg("2..=8"), Ok((2, 8)));
        assert_eq!(range_arg("5"), Ok((5, 5)));
        assert!(range_arg("8..2").is_err());
        assert!(range_arg("x").is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
