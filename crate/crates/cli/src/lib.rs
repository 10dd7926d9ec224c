//! Command-line front end: algebra files, built-in operator sources and
//! `#?`-prefixed machine-readable reports.

pub mod algebra;
pub mod commands;
pub mod report;
pub mod source;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use jetinv_core::exprcore::ExprError;
use jetinv_core::invcheck::{InvError, Mode};
use jetinv_core::liealg::LieError;
use jetinv_core::rankcalc::{RankError, Sampling, DEFAULT_BOUND, DEFAULT_POINTS, DEFAULT_SEED};

use algebra::AlgebraError;
use commands::{DemoOptions, Options, Outcome};
use source::Source;

/// Exit status of a run that completed and whose checks hold.
pub const EXIT_OK: i32 = 0;
/// A checked claim failed.
pub const EXIT_CLAIM: i32 = 1;
/// Bad arguments or unreadable input.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Algebra { path: String, source: AlgebraError },
    #[error("expression `{text}`: {source}")]
    Expr { text: String, source: ExprError },
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error(transparent)]
    Inv(#[from] InvError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

#[derive(Debug, Parser)]
#[command(name = "jetinv", version, about = "Prolongation ranks and differential invariants of point-symmetry algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SamplingArgs {
    /// Number of random evaluation points.
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Point coordinates are drawn from [-bound, bound].
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: u64,
}

impl SamplingArgs {
    fn sampling(&self) -> Sampling {
        Sampling { points: self.points, seed: self.seed, bound: self.bound }
    }
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// Algebra file, or `eikonal:N` / `classical:N`.
    source: String,
    /// Prolongation order.
    #[arg(long)]
    order: Option<usize>,
    /// Keep family members with k up to this value.
    #[arg(long)]
    truncation: Option<i64>,
    #[command(flatten)]
    sampling: SamplingArgs,
}

impl SourceArgs {
    fn resolve(&self) -> Result<(Source, Options), CliError> {
        let source: Source = self.source.parse()?;
        let opts = Options { order: self.order, truncation: self.truncation, sampling: self.sampling.sampling() };
        Ok((source, opts))
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Absolute,
    Relative,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generic rank of the prolonged operators and the invariant count.
    Rank(SourceArgs),
    /// Greedy generating set reaching the full rank.
    Genset {
        #[command(flatten)]
        args: SourceArgs,
        /// Also compare the rank of all operators with this source, taken at its
        /// default truncation.
        #[arg(long, value_name = "SOURCE")]
        verify_against: Option<String>,
    },
    /// Classify an expression as absolute, relative or not invariant.
    Check {
        #[command(flatten)]
        args: SourceArgs,
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value = "relative")]
        mode: ModeArg,
    },
    /// Rank of every truncation K = 0..Kmax.
    Scan {
        #[command(flatten)]
        args: SourceArgs,
        #[arg(long = "Kmax", alias = "kmax", default_value_t = 5)]
        k_max: u32,
    },
    /// End-to-end run on the truncated eikonal family.
    #[command(name = "eikonal-demo", alias = "demo")]
    Demo {
        /// Number of space variables.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long = "K", alias = "k", default_value_t = 3)]
        k_max: u32,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
}

/// What a finished invocation writes and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn dispatch(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Rank(a) => {
            let (s, o) = a.resolve()?;
            commands::cmd_rank(&s, &o)
        }
        Command::Genset { args, verify_against } => {
            let (s, o) = args.resolve()?;
            let reference = verify_against.map(|r| r.parse::<Source>()).transpose()?;
            commands::cmd_genset(&s, &o, reference.as_ref())
        }
        Command::Check { args, expr, mode } => {
            let (s, o) = args.resolve()?;
            let mode = match mode {
                ModeArg::Absolute => Mode::Absolute,
                ModeArg::Relative => Mode::Relative,
            };
            commands::cmd_check(&s, &o, &expr, mode)
        }
        Command::Scan { args, k_max } => {
            let (s, o) = args.resolve()?;
            commands::cmd_scan(&s, &o, k_max)
        }
        Command::Demo { n, k_max, order, sampling } => {
            commands::cmd_demo(&DemoOptions { n, k_max, order, sampling: sampling.sampling() })
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                RunOutput { stdout: String::new(), stderr: text, code }
            } else {
                RunOutput { stdout: text, stderr: String::new(), code }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(out) => RunOutput {
            stdout: out.report.to_string(),
            stderr: String::new(),
            code: if out.ok { EXIT_OK } else { EXIT_CLAIM },
        },
        Err(e) => RunOutput { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_USAGE },
    }
}
