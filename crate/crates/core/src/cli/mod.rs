//! Command-line entry point.
//!
//! [`run`] parses arguments and returns the rendered output together with the
//! exit status: 0 on success, 1 on domain errors, 2 on usage errors.

mod commands;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};

pub use output::{Format, Metadata, Report, Table};

use crate::numeric::Rational;

/// The only interval precision this build provides.
pub const PRECISION_BITS: u32 = 53;

#[derive(Debug, Parser)]
#[command(name = "effdim", version, about = "Gauges, dilution trees, premeasures and Diophantine witnesses")]
pub struct Cli {
    /// Seed for every pseudorandom bit the run uses.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Working bits for interval arithmetic.
    #[arg(
        long,
        global = true,
        env = "EFFDIM_PRECISION",
        default_value_t = PRECISION_BITS,
        value_parser = clap::value_parser!(u32).range(53..=53)
    )]
    pub precision: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gauge profiles: construction, evaluation and domination checks.
    #[command(subcommand)]
    Gauge(GaugeCmd),
    /// Dimension-controlling trees: schedules and dilution.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Finite-depth premeasures of cylinder unions.
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Compression-based dimension estimates and codelength bounds.
    #[command(subcommand)]
    Dim(DimCmd),
    /// Continued fractions, witnesses and series tests.
    #[command(subcommand)]
    Dioph(DiophCmd),
    /// Builds the separating gauge for `s` and checks both sides of the separation.
    Separate {
        #[arg(long)]
        s: Rational,
        #[arg(long)]
        blocks: usize,
        /// Shorthand for `--format json`.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Condition {
    /// Every slope lies in [0, 1].
    Monotone,
    /// Not eventually dominated by `x^r` for any `r > s`.
    Undominated,
    /// Eventually dominated by `x^r` for every `r < s`.
    Dless,
}

#[derive(Debug, Subcommand)]
pub enum GaugeCmd {
    /// Emits the separating gauge file for `s`.
    BuildSeparating {
        #[arg(long)]
        s: Rational,
        #[arg(long)]
        blocks: usize,
        /// Write the gauge file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum)]
        condition: Condition,
        /// Reference exponent; defaults to the gauge's limit exponent.
        #[arg(long)]
        s: Option<Rational>,
    },
    /// Prints `E(n)` where `f(2^-n) = 2^-E(n)`.
    Eval {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        depth: u64,
    },
    /// Least depth `n ≥ start` with `E(n) < r·n`.
    Witness {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        r: Rational,
        #[arg(long, default_value_t = 0)]
        start: u64,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum TreeCmd {
    /// Builds the minimal schedule; human output is the schedule file itself.
    Build {
        #[arg(long)]
        s: Rational,
        /// Gauge file; defaults to `x^s`.
        #[arg(long)]
        gauge: Option<PathBuf>,
        #[arg(long)]
        blocks: usize,
        /// Explicit comma-separated `r_0, r_1, …`, one more than `blocks`.
        #[arg(long, value_delimiter = ',')]
        r: Option<Vec<Rational>>,
        /// Deepest block end the search may reach.
        #[arg(long, default_value_t = 1 << 40)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Dilute {
        #[arg(long)]
        schedule: PathBuf,
        /// File holding a bit string.
        #[arg(long)]
        bits: PathBuf,
        /// Undilute instead.
        #[arg(long)]
        inverse: bool,
    },
    Member {
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        word: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum MeasureCmd {
    Premeasure {
        /// One bit word per line.
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        gauge: PathBuf,
        #[arg(long)]
        min_depth: u64,
        /// Write the optimal cover's words here, one per line.
        #[arg(long)]
        emit_cover: Option<PathBuf>,
    },
    Pushforward {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        gauge: PathBuf,
        #[arg(long)]
        block: usize,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct StreamSource {
    /// File holding a bit string.
    #[arg(long)]
    pub bits: Option<PathBuf>,
    /// Use this many seeded pseudorandom bits instead.
    #[arg(long)]
    pub random: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum DimCmd {
    Estimate {
        #[command(flatten)]
        source: StreamSource,
        /// Dilute the stream through this schedule first.
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        depths: Option<Vec<usize>>,
        #[arg(long)]
        window: Option<usize>,
    },
    Bound {
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        block: usize,
        #[arg(long = "const", default_value = "0")]
        constant: Rational,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct CfSourceArgs {
    #[arg(long)]
    pub rational: Option<Rational>,
    /// File holding binary digits of a real in [0, 1].
    #[arg(long)]
    pub digits: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DiophCmd {
    Cf {
        #[command(flatten)]
        source: CfSourceArgs,
        #[arg(long, default_value_t = 64)]
        max_terms: usize,
    },
    /// Decides `|x − p/q| < q^-s`.
    Witness {
        /// File holding `x` as a rational `a/b`, or as binary digits of a real in [0, 1].
        #[arg(long)]
        x: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        p: BigInt,
        #[arg(long)]
        q: BigUint,
        #[arg(long)]
        s: Rational,
    },
    /// Depth-`k` prefixes compatible with the witness `p/q` at exponent `2/s`.
    Reveal {
        #[arg(long)]
        p: BigUint,
        #[arg(long)]
        q: BigUint,
        #[arg(long)]
        s: Rational,
        #[arg(long)]
        k: u64,
    },
    /// Binary digits of a lacunary sum `Σ 2^-g(k)`.
    Liouville {
        /// `factorial` or a comma-separated increasing gap list.
        #[arg(long, default_value = "factorial")]
        gaps: String,
        #[arg(long)]
        n: usize,
    },
    /// Series test for `Σ q·f(q^-s)`.
    Jarnik {
        #[arg(long)]
        gauge: PathBuf,
        #[arg(long)]
        s: Rational,
    },
}

/// A parsed invocation.
#[derive(Debug)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub precision: u32,
    pub format: Format,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let format = match &cli.command {
            Command::Separate { json: true, .. } => Format::Json,
            _ => cli.format,
        };
        RunConfig { command: cli.command, seed: cli.seed, precision: cli.precision, format }
    }
}

/// Rendered output and exit status of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Routes a parsed invocation to its module operation.
pub fn dispatch(config: &RunConfig) -> Outcome {
    let meta = Metadata {
        command: commands::name(&config.command),
        seed: config.seed,
        precision: config.precision,
    };
    match commands::execute(config) {
        Ok(report) => Outcome { code: 0, stdout: output::render(&report, &meta, config.format), stderr: String::new() },
        Err(e) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

/// Parses `args` (including the program name) and dispatches.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(&cli.into()),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            }
        }
    }
}
