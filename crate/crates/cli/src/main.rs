mod commands;
mod instance;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact point-curve incidence experiments.
#[derive(Parser, Debug)]
#[command(name = "inclab", version)]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Leave run metadata (timings, timestamps) out of reports.
    #[arg(long, global = true)]
    pub no_meta: bool,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Count incidences.
    Count { input: PathBuf },
    /// List points on at least `t` curves.
    Rich {
        input: PathBuf,
        #[arg(long)]
        t: u32,
    },
    /// Largest number of curves sharing a plane or sphere.
    Q { input: PathBuf },
    /// Evaluate bound formulas.
    Bounds(BoundsArgs),
    /// Count incidences by hyperplane partitioning.
    Partition(PartitionArgs),
    /// Count triangles similar to a reference shape.
    Triangles(TriangleArgs),
    /// Fit a log-log slope to two CSV columns.
    Fit(FitArgs),
    /// Run a family of instances and calibrate bounds against it.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    StGrid,
    InversionCircles,
    Packing,
    RandomCircles,
    RandomLines,
    RandomPoints,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    pub kind: Kind,
    #[arg(long, default_value_t = 2)]
    pub a: u32,
    #[arg(long, default_value_t = 2)]
    pub b: u32,
    #[arg(long, default_value_t = 1)]
    pub copies: u32,
    /// Stack line grids rather than circles in a packing.
    #[arg(long)]
    pub lines: bool,
    #[arg(long, default_value_t = 10)]
    pub n: u32,
    #[arg(long, default_value_t = 20)]
    pub m: u32,
    #[arg(long, default_value_t = 10)]
    pub range: u32,
    #[arg(long, default_value_t = 1)]
    pub denom: u32,
    /// Overridden by INCLAB_SEED when set.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Take m, n and q from this instance and report the observed count.
    pub input: Option<PathBuf>,
    /// Formula names; all of them when omitted.
    #[arg(long = "formula")]
    pub formulas: Vec<String>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub t: Option<u64>,
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    #[arg(long, default_value_t = 3)]
    pub s: u32,
    /// Leading constant.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Print the exponents of every formula instead.
    #[arg(long)]
    pub self_test: bool,
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub rounds: Option<u32>,
    #[arg(long)]
    pub degree: Option<u64>,
    /// Degrees of freedom used to pick the degree.
    #[arg(long)]
    pub k: Option<u32>,
    /// Also run the brute-force count and compare.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug)]
pub struct TriangleArgs {
    pub input: PathBuf,
    /// |ac|²/|ab|² as a rational.
    #[arg(long)]
    pub k1sq: String,
    /// |bc|²/|ab|² as a rational.
    #[arg(long)]
    pub k2sq: String,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    pub input: PathBuf,
    #[arg(long, default_value = "x")]
    pub x: String,
    #[arg(long, default_value = "y")]
    pub y: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteKind {
    Grids,
    Inversions,
    Packings,
    RandomCircles,
    RandomLines,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    pub kind: SuiteKind,
    /// Number of instances.
    #[arg(long, default_value_t = 6)]
    pub size: u32,
    /// Formula names; a per-suite default when omitted.
    #[arg(long = "formula")]
    pub formulas: Vec<String>,
    /// Overridden by INCLAB_SEED when set.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input or arguments.
    Invalid(String),
    /// A checked property did not hold.
    Invariant(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(s) => write!(f, "error: {s}"),
            CliError::Invariant(s) => write!(f, "invariant failed: {s}"),
        }
    }
}

impl From<inclab_core::Error> for CliError {
    fn from(e: inclab_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(match e {
                CliError::Invalid(_) => 2,
                CliError::Invariant(_) => 3,
            })
        }
    }
}
