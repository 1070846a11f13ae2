use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "thurston", version, about = "Transition matrices, pullback iteration and canonical obstructions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verdict, depth decomposition and Frobenius form of a spec's curve universe.
    Analyze(AnalyzeArgs),
    /// Iterate the pullback map (or replay an oracle) and extract the canonical obstruction.
    Run(RunArgs),
    /// Extract the canonical obstruction from existing trace files.
    Extract(ExtractArgs),
    /// Run the acceptance criteria.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output directory.
    #[arg(long, env = "THURSTON_OUT", default_value = "thurston-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Spec file or canned name.
    #[arg(long)]
    pub spec: String,
    /// Relative width at which spectral enclosures are accepted.
    #[arg(long, default_value_t = 1e-12)]
    pub spectral_tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ConstantArgs {
    /// Extraction grid, comma separated and ascending.
    #[arg(long = "J", value_delimiter = ',')]
    pub j_grid: Option<Vec<f64>>,
    #[arg(long)]
    pub delta0: Option<f64>,
    #[arg(long)]
    pub eps0: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Upper estimate of the Teichmüller distance of the first step.
    #[arg(long = "D")]
    pub d_est: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long = "m")]
    pub m: Option<usize>,
    #[arg(long = "M")]
    pub big_m: Option<usize>,
    /// Preimage marked-point count stand-in.
    #[arg(long = "C")]
    pub c_count: Option<f64>,
    /// Coefficient of J in the exponent of C(J).
    #[arg(long)]
    pub p_reading: Option<f64>,
    /// Threshold above which a w-sequence counts as unbounded.
    #[arg(long)]
    pub w_max: Option<f64>,
    /// Trailing window for the unbounded trend.
    #[arg(long, default_value_t = 5)]
    pub trend_window: usize,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Spec file or canned name; optional when the oracle names one.
    #[arg(long)]
    pub spec: Option<String>,
    /// Synthetic w-oracle replacing the numeric iteration.
    #[arg(long)]
    pub oracle: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub iters: usize,
    /// Initial-configuration seed; repeat for several starting points.
    #[arg(long = "seed")]
    pub seeds: Vec<u64>,
    /// Bounded-geometry constant.
    #[arg(long, default_value_t = 1e-3)]
    pub b: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub conv_tol: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub obs_tol: f64,
    /// Trailing window of the verdict rules.
    #[arg(long, default_value_t = 10)]
    pub window: usize,
    #[command(flatten)]
    pub constants: ConstantArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ExtractArgs {
    /// Spec file or canned name.
    #[arg(long)]
    pub spec: String,
    /// Trace files written by `run`.
    #[arg(required = true)]
    pub traces: Vec<PathBuf>,
    #[command(flatten)]
    pub constants: ConstantArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SuiteArgs {
    /// Run only criteria whose number, name or module matches.
    #[arg(long)]
    pub filter: Option<String>,
    /// Deliberately break a fixture.
    #[arg(long, value_parser = ["levy-0.99"])]
    pub inject_fault: Option<String>,
    /// Also write `suite.json` to the output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
