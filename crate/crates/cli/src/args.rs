use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "krausforge",
    version,
    about = "Closed-form Kraus operators for weakly dissipative Lindblad dynamics",
    arg_required_else_help = true
)]
pub struct Cli {
    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true, env = "KRAUSFORGE_THREADS", value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize the Kraus set at one evolution time and write it as JSON
    Synth(SynthArgs),
    /// Error of each method against the exact map over a log-spaced time grid (CSV)
    SweepTime(SweepTimeArgs),
    /// Error of the Kraus approximation against the exact map versus node count (CSV)
    SweepN(SweepNArgs),
    /// Run the invariant suite on a model; exits 3 if any check fails
    Verify(VerifyArgs),
    /// Canonical Kraus operators of the exact map from its Choi matrix (JSON)
    Extract(ExtractArgs),
}

#[derive(Debug, Args)]
pub struct ModelArg {
    /// Model JSON file [default: bundled three-level leaky qubit]
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QuadratureArg {
    Midpoint,
    TrapezoidInterior,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub model: ModelArg,
    /// Evolution time in ns
    #[arg(long)]
    pub tau: f64,
    /// Quadrature nodes for every channel [default: per channel, from the model]
    #[arg(long, value_name = "N")]
    pub n: Option<usize>,
    /// Quadrature rule
    #[arg(long, value_enum, default_value = "midpoint")]
    pub quadrature: QuadratureArg,
    /// Output path for the Kraus JSON dump
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepTimeArgs {
    #[command(flatten)]
    pub model: ModelArg,
    /// Comma-separated methods: exact, dphi, first_order, kraus:N
    #[arg(long, default_value = "dphi,first_order,kraus:1,kraus:10,kraus:50")]
    pub methods: String,
    /// Smallest time in ns
    #[arg(long, default_value_t = 0.01)]
    pub tau_min: f64,
    /// Largest time in ns
    #[arg(long, default_value_t = 4.0)]
    pub tau_max: f64,
    /// Number of log-spaced times
    #[arg(long, default_value_t = 60)]
    pub points: usize,
    /// Output CSV path
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepNArgs {
    #[command(flatten)]
    pub model: ModelArg,
    /// Comma-separated evolution times in ns
    #[arg(long, value_delimiter = ',', default_value = "1,0.1,0.01")]
    pub taus: Vec<f64>,
    /// Smallest node count
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    /// Largest node count
    #[arg(long, default_value_t = 50)]
    pub n_max: usize,
    /// Output CSV path
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArg,
    /// Evolution time in ns
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Seed for the random test states
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance for checks that hold to rounding
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub model: ModelArg,
    /// Evolution time in ns
    #[arg(long)]
    pub tau: f64,
    /// Drop Choi eigenvalues with magnitude at or below this
    #[arg(long, default_value_t = 1e-10)]
    pub cutoff: f64,
    /// Output path for the extraction JSON dump
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}
