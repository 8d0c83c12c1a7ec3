use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "minuncert", version, about = "Audit and construct minimum-uncertainty mixed states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reproduce the three mixed states that reach the uncertainty bound.
    VerifyPaper(VerifyArgs),
    /// Find degenerate eigenspaces of A + i*lambda*B and their saturating mixtures.
    Find(FindArgs),
    /// Search numerically for a mixed state of minimum uncertainty.
    Search(SearchArgs),
    /// Dump moment tables of the displaced-Gaussian pair from three routes.
    Gaussian(GaussianArgs),
    /// Export angular-momentum operators with a row label file.
    Spin(SpinArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write JSON output to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GaussianFlags {
    #[arg(long = "gaussian-a", default_value_t = 1.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// Number of Fock states kept.
    #[arg(long, default_value_t = 64)]
    pub fock_dim: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1e-9)]
    pub saturation_tol: f64,
    #[command(flatten)]
    pub gaussian: GaussianFlags,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Matrix JSON file for A.
    #[arg(long)]
    pub a: PathBuf,
    /// Matrix JSON file for B.
    #[arg(long)]
    pub b: PathBuf,
}

#[derive(Debug, Args)]
pub struct FindArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Comma-separated real multipliers of B.
    #[arg(long, value_delimiter = ',', default_value = "1", allow_negative_numbers = true)]
    pub lambda: Vec<f64>,
    #[arg(long, default_value_t = 1e-9)]
    pub saturation_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    #[arg(long, default_value_t = 0.9)]
    pub purity_max: f64,
    /// Required when the CI environment variable is set.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1e-6)]
    pub gap_tol: f64,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GaussianArgs {
    #[command(flatten)]
    pub gaussian: GaussianFlags,
    /// Gauss-Hermite nodes for the quadrature route.
    #[arg(long, default_value_t = 24)]
    pub nodes: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SpinArgs {
    /// Comma-separated multiplet quantum numbers, integers or half-integers.
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    pub j: Vec<f64>,
    /// Directory receiving jx.json, jy.json, jz.json and labels.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}
