//! Command-line surface of the `sc` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "sc",
    version,
    about = "Convolutional filtering of signals on simplicial complexes",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a complex from a simplex list, an edge list, or a seeded generator
    Build(BuildArgs),
    /// Export the typed spectrum of one level as CSV
    Spectrum(SpectrumArgs),
    /// Filtering operations
    Filter {
        #[command(subcommand)]
        action: FilterAction,
    },
    /// Split a signal into its gradient, curl, and harmonic components
    Decompose(DecomposeArgs),
    /// Least-squares coefficient design
    Design {
        #[command(subcommand)]
        action: DesignAction,
    },
    /// Deterministic experiment runners
    Experiment {
        #[command(subcommand)]
        action: ExperimentAction,
    },
    /// Run the invariant check suite against a complex
    Check(CheckArgs),
}

/// Where a complex comes from: a file or the seeded clique-complex generator.
#[derive(Args, Debug, Clone)]
pub struct ComplexSource {
    /// Complex file (canonical JSON, or simplex-list text for `build`)
    #[arg(long)]
    pub complex: Option<PathBuf>,

    /// Number of vertices for the seeded G(n, p) clique-complex generator
    #[arg(long, default_value_t = 30)]
    pub nodes: usize,

    /// Edge probability for the generator
    #[arg(long, default_value_t = 0.25)]
    pub edge_prob: f64,

    /// Complex order K for the generator
    #[arg(long, default_value_t = 2)]
    pub order: usize,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    /// Simplex-list text file (one simplex per line, `#` comments);
    /// with --clique, an edge-list file instead
    #[arg(long, conflicts_with = "nodes")]
    pub input: Option<PathBuf>,

    /// Treat the input as a graph edge list and build its clique complex
    #[arg(long, requires = "input")]
    pub clique: bool,

    /// Number of vertices for the seeded generator (used when no --input)
    #[arg(long, default_value_t = 30)]
    pub nodes: usize,

    /// Edge probability for the seeded generator
    #[arg(long, default_value_t = 0.25)]
    pub edge_prob: f64,

    /// Declared complex order K
    #[arg(long, default_value_t = 2)]
    pub order: usize,

    /// Generator seed
    #[arg(long, default_value_t = 7)]
    pub seed: u64,

    /// Output path for the canonical complex JSON
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    /// Complex JSON file
    #[arg(long)]
    pub complex: PathBuf,

    /// Simplicial level k
    #[arg(long)]
    pub level: usize,

    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also dump the full basis as JSON for reuse
    #[arg(long)]
    pub basis_cache: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum FilterAction {
    /// Apply a simplicial convolutional filter to a signal
    Apply(FilterApplyArgs),
}

#[derive(Args, Debug)]
pub struct FilterApplyArgs {
    /// Complex JSON file
    #[arg(long)]
    pub complex: PathBuf,

    /// Coefficient JSON file ({level, alpha, beta})
    #[arg(long)]
    pub coeffs: PathBuf,

    /// Input signal CSV (index,value)
    #[arg(long)]
    pub signal: PathBuf,

    /// Signal level; must match the coefficient file's level when given
    #[arg(long)]
    pub level: Option<usize>,

    /// Output signal CSV path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    /// Complex JSON file
    #[arg(long)]
    pub complex: PathBuf,

    /// Signal level
    #[arg(long)]
    pub level: usize,

    /// Input signal CSV (index,value)
    #[arg(long)]
    pub signal: PathBuf,

    /// Output CSV path (index,input,gradient,curl,harmonic)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum DesignAction {
    /// Fit filter coefficients to a sampled target frequency response
    FitResponse(FitResponseArgs),
    /// Fit a whole filter bank to input/output training data
    FitBank(FitBankArgs),
}

#[derive(Args, Debug)]
pub struct FitResponseArgs {
    /// Complex JSON file
    #[arg(long)]
    pub complex: PathBuf,

    /// Filter level
    #[arg(long)]
    pub level: usize,

    /// Target CSV (lambda,freq_type,response)
    #[arg(long)]
    pub target: PathBuf,

    /// Lower-polynomial order (ignored at level 0)
    #[arg(long, default_value_t = 5)]
    pub l1: usize,

    /// Upper-polynomial order (ignored at the top level)
    #[arg(long, default_value_t = 5)]
    pub l2: usize,

    /// Ridge weight
    #[arg(long, default_value_t = sc_core::DEFAULT_RIDGE)]
    pub mu: f64,

    /// Output report JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FitBankArgs {
    /// Complex JSON file
    #[arg(long)]
    pub complex: PathBuf,

    /// Training-set JSON file
    #[arg(long)]
    pub data: PathBuf,

    /// Uniform branch polynomial order
    #[arg(long, default_value_t = 5)]
    pub orders: usize,

    /// Ridge weight
    #[arg(long, default_value_t = sc_core::DEFAULT_RIDGE)]
    pub mu: f64,

    /// Output report JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum ExperimentAction {
    /// Model fitting: rational-filter targets fit by a polynomial bank
    Fit(ExperimentFitArgs),
    /// Generalized heat diffusion of indicator signals
    Diffuse(ExperimentDiffuseArgs),
}

#[derive(Args, Debug)]
pub struct ExperimentFitArgs {
    /// Root seed; all randomness derives from it
    #[arg(long, default_value_t = 7)]
    pub seed: u64,

    #[command(flatten)]
    pub source: ComplexSource,

    /// Uniform branch polynomial order of the fitted bank
    #[arg(long, default_value_t = 5)]
    pub orders: usize,

    /// Number of training samples
    #[arg(long, default_value_t = 10)]
    pub samples: usize,

    /// Ridge weight
    #[arg(long, default_value_t = sc_core::DEFAULT_RIDGE)]
    pub mu: f64,

    /// Output directory
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct ExperimentDiffuseArgs {
    /// Root seed; used for the generated complex
    #[arg(long, default_value_t = 7)]
    pub seed: u64,

    #[command(flatten)]
    pub source: ComplexSource,

    /// Diffusion rate at level 0
    #[arg(long, default_value_t = 0.3)]
    pub gamma0: f64,

    /// Diffusion rate at level 1
    #[arg(long, default_value_t = 0.05)]
    pub gamma1: f64,

    /// Diffusion rate at level 2
    #[arg(long, default_value_t = 0.5)]
    pub gamma2: f64,

    /// Polynomial order of the heat-kernel fits
    #[arg(long, default_value_t = 10)]
    pub orders: usize,

    /// Ridge weight
    #[arg(long, default_value_t = sc_core::DEFAULT_RIDGE)]
    pub mu: f64,

    /// Indicator placement `level:index` (default: first simplex per level)
    #[arg(long, value_parser = parse_indicator)]
    pub indicator: Vec<(usize, usize)>,

    /// Output directory
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Complex JSON file (defaults to the seeded generator when omitted)
    #[arg(long)]
    pub complex: Option<PathBuf>,

    /// Seed for the randomized trials
    #[arg(long, default_value_t = 17)]
    pub seed: u64,

    /// Number of randomized trials per equivariance suite
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
}

fn parse_indicator(raw: &str) -> Result<(usize, usize), String> {
    let (level, index) = raw
        .split_once(':')
        .ok_or_else(|| format!("expected `level:index`, got `{raw}`"))?;
    Ok((
        level
            .parse()
            .map_err(|_| format!("invalid level `{level}`"))?,
        index
            .parse()
            .map_err(|_| format!("invalid index `{index}`"))?,
    ))
}
