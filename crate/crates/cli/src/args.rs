use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gconc::RoofParams;

#[derive(Debug, Parser)]
#[command(name = "gconc", version, about = "Entanglement evolution of bipartite qudits under local channels")]
pub struct Cli {
    /// Directory for output files when --out is not given.
    #[arg(long, global = true, env = "GCONC_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Isotropic-state trajectory under local depolarization.
    Trajectory(TrajectoryArgs),
    /// Monte Carlo check of an evolution law.
    Verify(VerifyArgs),
    /// Drop times and rate ratio over a range of dimensions.
    Rates(RatesArgs),
    /// Convex-roof estimate for a state read from JSON.
    Roof(RoofArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct RoofOptions {
    /// Ensemble size; defaults to min(d*f, 2*rank).
    #[arg(long)]
    pub ensemble_size: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 50_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 50_000)]
    pub warmup_iters: usize,
    /// Step size at which a descent run stops.
    #[arg(long, default_value_t = 1e-6)]
    pub roof_tol: f64,
    #[arg(long, default_value_t = 0.3)]
    pub initial_step: f64,
}

impl RoofOptions {
    pub fn params(&self) -> RoofParams {
        RoofParams {
            ensemble_size: self.ensemble_size,
            restarts: self.restarts,
            max_iters: self.max_iters,
            warmup_iters: self.warmup_iters,
            tol: self.roof_tol,
            initial_step: self.initial_step,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long)]
    pub t_max: f64,
    /// Number of grid points, both endpoints included.
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Add roof estimates of C_2..C_d at every grid point.
    #[arg(long)]
    pub ck_roofs: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Data file; the marker sidecar goes next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub roof: RoofOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawArg {
    Factorization,
    TwoSided,
    Ck,
}

impl LawArg {
    pub fn name(self) -> &'static str {
        match self {
            LawArg::Factorization => "factorization",
            LawArg::TwoSided => "two-sided",
            LawArg::Ck => "ck",
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub law: LawArg,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of random initial states.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Random channels per state.
    #[arg(long, default_value_t = 1)]
    pub channels: usize,
    /// Kraus rank of each channel; drawn from 1..=d^2 when omitted.
    #[arg(long)]
    pub n_kraus: Option<usize>,
    /// Estimator name, or `auto` (wootters for d = 2, roof otherwise).
    #[arg(long, default_value = "auto")]
    pub method: String,
    /// Overrides the estimator's tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub roof: RoofOptions,
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    #[arg(long, default_value_t = 2)]
    pub d_min: usize,
    #[arg(long, default_value_t = 10)]
    pub d_max: usize,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    G,
    Ck,
}

#[derive(Debug, Args)]
pub struct RoofArgs {
    /// Pure-state or density-matrix JSON.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MeasureArg::G)]
    pub measure: MeasureArg,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub roof: RoofOptions,
}
