use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use specshare::{CoverageMethod, TenantField};

#[derive(Debug, Parser)]
#[command(
    name = "specshare",
    version,
    about = "Coverage, rate and purchase planning for shared licensed subbands"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytical per-band and aggregate coverage and rate
    Analyze(AnalyzeArgs),
    /// Monte Carlo estimates of coverage and rate for each purchased band
    Simulate(SimulateArgs),
    /// Cheapest-first subband purchase meeting the scenario's qos block
    Plan(PlanArgs),
    /// Coverage and rate over one or more parameter sweeps
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Numerical integral of the coverage expression
    Exact,
    /// Closed-form approximation
    Approx,
    /// Noise-free limit
    #[value(alias = "interference-limited")]
    Il,
}

impl From<Method> for CoverageMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Exact => CoverageMethod::ExactIntegral,
            Method::Approx => CoverageMethod::ClosedForm,
            Method::Il => CoverageMethod::InterferenceLimited,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TenantFieldArg {
    /// Tenant SBSs interfere only from beyond the serving distance (analytical model)
    BeyondServing,
    /// Every tenant SBS in the window interferes
    Unrestricted,
}

impl From<TenantFieldArg> for TenantField {
    fn from(t: TenantFieldArg) -> Self {
        match t {
            TenantFieldArg::BeyondServing => TenantField::BeyondServing,
            TenantFieldArg::Unrestricted => TenantField::Unrestricted,
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub scenario: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Report rates in bits instead of nats
    #[arg(long)]
    pub bits: bool,
}

/// Monte Carlo overrides shared by `simulate` and `sweep`.
#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Simulation window radius in metres
    #[arg(long)]
    pub window: Option<f64>,
    #[arg(long, value_enum)]
    pub tenant_field: Option<TenantFieldArg>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub scenario: PathBuf,
    #[command(flatten)]
    pub mc: McArgs,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub bits: bool,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    pub scenario: PathBuf,
    /// Coverage evaluation used for the band metrics
    #[arg(long, value_enum, default_value_t = Method::Approx)]
    pub method: Method,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub scenario: PathBuf,
    /// VAR=v1,v2,... with VAR one of sinr_threshold_db, buyer_count,
    /// tenant_count, band_count; repeat for a nested sweep
    #[arg(long = "sweep", required = true, value_parser = crate::sweep::SweepSpec::parse)]
    pub sweeps: Vec<crate::sweep::SweepSpec>,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    /// Add Monte Carlo columns
    #[arg(long)]
    pub mc: bool,
    #[command(flatten)]
    pub mc_args: McArgs,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write coverage and rate line charts
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub bits: bool,
}
