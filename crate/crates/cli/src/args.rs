use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Measurement-modified spontaneous emission rates for hydrogen-like transitions.
///
/// Frequencies are in units of the transition frequency ω0 unless a flag says otherwise.
#[derive(Debug, Parser)]
#[command(name = "zenoscope", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Γ/Γ0 at a single measurement rate, as JSON.
    Rate(RateArgs),
    /// Γ/Γ0 over a range of measurement rates, as CSV.
    Sweep(SweepArgs),
    /// η, μ and ω_X/ω0 of the tabulated transitions, as TSV.
    Table1(Table1Args),
    /// Sweep preset for 2P-1S, 3D-1S and 4F-1S over ν/ω0 in [1e-4, 1e-2].
    Figure2(Figure2Args),
    /// Discretised-mode dynamics against quadrature for a desk-scale reservoir, as JSON.
    Oracle(OracleArgs),
    /// Measurement rate needed to see the effect on the Ca+ 729 nm line, as JSON.
    Ca(CaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RateMethod {
    Quadrature,
    Analytic,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMethod {
    Quadrature,
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Integrator {
    Exact,
    Rk4,
}

#[derive(Debug, Clone, Args)]
pub struct QuadArgs {
    /// Sinc² lobes on each side of resonance integrated lobe by lobe.
    #[arg(long, default_value_t = 64)]
    pub near_lobes: usize,
    /// Gauss-Legendre nodes per near lobe.
    #[arg(long, default_value_t = 15)]
    pub nodes_per_lobe: usize,
    /// Relative tolerance of the quadrature.
    #[arg(long, default_value_t = 1e-9, value_parser = positive)]
    pub rel_tol: f64,
    /// Upper integration limit in units of max(ω_X, ω0).
    #[arg(long, default_value_t = 50.0, value_parser = positive)]
    pub max_omega_factor: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ConstArgs {
    /// Fine-structure constant used when a config file is given (builtins are tabulated).
    #[arg(long, value_parser = positive)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct RateArgs {
    /// Builtin transition (2P-1S, 3D-1S, 4F-1S) or path to a reservoir config JSON.
    #[arg(long)]
    pub transition: String,
    /// Measurement rate ν in units of ω0.
    #[arg(long, value_parser = positive)]
    pub nu: f64,
    #[arg(long, value_enum, default_value_t = RateMethod::Quadrature)]
    pub method: RateMethod,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub consts: ConstArgs,
    /// Oracle mode count (with --method oracle).
    #[arg(long, default_value_t = 10_000)]
    pub n_modes: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Builtin transition (2P-1S, 3D-1S, 4F-1S) or path to a reservoir config JSON.
    #[arg(long)]
    pub transition: String,
    /// Smallest ν in units of ω0.
    #[arg(long, value_parser = positive)]
    pub min: f64,
    /// Largest ν in units of ω0.
    #[arg(long, value_parser = positive)]
    pub max: f64,
    /// Number of sweep points, endpoints included.
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    pub spacing: Spacing,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [SweepMethod::Quadrature, SweepMethod::Analytic])]
    pub methods: Vec<SweepMethod>,
    /// Append a status column naming per-point failures.
    #[arg(long)]
    pub with_status: bool,
    #[command(flatten)]
    pub jobs: JobArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub consts: ConstArgs,
}

#[derive(Debug, Clone, Args)]
pub struct JobArgs {
    /// Worker threads for sweep points [default: all cores].
    #[arg(long, env = "ZENOSCOPE_JOBS")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct Table1Args {
    /// Fine-structure constant.
    #[arg(long, default_value_t = 1.0 / 137.035999, value_parser = positive)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Args)]
pub struct Figure2Args {
    /// Write one CSV per transition here instead of to stdout.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Log-spaced points per transition.
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    #[command(flatten)]
    pub jobs: JobArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Low-frequency exponent η (odd).
    #[arg(long, default_value_t = 3)]
    pub eta: u32,
    /// High-frequency exponent μ.
    #[arg(long, default_value_t = 6)]
    pub mu: u32,
    /// Cutoff ω_X in units of ω0.
    #[arg(long, default_value_t = 50.0, value_parser = positive)]
    pub omega_x: f64,
    /// Measurement rate ν in units of ω0.
    #[arg(long, default_value_t = 1e-2, value_parser = positive)]
    pub nu: f64,
    /// Reservoir modes.
    #[arg(long, default_value_t = 10_000)]
    pub n_modes: usize,
    #[arg(long, value_enum, default_value_t = Integrator::Exact)]
    pub integrator: Integrator,
    /// Γ0τ after coupling rescaling.
    #[arg(long, default_value_t = 1e-4, value_parser = positive)]
    pub weak_coupling: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CaArgs {
    /// Target fractional rate change (Γ − Γ0)/Γ0.
    #[arg(long, default_value_t = 0.01, value_parser = positive)]
    pub precision: f64,
    /// Unknown order-unity prefactor A.
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    pub prefactor_a: f64,
    /// Line frequency in Hz.
    #[arg(long, default_value_t = 411e12, value_parser = positive)]
    pub line_hz: f64,
    /// Fine-structure constant [default: CODATA 2018].
    #[arg(long, value_parser = positive)]
    pub alpha: Option<f64>,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{v} must be positive and finite"))
    }
}
