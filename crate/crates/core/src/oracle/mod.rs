//! Discretised-mode check on the modified rate: a single excited level coupled
//! to `N` reservoir modes, evolved over one measurement interval.
//!
//! Each projective measurement erases coherences, so `n` intervals give
//! `P(τ)^n` and `Γ = −ln P(τ)/τ` follows from one interval.

mod exact;
mod rk4;

use std::f64::consts::PI;

use thiserror::Error;

use crate::decay::{DecayMethod, DecayResult, RWA_LIMIT};
use crate::profile::{MeasurementSchedule, ProfileError};
use crate::reservoir::{Reservoir, ReservoirError};

/// Shortest allowed recurrence time `2π/Δω`, in units of `τ`.
pub const RECURRENCE_MARGIN: f64 = 1.25;

/// Half-width of the band that must be resolved around `ω0`, in units of `ν`.
pub const MIN_BAND_HALF_WIDTH: f64 = 1e3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid oracle config: {0}")]
    Config(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("integrator failure: {0}")]
    IntegratorFailure(String),
    #[error(transparent)]
    Reservoir(#[from] ReservoirError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    Rk4,
    ExactDiagonalization,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub n_modes: usize,
    /// `(ω_lo, ω_hi)`. `None` picks `[0, ω0 + max(10³ν, 4ω_X)]`, narrowed
    /// until the recurrence time is at least [`RECURRENCE_MARGIN`]`·τ`.
    pub band: Option<(f64, f64)>,
    /// RK4 step; `None` uses `0.01 / ‖H‖`.
    pub dt: Option<f64>,
    pub method: OracleMethod,
    /// Target `Γ0 τ` after internally rescaling the couplings. Ratios do not
    /// depend on the coupling strength, and a small value keeps a single
    /// interval in the perturbative regime.
    pub weak_coupling: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            n_modes: 10_000,
            band: None,
            dt: None,
            method: OracleMethod::ExactDiagonalization,
            weak_coupling: 1e-4,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        let bad = |m: String| Err(OracleError::Config(m));
        if self.n_modes < 100 {
            return bad(format!("n_modes = {} must be at least 100", self.n_modes));
        }
        if let Some((lo, hi)) = self.band {
            if !(lo >= 0.0 && lo < hi && hi.is_finite()) {
                return bad(format!("band ({lo}, {hi}) must satisfy 0 <= lo < hi"));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad(format!("dt = {dt} must be positive"));
            }
        }
        if !(self.weak_coupling > 0.0 && self.weak_coupling <= 0.1) {
            return bad(format!("weak_coupling = {} must lie in (0, 0.1]", self.weak_coupling));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub omega: f64,
    pub g: f64,
}

/// Uniform midpoint grid of reservoir modes over a band.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretization {
    pub modes: Vec<Mode>,
    pub delta_omega: f64,
    pub band: (f64, f64),
}

impl Discretization {
    /// Couplings multiplied by `sqrt(factor)`, i.e. `R → factor·R`.
    pub fn scaled(&self, factor: f64) -> Self {
        let k = factor.sqrt();
        Self {
            modes: self.modes.iter().map(|m| Mode { omega: m.omega, g: m.g * k }).collect(),
            delta_omega: self.delta_omega,
            band: self.band,
        }
    }

    /// `2π/Δω`.
    pub fn recurrence_time(&self) -> f64 {
        2.0 * PI / self.delta_omega
    }

    /// `Σ g_k²`.
    pub fn total_coupling(&self) -> f64 {
        self.modes.iter().map(|m| m.g * m.g).sum()
    }
}

/// Band used by [`discretize_reservoir`] when the config leaves it open.
pub fn auto_band(omega_x: f64, omega0: f64, m: &MeasurementSchedule, n_modes: usize) -> (f64, f64) {
    let wanted = omega0 + (MIN_BAND_HALF_WIDTH * m.nu()).max(4.0 * omega_x);
    let widest = n_modes as f64 * 2.0 * PI * m.nu() / RECURRENCE_MARGIN;
    (0.0, wanted.min(widest))
}

/// Modes `ω_k = ω_lo + (k + ½)Δω` with `g_k = sqrt(R(ω_k) Δω)`.
///
/// The band must cover `[max(0, ω0 − 10³ν), ω0 + 10³ν]`.
pub fn discretize_reservoir(
    r: &impl Reservoir,
    cfg: &OracleConfig,
    omega0: f64,
    m: &MeasurementSchedule,
) -> Result<Discretization, OracleError> {
    cfg.validate()?;
    let spec = r.spectrum();
    let (lo, hi) = cfg.band.unwrap_or_else(|| auto_band(spec.omega_x(), omega0, m, cfg.n_modes));
    let need_lo = (omega0 - MIN_BAND_HALF_WIDTH * m.nu()).max(0.0);
    let need_hi = omega0 + MIN_BAND_HALF_WIDTH * m.nu();
    if lo > need_lo || hi < need_hi {
        return Err(OracleError::Precondition(format!(
            "band [{lo}, {hi}] does not cover [{need_lo}, {need_hi}] for nu = {}",
            m.nu()
        )));
    }
    let delta_omega = (hi - lo) / cfg.n_modes as f64;
    let modes = (0..cfg.n_modes)
        .map(|k| {
            let omega = lo + (k as f64 + 0.5) * delta_omega;
            Mode { omega, g: (spec.eval(omega) * delta_omega).sqrt() }
        })
        .collect();
    Ok(Discretization { modes, delta_omega, band: (lo, hi) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Survival {
    /// `|c_e(τ)|²`.
    pub probability: f64,
    /// Deviation of the total norm (RK4) or of the eigenvector weights (exact)
    /// from one.
    pub norm_error: f64,
}

/// `|c_e(τ)|²` for `c_e(0) = 1` under the rotating-frame one-excitation
/// Hamiltonian.
pub fn survival_probability(
    modes: &Discretization,
    omega0: f64,
    tau: f64,
    cfg: &OracleConfig,
) -> Result<Survival, OracleError> {
    cfg.validate()?;
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(OracleError::Precondition(format!("tau = {tau} must be positive")));
    }
    let t_rec = modes.recurrence_time();
    if tau * RECURRENCE_MARGIN > t_rec {
        return Err(OracleError::Precondition(format!(
            "tau = {tau} is too close to the recurrence time {t_rec}; use more modes or a narrower band"
        )));
    }
    match cfg.method {
        OracleMethod::ExactDiagonalization => Ok(exact::survival(modes, omega0, tau)),
        OracleMethod::Rk4 => rk4::survival(modes, omega0, tau, cfg.dt),
    }
}

/// `Γ = −ln P(τ)/τ` from the discretised dynamics, reported as `Γ/(2πR(ω0))`.
pub fn oracle_rate(
    r: &impl Reservoir,
    omega0: f64,
    m: &MeasurementSchedule,
    cfg: &OracleConfig,
) -> Result<DecayResult, OracleError> {
    if !(omega0 > 0.0 && omega0.is_finite()) {
        return Err(OracleError::Precondition(format!("omega0 = {omega0} must be positive")));
    }
    let spec = r.spectrum();
    let r0 = spec.eval(omega0);
    if r0.is_nan() || r0 <= 0.0 {
        return Err(OracleError::Precondition(format!("R(omega0) = {r0} must be positive")));
    }
    let tau = m.tau();
    let base = discretize_reservoir(&spec, cfg, omega0, m)?;
    let scale = cfg.weak_coupling / (2.0 * PI * r0 * tau);
    let modes = base.scaled(scale);
    let s = survival_probability(&modes, omega0, tau, cfg)?;
    if !(s.probability > 0.0 && s.probability < 1.0) {
        return Err(OracleError::IntegratorFailure(format!(
            "survival probability {} outside (0, 1)",
            s.probability
        )));
    }
    let gamma = -s.probability.ln() / tau;
    let gamma0 = 2.0 * PI * scale * r0;
    Ok(DecayResult {
        ratio: gamma / gamma0,
        gamma0: 2.0 * PI * r0,
        method: DecayMethod::Oracle,
        err_estimate: s.norm_error / (1.0 - s.probability),
        rwa_warning: m.nu() / omega0 >= RWA_LIMIT,
        converged: true,
        hierarchy_warning: false,
        breakdown: None,
    })
}
