//! Measurement-modified decay rate: numerical quadrature, the golden-rule
//! rate and the closed-form small-`ν` approximations.

mod analytic;
mod quadrature;

pub use analytic::{free_rates_by_j, ratio_analytic_full, ratio_analytic_simple, HIERARCHY_MIN};
pub use quadrature::{modified_rate_quadrature, QuadratureConfig};

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::profile::ProfileError;
use crate::reservoir::{Reservoir, ReservoirError};
use crate::specfun::SpecFunError;

/// `ν/ω0` at and above which results are flagged as outside the rotating-wave regime.
pub const RWA_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecayError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid quadrature config: {0}")]
    Config(String),
    #[error("degenerate transition: D(J_min, 0) vanishes, so the leading-order ratio is undefined")]
    Degenerate,
    #[error(transparent)]
    Reservoir(#[from] ReservoirError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecayMethod {
    Quadrature,
    AnalyticSimple,
    AnalyticFull,
    Oracle,
}

impl DecayMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            DecayMethod::Quadrature => "quadrature",
            DecayMethod::AnalyticSimple => "analytic_simple",
            DecayMethod::AnalyticFull => "analytic_full",
            DecayMethod::Oracle => "oracle",
        }
    }
}

impl fmt::Display for DecayMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Resonant and tail parts of the modified rate, `Γ = Γ_res + Γ_tail`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBreakdown {
    pub gamma_res: f64,
    pub gamma_tail: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayResult {
    /// Γ/Γ0.
    pub ratio: f64,
    /// Γ0 in the reservoir's units (rad/s only when D is physical).
    pub gamma0: f64,
    pub method: DecayMethod,
    /// Relative error bound on `ratio`; zero for closed forms.
    pub err_estimate: f64,
    /// ν/ω0 at or beyond [`RWA_LIMIT`].
    pub rwa_warning: bool,
    /// False when a numerical stopping rule was not met.
    pub converged: bool,
    /// ω_X/ω0 below [`HIERARCHY_MIN`] for the analytic forms.
    pub hierarchy_warning: bool,
    pub breakdown: Option<RateBreakdown>,
}

impl DecayResult {
    /// Γ = ratio · Γ0.
    pub fn gamma(&self) -> f64 {
        self.ratio * self.gamma0
    }

    /// Any condition that makes the number less trustworthy than usual.
    pub fn has_warning(&self) -> bool {
        self.rwa_warning || !self.converged || self.hierarchy_warning
    }
}

/// Golden-rule rate `Γ0 = 2π R(ω0)`.
pub fn fgr_rate(r: &impl Reservoir, omega0: f64) -> Result<f64, DecayError> {
    if !(omega0 > 0.0 && omega0.is_finite()) {
        return Err(DecayError::Domain(format!("omega0 = {omega0} must be positive")));
    }
    Ok(2.0 * PI * r.spectrum().eval(omega0))
}
