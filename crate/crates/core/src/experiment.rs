//! Feasibility arithmetic for a trapped-ion quadrupole line, defaulting to
//! Ca⁺ 3D5/2 → 4S1/2.
//!
//! The fractional rate increase is modelled as
//! `(Γ − Γ0)/Γ0 = A (ν/ω0)(ω_X/ω0)²` with an unknown prefactor `A`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::reservoir::{cutoff_frequency, Multipole, PhysicalConstants, ReservoirError, Transition};

/// Measured Ca⁺ 729 nm line, 411 THz.
pub const CA_LINE_HZ: f64 = 411e12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("target reduction {0} must lie in (0, 1)")]
    Target(f64),
    #[error("prefactor A = {0} must be positive")]
    Prefactor(f64),
    #[error("transition frequency {0} must be positive")]
    Frequency(f64),
    #[error(transparent)]
    Reservoir(#[from] ReservoirError),
}

/// Ion line described by its screened hydrogen-like levels and measured frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IonLine {
    pub transition: Transition,
    /// rad/s
    pub omega0: f64,
}

impl IonLine {
    /// Ca⁺ 3D → 4S with `Z_eff = 2`.
    pub fn calcium() -> Self {
        Self {
            transition: Transition::new(Multipole::Electric, (4, 0, 0), (3, 2, 0), 2.0)
                .expect("valid Ca+ quantum numbers"),
            omega0: 2.0 * PI * CA_LINE_HZ,
        }
    }

    pub fn new(transition: Transition, omega0: f64) -> Result<Self, ExperimentError> {
        transition.validate()?;
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return Err(ExperimentError::Frequency(omega0));
        }
        Ok(Self { transition, omega0 })
    }

    pub fn omega_x(&self, consts: &PhysicalConstants) -> f64 {
        cutoff_frequency(&self.transition, consts)
    }

    /// `(ω_X/ω0)²`.
    pub fn ratio_factor(&self, consts: &PhysicalConstants) -> f64 {
        (self.omega_x(consts) / self.omega0).powi(2)
    }

    /// ν (s⁻¹) at which `(Γ − Γ0)/Γ0` reaches `target_reduction`.
    pub fn required_rate(
        &self,
        target_reduction: f64,
        a: f64,
        consts: &PhysicalConstants,
    ) -> Result<f64, ExperimentError> {
        if !(target_reduction > 0.0 && target_reduction < 1.0) {
            return Err(ExperimentError::Target(target_reduction));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(ExperimentError::Prefactor(a));
        }
        Ok(target_reduction * self.omega0 / (a * self.ratio_factor(consts)))
    }

    pub fn estimate(
        &self,
        target_reduction: f64,
        a: f64,
        consts: &PhysicalConstants,
    ) -> Result<IonEstimate, ExperimentError> {
        Ok(IonEstimate {
            omega0: self.omega0,
            omega_x: self.omega_x(consts),
            ratio_sq: self.ratio_factor(consts),
            prefactor_a: a,
            required_nu: self.required_rate(target_reduction, a, consts)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IonEstimate {
    pub omega0: f64,
    pub omega_x: f64,
    pub ratio_sq: f64,
    pub prefactor_a: f64,
    /// s⁻¹
    pub required_nu: f64,
}

/// `(ω_X/ω0)²` for Ca⁺.
pub fn ca_ratio_factor(consts: &PhysicalConstants) -> f64 {
    IonLine::calcium().ratio_factor(consts)
}

/// Ca⁺ measurement rate for a fractional rate change `target_reduction`.
pub fn required_measurement_rate(target_reduction: f64, a: f64) -> Result<f64, ExperimentError> {
    IonLine::calcium().required_rate(target_reduction, a, &PhysicalConstants::default())
}
