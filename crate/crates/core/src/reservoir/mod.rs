//! Reservoir coupling spectra `R(ω)` for hydrogen-like multipole transitions.
//!
//! Every spectrum handled by this crate is a finite sum of terms of the form
//!
//! ```text
//! D · ω^p / ω_X^(p-1) / [1 + (ω/ω_X)^2]^μ
//! ```
//!
//! sharing one cutoff `ω_X` and one rolloff exponent `μ`. [`Spectrum`] is that
//! representation; [`SimpleReservoir`] (single term) and [`FullReservoir`]
//! (multi-J, multi-r sum constrained by the selection rules) are validated
//! front ends that lower to it.

mod config;
mod spectrum;
mod transition;

pub use config::{ConfiguredKind, ConfiguredReservoir, ReservoirConfig, TermConfig};
pub use spectrum::{PowerTerm, Spectrum};
pub use transition::{
    cutoff_frequency, eta_for, frequency_ratio, mu_for, nj_for, Multipole, PhysicalConstants, Transition,
};

use thiserror::Error;

use crate::specfun::SpecFunError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReservoirError {
    #[error("invalid transition: {0}")]
    InvalidTransition(String),
    #[error("invalid reservoir parameter: {0}")]
    InvalidParameter(String),
    #[error("term (J = {j}, r = {r}) violates the selection rules: {reason}")]
    SelectionRule { j: u32, r: u32, reason: String },
    #[error("degenerate transition: D(J_min, r = 0) is zero or missing; flag the reservoir as degenerate to build it anyway")]
    MissingLeadingTerm,
    #[error("frequency must be non-negative, got {0}")]
    NegativeFrequency(f64),
    #[error("unknown transition {name:?}; valid names are {}", valid.join(", "))]
    UnknownTransition { name: String, valid: Vec<&'static str> },
    #[error("reservoir config: {0}")]
    Config(String),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// Anything that can be lowered to a [`Spectrum`].
pub trait Reservoir {
    fn spectrum(&self) -> Spectrum;
}

impl Reservoir for Spectrum {
    fn spectrum(&self) -> Spectrum {
        self.clone()
    }
}

/// Single-term reservoir `D ω^η / ω_X^(η-1) / [1 + (ω/ω_X)^2]^μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleReservoir {
    d: f64,
    eta: u32,
    mu: u32,
    omega_x: f64,
}

impl SimpleReservoir {
    pub fn new(d: f64, eta: u32, mu: u32, omega_x: f64) -> Result<Self, ReservoirError> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(ReservoirError::InvalidParameter(format!("D = {d} must be positive")));
        }
        if eta < 1 {
            return Err(ReservoirError::InvalidParameter("eta must be at least 1".into()));
        }
        if 2 * mu <= eta + 1 {
            return Err(ReservoirError::InvalidParameter(format!(
                "2 mu = {} must exceed eta + 1 = {} for R to be integrable",
                2 * mu,
                eta + 1
            )));
        }
        if !(omega_x > 0.0 && omega_x.is_finite()) {
            return Err(ReservoirError::InvalidParameter(format!("omega_x = {omega_x} must be positive")));
        }
        Ok(Self { d, eta, mu, omega_x })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn eta(&self) -> u32 {
        self.eta
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn omega_x(&self) -> f64 {
        self.omega_x
    }

    /// Same reservoir with a different coupling amplitude.
    pub fn with_d(self, d: f64) -> Result<Self, ReservoirError> {
        Self::new(d, self.eta, self.mu, self.omega_x)
    }

    pub fn eval(&self, omega: f64) -> Result<f64, ReservoirError> {
        if omega < 0.0 {
            return Err(ReservoirError::NegativeFrequency(omega));
        }
        Ok(self.spectrum().eval(omega))
    }
}

impl Reservoir for SimpleReservoir {
    fn spectrum(&self) -> Spectrum {
        Spectrum::from_validated(vec![PowerTerm { coef: self.d, power: self.eta }], self.mu, self.omega_x)
    }
}

/// One `(J, r, D_Jr)` entry of a [`FullReservoir`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirTerm {
    pub j: u32,
    pub r: u32,
    pub d: f64,
}

impl ReservoirTerm {
    pub fn new(j: u32, r: u32, d: f64) -> Self {
        Self { j, r, d }
    }
}

/// General multipole reservoir: a double sum over photon angular momentum `J`
/// and polynomial order `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullReservoir {
    terms: Vec<ReservoirTerm>,
    character: Multipole,
    mu: u32,
    omega_x: f64,
    j_range: (u32, u32),
    degenerate: bool,
}

impl FullReservoir {
    /// Builds a reservoir from explicit parameters.
    ///
    /// Every term must have `J` inside `j_range`; unless `degenerate` is set, a
    /// non-zero `(J_min, r = 0)` term must be present.
    pub fn new(
        character: Multipole,
        mu: u32,
        omega_x: f64,
        j_range: (u32, u32),
        terms: Vec<ReservoirTerm>,
        degenerate: bool,
    ) -> Result<Self, ReservoirError> {
        let (j_min, j_max) = j_range;
        if j_min < 1 || j_min > j_max {
            return Err(ReservoirError::InvalidParameter(format!(
                "J range ({j_min}, {j_max}) must satisfy 1 <= J_min <= J_max"
            )));
        }
        if !(omega_x > 0.0 && omega_x.is_finite()) {
            return Err(ReservoirError::InvalidParameter(format!("omega_x = {omega_x} must be positive")));
        }
        if terms.is_empty() {
            return Err(ReservoirError::InvalidParameter("no reservoir terms given".into()));
        }
        for t in &terms {
            if t.j < j_min || t.j > j_max {
                return Err(ReservoirError::SelectionRule {
                    j: t.j,
                    r: t.r,
                    reason: format!("J must lie in [{j_min}, {j_max}]"),
                });
            }
            if !t.d.is_finite() {
                return Err(ReservoirError::InvalidParameter(format!("D({}, {}) is not finite", t.j, t.r)));
            }
            let p = eta_for(t.j, character)? + 2 * t.r;
            if 2 * mu <= p + 1 {
                return Err(ReservoirError::InvalidParameter(format!(
                    "term (J = {}, r = {}) with exponent {p} is not integrable for mu = {mu}",
                    t.j, t.r
                )));
            }
        }
        let leading = terms.iter().filter(|t| t.j == j_min && t.r == 0).map(|t| t.d).sum::<f64>();
        if !degenerate && leading == 0.0 {
            return Err(ReservoirError::MissingLeadingTerm);
        }
        Ok(Self { terms, character, mu, omega_x, j_range, degenerate })
    }

    /// Builds a reservoir for a hydrogen-like transition, checking each term
    /// against the selection rules and the `N_J` truncation index.
    pub fn for_transition(
        transition: &Transition,
        omega_x: f64,
        terms: Vec<ReservoirTerm>,
        degenerate: bool,
    ) -> Result<Self, ReservoirError> {
        transition.validate()?;
        for t in &terms {
            let nj = nj_for(transition, t.j)?;
            if i64::from(t.r) > nj {
                return Err(ReservoirError::SelectionRule {
                    j: t.j,
                    r: t.r,
                    reason: format!("r exceeds N_J = {nj}"),
                });
            }
        }
        Self::new(transition.character, mu_for(transition), omega_x, transition.j_range(), terms, degenerate)
    }

    pub fn terms(&self) -> &[ReservoirTerm] {
        &self.terms
    }

    pub fn character(&self) -> Multipole {
        self.character
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn omega_x(&self) -> f64 {
        self.omega_x
    }

    pub fn j_range(&self) -> (u32, u32) {
        self.j_range
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// `η_J` of the lowest allowed multipole.
    pub fn eta_min(&self) -> u32 {
        // j_min >= 1 is checked at construction.
        eta_for(self.j_range.0, self.character).unwrap()
    }

    /// `D_(J_min, 0)`, zero when that term is absent.
    pub fn leading_coefficient(&self) -> f64 {
        self.terms.iter().filter(|t| t.j == self.j_range.0 && t.r == 0).map(|t| t.d).sum()
    }

    /// Exponent `η_J + 2r` of a term.
    pub fn term_power(&self, term: &ReservoirTerm) -> u32 {
        eta_for(term.j, self.character).unwrap() + 2 * term.r
    }

    pub fn eval(&self, omega: f64) -> Result<f64, ReservoirError> {
        if omega < 0.0 {
            return Err(ReservoirError::NegativeFrequency(omega));
        }
        Ok(self.spectrum().eval(omega))
    }
}

impl Reservoir for FullReservoir {
    fn spectrum(&self) -> Spectrum {
        let terms = self.terms.iter().map(|t| PowerTerm { coef: t.d, power: self.term_power(t) }).collect();
        Spectrum::from_validated(terms, self.mu, self.omega_x)
    }
}

/// One of the tabulated hydrogen transitions, in dimensionless units
/// (`ω0 = 1`, `D = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuiltinTransition {
    pub name: &'static str,
    pub transition: Transition,
    pub reservoir: SimpleReservoir,
    pub omega0: f64,
}

impl BuiltinTransition {
    /// `ω_X / ω0` as tabulated.
    pub fn cutoff_ratio(&self) -> f64 {
        self.reservoir.omega_x() / self.omega0
    }
}

pub const BUILTIN_NAMES: [&str; 3] = ["2P-1S", "3D-1S", "4F-1S"];

/// Looks up a tabulated transition: `(η, μ, ω_X/ω0)` of
/// `(1, 4, 548.1)`, `(3, 6, 411.1)` and `(5, 8, 365.4)`.
pub fn builtin_transition(name: &str) -> Result<BuiltinTransition, ReservoirError> {
    let (n_e, l_e, eta, mu, ratio) = match name {
        "2P-1S" => (2, 1, 1, 4, 548.1),
        "3D-1S" => (3, 2, 3, 6, 411.1),
        "4F-1S" => (4, 3, 5, 8, 365.4),
        _ => {
            return Err(ReservoirError::UnknownTransition {
                name: name.to_string(),
                valid: BUILTIN_NAMES.to_vec(),
            })
        }
    };
    let name = BUILTIN_NAMES.iter().copied().find(|n| *n == name).unwrap();
    let transition = Transition::new(Multipole::Electric, (1, 0, 0), (n_e, l_e, 0), 1.0)?;
    Ok(BuiltinTransition {
        name,
        transition,
        reservoir: SimpleReservoir::new(1.0, eta, mu, ratio)?,
        omega0: 1.0,
    })
}
