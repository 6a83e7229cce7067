//! Resolution of `--transition` into a reservoir model.

use std::path::Path;

use zenoscope::decay::{
    modified_rate_quadrature, ratio_analytic_full, ratio_analytic_simple, DecayError, DecayResult,
    QuadratureConfig,
};
use zenoscope::profile::MeasurementSchedule;
use zenoscope::reservoir::{
    builtin_transition, ConfiguredKind, FullReservoir, PhysicalConstants, ReservoirConfig, SimpleReservoir,
    BUILTIN_NAMES,
};

use crate::CliError;

#[derive(Debug, Clone)]
pub enum Model {
    Simple(SimpleReservoir),
    Full(FullReservoir),
}

/// A reservoir in units of its transition frequency.
#[derive(Debug, Clone)]
pub struct Target {
    pub name: String,
    pub omega0: f64,
    pub model: Model,
}

impl Target {
    /// Builtin name, or a path to a reservoir config JSON.
    pub fn resolve(spec: &str, consts: &PhysicalConstants) -> Result<Self, CliError> {
        if let Ok(b) = builtin_transition(spec) {
            return Ok(Self {
                name: b.name.to_string(),
                omega0: b.omega0,
                model: Model::Simple(b.reservoir),
            });
        }
        let path = Path::new(spec);
        if !path.is_file() {
            return Err(CliError::Usage(format!(
                "unknown transition '{spec}'; valid names: {} (or a path to a reservoir config JSON)",
                BUILTIN_NAMES.join(", ")
            )));
        }
        let built = ReservoirConfig::from_path(path)
            .and_then(|c| c.build(consts))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let model = match built.kind {
            ConfiguredKind::Simple(r) => Model::Simple(r),
            ConfiguredKind::Full(r) => Model::Full(r),
        };
        Ok(Self { name: spec.to_string(), omega0: built.omega0, model })
    }

    pub fn omega_x(&self) -> f64 {
        match &self.model {
            Model::Simple(r) => r.omega_x(),
            Model::Full(r) => r.omega_x(),
        }
    }

    pub fn quadrature(&self, nu: f64, cfg: &QuadratureConfig) -> Result<DecayResult, DecayError> {
        let m = MeasurementSchedule::new(nu * self.omega0)?;
        match &self.model {
            Model::Simple(r) => modified_rate_quadrature(r, self.omega0, &m, cfg),
            Model::Full(r) => modified_rate_quadrature(r, self.omega0, &m, cfg),
        }
    }

    /// Simple closed form for a single-term reservoir, the multi-term form otherwise.
    pub fn analytic(&self, nu: f64) -> Result<DecayResult, DecayError> {
        let x = self.omega_x() / self.omega0;
        match &self.model {
            Model::Simple(r) => ratio_analytic_simple(r.eta(), r.mu(), x, nu),
            Model::Full(r) => ratio_analytic_full(r, x, nu),
        }
    }
}

/// Exit status for a library failure: 2 when the inputs were unusable, 3 otherwise.
pub fn decay_failure(e: DecayError) -> CliError {
    match e {
        DecayError::Config(_) | DecayError::Degenerate | DecayError::Reservoir(_) => {
            CliError::Usage(e.to_string())
        }
        _ => CliError::Numerical(e.to_string()),
    }
}
