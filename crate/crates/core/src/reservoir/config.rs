use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    eta_for, frequency_ratio, mu_for, FullReservoir, Multipole, PhysicalConstants, Reservoir, ReservoirError,
    ReservoirTerm, SimpleReservoir, Spectrum, Transition,
};
use crate::specfun::clebsch_gordan;

/// JSON description of a transition and, optionally, its `D_Jr` table.
///
/// ```json
/// {"character":"electric","n_g":1,"l_g":0,"m_g":0,"n_e":3,"l_e":2,"m_e":0,"z":1.0,
///  "terms":[{"J":2,"r":0,"D":1.0}]}
/// ```
///
/// A term may give the reduced coefficient `d` instead of `D`; it is then
/// multiplied by `⟨l_g m_g; J M | l_e m_e⟩²` with `M = m_e − m_g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReservoirConfig {
    pub character: Multipole,
    pub n_g: u32,
    pub l_g: u32,
    #[serde(default)]
    pub m_g: i32,
    pub n_e: u32,
    pub l_e: u32,
    #[serde(default)]
    pub m_e: i32,
    #[serde(default = "unit_charge")]
    pub z: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermConfig>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub degenerate: bool,
}

fn unit_charge() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    #[serde(rename = "J")]
    pub j: u32,
    #[serde(default)]
    pub r: u32,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d_full: Option<f64>,
    #[serde(rename = "d", default, skip_serializing_if = "Option::is_none")]
    pub d_reduced: Option<f64>,
}

/// Reservoir built from a [`ReservoirConfig`] in dimensionless units
/// (`ω0 = 1`, `ω_X = 1 / frequency_ratio`).
#[derive(Debug, Clone, PartialEq)]
pub struct ConfiguredReservoir {
    pub transition: Transition,
    pub omega0: f64,
    pub kind: ConfiguredKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfiguredKind {
    Simple(SimpleReservoir),
    Full(FullReservoir),
}

impl Reservoir for ConfiguredReservoir {
    fn spectrum(&self) -> Spectrum {
        match &self.kind {
            ConfiguredKind::Simple(r) => r.spectrum(),
            ConfiguredKind::Full(r) => r.spectrum(),
        }
    }
}

impl ReservoirConfig {
    pub fn from_json(text: &str) -> Result<Self, ReservoirError> {
        serde_json::from_str(text).map_err(|e| ReservoirError::Config(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, ReservoirError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| ReservoirError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn transition(&self) -> Result<Transition, ReservoirError> {
        Transition::new(
            self.character,
            (self.n_g, self.l_g, self.m_g),
            (self.n_e, self.l_e, self.m_e),
            self.z,
        )
    }

    pub fn build(&self, consts: &PhysicalConstants) -> Result<ConfiguredReservoir, ReservoirError> {
        consts.validate()?;
        let transition = self.transition()?;
        let omega_x = 1.0 / frequency_ratio(&transition, consts)?;
        let kind = match &self.terms {
            None => {
                let eta = eta_for(transition.j_range().0, transition.character)?;
                ConfiguredKind::Simple(SimpleReservoir::new(1.0, eta, mu_for(&transition), omega_x)?)
            }
            Some(terms) => {
                let terms = terms.iter().map(|t| t.resolve(&transition)).collect::<Result<Vec<_>, _>>()?;
                ConfiguredKind::Full(FullReservoir::for_transition(
                    &transition,
                    omega_x,
                    terms,
                    self.degenerate,
                )?)
            }
        };
        Ok(ConfiguredReservoir { transition, omega0: 1.0, kind })
    }
}

impl TermConfig {
    fn resolve(&self, t: &Transition) -> Result<ReservoirTerm, ReservoirError> {
        let d = match (self.d_full, self.d_reduced) {
            (Some(d), None) => d,
            (None, Some(d)) => {
                let big_m = t.m_e - t.m_g;
                let cg = clebsch_gordan(
                    f64::from(t.l_g),
                    f64::from(self.j),
                    f64::from(t.m_g),
                    f64::from(big_m),
                    f64::from(t.l_e),
                    f64::from(t.m_e),
                )?;
                d * cg * cg
            }
            _ => {
                return Err(ReservoirError::Config(format!(
                    "term (J = {}, r = {}) needs exactly one of \"D\" or \"d\"",
                    self.j, self.r
                )))
            }
        };
        Ok(ReservoirTerm::new(self.j, self.r, d))
    }
}
