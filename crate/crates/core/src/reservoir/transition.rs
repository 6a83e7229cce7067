use serde::{Deserialize, Serialize};

use super::ReservoirError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub alpha: f64,
    /// m/s
    pub c: f64,
    /// m
    pub a0: f64,
    /// kg
    pub electron_mass: f64,
}

impl Default for PhysicalConstants {
    /// CODATA 2018.
    fn default() -> Self {
        Self {
            alpha: 7.297_352_569_3e-3,
            c: 2.997_924_58e8,
            a0: 5.291_772_109_03e-11,
            electron_mass: 9.109_383_701_5e-31,
        }
    }
}

impl PhysicalConstants {
    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }

    pub fn validate(&self) -> Result<(), ReservoirError> {
        let all = [self.alpha, self.c, self.a0, self.electron_mass];
        if all.iter().all(|v| *v > 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(ReservoirError::InvalidParameter(format!("physical constants must be positive: {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Multipole {
    Electric,
    Magnetic,
}

impl Multipole {
    /// ε: 0 for electric, 1 for magnetic.
    pub fn epsilon(self) -> u32 {
        match self {
            Multipole::Electric => 0,
            Multipole::Magnetic => 1,
        }
    }
}

/// Hydrogen-like transition `|e⟩ = (n_e, l_e, m_e) → |g⟩ = (n_g, l_g, m_g)`.
///
/// The excited level is not required to lie above the ground level in `n`,
/// since screened ions such as Ca⁺ (3D → 4S) invert the hydrogenic ordering.
/// [`frequency_ratio`] still rejects `n_e <= n_g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub character: Multipole,
    pub n_g: u32,
    pub l_g: u32,
    pub m_g: i32,
    pub n_e: u32,
    pub l_e: u32,
    pub m_e: i32,
    pub z: f64,
}

impl Transition {
    /// `ground` and `excited` are `(n, l, m)`.
    pub fn new(
        character: Multipole,
        ground: (u32, u32, i32),
        excited: (u32, u32, i32),
        z: f64,
    ) -> Result<Self, ReservoirError> {
        let t = Self {
            character,
            n_g: ground.0,
            l_g: ground.1,
            m_g: ground.2,
            n_e: excited.0,
            l_e: excited.1,
            m_e: excited.2,
            z,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), ReservoirError> {
        let bad = |msg: String| Err(ReservoirError::InvalidTransition(msg));
        for (label, n, l, m) in
            [("ground", self.n_g, self.l_g, self.m_g), ("excited", self.n_e, self.l_e, self.m_e)]
        {
            if n < 1 {
                return bad(format!("{label} state has n = 0"));
            }
            if l >= n {
                return bad(format!("{label} state has l = {l} >= n = {n}"));
            }
            if m.unsigned_abs() > l {
                return bad(format!("{label} state has |m| = {} > l = {l}", m.unsigned_abs()));
            }
        }
        if self.l_e == self.l_g {
            return bad("l_e = l_g gives J_min = 0, which does not radiate".into());
        }
        if !(self.z > 0.0 && self.z.is_finite()) {
            return bad(format!("z = {} must be positive", self.z));
        }
        Ok(())
    }

    /// Allowed photon angular momenta `[|l_e - l_g|, l_e + l_g]`.
    pub fn j_range(&self) -> (u32, u32) {
        (self.l_e.abs_diff(self.l_g), self.l_e + self.l_g)
    }

    pub fn epsilon(&self) -> u32 {
        self.character.epsilon()
    }
}

/// `ω_X = (1/n_g + 1/n_e)(c/a0) z`, in rad/s.
pub fn cutoff_frequency(t: &Transition, consts: &PhysicalConstants) -> f64 {
    (1.0 / f64::from(t.n_g) + 1.0 / f64::from(t.n_e)) * (consts.c / consts.a0) * t.z
}

/// Bohr estimate `ω0/ω_X = (zα/2)(1/n_g − 1/n_e)`.
pub fn frequency_ratio(t: &Transition, consts: &PhysicalConstants) -> Result<f64, ReservoirError> {
    if t.n_e <= t.n_g {
        return Err(ReservoirError::InvalidTransition(format!(
            "Bohr frequency needs n_e > n_g, got n_e = {}, n_g = {}",
            t.n_e, t.n_g
        )));
    }
    Ok(0.5 * t.z * consts.alpha * (1.0 / f64::from(t.n_g) - 1.0 / f64::from(t.n_e)))
}

/// `η_J = 2J − 1 + 2ε`.
pub fn eta_for(j: u32, character: Multipole) -> Result<u32, ReservoirError> {
    if j < 1 {
        return Err(ReservoirError::InvalidParameter("J must be at least 1".into()));
    }
    Ok(2 * j - 1 + 2 * character.epsilon())
}

/// `μ = 2(n_g + n_e − 1)`.
pub fn mu_for(t: &Transition) -> u32 {
    2 * (t.n_g + t.n_e - 1)
}

/// Truncation index `N_J`. Negative values mean the `J` term is absent.
pub fn nj_for(t: &Transition, j: u32) -> Result<i64, ReservoirError> {
    let (lo, hi) = t.j_range();
    if j < lo || j > hi {
        return Err(ReservoirError::InvalidParameter(format!(
            "J = {j} outside the selection-rule range [{lo}, {hi}]"
        )));
    }
    Ok(2 * i64::from(t.n_e + t.n_g)
        - 4
        - i64::from(j)
        - i64::from(t.l_e)
        - i64::from(t.l_g)
        - i64::from(t.epsilon()))
}
