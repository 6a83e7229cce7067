use super::ReservoirError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coef: f64,
    pub power: u32,
}

/// `R(ω) = Σ_i c_i ω^(p_i) / ω_X^(p_i − 1) / [1 + (ω/ω_X)^2]^μ` for `ω ≥ 0`,
/// and zero below.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    terms: Vec<PowerTerm>,
    mu: u32,
    omega_x: f64,
}

/// `t^p (1 + t^2)^(−μ)`, arranged so that large `t` neither overflows nor
/// loses the leading power.
fn shape(t: f64, p: i32, mu: i32) -> f64 {
    if t <= 1.0 {
        t.powi(p) * (1.0 + t * t).powi(-mu)
    } else {
        t.powi(p - 2 * mu) * (1.0 + 1.0 / (t * t)).powi(-mu)
    }
}

/// d/dt of [`shape`].
fn shape_deriv(t: f64, p: i32, mu: i32) -> f64 {
    let first = if p == 0 { 0.0 } else { f64::from(p) * shape(t, p - 1, mu) };
    let second = if mu == 0 { 0.0 } else { 2.0 * f64::from(mu) * shape(t, p + 1, mu + 1) };
    first - second
}

impl Spectrum {
    pub fn new(terms: Vec<PowerTerm>, mu: u32, omega_x: f64) -> Result<Self, ReservoirError> {
        if terms.is_empty() {
            return Err(ReservoirError::InvalidParameter("spectrum has no terms".into()));
        }
        if !(omega_x > 0.0 && omega_x.is_finite()) {
            return Err(ReservoirError::InvalidParameter(format!("omega_x = {omega_x} must be positive")));
        }
        if terms.iter().any(|t| !t.coef.is_finite()) {
            return Err(ReservoirError::InvalidParameter("non-finite coefficient".into()));
        }
        Ok(Self { terms, mu, omega_x })
    }

    pub(crate) fn from_validated(terms: Vec<PowerTerm>, mu: u32, omega_x: f64) -> Self {
        Self { terms, mu, omega_x }
    }

    /// Frequency-independent reservoir `R(ω) = level` for `ω ≥ 0`.
    pub fn flat(level: f64) -> Result<Self, ReservoirError> {
        if !(level > 0.0 && level.is_finite()) {
            return Err(ReservoirError::InvalidParameter(format!("flat level {level} must be positive")));
        }
        Ok(Self::from_validated(vec![PowerTerm { coef: level, power: 0 }], 0, 1.0))
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn omega_x(&self) -> f64 {
        self.omega_x
    }

    pub fn max_power(&self) -> u32 {
        self.terms.iter().map(|t| t.power).max().unwrap_or(0)
    }

    pub fn min_power(&self) -> u32 {
        self.terms.iter().map(|t| t.power).min().unwrap_or(0)
    }

    /// `∫_0^∞ R` converges.
    pub fn is_integrable(&self) -> bool {
        2 * self.mu > self.max_power() + 1
    }

    /// `∫ R(ω)/ω^2` converges at infinity, which is all the measurement kernel needs.
    pub fn is_kernel_integrable(&self) -> bool {
        2 * self.mu + 1 > self.max_power()
    }

    pub fn eval(&self, omega: f64) -> f64 {
        if omega < 0.0 {
            return 0.0;
        }
        let t = omega / self.omega_x;
        let mu = self.mu as i32;
        self.omega_x * self.terms.iter().map(|term| term.coef * shape(t, term.power as i32, mu)).sum::<f64>()
    }

    /// `dR/dω`, zero for `ω < 0`.
    pub fn derivative(&self, omega: f64) -> f64 {
        if omega < 0.0 {
            return 0.0;
        }
        let t = omega / self.omega_x;
        let mu = self.mu as i32;
        self.terms.iter().map(|term| term.coef * shape_deriv(t, term.power as i32, mu)).sum()
    }

    /// Upper bound `B` with `|R(ω)| ≤ B ω^(q)` for all `ω > 0`, where
    /// `q = p_max − 2μ`; returned as `(B, q)`. Only meaningful for `ω ≥ ω_X`
    /// when lower powers are present, which is where it is used.
    pub fn tail_envelope(&self) -> (f64, i32) {
        let q = self.max_power() as i32 - 2 * self.mu as i32;
        let wx = self.omega_x;
        // For ω ≥ ω_X each term obeys c ω_X t^p (1+t²)^(−μ) ≤ c ω_X t^(p−2μ) ≤ c ω_X t^q.
        let b = self.terms.iter().map(|t| t.coef.abs()).sum::<f64>() * wx * wx.powi(-q);
        (b, q)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            terms: self.terms.iter().map(|t| PowerTerm { coef: t.coef * factor, power: t.power }).collect(),
            mu: self.mu,
            omega_x: self.omega_x,
        }
    }
}
