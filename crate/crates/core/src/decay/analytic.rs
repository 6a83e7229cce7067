use std::f64::consts::PI;

use super::{DecayError, DecayMethod, DecayResult, RateBreakdown, RWA_LIMIT};
use crate::reservoir::{eta_for, FullReservoir};
use crate::specfun::beta;

/// Smallest `ω_X/ω0` for which the closed forms are reported without a warning.
pub const HIERARCHY_MIN: f64 = 10.0;

fn check_xy(x: f64, y: f64) -> Result<(), DecayError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(DecayError::Domain(format!("x = omega_x/omega0 = {x} must be positive")));
    }
    if !(y > 0.0 && y.is_finite()) {
        return Err(DecayError::Domain(format!("y = nu/omega0 = {y} must be positive")));
    }
    Ok(())
}

/// Tail weight `B(μ − (p−1)/2, (p−1)/2)` of a term with exponent `p`, or zero
/// when the step function `θ(p − 3/2)` removes it.
fn tail_beta(p: u32, mu: u32) -> Result<f64, DecayError> {
    if 2 * p < 3 {
        return Ok(0.0);
    }
    let half = (f64::from(p) - 1.0) / 2.0;
    let a = f64::from(mu) - half;
    if a <= 0.0 {
        return Err(DecayError::Domain(format!(
            "Beta argument mu - (p - 1)/2 = {a} is not positive (p = {p}, mu = {mu})"
        )));
    }
    Ok(beta(a, half)?)
}

/// Small-`ν` ratio for a single-term reservoir, in units `ω0 = 1`, `D = 1`:
/// `1 + (y/2π) x^(η−1) B(μ − (η−1)/2, (η−1)/2)`, exactly 1 for `η = 1`.
///
/// The breakdown holds `Γ_res = Γ0 = 2π/x^(η−1)` and `Γ_tail = y·B`.
pub fn ratio_analytic_simple(eta: u32, mu: u32, x: f64, y: f64) -> Result<DecayResult, DecayError> {
    check_xy(x, y)?;
    if eta == 0 || eta.is_multiple_of(2) {
        return Err(DecayError::Domain(format!("eta = {eta} must be a positive odd integer")));
    }
    let b = tail_beta(eta, mu)?;
    let gamma0 = 2.0 * PI / x.powi(eta as i32 - 1);
    let gamma_tail = y * b;
    let ratio = 1.0 + y * x.powi(eta as i32 - 1) * b / (2.0 * PI);
    Ok(DecayResult {
        ratio,
        gamma0,
        method: DecayMethod::AnalyticSimple,
        err_estimate: 0.0,
        rwa_warning: y >= RWA_LIMIT,
        converged: true,
        hierarchy_warning: x < HIERARCHY_MIN,
        breakdown: Some(RateBreakdown { gamma_res: gamma0, gamma_tail }),
    })
}

/// Multi-term generalisation: every `(J, r)` term contributes `ν D_Jr B_p` to
/// the tail, normalised by the leading-term rate `2π D_(J_min,0) ω0^η_min / ω_X^(η_min−1)`.
///
/// Units as in [`ratio_analytic_simple`], with `D` taken from `r`.
pub fn ratio_analytic_full(r: &FullReservoir, x: f64, y: f64) -> Result<DecayResult, DecayError> {
    check_xy(x, y)?;
    let d_lead = r.leading_coefficient();
    if d_lead == 0.0 {
        return Err(DecayError::Degenerate);
    }
    let eta_min = r.eta_min();
    let mut weighted = 0.0;
    for term in r.terms() {
        let eta_j = eta_for(term.j, r.character())?;
        // Lower end of the r-sum; zero for every physical η_J.
        let r0 = (0.75 - f64::from(eta_j) / 2.0).floor().max(0.0) as u32;
        if term.r < r0 {
            continue;
        }
        weighted += term.d / d_lead * tail_beta(r.term_power(term), r.mu())?;
    }
    let gamma0 = 2.0 * PI * d_lead / x.powi(eta_min as i32 - 1);
    let ratio = 1.0 + y * x.powi(eta_min as i32 - 1) * weighted / (2.0 * PI);
    Ok(DecayResult {
        ratio,
        gamma0,
        method: DecayMethod::AnalyticFull,
        err_estimate: 0.0,
        rwa_warning: y >= RWA_LIMIT,
        converged: true,
        hierarchy_warning: x < HIERARCHY_MIN,
        breakdown: Some(RateBreakdown { gamma_res: gamma0, gamma_tail: y * d_lead * weighted }),
    })
}

/// Golden-rule rate of each `J` channel alone, `2π D_J0 ω0^η_J / ω_X^(η_J−1)`,
/// using the reservoir's own `ω_X`.
pub fn free_rates_by_j(r: &FullReservoir, omega0: f64) -> Vec<(u32, f64)> {
    let (lo, hi) = r.j_range();
    (lo..=hi)
        .filter(|j| r.terms().iter().any(|t| t.j == *j))
        .map(|j| {
            let d: f64 = r.terms().iter().filter(|t| t.j == j && t.r == 0).map(|t| t.d).sum();
            let eta = eta_for(j, r.character()).unwrap() as i32;
            (j, 2.0 * PI * d * omega0.powi(eta) / r.omega_x().powi(eta - 1))
        })
        .collect()
}
