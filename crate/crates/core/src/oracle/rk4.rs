//! Classical RK4 on `i ȧ_e = Σ g_k a_k`, `i ȧ_k = δ_k a_k + g_k a_e` in the
//! frame rotating at `ω0`. `|a_e|` equals the interaction-picture `|c_e|`.

use num_complex::Complex64;

use super::{Discretization, OracleError, Survival};

const DEFAULT_STEP: f64 = 0.01;

/// `-i H a`.
fn apply(delta: &[f64], g: &[f64], a: &[Complex64], out: &mut [Complex64]) {
    let minus_i = Complex64::new(0.0, -1.0);
    let ae = a[0];
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..delta.len() {
        let ak = a[k + 1];
        acc += g[k] * ak;
        out[k + 1] = minus_i * (delta[k] * ak + g[k] * ae);
    }
    out[0] = minus_i * acc;
}

pub(super) fn survival(
    modes: &Discretization,
    omega0: f64,
    tau: f64,
    dt: Option<f64>,
) -> Result<Survival, OracleError> {
    let delta: Vec<f64> = modes.modes.iter().map(|m| m.omega - omega0).collect();
    let g: Vec<f64> = modes.modes.iter().map(|m| m.g).collect();
    let h_norm = delta.iter().fold(0.0_f64, |m, d| m.max(d.abs())) + modes.total_coupling().sqrt();
    let dt = dt.unwrap_or(if h_norm > 0.0 { DEFAULT_STEP / h_norm } else { tau });
    let steps = (tau / dt).ceil().max(1.0);
    if steps > 1e9 {
        return Err(OracleError::Config(format!(
            "RK4 would need {steps:e} steps; use exact diagonalization"
        )));
    }
    let steps = steps as usize;
    let h = tau / steps as f64;

    let n = delta.len() + 1;
    let zero = Complex64::new(0.0, 0.0);
    let mut a = vec![zero; n];
    a[0] = Complex64::new(1.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);
    let mut norm_error: f64 = 0.0;
    for _ in 0..steps {
        apply(&delta, &g, &a, &mut k1);
        for i in 0..n {
            tmp[i] = a[i] + 0.5 * h * k1[i];
        }
        apply(&delta, &g, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = a[i] + 0.5 * h * k2[i];
        }
        apply(&delta, &g, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = a[i] + h * k3[i];
        }
        apply(&delta, &g, &tmp, &mut k4);
        for i in 0..n {
            a[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let norm: f64 = a.iter().map(|c| c.norm_sqr()).sum();
        norm_error = norm_error.max((norm - 1.0).abs());
    }
    if !a[0].norm_sqr().is_finite() {
        return Err(OracleError::IntegratorFailure("RK4 amplitude diverged".into()));
    }
    Ok(Survival { probability: a[0].norm_sqr(), norm_error })
}
