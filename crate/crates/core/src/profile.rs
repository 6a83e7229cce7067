//! Measurement-broadened line profile `F_τ(δ) = (τ/2π) sinc²(δτ/2)`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::specfun::sinc_sq;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("measurement rate must be positive and finite, got {0}")]
    InvalidRate(f64),
    #[error("tail approximation diverges at delta = 0")]
    AtResonance,
}

/// Measurements repeated every `τ = 1/ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSchedule {
    nu: f64,
}

impl MeasurementSchedule {
    pub fn new(nu: f64) -> Result<Self, ProfileError> {
        if nu > 0.0 && nu.is_finite() {
            Ok(Self { nu })
        } else {
            Err(ProfileError::InvalidRate(nu))
        }
    }

    pub fn from_interval(tau: f64) -> Result<Self, ProfileError> {
        Self::new(1.0 / tau)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn tau(&self) -> f64 {
        1.0 / self.nu
    }
}

pub fn profile_eval(m: &MeasurementSchedule, delta: f64) -> f64 {
    let tau = m.tau();
    tau / (2.0 * PI) * sinc_sq(0.5 * delta * tau)
}

/// Box of height `1/(2πν)` over `|δ| < πν`.
pub fn profile_resonant_approx(m: &MeasurementSchedule, delta: f64) -> f64 {
    if delta.abs() < PI * m.nu() {
        1.0 / (2.0 * PI * m.nu())
    } else {
        0.0
    }
}

/// `ν / (π δ²)`: `sin²` replaced by its mean 1/2.
pub fn profile_tail_approx(m: &MeasurementSchedule, delta: f64) -> Result<f64, ProfileError> {
    if delta == 0.0 {
        return Err(ProfileError::AtResonance);
    }
    Ok(m.nu() / (PI * delta * delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Composite Simpson with `n` (even) panels.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let inner: f64 = (1..n).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
        (f(a) + f(b) + inner) * h / 3.0
    }

    fn sched(nu: f64) -> MeasurementSchedule {
        MeasurementSchedule::new(nu).unwrap()
    }

    #[test]
    fn rejects_bad_rates() {
        assert!(MeasurementSchedule::new(0.0).is_err());
        assert!(MeasurementSchedule::new(-1.0).is_err());
        assert!(MeasurementSchedule::new(f64::INFINITY).is_err());
        assert_eq!(MeasurementSchedule::from_interval(4.0).unwrap().nu(), 0.25);
    }

    #[test]
    fn profile_examples() {
        let m = sched(0.7);
        assert_eq!(profile_eval(&m, 0.0), m.tau() / (2.0 * PI));
        assert!(profile_eval(&m, 2.0 * PI * m.nu()) < 1e-30);
    }

    #[test]
    fn profile_normalised() {
        for nu in [1e-3, 1.0, 250.0] {
            let m = sched(nu);
            let w = 1e4 * nu;
            // 40 Simpson panels per lobe of width 2πν.
            let n = (2.0 * w / (2.0 * PI * nu) * 40.0) as usize & !1;
            let total = simpson(|d| profile_eval(&m, d), -w, w, n);
            assert!((total - 1.0).abs() < 1e-4, "nu = {nu}: {total}");
        }
    }

    #[test]
    fn resonant_box() {
        let m = sched(3.0);
        assert_eq!(profile_resonant_approx(&m, 0.0), 1.0 / (2.0 * PI * 3.0));
        assert_eq!(profile_resonant_approx(&m, 2.0 * PI * 3.0), 0.0);
        // Width 2πν times height 1/(2πν).
        let n = 1_000_000;
        let h = 4.0 * PI * 3.0 / n as f64;
        let area: f64 =
            (0..n).map(|i| profile_resonant_approx(&m, -2.0 * PI * 3.0 + (i as f64 + 0.5) * h) * h).sum();
        assert!((area - 1.0).abs() < 1e-5);
    }

    #[test]
    fn tail_examples() {
        let m = sched(2.0);
        let v = profile_tail_approx(&m, PI * 2.0).unwrap();
        assert!((v - 1.0 / (PI.powi(3) * 2.0)).abs() < 1e-15);
        let r = profile_tail_approx(&m, 5.0).unwrap() / profile_tail_approx(&m, 10.0).unwrap();
        assert!((r - 4.0).abs() < 1e-14);
        assert_eq!(profile_tail_approx(&m, 0.0), Err(ProfileError::AtResonance));
    }

    #[test]
    fn tail_matches_lobe_average() {
        let m = sched(1.0);
        for k in [20.0, 200.0, 2000.0] {
            let (a, b) = (2.0 * PI * k, 2.0 * PI * (k + 1.0));
            let exact = simpson(|d| profile_eval(&m, d), a, b, 400);
            let tail = simpson(|d| profile_tail_approx(&m, d).unwrap(), a, b, 400);
            assert!((exact / tail - 1.0).abs() < 0.05, "lobe {k}");
        }
    }

    #[test]
    fn delta_sequence() {
        // Smooth test function: Gaussian centred away from δ = 0.
        let f = |d: f64| (-(d - 0.3).powi(2)).exp();
        let target = f(0.0);
        let mut prev = f64::INFINITY;
        for nu in [1e-1, 1e-2, 1e-3] {
            let m = sched(nu);
            let w = 12.0;
            let n = ((2.0 * w / (2.0 * PI * nu)) * 40.0) as usize & !1;
            let overlap = simpson(|d| profile_eval(&m, d) * f(d), -w, w, n);
            let err = (overlap - target).abs();
            assert!(err < prev, "nu = {nu}: {err} vs {prev}");
            prev = err;
        }
        assert!(prev < 1e-3);
    }

    proptest! {
        #[test]
        fn even_nonnegative_and_peaked(nu in 1e-6_f64..1e6, x in -1e4_f64..1e4) {
            let m = sched(nu);
            let d = x * nu;
            let v = profile_eval(&m, d);
            prop_assert!(v >= 0.0);
            prop_assert_eq!(v, profile_eval(&m, -d));
            prop_assert!(v <= m.tau() / (2.0 * PI));
        }
    }
}
