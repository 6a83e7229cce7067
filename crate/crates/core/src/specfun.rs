//! Special functions used by the reservoir and rate formulas.
//!
//! Everything here is pure and works on plain `f64`/integer scalars. Angular
//! momenta are passed as `f64` and must be integers or half-integers; they are
//! converted to doubled integers internally so the Racah sum runs on exact
//! integer arithmetic for its factorial arguments.

use std::f64::consts::PI;
use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("{function}: argument out of domain ({reason})")]
    Domain { function: &'static str, reason: String },
}

fn domain(function: &'static str, reason: impl Into<String>) -> SpecFunError {
    SpecFunError::Domain { function, reason: reason.into() }
}

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of the Gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64, SpecFunError> {
    if !x.is_finite() || x <= 0.0 {
        return Err(domain("ln_gamma", format!("x = {x} must be finite and positive")));
    }
    // Γ(1) = Γ(2) = 1; the Lanczos sum leaves ~1e-16 of noise there.
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps the series in its accurate range.
        return Ok(lanczos_ln_gamma(x + 1.0) - x.ln());
    }
    Ok(lanczos_ln_gamma(x))
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    let z = x - 1.0;
    let mut series = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// Euler Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`, evaluated in log space.
pub fn beta(a: f64, b: f64) -> Result<f64, SpecFunError> {
    if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
        return Err(domain("beta", format!("arguments ({a}, {b}) must both be finite and positive")));
    }
    Ok(ln_beta_unchecked(a, b).exp())
}

fn ln_beta_unchecked(a: f64, b: f64) -> f64 {
    // Arguments are already validated, so the unwraps cannot fire.
    ln_gamma(a).unwrap() + ln_gamma(b).unwrap() - ln_gamma(a + b).unwrap()
}

/// Binomial coefficient `n! / (k! (n-k)!)`.
///
/// Exact while the value fits into a `u128`; beyond that falls back to the
/// multiplicative formula in floating point.
pub fn binomial(n: u64, k: u64) -> Result<f64, SpecFunError> {
    if k > n {
        return Err(domain("binomial", format!("k = {k} exceeds n = {n}")));
    }
    let k = k.min(n - k);
    let mut exact: Option<u128> = Some(1);
    let mut approx = 1.0_f64;
    for i in 0..k {
        let num = u128::from(n - i);
        let den = u128::from(i + 1);
        // c * (n - i) is always divisible by (i + 1) at this point.
        exact = exact.and_then(|c| c.checked_mul(num)).map(|c| c / den);
        approx *= (n - i) as f64 / (i + 1) as f64;
    }
    Ok(match exact {
        Some(c) => c as f64,
        None => approx,
    })
}

/// Below this magnitude `sinc_sq` switches to its Taylor series.
pub const SINC_SERIES_CUTOFF: f64 = 1e-4;

/// `(sin x / x)^2` with the removable singularity at zero.
pub fn sinc_sq(x: f64) -> f64 {
    if x.abs() < SINC_SERIES_CUTOFF {
        let x2 = x * x;
        1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 45.0
    } else {
        let s = x.sin() / x;
        s * s
    }
}

const LOG_FACTORIAL_TABLE: usize = 171;

fn log_factorials() -> &'static [f64; LOG_FACTORIAL_TABLE] {
    static TABLE: OnceLock<[f64; LOG_FACTORIAL_TABLE]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; LOG_FACTORIAL_TABLE];
        for n in 1..LOG_FACTORIAL_TABLE {
            t[n] = t[n - 1] + (n as f64).ln();
        }
        t
    })
}

/// `ln(n!)` for `0 <= n <= 170`.
fn ln_fact(n: i64) -> f64 {
    debug_assert!((0..LOG_FACTORIAL_TABLE as i64).contains(&n));
    log_factorials()[n as usize]
}

/// Converts an integer or half-integer to twice its value.
fn twice(function: &'static str, name: &str, v: f64) -> Result<i64, SpecFunError> {
    let t = 2.0 * v;
    if !t.is_finite() || t.fract() != 0.0 || t.abs() > 1e6 {
        return Err(domain(function, format!("{name} = {v} is not a half-integer")));
    }
    Ok(t as i64)
}

fn check_pair(tj: i64, tm: i64, name: &str) -> Result<(), SpecFunError> {
    if tj < 0 {
        return Err(domain("clebsch_gordan", format!("{name}: j must be non-negative")));
    }
    if tm.abs() > tj {
        return Err(domain("clebsch_gordan", format!("{name}: |m| exceeds j")));
    }
    if (tj - tm) % 2 != 0 {
        return Err(domain("clebsch_gordan", format!("{name}: j - m is not an integer")));
    }
    Ok(())
}

/// Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>` (Condon-Shortley phase).
///
/// Uses the Racah closed-form sum. Returns zero when `M != m1 + m2` or `J`
/// does not lie in `|j1 - j2| ..= j1 + j2` with integer steps.
pub fn clebsch_gordan(j1: f64, j2: f64, m1: f64, m2: f64, j: f64, m: f64) -> Result<f64, SpecFunError> {
    let f = "clebsch_gordan";
    let (tj1, tj2, tm1, tm2, tj, tm) = (
        twice(f, "j1", j1)?,
        twice(f, "j2", j2)?,
        twice(f, "m1", m1)?,
        twice(f, "m2", m2)?,
        twice(f, "J", j)?,
        twice(f, "M", m)?,
    );
    check_pair(tj1, tm1, "(j1, m1)")?;
    check_pair(tj2, tm2, "(j2, m2)")?;
    check_pair(tj, tm, "(J, M)")?;
    Ok(clebsch_gordan_twice(tj1, tj2, tm1, tm2, tj, tm))
}

/// Same as [`clebsch_gordan`] with every argument given as twice its value.
/// The (j, m) pairs must already be consistent.
pub(crate) fn clebsch_gordan_twice(tj1: i64, tj2: i64, tm1: i64, tm2: i64, tj: i64, tm: i64) -> f64 {
    if tm != tm1 + tm2 {
        return 0.0;
    }
    if tj < (tj1 - tj2).abs() || tj > tj1 + tj2 || (tj1 + tj2 - tj) % 2 != 0 {
        return 0.0;
    }
    // All of these are integers by the parity checks above.
    let a = (tj1 + tj2 - tj) / 2; // j1 + j2 - J
    let b = (tj1 - tm1) / 2; // j1 - m1
    let c = (tj2 + tm2) / 2; // j2 + m2
    let d = (tj - tj2 + tm1) / 2; // J - j2 + m1
    let e = (tj - tj1 - tm2) / 2; // J - j1 - m2

    let ln_pref = 0.5
        * (((tj + 1) as f64).ln()
            + ln_fact((tj + tj1 - tj2) / 2)
            + ln_fact((tj - tj1 + tj2) / 2)
            + ln_fact(a)
            - ln_fact((tj1 + tj2 + tj) / 2 + 1)
            + ln_fact((tj + tm) / 2)
            + ln_fact((tj - tm) / 2)
            + ln_fact((tj1 - tm1) / 2)
            + ln_fact((tj1 + tm1) / 2)
            + ln_fact((tj2 - tm2) / 2)
            + ln_fact((tj2 + tm2) / 2));

    let k_min = 0.max(-d).max(-e);
    let k_max = a.min(b).min(c);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let ln_den =
            ln_fact(k) + ln_fact(a - k) + ln_fact(b - k) + ln_fact(c - k) + ln_fact(d + k) + ln_fact(e + k);
        let term = (ln_pref - ln_den).exp();
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}
