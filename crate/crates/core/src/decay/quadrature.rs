use std::f64::consts::{LN_10, PI};

use super::{DecayError, DecayMethod, DecayResult, RWA_LIMIT};
use crate::profile::MeasurementSchedule;
use crate::quad::{adaptive_gk15_pieces, GaussLegendre};
use crate::reservoir::{Reservoir, Spectrum};
use crate::specfun::sinc_sq;

const TWO_PI: f64 = 2.0 * PI;
/// Per-side cap on far-field lobes.
const MAX_FAR_LOBES: usize = 4_000_000;
const TV_POINTS_PER_DECADE: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Lobes `[2πk, 2π(k+1)]` of `sinc²(u/2)` integrated directly on each side.
    pub near_lobes: usize,
    pub nodes_per_lobe: usize,
    pub rel_tol: f64,
    /// Upper limit of the integral, in units of `max(ω_X, ω0)`.
    pub max_omega_factor: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { near_lobes: 64, nodes_per_lobe: 15, rel_tol: 1e-9, max_omega_factor: 50.0 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), DecayError> {
        let bad = |m: &str| Err(DecayError::Config(m.into()));
        if self.near_lobes < 1 {
            return bad("near_lobes must be at least 1");
        }
        if self.nodes_per_lobe < 5 {
            return bad("nodes_per_lobe must be at least 5");
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-2) {
            return bad("rel_tol must lie in (0, 1e-2)");
        }
        if !(self.max_omega_factor >= 10.0 && self.max_omega_factor.is_finite()) {
            return bad("max_omega_factor must be at least 10");
        }
        Ok(())
    }
}

/// One side of resonance in `u = |ω − ω0|/ν`, with `ω = ω0 + sign·ν·u`.
struct Side<'a> {
    spec: &'a Spectrum,
    omega0: f64,
    nu: f64,
    sign: f64,
    /// Upper end of `u` on this side.
    end: f64,
}

impl Side<'_> {
    fn omega(&self, u: f64) -> f64 {
        self.omega0 + self.sign * self.nu * u
    }

    fn integrand(&self, u: f64) -> f64 {
        sinc_sq(0.5 * u) * self.spec.eval(self.omega(u))
    }

    /// `h(u) = 2 R(ω(u)) / u²`, the non-oscillating part of `sinc²(u/2) R`.
    fn h(&self, u: f64) -> f64 {
        2.0 * self.spec.eval(self.omega(u)) / (u * u)
    }

    fn dh(&self, u: f64) -> f64 {
        let w = self.omega(u);
        2.0 * self.sign * self.nu * self.spec.derivative(w) / (u * u) - 4.0 * self.spec.eval(w) / (u * u * u)
    }
}

struct NearPart {
    value: f64,
    error: f64,
}

fn near_part(side: &Side, cfg: &QuadratureConfig, fine: &GaussLegendre, coarse: &GaussLegendre) -> NearPart {
    let mut value = 0.0;
    let mut error = 0.0;
    for k in 0..cfg.near_lobes {
        let a = TWO_PI * k as f64;
        if a >= side.end {
            break;
        }
        let b = (TWO_PI * (k + 1) as f64).min(side.end);
        let f = |u| side.integrand(u);
        let v = fine.integrate(f, a, b);
        error += (v - coarse.integrate(f, a, b)).abs();
        value += v;
    }
    NearPart { value, error }
}

/// Geometric sampling of `h'` on `[start, end]` with suffix sums of its
/// variation, for the remainder bound of the oscillatory lobe walk.
struct VariationTable {
    grid: Vec<f64>,
    dh: Vec<f64>,
    suffix: Vec<f64>,
}

impl VariationTable {
    fn new(side: &Side, start: f64) -> Self {
        let decades = (side.end / start).log10().max(0.0);
        let n = (decades * TV_POINTS_PER_DECADE).ceil() as usize + 2;
        let step = (side.end / start).ln() / (n - 1) as f64;
        let grid: Vec<f64> =
            (0..n).map(|i| if i + 1 == n { side.end } else { start * (step * i as f64).exp() }).collect();
        let dh: Vec<f64> = grid.iter().map(|&u| side.dh(u)).collect();
        let mut suffix = vec![0.0; n];
        for i in (0..n - 1).rev() {
            suffix[i] = suffix[i + 1] + (dh[i + 1] - dh[i]).abs();
        }
        Self { grid, dh, suffix }
    }

    /// Estimated total variation of `h'` over `[a, end]`.
    fn variation_from(&self, a: f64, dh_a: f64) -> f64 {
        let i = self.grid.partition_point(|&g| g < a);
        if i >= self.grid.len() {
            return 0.0;
        }
        (dh_a - self.dh[i]).abs() + self.suffix[i]
    }
}

struct FarPart {
    smooth: f64,
    smooth_err: f64,
    smooth_converged: bool,
    start: f64,
}

/// `∫_start^end h(u) du`, integrated in `s = ln u`.
fn far_smooth(side: &Side, start: f64) -> FarPart {
    let (lo, hi) = (start.ln(), side.end.ln());
    let pieces = ((hi - lo) / LN_10).ceil().max(1.0) as usize * 2;
    let out = adaptive_gk15_pieces(
        |s| {
            let u = s.exp();
            2.0 * side.spec.eval(side.omega(u)) / u
        },
        lo,
        hi,
        pieces,
        0.0,
        1e-13,
        4000,
    );
    FarPart { smooth: out.value, smooth_err: out.error, smooth_converged: out.converged, start }
}

struct OscPart {
    value: f64,
    bound: f64,
    capped: bool,
}

/// `−∫_start^end h(u) cos u du` lobe by lobe, stopping once both the last lobe
/// and the integration-by-parts remainder fall below `rel_tol · scale`.
fn far_oscillatory(side: &Side, start: f64, scale: f64, rel_tol: f64, rule: &GaussLegendre) -> OscPart {
    let table = VariationTable::new(side, start);
    let end_terms = side.h(side.end).abs() + side.dh(side.end).abs();
    let target = rel_tol * scale;
    let mut value = 0.0;
    let mut a = start;
    for _ in 0..MAX_FAR_LOBES {
        let b = (a + TWO_PI).min(side.end);
        let lobe = -rule.integrate(|u| side.h(u) * u.cos(), a, b);
        value += lobe;
        if b >= side.end {
            return OscPart { value, bound: 0.0, capped: false };
        }
        a = b;
        if lobe.abs() < target {
            let dh_a = side.dh(a);
            let bound = dh_a.abs() + table.variation_from(a, dh_a) + end_terms;
            if bound < target {
                return OscPart { value, bound, capped: false };
            }
        }
    }
    let dh_a = side.dh(a);
    let bound = dh_a.abs() + table.variation_from(a, dh_a) + end_terms;
    OscPart { value, bound, capped: true }
}

/// `∫_(u_end)^∞ sinc²(u/2) R du` above the hard cutoff `Ω`, from the power-law
/// envelope `R(ω) ≤ B ω^q` valid for `ω ≥ ω_X`.
fn truncation_bound(spec: &Spectrum, omega0: f64, nu: f64, cutoff: f64) -> f64 {
    let (b, q) = spec.tail_envelope();
    let q = f64::from(q);
    let shrink = 1.0 - omega0 / cutoff;
    4.0 * nu * b * cutoff.powf(q - 1.0) / ((1.0 - q) * shrink * shrink)
}

/// Γ = 2π ∫_0^∞ F_τ(ω − ω0) R(ω) dω by lobe-wise quadrature in `u = (ω − ω0)/ν`.
///
/// The first `near_lobes` lobes on each side are integrated with Gauss-Legendre.
/// Beyond them `sinc²(u/2) = 2(1 − cos u)/u²`; the smooth `2R/u²` part is
/// integrated adaptively in `ln u` and the oscillating part by a lobe walk
/// with an explicit remainder bound. The integral is cut at
/// `max_omega_factor · max(ω_X, ω0)` and the power-law tail beyond is bounded.
pub fn modified_rate_quadrature(
    r: &impl Reservoir,
    omega0: f64,
    m: &MeasurementSchedule,
    cfg: &QuadratureConfig,
) -> Result<DecayResult, DecayError> {
    cfg.validate()?;
    if !(omega0 > 0.0 && omega0.is_finite()) {
        return Err(DecayError::Domain(format!("omega0 = {omega0} must be positive")));
    }
    let spec = r.spectrum();
    if !spec.is_kernel_integrable() {
        return Err(DecayError::Domain(format!(
            "reservoir with exponent {} and mu = {} is not integrable against the profile",
            spec.max_power(),
            spec.mu()
        )));
    }
    let r0 = spec.eval(omega0);
    if r0.is_nan() || r0 <= 0.0 {
        return Err(DecayError::Domain(format!("R(omega0) = {r0} must be positive")));
    }
    let nu = m.nu();
    let cutoff = cfg.max_omega_factor * spec.omega_x().max(omega0);
    let sides = [
        Side { spec: &spec, omega0, nu, sign: 1.0, end: (cutoff - omega0) / nu },
        Side { spec: &spec, omega0, nu, sign: -1.0, end: omega0 / nu },
    ];

    let fine = GaussLegendre::new(cfg.nodes_per_lobe);
    let coarse = GaussLegendre::new(cfg.nodes_per_lobe - 4);
    let far_start = TWO_PI * cfg.near_lobes as f64;

    let mut total = 0.0;
    let mut error = 0.0;
    let mut converged = true;
    let mut far = Vec::new();
    for side in &sides {
        let near = near_part(side, cfg, &fine, &coarse);
        total += near.value;
        error += near.error;
        if side.end > far_start {
            let part = far_smooth(side, far_start);
            total += part.smooth;
            error += part.smooth_err;
            converged &= part.smooth_converged;
            far.push((side, part));
        }
    }
    let scale = total.abs();
    for (side, part) in &far {
        let osc = far_oscillatory(side, part.start, scale, cfg.rel_tol, &fine);
        total += osc.value;
        error += osc.bound;
        converged &= !osc.capped;
    }
    error += truncation_bound(&spec, omega0, nu, cutoff);

    let gamma0 = TWO_PI * r0;
    let ratio = total / gamma0;
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(DecayError::Domain(format!("quadrature produced ratio {ratio}")));
    }
    Ok(DecayResult {
        ratio,
        gamma0,
        method: DecayMethod::Quadrature,
        err_estimate: error / total,
        rwa_warning: nu / omega0 >= RWA_LIMIT,
        converged,
        hierarchy_warning: false,
        breakdown: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decay::ratio_analytic_simple;
    use crate::reservoir::{
        builtin_transition, FullReservoir, Multipole, PowerTerm, ReservoirTerm, SimpleReservoir,
    };

    fn sched(nu: f64) -> MeasurementSchedule {
        MeasurementSchedule::new(nu).unwrap()
    }

    fn builtin_ratio(name: &str, y: f64) -> DecayResult {
        let b = builtin_transition(name).unwrap();
        modified_rate_quadrature(&b.reservoir, b.omega0, &sched(y), &QuadratureConfig::default()).unwrap()
    }

    /// Brute-force oracle: composite Simpson over `ω ∈ [0, 50 ω_X]` with a
    /// grid fine enough to resolve every lobe.
    fn brute_force_ratio(spec: &Spectrum, omega0: f64, nu: f64) -> f64 {
        let top = 50.0 * spec.omega_x();
        let near = 400.0 * TWO_PI * nu;
        let mut sum = 0.0;
        let mut simpson = |a: f64, b: f64, n: usize| {
            let n = n.max(2) & !1;
            let h = (b - a) / n as f64;
            let f = |w: f64| {
                let u = (w - omega0) / nu;
                sinc_sq(0.5 * u) * spec.eval(w) / nu
            };
            let inner: f64 = (1..n).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
            sum += (f(a) + f(b) + inner) * h / 3.0;
        };
        let lo = (omega0 - near).max(0.0);
        let hi = omega0 + near;
        let panels = |a: f64, b: f64, per_lobe: f64| ((b - a) / (TWO_PI * nu) * per_lobe) as usize;
        simpson(0.0, lo, panels(0.0, lo, 64.0));
        simpson(lo, hi, panels(lo, hi, 256.0));
        simpson(hi, top, panels(hi, top, 16.0));
        sum / (TWO_PI * spec.eval(omega0))
    }

    #[test]
    fn config_validation() {
        let ok = QuadratureConfig::default();
        assert!(ok.validate().is_ok());
        assert!(QuadratureConfig { near_lobes: 0, ..ok }.validate().is_err());
        assert!(QuadratureConfig { nodes_per_lobe: 4, ..ok }.validate().is_err());
        assert!(QuadratureConfig { rel_tol: 0.05, ..ok }.validate().is_err());
        assert!(QuadratureConfig { max_omega_factor: 5.0, ..ok }.validate().is_err());
    }

    #[test]
    fn rejects_non_integrable() {
        let s = Spectrum::new(vec![PowerTerm { coef: 1.0, power: 5 }], 2, 10.0).unwrap();
        let err = modified_rate_quadrature(&s, 1.0, &sched(1e-3), &QuadratureConfig::default());
        assert!(matches!(err, Err(DecayError::Domain(_))));
    }

    #[test]
    fn dipole_near_one() {
        let r = builtin_ratio("2P-1S", 1e-3);
        assert!((r.ratio - 1.0).abs() < 0.02, "{}", r.ratio);
        assert!(r.converged && !r.rwa_warning);
        assert!(r.err_estimate < 1e-6);
    }

    #[test]
    fn quadrupole_matches_closed_form() {
        let r = builtin_ratio("3D-1S", 1e-3);
        let a = ratio_analytic_simple(3, 6, 411.1, 1e-3).unwrap();
        assert!((r.ratio - a.ratio).abs() / r.ratio < 0.02, "{} vs {}", r.ratio, a.ratio);
        assert!((r.ratio - 6.38).abs() / 6.38 < 0.05);
    }

    #[test]
    fn matches_brute_force_at_desk_scale() {
        // Frozen from the Simpson oracle above, re-checked here.
        for (eta, mu, y) in [(1, 4, 1e-2), (3, 6, 1e-2), (3, 6, 3e-2), (5, 8, 5e-2)] {
            let res = SimpleReservoir::new(1.0, eta, mu, 50.0).unwrap();
            let spec = res.spectrum();
            let oracle = brute_force_ratio(&spec, 1.0, y);
            let got = modified_rate_quadrature(&res, 1.0, &sched(y), &QuadratureConfig::default()).unwrap();
            assert!((got.ratio - oracle).abs() / oracle < 1e-5, "eta {eta} y {y}: {} vs {oracle}", got.ratio);
        }
    }

    #[test]
    fn desk_scale_frozen_values() {
        // Independent high-resolution quadrature, ω_X = 50, μ = 6, η = 3.
        let res = SimpleReservoir::new(1.0, 3, 6, 50.0).unwrap();
        for (y, expect) in [(1e-3, 1.094316), (1e-2, 1.943160), (3e-2, 3.829480)] {
            let got = modified_rate_quadrature(&res, 1.0, &sched(y), &QuadratureConfig::default()).unwrap();
            assert!((got.ratio - expect).abs() < 2e-6, "y {y}: {}", got.ratio);
        }
    }

    #[test]
    fn flat_reservoir_is_markovian() {
        for (omega0, nu) in [(1.0, 1e-3), (1e3, 1.0), (5.0, 2e-6)] {
            let s = Spectrum::flat(0.7).unwrap();
            let r = modified_rate_quadrature(&s, omega0, &sched(nu), &QuadratureConfig::default()).unwrap();
            assert!((r.ratio - 1.0).abs() < 1e-3, "{}", r.ratio);
            // Both ends cut the unit-area profile.
            let missing = nu / (PI * omega0) * (1.0 + 1.0 / 49.0);
            assert!((r.ratio - (1.0 - missing)).abs() < 1e-3 * missing + 1e-8);
        }
    }

    #[test]
    fn ratio_invariant_under_rescaling() {
        let base = SimpleReservoir::new(1.0, 3, 6, 411.1).unwrap();
        let cfg = QuadratureConfig::default();
        let r1 = modified_rate_quadrature(&base, 1.0, &sched(1e-3), &cfg).unwrap().ratio;
        for s in [1e-3, 7.5, 1e15] {
            let scaled = SimpleReservoir::new(1.0, 3, 6, 411.1 * s).unwrap();
            let r2 = modified_rate_quadrature(&scaled, s, &sched(1e-3 * s), &cfg).unwrap().ratio;
            assert!(((r2 - r1) / r1).abs() < 1e-10, "s {s}: {r1} vs {r2}");
        }
    }

    #[test]
    fn ratio_independent_of_d() {
        let cfg = QuadratureConfig::default();
        let r = |d| {
            let res = SimpleReservoir::new(d, 5, 8, 365.4).unwrap();
            modified_rate_quadrature(&res, 1.0, &sched(2e-3), &cfg).unwrap().ratio
        };
        let one = r(1.0);
        for d in [0.1, 10.0] {
            assert!(((r(d) - one) / one).abs() < 1e-12);
        }
    }

    #[test]
    fn two_term_reservoir_against_closed_form() {
        let full = FullReservoir::new(
            Multipole::Electric,
            6,
            400.0,
            (2, 3),
            vec![ReservoirTerm::new(2, 0, 1.0), ReservoirTerm::new(3, 0, 0.1)],
            false,
        )
        .unwrap();
        let q = modified_rate_quadrature(&full, 1.0, &sched(1e-3), &QuadratureConfig::default()).unwrap();
        let a = crate::decay::ratio_analytic_full(&full, 400.0, 1e-3).unwrap();
        assert!((q.ratio - a.ratio).abs() / q.ratio < 0.05, "{} vs {}", q.ratio, a.ratio);
    }

    #[test]
    fn large_rate_flagged() {
        let r = builtin_ratio("3D-1S", 1.0);
        assert!(r.rwa_warning);
        assert!(r.ratio > 1.0);
    }
}
