//! Fixed and adaptive Gaussian quadrature on finite intervals.

use std::f64::consts::PI;

/// n-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        if n == 1 {
            return Self { nodes: vec![0.0], weights: vec![2.0] };
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d.is_finite() { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>()
    }
}

const GK15_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK15_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Weights of the embedded 7-point Gauss rule, at `GK15_X[1], [3], [5], [7]`.
const G7_W: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// 15-point Kronrod estimate and `|K15 − G7|` on `[a, b]`.
pub fn gauss_kronrod_15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut k = GK15_WK[7] * fc;
    let mut g = G7_W[3] * fc;
    for i in 0..7 {
        let dx = half * GK15_X[i];
        let s = f(mid - dx) + f(mid + dx);
        k += GK15_WK[i] * s;
        if i % 2 == 1 {
            g += G7_W[i / 2] * s;
        }
    }
    (k * half, ((k - g) * half).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOutcome {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Globally adaptive Gauss-Kronrod 7-15: bisect the worst interval until the
/// summed error is below `max(abs_tol, rel_tol·|value|)`.
pub fn adaptive_gk15(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> QuadOutcome {
    adaptive_gk15_pieces(f, a, b, 1, abs_tol, rel_tol, max_intervals)
}

/// [`adaptive_gk15`] starting from `pieces` equal subintervals.
pub fn adaptive_gk15_pieces(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    pieces: usize,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> QuadOutcome {
    if a == b {
        return QuadOutcome { value: 0.0, error: 0.0, converged: true };
    }
    let pieces = pieces.max(1);
    let width = (b - a) / pieces as f64;
    let mut parts: Vec<(f64, f64, f64, f64)> = (0..pieces)
        .map(|i| {
            let lo = a + i as f64 * width;
            let hi = if i + 1 == pieces { b } else { lo + width };
            let (v, e) = gauss_kronrod_15(&f, lo, hi);
            (lo, hi, v, e)
        })
        .collect();
    let max_intervals = max_intervals.max(pieces);
    loop {
        let value: f64 = parts.iter().map(|p| p.2).sum();
        let error: f64 = parts.iter().map(|p| p.3).sum();
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target || !error.is_finite() {
            return QuadOutcome { value, error, converged: error.is_finite() };
        }
        if parts.len() >= max_intervals {
            return QuadOutcome { value, error, converged: false };
        }
        let worst =
            parts.iter().enumerate().max_by(|x, y| x.1 .3.total_cmp(&y.1 .3)).map(|(i, _)| i).unwrap();
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            return QuadOutcome { value, error, converged: false };
        }
        let (v1, e1) = gauss_kronrod_15(&f, lo, m);
        let (v2, e2) = gauss_kronrod_15(&f, m, hi);
        parts.push((lo, m, v1, e1));
        parts.push((m, hi, v2, e2));
    }
}
