//! Eigen-decomposition of the arrowhead Hamiltonian
//! `H = [[0, gᵀ], [g, diag(δ)]]`, `δ_k = ω_k − ω0`.
//!
//! Eigenvalues are the roots of `f(λ) = λ − Σ g_k²/(λ − δ_k)`, one in every gap
//! between consecutive `δ_k` and one beyond each end. The excited-state weight
//! of eigenvector `λ_j` is `w_j = 1/(1 + Σ g_k²/(λ_j − δ_k)²)`, so
//! `c_e(t) = Σ_j w_j exp(−i λ_j t)`.

use num_complex::Complex64;

use super::{Discretization, Survival};

/// Eigenpairs per work unit.
const CHUNK: usize = 256;

struct Poles {
    delta: Vec<f64>,
    g2: Vec<f64>,
}

/// Secular function written relative to pole `o`, with `λ = δ_o + x`.
struct Local<'a> {
    poles: &'a Poles,
    o: usize,
}

impl Local<'_> {
    /// `(ψ, ψ', Σ_{k≠o} g²/(d+x)²)` with `ψ(x) = x f(δ_o + x)`, which has no pole at `x = 0`.
    fn eval(&self, x: f64) -> (f64, f64, f64) {
        let p = self.poles;
        let d_o = p.delta[self.o];
        let mut s = 0.0;
        let mut s2 = 0.0;
        for (k, (&d, &g2)) in p.delta.iter().zip(&p.g2).enumerate() {
            if k == self.o {
                continue;
            }
            let gap = (d_o - d) + x;
            let t = g2 / gap;
            s += t;
            s2 += t / gap;
        }
        let lambda = d_o + x;
        let psi = x * (lambda - s) - p.g2[self.o];
        let dpsi = lambda + x - s + x * s2;
        (psi, dpsi, s2)
    }

    /// Root of `ψ` in `[lo, hi]`, where `ψ` changes sign. Safeguarded Newton.
    fn solve(&self, mut lo: f64, mut hi: f64, guess: f64) -> f64 {
        let (psi_lo, _, _) = self.eval(lo);
        let rising = psi_lo < 0.0;
        let mut x = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
        for _ in 0..200 {
            let (psi, dpsi, _) = self.eval(x);
            if psi == 0.0 {
                return x;
            }
            if (psi < 0.0) == rising {
                lo = x;
            } else {
                hi = x;
            }
            let newton = x - psi / dpsi;
            let next = if newton > lo && newton < hi && dpsi.is_finite() { newton } else { 0.5 * (lo + hi) };
            let tol = 4.0 * f64::EPSILON * next.abs().max(f64::MIN_POSITIVE);
            if (next - x).abs() <= tol || hi - lo <= tol {
                return next;
            }
            x = next;
        }
        x
    }

    fn weight(&self, x: f64) -> f64 {
        let (_, _, s2) = self.eval(x);
        let go = self.poles.g2[self.o];
        1.0 / (1.0 + go / (x * x) + s2)
    }
}

/// Initial offset from the one-pole linearisation `x (δ_o − S(0)) ≈ g_o²`.
fn linear_guess(local: &Local) -> f64 {
    let p = local.poles;
    let d_o = p.delta[local.o];
    let s0: f64 = p
        .delta
        .iter()
        .zip(&p.g2)
        .enumerate()
        .filter(|(k, _)| *k != local.o)
        .map(|(_, (&d, &g2))| g2 / (d_o - d))
        .sum();
    p.g2[local.o] / (d_o - s0)
}

/// `(λ_j, w_j)` for root index `j` in `0..=n`.
fn eigenpair(poles: &Poles, j: usize, reach: f64) -> (f64, f64) {
    let n = poles.delta.len();
    let (o, lo, hi) = if j == 0 {
        (0, -reach, 0.0)
    } else if j == n {
        (n - 1, 0.0, reach)
    } else {
        let (a, b) = (j - 1, j);
        let half = 0.5 * (poles.delta[b] - poles.delta[a]);
        let left = Local { poles, o: a };
        let (psi_mid, _, _) = left.eval(half);
        if psi_mid >= 0.0 {
            (a, 0.0, half)
        } else {
            (b, -half, 0.0)
        }
    };
    let local = Local { poles, o };
    let x = local.solve(lo, hi, linear_guess(&local));
    (poles.delta[o] + x, local.weight(x))
}

pub(super) fn survival(modes: &Discretization, omega0: f64, tau: f64) -> Survival {
    let mut coupled: Vec<(f64, f64)> =
        modes.modes.iter().filter(|m| m.g != 0.0).map(|m| (m.omega - omega0, m.g * m.g)).collect();
    if coupled.is_empty() {
        return Survival { probability: 1.0, norm_error: 0.0 };
    }
    coupled.sort_by(|a, b| a.0.total_cmp(&b.0));
    let poles =
        Poles { delta: coupled.iter().map(|c| c.0).collect(), g2: coupled.iter().map(|c| c.1).collect() };
    let n = poles.delta.len();
    let total: f64 = poles.g2.iter().sum();
    let widest = poles.delta[0].abs().max(poles.delta[n - 1].abs());
    let reach = widest + total.sqrt() + 1.0;

    // Fixed chunking keeps the summation order, and so every output bit,
    // independent of the thread count.
    let chunks = (n + 1).div_ceil(CHUNK);
    let threads = std::thread::available_parallelism().map_or(1, |t| t.get()).min(chunks);
    let mut partials: Vec<(usize, Complex64, f64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let poles = &poles;
                scope.spawn(move || {
                    (t..chunks)
                        .step_by(threads)
                        .map(|c| {
                            let mut amp = Complex64::new(0.0, 0.0);
                            let mut wsum = 0.0;
                            for j in c * CHUNK..((c + 1) * CHUNK).min(n + 1) {
                                let (lambda, w) = eigenpair(poles, j, reach);
                                amp += w * Complex64::from_polar(1.0, -lambda * tau);
                                wsum += w;
                            }
                            (c, amp, wsum)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    });
    partials.sort_by_key(|p| p.0);
    let amp: Complex64 = partials.iter().map(|p| p.1).sum();
    let wsum: f64 = partials.iter().map(|p| p.2).sum();
    Survival { probability: amp.norm_sqr(), norm_error: (wsum - 1.0).abs() }
}
