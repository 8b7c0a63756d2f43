//! Slow reference computations for cross-checking the fast paths.
//!
//! Nothing here calls [`Geometry::prox`]: the brute-force prox minimizes
//! `<phi, z> + V(x, z)` directly, using only [`Geometry::grad_omega`].

use crate::error::{GmviError, Result};
use crate::geometry::{Geometry, GeometryKind};
use crate::problems::{Point, ProblemInstance};
use crate::solvers::{run_neg_ls, RunStatus, SolverConfig};

/// Target gap of [`reference_solution`].
pub const REFERENCE_GAP: f64 = 1e-10;
/// Line-search parameters of [`reference_solution`].
pub const REFERENCE_PARAMS: (f64, f64) = (0.8, 0.5);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Cap on each bisection in [`brute_prox`]; 1100 halvings reach the
    /// smallest subnormal from 1.
    pub max_bisections: usize,
    pub grid_resolution: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_bisections: 1100, grid_resolution: 1e-3 }
    }
}

fn objective(g: &Geometry, x: &[f64], phi: &[f64], z: &[f64]) -> f64 {
    phi.iter().zip(z).map(|(a, b)| a * b).sum::<f64>() + g.bregman(x, z)
}

/// Minimizes `<phi, z> + V(x, z)` over the simplex. The objective gradient
/// is `phi + grad w(z) - grad w(x)`.
///
/// Euclidean and entropy `omega` are separable: nested bisection, on each
/// coordinate for `grad w(z)_i = -c_i - mu` and on the multiplier `mu` for
/// `sum z = 1`. The p-norm case bisects on the dual multiplier instead.
pub fn brute_prox(g: &Geometry, x: &Point, phi: &[f64], cfg: &OracleConfig) -> Point {
    match g.kind() {
        GeometryKind::Euclidean | GeometryKind::Entropy { .. } => separable_bisection(g, x, phi, cfg),
        GeometryKind::PNorm { p } => pnorm_dual_bisection(g, x, phi, p, cfg),
    }
}

fn separable_bisection(g: &Geometry, x: &Point, phi: &[f64], cfg: &OracleConfig) -> Point {
    let n = x.dim();
    let gx = g.grad_omega(x.as_slice());
    let c: Vec<f64> = phi.iter().zip(&gx).map(|(p, v)| p - v).collect();
    let g0 = g.grad_omega(&vec![0.0; n]);
    let g1 = g.grad_omega(&vec![1.0; n]);

    // minimizer of c_i z + w_i(z) + mu z on [0, 1], all coordinates at once
    let coords = |mu: f64| -> Vec<f64> {
        let target: Vec<f64> = c.iter().map(|ci| -ci - mu).collect();
        let mut lo = vec![0.0; n];
        let mut hi = vec![1.0; n];
        for _ in 0..cfg.max_bisections {
            let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
            if mid.iter().zip(&lo).zip(&hi).all(|((m, a), b)| m <= a || m >= b) {
                break;
            }
            let gm = g.grad_omega(&mid);
            for i in 0..n {
                if gm[i] > target[i] {
                    hi[i] = mid[i];
                } else {
                    lo[i] = mid[i];
                }
            }
        }
        (0..n).map(|i| if g0[i] >= target[i] { 0.0 } else if g1[i] <= target[i] { 1.0 } else { lo[i] }).collect()
    };

    // sum of coords(mu) is nonincreasing in mu: all ones at mu_lo, all zeros at mu_hi
    let mut mu_lo = (0..n).map(|i| -c[i] - g1[i]).fold(f64::INFINITY, f64::min);
    let mut mu_hi = (0..n).map(|i| -c[i] - g0[i]).fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..cfg.max_bisections {
        let mid = 0.5 * (mu_lo + mu_hi);
        if mid <= mu_lo || mid >= mu_hi {
            break;
        }
        if coords(mid).iter().sum::<f64>() > 1.0 {
            mu_lo = mid;
        } else {
            mu_hi = mid;
        }
    }
    let z = coords(mu_lo);
    let total: f64 = z.iter().sum();
    Point::new(z.into_iter().map(|v| v / total).collect()).expect("normalized coordinates lie on the simplex")
}

/// Fenchel dual of the p-norm prox. With `h = 1/2 ||.||_p^2` on `R^n` and
/// `h* = 1/2 ||.||_q^2`, `1/p + 1/q = 1`, eliminating the sign multipliers
/// leaves the concave scalar problem `max_mu -mu - h*((-c - mu)_+)`. Its
/// maximizer makes `z(mu) = grad h*((-c - mu)_+)` sum to one; `z(mu)` sums
/// to less as `mu` grows, so bisection on `mu` finds it.
fn pnorm_dual_bisection(g: &Geometry, x: &Point, phi: &[f64], p: f64, cfg: &OracleConfig) -> Point {
    let q = p / (p - 1.0);
    let gx = g.grad_omega(x.as_slice());
    let c: Vec<f64> = phi.iter().zip(&gx).map(|(p, v)| p - v).collect();
    let primal = |mu: f64| -> Vec<f64> {
        let w: Vec<f64> = c.iter().map(|ci| (-ci - mu).max(0.0)).collect();
        let top = w.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            return w;
        }
        // ||w||_q^(2-q) |w_i|^(q-1) = ||w||_q (w_i / ||w||_q)^(q-1)
        let norm = top * w.iter().map(|v| (v / top).powf(q)).sum::<f64>().powf(1.0 / q);
        w.iter().map(|v| norm * (v / norm).powf(q - 1.0)).collect()
    };
    let mass = |mu: f64| primal(mu).iter().sum::<f64>();

    let mut mu_hi = c.iter().map(|ci| -ci).fold(f64::NEG_INFINITY, f64::max);
    let mut step = 1.0;
    let mut mu_lo = mu_hi - step;
    while mass(mu_lo) < 1.0 {
        step *= 2.0;
        mu_lo = mu_hi - step;
    }
    for _ in 0..cfg.max_bisections {
        let mid = 0.5 * (mu_lo + mu_hi);
        if mid <= mu_lo || mid >= mu_hi {
            break;
        }
        if mass(mid) > 1.0 {
            mu_lo = mid;
        } else {
            mu_hi = mid;
        }
    }
    let z = primal(mu_lo);
    let total: f64 = z.iter().sum();
    Point::new(z.into_iter().map(|v| v / total).collect()).expect("normalized coordinates lie on the simplex")
}

/// Exhaustive grid minimizer of `<phi, z> + V(x, z)` over the 3-simplex.
pub fn grid_prox_3(g: &Geometry, x: &Point, phi: &[f64], resolution: f64) -> Point {
    assert_eq!(x.dim(), 3, "grid oracle is for n = 3");
    let steps = (1.0 / resolution).round() as usize;
    let mut best = (f64::INFINITY, vec![1.0, 0.0, 0.0]);
    for i in 0..=steps {
        for j in 0..=(steps - i) {
            let a = i as f64 / steps as f64;
            let b = j as f64 / steps as f64;
            let z = [a, b, (1.0 - a - b).max(0.0)];
            let f = objective(g, x.as_slice(), phi, &z);
            if f < best.0 {
                best = (f, z.to_vec());
            }
        }
    }
    Point::new(best.1).expect("grid points lie on the simplex")
}

/// High-accuracy solution from a long N-EG-LS run to gap `1e-10`.
pub fn reference_solution(g: &Geometry, inst: &ProblemInstance, budget: usize) -> Result<Point> {
    let (gamma0, lambda) = REFERENCE_PARAMS;
    let cfg = SolverConfig::neg_ls(gamma0, lambda).with_tol(REFERENCE_GAP).with_max_prox(budget).with_certificate(false);
    let res = run_neg_ls(g, inst, &cfg)?;
    match res.status {
        RunStatus::Converged => Ok(res.x_final),
        _ => Err(GmviError::NonConvergent { budget, final_gap: res.final_gap }),
    }
}
