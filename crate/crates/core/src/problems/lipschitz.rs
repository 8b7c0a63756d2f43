use rand::Rng;

use super::families::rng_for;
use super::{kojima_shindo_jacobian, l2, AffineMatrix, NormPair, OperatorSpec, ProblemInstance};
use crate::error::Result;

/// Number of simplex samples behind the Kojima-Shindo estimate.
pub const KS_LIPSCHITZ_SAMPLES: usize = 10_000;
/// Multiplier applied to the largest sampled Jacobian norm.
pub const KS_LIPSCHITZ_SAFETY: f64 = 1.1;

const KS_SAMPLE_SEED: u64 = 0x4b53;
const POWER_TOL: f64 = 1e-8;
const POWER_MAX_ITERS: usize = 20_000;

/// Lipschitz constant of `F` from the primal norm to the dual norm.
///
/// Affine operators get exact values (`max |A_ij|` for l1 -> l_inf, the
/// spectral norm for l2). The quadratic Kojima-Shindo map gets a sampled
/// heuristic: the largest Jacobian norm over seeded simplex samples, times
/// `KS_LIPSCHITZ_SAFETY`. It is not a certified bound.
pub fn lipschitz_constant(inst: &ProblemInstance, norms: NormPair) -> Result<f64> {
    match (inst.operator(), norms) {
        (OperatorSpec::Affine { matrix, .. }, NormPair::L1LInf) => Ok(matrix.max_abs()),
        (OperatorSpec::Affine { matrix, .. }, NormPair::L2L2) => Ok(spectral_norm(matrix)),
        (OperatorSpec::KojimaShindo, norms) => Ok(kojima_shindo_estimate(norms)),
    }
}

fn kojima_shindo_estimate(norms: NormPair) -> f64 {
    let mut rng = rng_for(KS_SAMPLE_SEED);
    let mut best: f64 = 0.0;
    for _ in 0..KS_LIPSCHITZ_SAMPLES {
        // uniform on the simplex via normalized exponentials
        let mut x: Vec<f64> = (0..4).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let s: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= s);
        let jac = kojima_shindo_jacobian(&x);
        let norm = match norms {
            NormPair::L1LInf => jac.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs())),
            NormPair::L2L2 => {
                let dense = ndarray::Array2::from_shape_fn((4, 4), |(i, j)| jac[i][j]);
                spectral_norm(&AffineMatrix::Dense(dense))
            }
        };
        best = best.max(norm);
    }
    best * KS_LIPSCHITZ_SAFETY
}

/// Largest singular value by power iteration on `A^T A`, stopped at relative
/// eigen-residual `1e-8`.
pub fn spectral_norm(matrix: &AffineMatrix) -> f64 {
    let n = matrix.dim();
    let mut rng = rng_for(0x5eed);
    let mut v: Vec<f64> = (0..n).map(|_| 1.0 + 0.1 * rng.gen::<f64>()).collect();
    let nv = l2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut av = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut lambda = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        matrix.apply(&v, &mut av);
        matrix.apply_transpose(&av, &mut w);
        // Rayleigh quotient of A^T A at unit v
        lambda = av.iter().map(|x| x * x).sum::<f64>();
        let nw = l2(&w);
        if nw == 0.0 {
            return 0.0;
        }
        let resid = w.iter().zip(&v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
        v.iter_mut().zip(&w).for_each(|(x, y)| *x = y / nw);
        if resid <= POWER_TOL * lambda {
            break;
        }
    }
    // one last Rayleigh quotient at the updated vector
    matrix.apply(&v, &mut av);
    lambda.max(av.iter().map(|x| x * x).sum::<f64>()).sqrt()
}
