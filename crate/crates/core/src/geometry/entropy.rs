use crate::error::{GmviError, Result};

const MAX_BISECTIONS: usize = 400;
const FEAS_TOL: f64 = 1e-12;

/// Prox step of the shifted entropy `sum (x_i + d) ln(x_i + d)`, `d = delta / n`.
///
/// The minimizer is `z_i = max(0, (x_i + d) exp(-phi_i - mu) - d)` with the
/// multiplier `mu` fixed by `sum z = 1`. With `s = -mu` and
/// `w_i = (x_i + d) exp(-(phi_i - min phi))` this reads
/// `sum max(0, w_i e^s - d) = 1`, which is monotone in `s` and is solved by
/// bisection on a bracket that always contains the root.
pub(crate) fn prox_entropy_coords(x: &[f64], phi: &[f64], delta: f64) -> Result<Vec<f64>> {
    let n = x.len();
    let d = delta / n as f64;
    let phi_min = phi.iter().cloned().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = x.iter().zip(phi).map(|(&xi, &pi)| (xi + d) * (-(pi - phi_min)).exp()).collect();
    let w_max = w.iter().cloned().fold(0.0, f64::max);
    if !(w_max > 0.0) || !w_max.is_finite() {
        return Err(failure(format!("degenerate weights (max {w_max})")));
    }

    let mass = |s: f64| -> f64 {
        let t = s.exp();
        w.iter().map(|&wi| (wi * t - d).max(0.0)).sum()
    };

    let mut lo = (d / w_max).ln();
    // mass(hi) >= 2 - d; the tighter (1 + d) / w_max can round to a mass just below 1
    let mut hi = ((2.0 + d) / w_max).ln();
    if !(mass(lo) <= 1.0 && mass(hi) >= 1.0) {
        return Err(failure(format!("bracket [{lo}, {hi}] does not contain the root")));
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..MAX_BISECTIONS {
        s = 0.5 * (lo + hi);
        let m = mass(s);
        if (m - 1.0).abs() <= FEAS_TOL {
            break;
        }
        if m > 1.0 {
            hi = s;
        } else {
            lo = s;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            s = 0.5 * (lo + hi);
            break;
        }
    }

    // Closed-form multiplier on the active set the bisection identified.
    let t = s.exp();
    let active: Vec<bool> = w.iter().map(|&wi| wi * t > d).collect();
    let k = active.iter().filter(|&&a| a).count();
    let w_active: f64 = w.iter().zip(&active).filter(|(_, &a)| a).map(|(wi, _)| wi).sum();
    let polished_t = (1.0 + k as f64 * d) / w_active;
    let consistent = w.iter().zip(&active).all(|(&wi, &a)| (wi * polished_t > d) == a);
    let t = if consistent && polished_t.is_finite() { polished_t } else { t };

    let z: Vec<f64> = w.iter().map(|&wi| (wi * t - d).max(0.0)).collect();
    let sum: f64 = z.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        return Err(failure(format!("mass {sum} after solve")));
    }
    Ok(z)
}

fn failure(detail: String) -> GmviError {
    GmviError::ProxFailure { geometry: "entropy", detail }
}
