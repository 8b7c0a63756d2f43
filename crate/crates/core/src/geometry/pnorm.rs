use crate::error::{GmviError, Result};

const MAX_ITERATIONS: usize = 400;

/// `||x||_p`
pub(crate) fn pnorm(x: &[f64], p: f64) -> f64 {
    let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * x.iter().map(|v| (v.abs() / scale).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Gradient of `1/2 ||x||_p^2`: `sign(x_i) |x_i|^(p-1) ||x||_p^(2-p)`.
pub(crate) fn grad_half_sq_pnorm(x: &[f64], p: f64) -> Vec<f64> {
    let norm = pnorm(x, p);
    if norm == 0.0 {
        return vec![0.0; x.len()];
    }
    // |x_i|^(p-1) ||x||^(2-p) = ||x|| (|x_i| / ||x||)^(p-1)
    x.iter().map(|&v| v.signum() * norm * (v.abs() / norm).powf(p - 1.0)).collect()
}

/// Prox step of `1/2 ||.||_p^2` over the simplex.
///
/// KKT gives `z_i = c * (h_i - mu)_+^(1/(p-1))` with `h = grad(x) - phi`.
/// Writing `g_i = (h_i - mu)_+^(1/(p-1))`, the simplex constraint and the
/// norm factor collapse to the scalar equation `sum g = ||g||_p^(2-p)`.
/// With `m = max h - mu` and `r_i = ((h_i - mu)_+ / m)^(1/(p-1))` (so
/// `max r = 1`) it becomes `m * sum r = ||r||_p^(2-p)`. The left side wins
/// for large `m` and loses as `m -> 0`; strong convexity makes the crossing
/// unique and it lies in `(0, n + 1]`. Root search on `m`, then `z = r / sum r`.
pub(crate) fn prox_pnorm_coords(x: &[f64], phi: &[f64], p: f64) -> Result<Vec<f64>> {
    let n = x.len();
    let grad = grad_half_sq_pnorm(x, p);
    let h: Vec<f64> = grad.iter().zip(phi).map(|(g, f)| g - f).collect();
    let h_max = h.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !h_max.is_finite() {
        return Err(failure(format!("non-finite prox input (max h = {h_max})")));
    }
    // offsets h_i - h_max <= 0, computed once
    let rel: Vec<f64> = h.iter().map(|v| v - h_max).collect();
    let expo = 1.0 / (p - 1.0);

    let shape = |m: f64| -> Vec<f64> { rel.iter().map(|&r| ((r + m) / m).max(0.0).powf(expo)).collect() };
    let excess = |m: f64| -> f64 {
        let r = shape(m);
        m * r.iter().sum::<f64>() - pnorm(&r, p).powf(2.0 - p)
    };

    // Illinois steps inside the bracket, with a bisection whenever a step
    // fails to halve it; the m -> 0 end is only reached by bisection
    let mut lo = 0.0_f64;
    let mut hi = n as f64 + 1.0;
    let mut f_hi = excess(hi);
    if f_hi <= 0.0 {
        return Err(failure(format!("upper bracket m = {hi} does not dominate")));
    }
    let mut f_lo = f64::NAN;
    let mut last_side = 0i8;
    // bracket width when the current run of secant steps began
    let mut anchor = hi - lo;
    let mut run = 0;
    let mut iters = 0;
    while hi - lo > 1e-15 * hi {
        if iters == MAX_ITERATIONS {
            return Err(failure(format!("root search did not close the bracket [{lo}, {hi}]")));
        }
        iters += 1;
        if hi - lo <= 0.5 * anchor {
            anchor = hi - lo;
            run = 0;
        }
        let mid = 0.5 * (lo + hi);
        let secant = if f_lo.is_nan() { mid } else { hi - f_hi * (hi - lo) / (f_hi - f_lo) };
        let m = if run < 3 && secant > lo && secant < hi { secant } else { mid };
        run += 1;
        let f = excess(m);
        if f == 0.0 {
            hi = m;
            break;
        }
        if f > 0.0 {
            hi = m;
            f_hi = f;
            if last_side == 1 {
                f_lo *= 0.5;
            }
            last_side = 1;
        } else {
            lo = m;
            f_lo = f;
            if last_side == -1 {
                f_hi *= 0.5;
            }
            last_side = -1;
        }
    }
    let r = shape(hi);
    let total: f64 = r.iter().sum();
    Ok(r.into_iter().map(|v| v / total).collect())
}

fn failure(detail: String) -> GmviError {
    GmviError::ProxFailure { geometry: "p-norm", detail }
}
