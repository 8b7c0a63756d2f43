use std::f64::consts::SQRT_2;

/// `alpha / (sqrt(2) L)`.
pub fn stepsize_lipschitz(alpha: f64, l: f64) -> f64 {
    alpha / (SQRT_2 * l)
}

/// Constant stepsize for a Hölder operator over a horizon of `k` iterations:
/// `alpha^((1+nu)/2) / (L (2 nu)^(nu/2)) * (1/k)^((1-nu)/2)`.
pub fn stepsize_holder(alpha: f64, l: f64, nu: f64, k: usize) -> f64 {
    if nu == 1.0 {
        return stepsize_lipschitz(alpha, l);
    }
    let k = k.max(1) as f64;
    alpha.powf((1.0 + nu) / 2.0) / (l * (2.0 * nu).powf(nu / 2.0)) * (1.0 / k).powf((1.0 - nu) / 2.0)
}
