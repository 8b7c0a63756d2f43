//! Residual, gap and certificate computations.
//!
//! For `x` on the simplex and `gamma > 0` let `x+ = P_x(gamma F(x))`. Then
//!
//! ```text
//! R_gamma(x)   = (x - x+) / gamma
//! g(x)         = max_z <F(x), x - z>           = <F(x), x> - min_i F_i(x)
//! g~(x, phi)   = max_z <F(x) + phi, x - z>
//! phi_gamma(x) = F(x) - F(x+) + (grad omega(x+) - grad omega(x)) / gamma
//! ```
//!
//! and `x+` is an `(||phi_gamma(x)||_*, 0)`-strong solution: the perturbed gap
//! `g~(x+, phi_gamma(x))` is nonpositive.

use serde::Serialize;

use crate::error::{GmviError, Result};
use crate::geometry::Geometry;
use crate::problems::{dot, Point, ProblemInstance};

/// Floor used for the line-search stationarity test: a residual below
/// `STATIONARY_RTOL * (1 + ||F(x)||_*)` counts as zero.
pub const STATIONARY_RTOL: f64 = 1e-14;

/// `R_gamma(x)` together with the prox point it was computed from.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub vector: Vec<f64>,
    /// Primal-norm length of `vector`.
    pub norm: f64,
    pub x_plus: Point,
}

/// Witness that `x_plus` is an `(eps, tilde_gap_value)`-strong solution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    #[serde(skip)]
    pub x_plus: Point,
    #[serde(skip)]
    pub phi: Vec<f64>,
    pub eps: f64,
    #[serde(rename = "tilde_gap")]
    pub tilde_gap_value: f64,
    pub residual_norm: f64,
    #[serde(skip)]
    pub eps_bound: Option<f64>,
    pub gamma: f64,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(GmviError::InvalidConfig(format!("stepsize must be positive, got {gamma}")))
    }
}

fn check_dim(g: &Geometry, inst: &ProblemInstance, x: &Point) -> Result<()> {
    if g.n() != inst.n() {
        return Err(GmviError::DimensionMismatch { expected: inst.n(), got: g.n() });
    }
    if x.dim() != inst.n() {
        return Err(GmviError::DimensionMismatch { expected: inst.n(), got: x.dim() });
    }
    Ok(())
}

/// Residual from an already evaluated `F(x)`. One prox call.
pub fn residual_from_value(g: &Geometry, x: &Point, fx: &[f64], gamma: f64) -> Result<Residual> {
    check_gamma(gamma)?;
    let step: Vec<f64> = fx.iter().map(|v| gamma * v).collect();
    let x_plus = g.prox(x, &step)?;
    let vector: Vec<f64> = x.as_slice().iter().zip(x_plus.as_slice()).map(|(a, b)| (a - b) / gamma).collect();
    let norm = g.norms().primal(&vector);
    Ok(Residual { vector, norm, x_plus })
}

/// `R_gamma(x) = (x - P_x(gamma F(x))) / gamma`. One prox call.
pub fn residual(g: &Geometry, inst: &ProblemInstance, x: &Point, gamma: f64) -> Result<Residual> {
    check_dim(g, inst, x)?;
    let fx = inst.eval(x.as_slice());
    residual_from_value(g, x, &fx, gamma)
}

/// Vertex formula for the gap of the linear functional `v` at `x`, unclamped.
pub(crate) fn linear_gap(v: &[f64], x: &[f64]) -> f64 {
    let vmin = v.iter().cloned().fold(f64::INFINITY, f64::min);
    dot(v, x) - vmin
}

/// `g(x) = <F(x), x> - min_i F_i(x)`, clamped at zero.
pub fn gap(inst: &ProblemInstance, x: &Point) -> f64 {
    gap_from_value(&inst.eval(x.as_slice()), x.as_slice())
}

/// Gap when `F(x)` is already at hand.
pub fn gap_from_value(fx: &[f64], x: &[f64]) -> f64 {
    linear_gap(fx, x).max(0.0)
}

/// `g~(x, phi) = <F(x) + phi, x> - min_i (F(x) + phi)_i`, signed.
pub fn tilde_gap(inst: &ProblemInstance, x: &Point, phi: &[f64]) -> f64 {
    let v: Vec<f64> = inst.eval(x.as_slice()).iter().zip(phi).map(|(a, b)| a + b).collect();
    linear_gap(&v, x.as_slice())
}

/// Builds the certificate at `x+ = P_x(gamma F(x))`.
///
/// `eps_bound = L (gamma ||R||)^nu + Q ||R||` is filled in when `l` or `nu`
/// is given; it then needs both of them and the geometry's `Q`.
pub fn make_certificate(
    g: &Geometry,
    inst: &ProblemInstance,
    x: &Point,
    gamma: f64,
    l: Option<f64>,
    nu: Option<f64>,
) -> Result<Certificate> {
    check_dim(g, inst, x)?;
    check_gamma(gamma)?;
    let constants = match (l, nu) {
        (None, None) => None,
        (Some(l), Some(nu)) => {
            let q = g.q().ok_or(GmviError::MissingConstants("geometry has no gradient Lipschitz constant Q"))?;
            Some((l, nu, q))
        }
        (None, Some(_)) => return Err(GmviError::MissingConstants("Lipschitz constant L")),
        (Some(_), None) => return Err(GmviError::MissingConstants("Hölder exponent nu")),
    };

    let fx = inst.eval(x.as_slice());
    let res = residual_from_value(g, x, &fx, gamma)?;
    let f_plus = inst.eval(res.x_plus.as_slice());
    let gx = g.grad_omega(x.as_slice());
    let gp = g.grad_omega(res.x_plus.as_slice());
    let phi: Vec<f64> = (0..x.dim()).map(|i| fx[i] - f_plus[i] + (gp[i] - gx[i]) / gamma).collect();
    let eps = g.norms().dual(&phi);
    let shifted: Vec<f64> = f_plus.iter().zip(&phi).map(|(a, b)| a + b).collect();
    let tilde_gap_value = linear_gap(&shifted, res.x_plus.as_slice());
    let eps_bound = constants.map(|(l, nu, q)| l * (gamma * res.norm).powf(nu) + q * res.norm);

    Ok(Certificate { x_plus: res.x_plus, phi, eps, tilde_gap_value, residual_norm: res.norm, eps_bound, gamma })
}

/// `||x - P_x(gamma F(x))|| <= tol` in the geometry's primal norm.
pub fn is_strong_solution(g: &Geometry, inst: &ProblemInstance, x: &Point, gamma: f64, tol: f64) -> Result<bool> {
    let res = residual(g, inst, x, gamma)?;
    Ok(res.norm * gamma <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_kojima_shindo, make_sun};

    fn pt(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    fn constant(v: &[f64]) -> ProblemInstance {
        ProblemInstance::constant("const", v.to_vec()).unwrap()
    }

    #[test]
    fn residual_by_hand() {
        let inst = constant(&[1.0, 0.0]);
        let r = residual(&Geometry::euclidean(2), &inst, &pt(&[0.5, 0.5]), 0.5).unwrap();
        assert_eq!(r.x_plus.as_slice(), &[0.25, 0.75]);
        assert_eq!(r.vector, vec![0.5, -0.5]);
        assert!((r.norm - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constant_shift_has_zero_residual() {
        let inst = constant(&[3.0; 4]);
        for g in [Geometry::euclidean(4), Geometry::entropy(4), Geometry::pnorm(4)] {
            let r = residual(&g, &inst, &pt(&[0.1, 0.2, 0.3, 0.4]), 0.7).unwrap();
            assert!(r.norm < 1e-9, "{}", g.label());
        }
    }

    #[test]
    fn gap_examples() {
        assert_eq!(gap(&constant(&[1.0, 2.0, 3.0]), &pt(&[1.0, 0.0, 0.0])), 0.0);
        assert_eq!(gap(&make_kojima_shindo(), &Point::vertex(4, 0)), 3.0);
        let inst = constant(&[1.0, 2.0, 3.0]);
        let x = pt(&[0.2, 0.3, 0.5]);
        assert_eq!(tilde_gap(&inst, &x, &[0.0; 3]), gap(&inst, &x));
        assert_eq!(tilde_gap(&inst, &x, &[-1.0, -2.0, -3.0]), 0.0);
    }

    #[test]
    fn certificate_at_solution() {
        let inst = constant(&[0.0, 1.0, 1.0]);
        let c = make_certificate(&Geometry::euclidean(3), &inst, &Point::vertex(3, 0), 0.3, None, None).unwrap();
        assert!(c.eps <= 1e-10);
        assert_eq!(c.tilde_gap_value, 0.0);
        assert_eq!(c.eps_bound, None);
    }

    #[test]
    fn certificate_constants() {
        let inst = make_sun(4).unwrap();
        let x = Point::center(4);
        assert!(matches!(
            make_certificate(&Geometry::pnorm(4), &inst, &x, 0.1, Some(1.0), Some(1.0)),
            Err(GmviError::MissingConstants(_))
        ));
        assert!(make_certificate(&Geometry::euclidean(4), &inst, &x, 0.1, Some(1.0), None).is_err());
        let c = make_certificate(&Geometry::euclidean(4), &inst, &x, 0.1, Some(4.0), Some(1.0)).unwrap();
        assert!(c.eps <= c.eps_bound.unwrap() + 1e-8);
        assert!(c.tilde_gap_value <= 1e-8);
        let json: serde_json::Value = serde_json::to_value(&c).unwrap();
        let mut keys: Vec<_> = json.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["eps", "gamma", "residual_norm", "tilde_gap"]);
    }

    #[test]
    fn strong_solution_checks() {
        let g = Geometry::euclidean(3);
        assert!(is_strong_solution(&g, &constant(&[0.0; 3]), &pt(&[0.2, 0.3, 0.5]), 1.0, 1e-12).unwrap());
        assert!(is_strong_solution(&g, &constant(&[0.0, 2.0, 1.0]), &Point::vertex(3, 0), 1.0, 1e-12).unwrap());
        let sun = make_sun(4).unwrap();
        assert!(!is_strong_solution(&Geometry::euclidean(4), &sun, &Point::center(4), 1.0, 1e-6).unwrap());
    }
}
