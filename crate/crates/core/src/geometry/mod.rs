//! Distance-generating functions and prox-mappings over the simplex.
//!
//! Three setups are provided:
//!
//! | kind      | `omega(x)`                           | norm | `alpha`         | `Q`          |
//! |-----------|--------------------------------------|------|-----------------|--------------|
//! | Euclidean | `1/2 ||x||_2^2`                      | l2   | 1               | 1            |
//! | Entropy   | `sum (x_i + d) ln(x_i + d)`, `d=δ/n` | l1   | 1               | `1 + n/δ`    |
//! | p-norm    | `1/2 ||x||_p^2`, `p = 1 + 1/ln n`    | l1   | `(p - 1)/e^2`   | none         |
//!
//! The entropy modulus `alpha = 1` is a Pinsker-type choice; the p-norm
//! modulus combines the `(p - 1)` strong convexity of `1/2 ||.||_p^2` with
//! `||x||_1 <= n^(1 - 1/p) ||x||_p <= e ||x||_p`.

mod entropy;
mod pnorm;
mod simplex;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GmviError, Result};
use crate::problems::{dot, NormPair, Point};

pub use simplex::project_simplex_euclidean;

/// Default entropy shift.
pub const ENTROPY_DELTA: f64 = 1e-16;
/// Tolerance of the first-order check run on every prox output in debug builds.
pub const PROX_OPTIMALITY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GeometryKind {
    Euclidean,
    Entropy { delta: f64 },
    PNorm { p: f64 },
}

/// Name-only geometry selector, as used on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryChoice {
    Euclidean,
    Entropy,
    PNorm,
}

impl GeometryChoice {
    pub const ALL: [GeometryChoice; 3] = [GeometryChoice::Euclidean, GeometryChoice::PNorm, GeometryChoice::Entropy];

    pub fn build(self, n: usize) -> Geometry {
        match self {
            GeometryChoice::Euclidean => Geometry::euclidean(n),
            GeometryChoice::Entropy => Geometry::entropy(n),
            GeometryChoice::PNorm => Geometry::pnorm(n),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GeometryChoice::Euclidean => "euclidean",
            GeometryChoice::Entropy => "entropy",
            GeometryChoice::PNorm => "pnorm",
        }
    }
}

impl fmt::Display for GeometryChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for GeometryChoice {
    type Err = GmviError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" => Ok(GeometryChoice::Euclidean),
            "entropy" => Ok(GeometryChoice::Entropy),
            "pnorm" | "p-norm" => Ok(GeometryChoice::PNorm),
            other => Err(GmviError::Parse(format!("unknown geometry '{other}'"))),
        }
    }
}

/// A distance-generating function on the `n`-simplex with its constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    kind: GeometryKind,
    n: usize,
    alpha: f64,
    q: Option<f64>,
    norms: NormPair,
}

/// `D = sqrt(max omega - min omega)` over the simplex and `Omega = sqrt(2/alpha) D`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusReport {
    pub d: f64,
    pub omega: f64,
}

impl Geometry {
    pub fn euclidean(n: usize) -> Self {
        Geometry { kind: GeometryKind::Euclidean, n, alpha: 1.0, q: Some(1.0), norms: NormPair::L2L2 }
    }

    pub fn entropy(n: usize) -> Self {
        Self::entropy_with_delta(n, ENTROPY_DELTA).expect("default delta is valid")
    }

    pub fn entropy_with_delta(n: usize, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(GmviError::InvalidConfig(format!("entropy shift must be positive, got {delta}")));
        }
        Ok(Geometry {
            kind: GeometryKind::Entropy { delta },
            n,
            alpha: 1.0,
            q: Some(1.0 + n as f64 / delta),
            norms: NormPair::L1LInf,
        })
    }

    /// `p = 1 + 1/ln n` for `n >= 3`, `p = 1.5` below.
    pub fn pnorm(n: usize) -> Self {
        let p = if n >= 3 { 1.0 + 1.0 / (n as f64).ln() } else { 1.5 };
        Self::pnorm_with_p(n, p).expect("default exponent is valid")
    }

    pub fn pnorm_with_p(n: usize, p: f64) -> Result<Self> {
        if !(p > 1.0 && p <= 2.0) {
            return Err(GmviError::InvalidConfig(format!("p-norm exponent must lie in (1, 2], got {p}")));
        }
        let alpha = (p - 1.0) / std::f64::consts::E.powi(2);
        Ok(Geometry { kind: GeometryKind::PNorm { p }, n, alpha, q: None, norms: NormPair::L1LInf })
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn choice(&self) -> GeometryChoice {
        match self.kind {
            GeometryKind::Euclidean => GeometryChoice::Euclidean,
            GeometryKind::Entropy { .. } => GeometryChoice::Entropy,
            GeometryKind::PNorm { .. } => GeometryChoice::PNorm,
        }
    }

    pub fn label(&self) -> &'static str {
        self.choice().label()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Strong-convexity modulus.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Lipschitz constant of `grad omega`, when it exists.
    pub fn q(&self) -> Option<f64> {
        self.q
    }

    pub fn norms(&self) -> NormPair {
        self.norms
    }

    /// `1 + Q^2 / alpha^2`, the prox-ratio constant of smooth setups.
    pub fn q_ratio(&self) -> Option<f64> {
        self.q.map(|q| 1.0 + q * q / (self.alpha * self.alpha))
    }

    pub fn omega(&self, x: &[f64]) -> f64 {
        match self.kind {
            GeometryKind::Euclidean => 0.5 * dot(x, x),
            GeometryKind::Entropy { delta } => {
                let d = delta / x.len() as f64;
                x.iter().map(|&v| (v + d) * (v + d).ln()).sum()
            }
            GeometryKind::PNorm { p } => 0.5 * pnorm::pnorm(x, p).powi(2),
        }
    }

    pub fn grad_omega(&self, x: &[f64]) -> Vec<f64> {
        match self.kind {
            GeometryKind::Euclidean => x.to_vec(),
            GeometryKind::Entropy { delta } => {
                let d = delta / x.len() as f64;
                x.iter().map(|&v| (v + d).ln() + 1.0).collect()
            }
            GeometryKind::PNorm { p } => pnorm::grad_half_sq_pnorm(x, p),
        }
    }

    /// Bregman distance `V(x, z) = omega(z) - omega(x) - <grad omega(x), z - x>`,
    /// clamped at zero.
    pub fn bregman(&self, x: &[f64], z: &[f64]) -> f64 {
        let v = match self.kind {
            GeometryKind::Euclidean => 0.5 * x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(),
            GeometryKind::Entropy { delta } => {
                // sum (z+d) ln((z+d)/(x+d)) - (z - x), algebraically equal and better conditioned
                let d = delta / x.len() as f64;
                x.iter().zip(z).map(|(&a, &b)| (b + d) * ((b + d) / (a + d)).ln() - (b - a)).sum()
            }
            GeometryKind::PNorm { .. } => {
                let g = self.grad_omega(x);
                let lin: f64 = g.iter().zip(z.iter().zip(x)).map(|(gi, (zi, xi))| gi * (zi - xi)).sum();
                self.omega(z) - self.omega(x) - lin
            }
        };
        v.max(0.0)
    }

    /// `P_x(phi) = argmin_{z in simplex} <phi, z> + V(x, z)`.
    pub fn prox(&self, x: &Point, phi: &[f64]) -> Result<Point> {
        if x.dim() != self.n {
            return Err(GmviError::DimensionMismatch { expected: self.n, got: x.dim() });
        }
        if phi.len() != self.n {
            return Err(GmviError::DimensionMismatch { expected: self.n, got: phi.len() });
        }
        if let Some(i) = phi.iter().position(|v| !v.is_finite()) {
            return Err(GmviError::ProxFailure { geometry: self.label(), detail: format!("phi[{i}] is not finite") });
        }
        let z = match self.kind {
            GeometryKind::Euclidean => {
                let shifted: Vec<f64> = x.as_slice().iter().zip(phi).map(|(a, b)| a - b).collect();
                simplex::project_coords(&shifted)
            }
            GeometryKind::Entropy { delta } => entropy::prox_entropy_coords(x.as_slice(), phi, delta)?,
            GeometryKind::PNorm { p } => pnorm::prox_pnorm_coords(x.as_slice(), phi, p)?,
        };
        let z = Point::from_solver(z);
        if cfg!(debug_assertions) {
            let scale = 1.0 + phi.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let viol = self.prox_optimality_violation(x.as_slice(), phi, z.as_slice());
            if viol > PROX_OPTIMALITY_TOL * scale {
                return Err(GmviError::ProxFailure {
                    geometry: self.label(),
                    detail: format!("first-order condition violated by {viol:e}"),
                });
            }
        }
        Ok(z)
    }

    /// `max_v <phi + grad omega(z) - grad omega(x), z - v>` over the simplex.
    /// Zero at the exact prox point; positive values measure the violation.
    pub fn prox_optimality_violation(&self, x: &[f64], phi: &[f64], z: &[f64]) -> f64 {
        let gz = self.grad_omega(z);
        let gx = self.grad_omega(x);
        let c: Vec<f64> = phi.iter().zip(gz.iter().zip(&gx)).map(|(f, (a, b))| f + a - b).collect();
        let cmin = c.iter().cloned().fold(f64::INFINITY, f64::min);
        dot(&c, z) - cmin
    }

    /// Radius constants from the analytic extremes of `omega` on the simplex.
    pub fn omega_radius(&self) -> RadiusReport {
        let n = self.n as f64;
        let (max, min) = match self.kind {
            GeometryKind::Euclidean => (0.5, 0.5 / n),
            GeometryKind::Entropy { .. } => {
                let vertex = Point::vertex(self.n, 0);
                let center = Point::center(self.n);
                (self.omega(vertex.as_slice()), self.omega(center.as_slice()))
            }
            GeometryKind::PNorm { p } => (0.5, 0.5 * n.powf(2.0 / p - 2.0)),
        };
        let d = (max - min).max(0.0).sqrt();
        RadiusReport { d, omega: (2.0 / self.alpha).sqrt() * d }
    }
}

/// Free-function form of [`Geometry::prox`].
pub fn prox_map(g: &Geometry, x: &Point, phi: &[f64]) -> Result<Point> {
    g.prox(x, phi)
}

/// Entropy prox; fails with `InvalidConfig` for other geometries.
pub fn prox_entropy(g: &Geometry, x: &Point, phi: &[f64]) -> Result<Point> {
    match g.kind {
        GeometryKind::Entropy { .. } => g.prox(x, phi),
        _ => Err(GmviError::InvalidConfig("prox_entropy needs the entropy geometry".into())),
    }
}

/// p-norm prox; fails with `InvalidConfig` for other geometries.
pub fn prox_pnorm(g: &Geometry, x: &Point, phi: &[f64]) -> Result<Point> {
    match g.kind {
        GeometryKind::PNorm { .. } => g.prox(x, phi),
        _ => Err(GmviError::InvalidConfig("prox_pnorm needs the p-norm geometry".into())),
    }
}
