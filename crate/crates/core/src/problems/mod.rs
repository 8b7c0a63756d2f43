//! Operator model and the benchmark instance families.
//!
//! Every instance is a variational inequality over the standard simplex in
//! `R^n`. Random families (MHPH, RG) draw from ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`, and map a uniform `u in [0, 1)` to `(a, b)`
//! as `a + (b - a) * u`, so instance bytes depend only on `(n, seed)`.

mod document;
mod families;
mod lipschitz;
mod operator;
mod point;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GmviError, Result};

pub use document::InstanceDocument;
pub use families::{
    make_kojima_shindo, make_mhph, make_rg, make_sun, make_watson, make_watson_with, watson_matrix, WatsonOffset,
};
pub use lipschitz::{lipschitz_constant, spectral_norm, KS_LIPSCHITZ_SAFETY, KS_LIPSCHITZ_SAMPLES};
pub use operator::{AffineMatrix, NormPair, OperatorSpec};
pub use point::Point;
pub(crate) use operator::{dot, kojima_shindo_jacobian, l2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    KS,
    WAT,
    SUN,
    MHPH,
    RG,
    Custom,
}

impl Family {
    pub fn is_seeded(&self) -> bool {
        matches!(self, Family::MHPH | Family::RG)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::KS => "KS",
            Family::WAT => "WAT",
            Family::SUN => "SUN",
            Family::MHPH => "MHPH",
            Family::RG => "RG",
            Family::Custom => "Custom",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = GmviError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ks" => Ok(Family::KS),
            "wat" | "watson" => Ok(Family::WAT),
            "sun" => Ok(Family::SUN),
            "mhph" => Ok(Family::MHPH),
            "rg" => Ok(Family::RG),
            "custom" => Ok(Family::Custom),
            other => Err(GmviError::Parse(format!("unknown instance family '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monotonicity {
    Monotone,
    GeneralizedMonotone,
    Unknown,
}

/// An operator over the simplex together with where it came from.
///
/// Immutable once built; share it freely between concurrent runs.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    name: String,
    operator: OperatorSpec,
    family: Family,
    seed: Option<u64>,
    monotonicity: Monotonicity,
}

impl ProblemInstance {
    pub(crate) fn from_parts(
        name: impl Into<String>,
        operator: OperatorSpec,
        family: Family,
        seed: Option<u64>,
        monotonicity: Monotonicity,
    ) -> Self {
        debug_assert_eq!(seed.is_some(), family.is_seeded());
        ProblemInstance { name: name.into(), operator, family, seed, monotonicity }
    }

    /// A user-supplied affine operator `F(x) = A x + b`.
    pub fn custom_affine(
        name: impl Into<String>,
        matrix: ndarray::Array2<f64>,
        offset: Vec<f64>,
        monotonicity: Monotonicity,
    ) -> Result<Self> {
        let n = offset.len();
        if n == 0 {
            return Err(GmviError::InvalidInstance("empty offset vector".into()));
        }
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(GmviError::InvalidInstance(format!(
                "matrix is {}x{}, offset has length {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !matrix.iter().chain(offset.iter()).all(|v| v.is_finite()) {
            return Err(GmviError::InvalidInstance("non-finite entry".into()));
        }
        let operator = OperatorSpec::Affine { matrix: AffineMatrix::Dense(matrix), offset };
        Ok(Self::from_parts(name, operator, Family::Custom, None, monotonicity))
    }

    /// The constant operator `F(x) = c`.
    pub fn constant(name: impl Into<String>, value: Vec<f64>) -> Result<Self> {
        let n = value.len();
        Self::custom_affine(name, ndarray::Array2::zeros((n, n)), value, Monotonicity::Monotone)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.operator.dim()
    }

    pub fn operator(&self) -> &OperatorSpec {
        &self.operator
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }

    /// `F(x)` for a simplex point.
    pub fn eval_operator(&self, x: &Point) -> Result<Vec<f64>> {
        if x.dim() != self.n() {
            return Err(GmviError::DimensionMismatch { expected: self.n(), got: x.dim() });
        }
        Ok(self.eval(x.as_slice()))
    }

    /// `F(x)` for any vector of the right length.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n(), "operator dimension mismatch");
        let mut out = vec![0.0; x.len()];
        self.operator.apply(x, &mut out);
        out
    }
}
