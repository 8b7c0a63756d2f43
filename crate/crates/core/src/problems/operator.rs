use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

/// Primal/dual norm pair used to measure iterates and operator values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormPair {
    /// `||.||_1` on iterates, `||.||_inf` on operator values.
    L1LInf,
    /// Euclidean on both sides.
    L2L2,
}

impl NormPair {
    pub fn primal(&self, v: &[f64]) -> f64 {
        match self {
            NormPair::L1LInf => v.iter().map(|x| x.abs()).sum(),
            NormPair::L2L2 => l2(v),
        }
    }

    pub fn dual(&self, v: &[f64]) -> f64 {
        match self {
            NormPair::L1LInf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            NormPair::L2L2 => l2(v),
        }
    }

    pub fn primal_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.primal(&d)
    }

    pub fn dual_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.dual(&d)
    }
}

pub(crate) fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Matrix part of an affine operator.
#[derive(Clone, Debug, PartialEq)]
pub enum AffineMatrix {
    Dense(Array2<f64>),
    /// Upper-triangular matrix with unit diagonal and 2 above it. Applied in
    /// O(n) through suffix sums; entries are never stored.
    UnitUpperTwos { n: usize },
}

impl AffineMatrix {
    pub fn dim(&self) -> usize {
        match self {
            AffineMatrix::Dense(a) => a.nrows(),
            AffineMatrix::UnitUpperTwos { n } => *n,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match self {
            AffineMatrix::Dense(a) => a[[i, j]],
            AffineMatrix::UnitUpperTwos { .. } => match i.cmp(&j) {
                std::cmp::Ordering::Equal => 1.0,
                std::cmp::Ordering::Less => 2.0,
                std::cmp::Ordering::Greater => 0.0,
            },
        }
    }

    /// `out = A x`
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        match self {
            AffineMatrix::Dense(a) => {
                let y = a.dot(&ArrayView1::from(x));
                out.copy_from_slice(y.as_slice().expect("contiguous"));
            }
            AffineMatrix::UnitUpperTwos { n } => {
                let mut tail = 0.0;
                for i in (0..*n).rev() {
                    out[i] = x[i] + 2.0 * tail;
                    tail += x[i];
                }
            }
        }
    }

    /// `out = A^T y`
    pub fn apply_transpose(&self, y: &[f64], out: &mut [f64]) {
        match self {
            AffineMatrix::Dense(a) => {
                let v = a.t().dot(&ArrayView1::from(y));
                out.iter_mut().zip(v.iter()).for_each(|(o, v)| *o = *v);
            }
            AffineMatrix::UnitUpperTwos { n } => {
                let mut head = 0.0;
                for j in 0..*n {
                    out[j] = y[j] + 2.0 * head;
                    head += y[j];
                }
            }
        }
    }

    /// `max_ij |A_ij|`, the exact l1 -> l_inf operator norm.
    pub fn max_abs(&self) -> f64 {
        match self {
            AffineMatrix::Dense(a) => a.iter().fold(0.0, |m, v| m.max(v.abs())),
            AffineMatrix::UnitUpperTwos { n } => {
                if *n > 1 {
                    2.0
                } else {
                    1.0
                }
            }
        }
    }

    pub fn to_dense(&self) -> Array2<f64> {
        match self {
            AffineMatrix::Dense(a) => a.clone(),
            AffineMatrix::UnitUpperTwos { n } => Array2::from_shape_fn((*n, *n), |(i, j)| self.entry(i, j)),
        }
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.entry(i, j)).collect()).collect()
    }
}

/// The operator `F` of a variational inequality over the simplex.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorSpec {
    /// `F(x) = A x + b`
    Affine { matrix: AffineMatrix, offset: Vec<f64> },
    /// The four-dimensional quadratic Kojima-Shindo map.
    KojimaShindo,
}

impl OperatorSpec {
    pub fn dim(&self) -> usize {
        match self {
            OperatorSpec::Affine { offset, .. } => offset.len(),
            OperatorSpec::KojimaShindo => 4,
        }
    }

    /// Writes `F(x)` into `out`. Lengths must already match.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        match self {
            OperatorSpec::Affine { matrix, offset } => {
                matrix.apply(x, out);
                out.iter_mut().zip(offset).for_each(|(o, b)| *o += b);
            }
            OperatorSpec::KojimaShindo => {
                let [x1, x2, x3, x4] = [x[0], x[1], x[2], x[3]];
                out[0] = 3.0 * x1 * x1 + 2.0 * x1 * x2 + 2.0 * x2 * x2 + x3 + 3.0 * x4 - 6.0;
                out[1] = 2.0 * x1 * x1 + x1 + x2 * x2 + 10.0 * x3 + 2.0 * x4 - 2.0;
                out[2] = 3.0 * x1 * x1 + x1 * x2 + 2.0 * x2 * x2 + 2.0 * x3 + 9.0 * x4 - 9.0;
                out[3] = x1 * x1 + 3.0 * x2 * x2 + 2.0 * x3 + 3.0 * x4 - 3.0;
            }
        }
    }
}

/// Jacobian of the Kojima-Shindo map at `x`.
pub(crate) fn kojima_shindo_jacobian(x: &[f64]) -> [[f64; 4]; 4] {
    let (x1, x2) = (x[0], x[1]);
    [
        [6.0 * x1 + 2.0 * x2, 2.0 * x1 + 4.0 * x2, 1.0, 3.0],
        [4.0 * x1 + 1.0, 2.0 * x2, 10.0, 2.0],
        [6.0 * x1 + x2, x1 + 4.0 * x2, 2.0, 9.0],
        [2.0 * x1, 6.0 * x2, 2.0, 3.0],
    ]
}
