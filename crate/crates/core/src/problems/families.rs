use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{AffineMatrix, Family, Monotonicity, OperatorSpec, ProblemInstance};
use crate::error::{GmviError, Result};

const WATSON: [[f64; 10]; 10] = [
    [0., 0., -1., -1., -1., 1., 1., 0., 1., 1.],
    [-2., -1., 0., 1., 1., 2., 2., 0., -1., 0.],
    [1., 0., 1., -2., -1., -1., 0., 2., 0., 0.],
    [2., 1., -1., 0., 1., 0., -1., -1., -1., 1.],
    [-2., 0., 1., 1., 0., 2., 2., -1., 1., 0.],
    [-1., 0., 1., 1., 1., 0., -1., 2., 0., 1.],
    [0., -1., 1., 0., 2., -1., 0., 0., 1., -1.],
    [0., -2., 2., 0., 0., 1., 2., 2., -1., 0.],
    [0., -1., 0., 2., 2., 1., 1., 1., -1., 0.],
    [2., -1., -1., 0., 1., 0., 0., -1., 2., 2.],
];

pub(crate) fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `lo + (hi - lo) * u` with `u` uniform on `[0, 1)`.
pub(crate) fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

pub fn make_kojima_shindo() -> ProblemInstance {
    ProblemInstance::from_parts("KS", OperatorSpec::KojimaShindo, Family::KS, None, Monotonicity::Unknown)
}

/// The fixed 10x10 Watson matrix.
pub fn watson_matrix() -> Array2<f64> {
    Array2::from_shape_fn((10, 10), |(i, j)| WATSON[i][j])
}

/// Sign of the unit offset of a Watson instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WatsonOffset {
    /// `b = e_i`, named `WAT{i}`.
    #[default]
    Plus,
    /// `b = -e_i`, named `WAT{i}-`. From the simplex center, N-EG converges on
    /// every index except 3 with this sign.
    Minus,
}

/// Watson instance `i` (1-based): the Watson matrix with offset `e_i`.
pub fn make_watson(i: usize) -> Result<ProblemInstance> {
    make_watson_with(i, WatsonOffset::Plus)
}

impl std::str::FromStr for WatsonOffset {
    type Err = GmviError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(WatsonOffset::Plus),
            "minus" | "-" => Ok(WatsonOffset::Minus),
            other => Err(GmviError::Parse(format!("unknown Watson offset '{other}' (plus or minus)"))),
        }
    }
}

pub fn make_watson_with(i: usize, sign: WatsonOffset) -> Result<ProblemInstance> {
    if !(1..=10).contains(&i) {
        return Err(GmviError::WatsonIndex(i));
    }
    let mut offset = vec![0.0; 10];
    let (value, name) = match sign {
        WatsonOffset::Plus => (1.0, format!("WAT{i}")),
        WatsonOffset::Minus => (-1.0, format!("WAT{i}-")),
    };
    offset[i - 1] = value;
    let operator = OperatorSpec::Affine { matrix: AffineMatrix::Dense(watson_matrix()), offset };
    Ok(ProblemInstance::from_parts(name, operator, Family::WAT, None, Monotonicity::Unknown))
}

/// Sun's problem: unit upper-triangular matrix with 2 above the diagonal and
/// offset `-1`. `A + A^T` is twice the all-ones matrix, hence monotone.
pub fn make_sun(n: usize) -> Result<ProblemInstance> {
    if n == 0 {
        return Err(GmviError::InvalidInstance("SUN dimension must be positive".into()));
    }
    let operator = OperatorSpec::Affine { matrix: AffineMatrix::UnitUpperTwos { n }, offset: vec![-1.0; n] };
    Ok(ProblemInstance::from_parts("SUN", operator, Family::SUN, None, Monotonicity::Monotone))
}

/// Modified HP-hard instance: `A = M M^T` with `M_ij ~ U(-15, -12)`, `b_i ~ U(-500, 0)`.
/// `M` is drawn row-major before `b`.
pub fn make_mhph(n: usize, seed: u64) -> Result<ProblemInstance> {
    if n == 0 {
        return Err(GmviError::InvalidInstance("MHPH dimension must be positive".into()));
    }
    let mut rng = rng_for(seed);
    let m = Array2::from_shape_simple_fn((n, n), || uniform(&mut rng, -15.0, -12.0));
    let offset: Vec<f64> = (0..n).map(|_| uniform(&mut rng, -500.0, 0.0)).collect();
    let a = m.dot(&m.t());
    // M M^T is symmetric in exact arithmetic; make it bitwise symmetric.
    let a = Array2::from_shape_fn((n, n), |(i, j)| if i <= j { a[[i, j]] } else { a[[j, i]] });
    let operator = OperatorSpec::Affine { matrix: AffineMatrix::Dense(a), offset };
    Ok(ProblemInstance::from_parts("MHPH", operator, Family::MHPH, Some(seed), Monotonicity::Monotone))
}

/// The raw `M` factor of an MHPH instance, regenerated from the seed.
#[cfg(test)]
pub(crate) fn mhph_factor(n: usize, seed: u64) -> Array2<f64> {
    let mut rng = rng_for(seed);
    Array2::from_shape_simple_fn((n, n), || uniform(&mut rng, -15.0, -12.0))
}

/// Random instance: `A_ij ~ U(-50, 150)`, `b_i ~ U(-200, 300)`, drawn in that order.
pub fn make_rg(n: usize, seed: u64) -> Result<ProblemInstance> {
    if n == 0 {
        return Err(GmviError::InvalidInstance("RG dimension must be positive".into()));
    }
    let mut rng = rng_for(seed);
    let a = Array2::from_shape_simple_fn((n, n), || uniform(&mut rng, -50.0, 150.0));
    let offset: Vec<f64> = (0..n).map(|_| uniform(&mut rng, -200.0, 300.0)).collect();
    let operator = OperatorSpec::Affine { matrix: AffineMatrix::Dense(a), offset };
    Ok(ProblemInstance::from_parts("RG", operator, Family::RG, Some(seed), Monotonicity::Unknown))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::Point;

    fn affine_parts(inst: &ProblemInstance) -> (&AffineMatrix, &[f64]) {
        match inst.operator() {
            OperatorSpec::Affine { matrix, offset } => (matrix, offset),
            _ => panic!("expected affine"),
        }
    }

    #[test]
    fn kojima_shindo_values() {
        let ks = make_kojima_shindo();
        assert_eq!(ks.n(), 4);
        assert_eq!(ks.monotonicity(), Monotonicity::Unknown);
        assert_eq!(ks.eval(&[1.0, 0.0, 0.0, 0.0]), vec![-3.0, 1.0, -6.0, -2.0]);
        assert_eq!(ks.eval(&[0.0, 0.0, 0.0, 1.0]), vec![-3.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn watson_layout() {
        let w1 = make_watson(1).unwrap();
        let (a, b) = affine_parts(&w1);
        assert_eq!(a.entry(0, 2), -1.0);
        assert_eq!(b[0], 1.0);
        assert_eq!(b.iter().sum::<f64>(), 1.0);
        assert_eq!(w1.name(), "WAT1");
        // F(x) - A x = e_1 for any x
        let x = Point::new(vec![0.1; 10]).unwrap();
        let f = w1.eval(x.as_slice());
        let mut ax = vec![0.0; 10];
        a.apply(x.as_slice(), &mut ax);
        for i in 0..10 {
            let expected = if i == 0 { 1.0 } else { 0.0 };
            assert!((f[i] - ax[i] - expected).abs() < 1e-15);
        }
        assert!(matches!(make_watson(11), Err(GmviError::WatsonIndex(11))));
        assert!(make_watson(0).is_err());
    }

    #[test]
    fn sun_layout() {
        let s1 = make_sun(1).unwrap();
        let (a, b) = affine_parts(&s1);
        assert_eq!(a.rows(), vec![vec![1.0]]);
        assert_eq!(b, &[-1.0]);

        let s3 = make_sun(3).unwrap();
        let (a, _) = affine_parts(&s3);
        assert_eq!(a.rows()[0], vec![1.0, 2.0, 2.0]);
        assert_eq!(s3.eval(&[1.0, 0.0, 0.0]), vec![0.0, -1.0, -1.0]);
        assert_eq!(s3.monotonicity(), Monotonicity::Monotone);

        let s4 = make_sun(4).unwrap();
        let f = s4.eval(&[0.25; 4]);
        let expected = [0.75, 0.25, -0.25, -0.75];
        for (u, v) in f.iter().zip(expected) {
            assert!((u - v).abs() < 1e-15);
        }
    }

    #[test]
    fn mhph_is_deterministic_and_in_range() {
        let a = make_mhph(12, 7).unwrap();
        let b = make_mhph(12, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, make_mhph(12, 8).unwrap());
        assert_eq!(a.seed(), Some(7));
        let m = mhph_factor(12, 7);
        assert!(m.iter().all(|&v| (-15.0..-12.0).contains(&v)));
        let (mat, b) = affine_parts(&a);
        assert!(b.iter().all(|&v| (-500.0..0.0).contains(&v)));
        for i in 0..12 {
            for j in 0..12 {
                assert_eq!(mat.entry(i, j), mat.entry(j, i));
            }
        }
    }

    #[test]
    fn rg_is_deterministic_and_in_range() {
        let a = make_rg(15, 3).unwrap();
        assert_eq!(a, make_rg(15, 3).unwrap());
        let (mat, b) = affine_parts(&a);
        for i in 0..15 {
            for j in 0..15 {
                assert!((-50.0..150.0).contains(&mat.entry(i, j)));
            }
        }
        assert!(b.iter().all(|&v| (-200.0..300.0).contains(&v)));
        assert_eq!(a.monotonicity(), Monotonicity::Unknown);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(make_sun(0).is_err());
        assert!(make_mhph(0, 1).is_err());
        assert!(make_rg(0, 1).is_err());
    }
}
