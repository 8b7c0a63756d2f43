use crate::diagnostics::STATIONARY_RTOL;
use crate::error::{GmviError, Result};
use crate::geometry::Geometry;
use crate::problems::{Point, ProblemInstance};

/// Upper bound on backtracking trials per iteration. `0.8^60` is about `1.5e-6`,
/// `0.2^60` is far below any meaningful stepsize.
pub const MAX_LS_TRIALS: usize = 60;

#[derive(Clone, Debug, PartialEq)]
pub enum LineSearchOutcome {
    /// The first trial point satisfying the step condition.
    Accepted {
        gamma: f64,
        y: Point,
        /// `F(y)`, kept for the extragradient step.
        fy: Vec<f64>,
        trials: usize,
        /// `||R_gamma0(x)||` from the first trial.
        residual_norm: f64,
    },
    /// `R_gamma0(x)` vanished on the first trial; `x` is a strong solution.
    Stationary { residual_norm: f64 },
}

impl LineSearchOutcome {
    /// Prox calls spent.
    pub fn trials(&self) -> usize {
        match self {
            LineSearchOutcome::Accepted { trials, .. } => *trials,
            LineSearchOutcome::Stationary { .. } => 1,
        }
    }
}

/// Backtracks `gamma = gamma0, gamma0 lambda, ...` until
/// `||F(x) - F(y)||_*^2 <= (alpha / gamma^2) V(x, y)` with `y = P_x(gamma F(x))`.
/// Each trial is one prox call.
pub fn line_search(g: &Geometry, inst: &ProblemInstance, x: &Point, gamma0: f64, lambda: f64) -> Result<LineSearchOutcome> {
    let fx = inst.eval_operator(x)?;
    line_search_with_value(g, inst, x, &fx, gamma0, lambda)
}

pub(crate) fn line_search_with_value(
    g: &Geometry,
    inst: &ProblemInstance,
    x: &Point,
    fx: &[f64],
    gamma0: f64,
    lambda: f64,
) -> Result<LineSearchOutcome> {
    let norms = g.norms();
    let mut residual_norm = f64::NAN;
    for trial in 1..=MAX_LS_TRIALS {
        let gamma = gamma0 * lambda.powi(trial as i32 - 1);
        let step: Vec<f64> = fx.iter().map(|v| gamma * v).collect();
        let y = g.prox(x, &step)?;
        if trial == 1 {
            residual_norm = norms.primal_distance(x.as_slice(), y.as_slice()) / gamma;
            if residual_norm <= STATIONARY_RTOL * (1.0 + norms.dual(fx)) {
                return Ok(LineSearchOutcome::Stationary { residual_norm });
            }
        }
        let fy = inst.eval(y.as_slice());
        let lhs = norms.dual_distance(fx, &fy).powi(2);
        let rhs = g.alpha() / (gamma * gamma) * g.bregman(x.as_slice(), y.as_slice());
        if lhs <= rhs {
            return Ok(LineSearchOutcome::Accepted { gamma, y, fy, trials: trial, residual_norm });
        }
    }
    Err(GmviError::LineSearchExhausted { trials: MAX_LS_TRIALS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::make_sun;

    #[test]
    fn constant_operator_accepts_first_trial() {
        let inst = ProblemInstance::constant("c", vec![0.0, 1.0, 2.0]).unwrap();
        let out = line_search(&Geometry::euclidean(3), &inst, &Point::center(3), 0.4, 0.5).unwrap();
        match out {
            LineSearchOutcome::Accepted { gamma, trials, .. } => assert_eq!((gamma, trials), (0.4, 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_operator_is_stationary() {
        let inst = ProblemInstance::constant("z", vec![0.0; 3]).unwrap();
        let out = line_search(&Geometry::entropy(3), &inst, &Point::center(3), 0.4, 0.5).unwrap();
        assert!(matches!(out, LineSearchOutcome::Stationary { .. }));
        assert_eq!(out.trials(), 1);
    }

    #[test]
    fn sun_backtracks() {
        let inst = make_sun(50).unwrap();
        let out = line_search(&Geometry::euclidean(50), &inst, &Point::center(50), 0.8, 0.5).unwrap();
        match out {
            LineSearchOutcome::Accepted { gamma, trials, .. } => {
                assert!(trials > 1);
                assert_eq!(gamma, 0.8 * 0.5f64.powi(trials as i32 - 1));
            }
            other => panic!("{other:?}"),
        }
    }
}
