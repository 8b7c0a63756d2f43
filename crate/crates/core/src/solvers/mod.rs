//! Extragradient solvers.
//!
//! One iteration of N-EG from `x_k` with stepsize `gamma_k`:
//!
//! ```text
//! y_k     = P_{x_k}(gamma_k F(x_k))
//! x_{k+1} = P_{x_k}(gamma_k F(y_k))
//! ```
//!
//! Both prox calls are anchored at `x_k`. The fixed-step variant uses the
//! Lipschitz or Hölder stepsize; N-EG-LS picks `gamma_k` by backtracking from
//! `gamma0` by factors of `lambda`.

mod line_search;
mod stepsize;

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{gap_from_value, make_certificate, Certificate};
use crate::error::{GmviError, Result};
use crate::geometry::Geometry;
use crate::problems::{Point, ProblemInstance};

pub use line_search::{line_search, LineSearchOutcome, MAX_LS_TRIALS};
pub use stepsize::{stepsize_holder, stepsize_lipschitz};

pub const DEFAULT_GAP_TOL: f64 = 1e-3;
pub const DEFAULT_MAX_PROX: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Algorithm {
    /// N-EG with a constant stepsize. `nu < 1` needs `horizon`.
    NegFixed { l: f64, nu: f64, horizon: Option<usize> },
    /// N-EG-LS.
    NegLs { gamma0: f64, lambda: f64 },
}

impl Algorithm {
    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::NegFixed { .. } => "neg",
            Algorithm::NegLs { .. } => "negls",
        }
    }
}

/// Where the termination gap is measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapPoint {
    #[default]
    AtXk,
    AtYk,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub gap_tol: f64,
    pub max_prox_calls: usize,
    /// Starting point; the simplex center when absent.
    pub x1: Option<Point>,
    pub gap_eval_point: GapPoint,
    /// Build a certificate at the final iterate. Its prox call is not counted in `np`.
    pub certificate: bool,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        SolverConfig {
            algorithm,
            gap_tol: DEFAULT_GAP_TOL,
            max_prox_calls: DEFAULT_MAX_PROX,
            x1: None,
            gap_eval_point: GapPoint::AtXk,
            certificate: true,
        }
    }

    pub fn neg_lipschitz(l: f64) -> Self {
        Self::new(Algorithm::NegFixed { l, nu: 1.0, horizon: None })
    }

    pub fn neg_holder(l: f64, nu: f64, horizon: usize) -> Self {
        Self::new(Algorithm::NegFixed { l, nu, horizon: Some(horizon) })
    }

    pub fn neg_ls(gamma0: f64, lambda: f64) -> Self {
        Self::new(Algorithm::NegLs { gamma0, lambda })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.gap_tol = tol;
        self
    }

    pub fn with_max_prox(mut self, max_prox_calls: usize) -> Self {
        self.max_prox_calls = max_prox_calls;
        self
    }

    pub fn with_start(mut self, x1: Point) -> Self {
        self.x1 = Some(x1);
        self
    }

    pub fn with_gap_point(mut self, at: GapPoint) -> Self {
        self.gap_eval_point = at;
        self
    }

    pub fn with_certificate(mut self, on: bool) -> Self {
        self.certificate = on;
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |m: String| Err(GmviError::InvalidConfig(m));
        match self.algorithm {
            Algorithm::NegFixed { l, nu, horizon } => {
                if !(l > 0.0 && l.is_finite()) {
                    return bad(format!("L must be positive, got {l}"));
                }
                if !(nu > 0.0 && nu <= 1.0) {
                    return bad(format!("nu must lie in (0, 1], got {nu}"));
                }
                if nu < 1.0 && !matches!(horizon, Some(k) if k >= 1) {
                    return bad("a Hölder stepsize (nu < 1) needs a positive horizon".into());
                }
            }
            Algorithm::NegLs { gamma0, lambda } => {
                if !(gamma0 > 0.0 && gamma0 < 1.0) {
                    return bad(format!("gamma0 must lie in (0, 1), got {gamma0}"));
                }
                if !(lambda > 0.0 && lambda < 1.0) {
                    return bad(format!("lambda must lie in (0, 1), got {lambda}"));
                }
            }
        }
        if !(self.gap_tol > 0.0) {
            return bad(format!("gap tolerance must be positive, got {}", self.gap_tol));
        }
        if self.max_prox_calls == 0 {
            return bad("prox budget must be positive".into());
        }
        if let Some(x1) = &self.x1 {
            if x1.dim() != n {
                return Err(GmviError::DimensionMismatch { expected: n, got: x1.dim() });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    pub gamma: f64,
    pub ls_trials: usize,
    pub gap: f64,
    /// `||R_gamma(x_k)||` for the fixed step, `||R_gamma0(x_k)||` for the line search.
    pub residual_norm: f64,
    /// Prox calls so far, including this iteration.
    pub np: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunStatus {
    Converged,
    ProxBudgetExceeded,
    /// The Hölder stepsize's a-priori horizon ran out before the gap target.
    HorizonExhausted,
    InternalError,
}

impl RunStatus {
    pub fn label(&self) -> &'static str {
        match self {
            RunStatus::Converged => "Converged",
            RunStatus::ProxBudgetExceeded => "ProxBudgetExceeded",
            RunStatus::HorizonExhausted => "HorizonExhausted",
            RunStatus::InternalError => "InternalError",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub status: RunStatus,
    pub x_final: Point,
    pub k: usize,
    pub np: usize,
    pub wall_seconds: f64,
    /// Gap at `x_final`.
    pub final_gap: f64,
    pub trace: Vec<IterationRecord>,
    #[serde(skip_deserializing)]
    pub best_certificate: Option<Certificate>,
    /// Error text behind an `InternalError` status.
    pub message: Option<String>,
}

impl RunResult {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Smallest `||R||` recorded in the trace.
    pub fn min_residual(&self) -> Option<f64> {
        self.trace.iter().map(|r| r.residual_norm).reduce(f64::min)
    }
}

/// Iterates exposed to run observers, one call per completed iteration.
#[derive(Debug)]
pub struct StepView<'a> {
    pub k: usize,
    pub x: &'a Point,
    pub y: &'a Point,
    pub x_next: &'a Point,
    pub gamma: f64,
}

/// `(y_k, x_{k+1})` from `x_k`. Exactly two prox calls.
pub fn neg_iteration(g: &Geometry, inst: &ProblemInstance, x: &Point, gamma: f64) -> Result<(Point, Point)> {
    let fx = inst.eval_operator(x)?;
    let (y, _, x_next) = extragradient(g, inst, x, &fx, gamma)?;
    Ok((y, x_next))
}

fn scaled(v: &[f64], gamma: f64) -> Vec<f64> {
    v.iter().map(|a| gamma * a).collect()
}

fn extragradient(g: &Geometry, inst: &ProblemInstance, x: &Point, fx: &[f64], gamma: f64) -> Result<(Point, Vec<f64>, Point)> {
    let y = g.prox(x, &scaled(fx, gamma))?;
    let fy = inst.eval(y.as_slice());
    let x_next = g.prox(x, &scaled(&fy, gamma))?;
    Ok((y, fy, x_next))
}

pub fn run_neg_fixed(g: &Geometry, inst: &ProblemInstance, cfg: &SolverConfig) -> Result<RunResult> {
    run_observed(g, inst, cfg, |_| {})
}

pub fn run_neg_ls(g: &Geometry, inst: &ProblemInstance, cfg: &SolverConfig) -> Result<RunResult> {
    run_observed(g, inst, cfg, |_| {})
}

/// Runs whichever algorithm `cfg` names.
pub fn solve(g: &Geometry, inst: &ProblemInstance, cfg: &SolverConfig) -> Result<RunResult> {
    run_observed(g, inst, cfg, |_| {})
}

struct Termination {
    status: RunStatus,
    x: Point,
    gap: f64,
    message: Option<String>,
}

/// [`solve`] with a callback after every iteration.
///
/// Configuration errors are returned as `Err`; failures inside the run end it
/// with `RunStatus::InternalError` and the error text in `message`.
pub fn run_observed<O>(g: &Geometry, inst: &ProblemInstance, cfg: &SolverConfig, mut observe: O) -> Result<RunResult>
where
    O: FnMut(&StepView<'_>),
{
    cfg.validate(inst.n())?;
    if g.n() != inst.n() {
        return Err(GmviError::DimensionMismatch { expected: inst.n(), got: g.n() });
    }
    let start = Instant::now();
    let mut trace = Vec::new();
    let mut np = 0usize;
    let mut k = 0usize;
    let mut last_gamma = match cfg.algorithm {
        Algorithm::NegFixed { l, nu, horizon } => stepsize_holder(g.alpha(), l, nu, horizon.unwrap_or(1)),
        Algorithm::NegLs { gamma0, .. } => gamma0,
    };

    let mut x = cfg.x1.clone().unwrap_or_else(|| Point::center(inst.n()));
    let mut fx = inst.eval(x.as_slice());
    let start_gap = gap_from_value(&fx, x.as_slice());

    let end = if start_gap <= cfg.gap_tol {
        Termination { status: RunStatus::Converged, x: x.clone(), gap: start_gap, message: None }
    } else {
        let mut last_gap = start_gap;
        loop {
            if np >= cfg.max_prox_calls {
                break Termination { status: RunStatus::ProxBudgetExceeded, x, gap: last_gap, message: None };
            }
            let (gamma, trials, residual_norm, y, fy) = match cfg.algorithm {
                Algorithm::NegFixed { l, nu, horizon } => {
                    if nu < 1.0 && k >= horizon.unwrap_or(usize::MAX) {
                        break Termination { status: RunStatus::HorizonExhausted, x, gap: last_gap, message: None };
                    }
                    let gamma = stepsize_holder(g.alpha(), l, nu, horizon.unwrap_or(1));
                    let y = match g.prox(&x, &scaled(&fx, gamma)) {
                        Ok(y) => y,
                        Err(e) => break internal(x, last_gap, e),
                    };
                    let residual_norm = g.norms().primal_distance(x.as_slice(), y.as_slice()) / gamma;
                    let fy = inst.eval(y.as_slice());
                    (gamma, 1, residual_norm, y, fy)
                }
                Algorithm::NegLs { gamma0, lambda } => {
                    match line_search::line_search_with_value(g, inst, &x, &fx, gamma0, lambda) {
                        Ok(LineSearchOutcome::Accepted { gamma, y, fy, trials, residual_norm }) => {
                            (gamma, trials, residual_norm, y, fy)
                        }
                        Ok(LineSearchOutcome::Stationary { .. }) => {
                            np += 1;
                            let gap = gap_from_value(&fx, x.as_slice());
                            if gap <= cfg.gap_tol {
                                break Termination { status: RunStatus::Converged, x, gap, message: None };
                            }
                            let msg = format!("residual vanished but the gap is {gap:e}");
                            break Termination { status: RunStatus::InternalError, x, gap, message: Some(msg) };
                        }
                        Err(e) => {
                            if let GmviError::LineSearchExhausted { trials } = e {
                                np += trials;
                            }
                            break internal(x, last_gap, e);
                        }
                    }
                }
            };
            np += trials;
            let x_next = match g.prox(&x, &scaled(&fy, gamma)) {
                Ok(z) => z,
                Err(e) => break internal(x, last_gap, e),
            };
            np += 1;
            k += 1;
            last_gamma = gamma;
            observe(&StepView { k, x: &x, y: &y, x_next: &x_next, gamma });

            let f_next = inst.eval(x_next.as_slice());
            let (gap, candidate) = match cfg.gap_eval_point {
                GapPoint::AtXk => (gap_from_value(&f_next, x_next.as_slice()), None),
                GapPoint::AtYk => (gap_from_value(&fy, y.as_slice()), Some(y)),
            };
            trace.push(IterationRecord { k, gamma, ls_trials: trials, gap, residual_norm, np });
            last_gap = gap;
            if gap <= cfg.gap_tol {
                let x_final = candidate.unwrap_or(x_next);
                break Termination { status: RunStatus::Converged, x: x_final, gap, message: None };
            }
            x = x_next;
            fx = f_next;
        }
    };
    let wall_seconds = start.elapsed().as_secs_f64();

    let best_certificate = if cfg.certificate {
        let (l, nu) = match cfg.algorithm {
            Algorithm::NegFixed { l, nu, .. } if g.q().is_some() => (Some(l), Some(nu)),
            _ => (None, None),
        };
        make_certificate(g, inst, &end.x, last_gamma, l, nu).ok()
    } else {
        None
    };

    Ok(RunResult {
        status: end.status,
        final_gap: end.gap,
        x_final: end.x,
        k,
        np,
        wall_seconds,
        trace,
        best_certificate,
        message: end.message,
    })
}

fn internal(x: Point, gap: f64, e: GmviError) -> Termination {
    Termination { status: RunStatus::InternalError, x, gap, message: Some(e.to_string()) }
}

/// Writes the per-iteration trace as CSV with header `k,gamma,ls_trials,gap,residual_norm,np`.
pub fn write_trace(trace: &[IterationRecord], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| GmviError::Io { path: path.to_path_buf(), source })?;
    let mut w = csv::Writer::from_writer(file);
    let csv_err = |source| GmviError::Csv { path: path.to_path_buf(), source };
    if trace.is_empty() {
        w.write_record(["k", "gamma", "ls_trials", "gap", "residual_norm", "np"]).map_err(csv_err)?;
    }
    for rec in trace {
        w.serialize(rec).map_err(csv_err)?;
    }
    w.flush().map_err(|source| GmviError::Io { path: path.to_path_buf(), source })?;
    Ok(())
}
