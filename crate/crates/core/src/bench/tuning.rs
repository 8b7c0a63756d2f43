use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{tuned_params, worker_pool, AlgoKind, InstanceSpec};
use crate::error::{GmviError, Result};
use crate::geometry::GeometryChoice;
use crate::problems::{Family, ProblemInstance};
use crate::solvers::{solve, RunStatus, SolverConfig, DEFAULT_MAX_PROX};

/// Candidate `(gamma0, lambda)` values and the instances they are scored on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TuningGrid {
    pub gamma0_values: Vec<f64>,
    pub lambda_values: Vec<f64>,
    pub coarse_tol: f64,
    pub max_prox_calls: usize,
    pub representatives: Vec<InstanceSpec>,
}

impl TuningGrid {
    pub const VALUES: [f64; 3] = [0.2, 0.4, 0.8];

    pub fn new(representatives: Vec<InstanceSpec>) -> Self {
        TuningGrid {
            gamma0_values: Self::VALUES.to_vec(),
            lambda_values: Self::VALUES.to_vec(),
            coarse_tol: 1e-1,
            max_prox_calls: DEFAULT_MAX_PROX,
            representatives,
        }
    }

    /// Default representative instances per family.
    pub fn for_family(family: Family) -> Result<Self> {
        let reps = match family {
            Family::KS => vec![InstanceSpec::ks()],
            Family::WAT => vec![InstanceSpec::watson(1), InstanceSpec::watson(2), InstanceSpec::watson(4)],
            Family::SUN => vec![InstanceSpec::sun(100), InstanceSpec::sun(500), InstanceSpec::sun(1000)],
            Family::MHPH => vec![InstanceSpec::mhph(100, 1), InstanceSpec::mhph(300, 2), InstanceSpec::mhph(500, 3)],
            Family::RG => vec![InstanceSpec::rg(100, 1), InstanceSpec::rg(200, 2), InstanceSpec::rg(300, 3)],
            Family::Custom => return Err(GmviError::InvalidConfig("custom instances have no default representatives".into())),
        };
        Ok(Self::new(reps))
    }

    /// Pairs in tie-break order: ascending `gamma0`, then ascending `lambda`.
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        let mut g = self.gamma0_values.clone();
        let mut l = self.lambda_values.clone();
        g.sort_by(f64::total_cmp);
        l.sort_by(f64::total_cmp);
        g.iter().flat_map(|&a| l.iter().map(move |&b| (a, b))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TuningEntry {
    pub gamma0: f64,
    pub lambda: f64,
    /// `np` per representative, in grid order.
    pub np: Vec<usize>,
    pub total_np: usize,
    /// Failed to reach the coarse tolerance on some representative.
    pub diverged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TuningReport {
    pub gamma0: f64,
    pub lambda: f64,
    pub total_np: usize,
    pub table: Vec<TuningEntry>,
}

/// Runs every pair on every representative to the coarse tolerance and
/// returns the pair with the smallest total `np`. Pairs that fail on any
/// representative are out of the running.
pub fn tune(grid: &TuningGrid, algo: AlgoKind, geometry: GeometryChoice) -> Result<TuningReport> {
    let instances: Vec<ProblemInstance> = grid.representatives.iter().map(InstanceSpec::build).collect::<Result<_>>()?;
    tune_on(grid, &instances, algo, geometry)
}

/// [`tune`] over explicit instances; `grid.representatives` is ignored.
pub fn tune_on(grid: &TuningGrid, instances: &[ProblemInstance], algo: AlgoKind, geometry: GeometryChoice) -> Result<TuningReport> {
    if algo != AlgoKind::NegLs {
        return Err(GmviError::InvalidConfig("only the line-search method has tunable parameters".into()));
    }
    if instances.is_empty() {
        return Err(GmviError::InvalidConfig("tuning needs at least one representative instance".into()));
    }
    let pairs = grid.pairs();
    let jobs: Vec<(usize, usize)> = (0..pairs.len()).flat_map(|p| (0..instances.len()).map(move |i| (p, i))).collect();

    let pool = worker_pool()?;
    let outcomes: Vec<(usize, bool)> = pool.install(|| {
        jobs.par_iter()
            .map(|&(p, i)| {
                let (gamma0, lambda) = pairs[p];
                let inst = &instances[i];
                let cfg = SolverConfig::neg_ls(gamma0, lambda)
                    .with_tol(grid.coarse_tol)
                    .with_max_prox(grid.max_prox_calls)
                    .with_certificate(false);
                let res = solve(&geometry.build(inst.n()), inst, &cfg)?;
                Ok((res.np, res.status == RunStatus::Converged))
            })
            .collect::<Result<_>>()
    })?;

    let table: Vec<TuningEntry> = pairs
        .iter()
        .enumerate()
        .map(|(p, &(gamma0, lambda))| {
            let slice = &outcomes[p * instances.len()..(p + 1) * instances.len()];
            TuningEntry {
                gamma0,
                lambda,
                np: slice.iter().map(|o| o.0).collect(),
                total_np: slice.iter().map(|o| o.0).sum(),
                diverged: slice.iter().any(|o| !o.1),
            }
        })
        .collect();

    // strict < keeps the earliest pair on ties, and pairs() is in tie-break order
    let mut best: Option<&TuningEntry> = None;
    for e in table.iter().filter(|e| !e.diverged) {
        if best.is_none_or(|b| e.total_np < b.total_np) {
            best = Some(e);
        }
    }
    match best {
        Some(b) => Ok(TuningReport { gamma0: b.gamma0, lambda: b.lambda, total_np: b.total_np, table: table.clone() }),
        None => Err(GmviError::AllDiverged { table }),
    }
}

/// Where a parameter pair came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamSource {
    Tuned,
    /// Every pair diverged during tuning; the shipped defaults were used.
    Shipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamChoice {
    pub gamma0: f64,
    pub lambda: f64,
    pub source: ParamSource,
    pub table: Vec<TuningEntry>,
}

/// Tunes on the grid's representatives, falling back to the shipped pair for
/// `family` when every pair diverges.
pub fn tune_or_shipped(grid: &TuningGrid, family: Family, geometry: GeometryChoice) -> Result<ParamChoice> {
    match tune(grid, AlgoKind::NegLs, geometry) {
        Ok(r) => Ok(ParamChoice { gamma0: r.gamma0, lambda: r.lambda, source: ParamSource::Tuned, table: r.table }),
        Err(GmviError::AllDiverged { table }) => {
            let (gamma0, lambda) = tuned_params(family, geometry)
                .ok_or_else(|| GmviError::InvalidConfig(format!("no shipped parameters for {family:?}/{geometry}")))?;
            Ok(ParamChoice { gamma0, lambda, source: ParamSource::Shipped, table })
        }
        Err(e) => Err(e),
    }
}
