//! Experiment harness: instance descriptors, suite runs, parameter tuning and reports.

mod params;
mod report;
mod suite;
mod tuning;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GmviError, Result};
use crate::geometry::GeometryChoice;
use crate::problems::{lipschitz_constant, make_kojima_shindo, make_mhph, make_rg, make_sun, make_watson_with, Family, ProblemInstance, WatsonOffset};
use crate::solvers::{solve, Algorithm, RunResult, SolverConfig, DEFAULT_GAP_TOL, DEFAULT_MAX_PROX};

pub use params::{parse_tuned_params, tuned_params};
pub use report::{markdown_table, parse_report, read_report, rows_to_csv, write_report, ReportFormat, CSV_HEADER};
pub use suite::{load_suite, parse_suite};
pub use tuning::{tune, tune_on, tune_or_shipped, ParamChoice, ParamSource, TuningEntry, TuningGrid, TuningReport};

/// Environment variable capping the worker pool size.
pub const THREADS_ENV: &str = "GMVI_THREADS";

/// Recipe for a benchmark instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub family: Family,
    pub n: usize,
    pub seed: Option<u64>,
    /// Watson offset index, 1..=10.
    pub index: Option<usize>,
    #[serde(default)]
    pub watson_offset: WatsonOffset,
}

impl InstanceSpec {
    pub fn ks() -> Self {
        InstanceSpec { family: Family::KS, n: 4, seed: None, index: None, watson_offset: WatsonOffset::Plus }
    }

    pub fn watson(i: usize) -> Self {
        InstanceSpec { family: Family::WAT, n: 10, seed: None, index: Some(i), watson_offset: WatsonOffset::Plus }
    }

    /// Watson instance with offset `-e_i`.
    pub fn watson_minus(i: usize) -> Self {
        InstanceSpec { watson_offset: WatsonOffset::Minus, ..Self::watson(i) }
    }

    pub fn seeded(family: Family, n: usize, seed: u64) -> Self {
        InstanceSpec { family, n, seed: Some(seed), index: None, watson_offset: WatsonOffset::Plus }
    }

    pub fn sun(n: usize) -> Self {
        InstanceSpec { family: Family::SUN, n, seed: None, index: None, watson_offset: WatsonOffset::Plus }
    }

    pub fn mhph(n: usize, seed: u64) -> Self {
        InstanceSpec { family: Family::MHPH, n, seed: Some(seed), index: None, watson_offset: WatsonOffset::Plus }
    }

    pub fn rg(n: usize, seed: u64) -> Self {
        InstanceSpec { family: Family::RG, n, seed: Some(seed), index: None, watson_offset: WatsonOffset::Plus }
    }

    pub fn build(&self) -> Result<ProblemInstance> {
        let need_seed = || {
            self.seed.ok_or_else(|| GmviError::InvalidConfig(format!("{} instances need a seed", self.family)))
        };
        match self.family {
            Family::KS => Ok(make_kojima_shindo()),
            Family::WAT => {
                let i = self.index.ok_or_else(|| GmviError::InvalidConfig("WAT instances need an index".into()))?;
                make_watson_with(i, self.watson_offset)
            }
            Family::SUN => make_sun(self.n),
            Family::MHPH => make_mhph(self.n, need_seed()?),
            Family::RG => make_rg(self.n, need_seed()?),
            Family::Custom => Err(GmviError::InvalidConfig("custom instances have no recipe".into())),
        }
    }
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.family, self.index, self.seed) {
            (Family::KS, _, _) => write!(f, "KS"),
            (Family::WAT, Some(i), _) if self.watson_offset == WatsonOffset::Minus => write!(f, "WAT{i}-"),
            (Family::WAT, Some(i), _) => write!(f, "WAT{i}"),
            (fam, _, Some(s)) => write!(f, "{fam}(n={}, seed={s})", self.n),
            (fam, _, None) => write!(f, "{fam}(n={})", self.n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgoKind {
    Neg,
    NegLs,
}

impl AlgoKind {
    pub fn label(self) -> &'static str {
        match self {
            AlgoKind::Neg => "neg",
            AlgoKind::NegLs => "negls",
        }
    }
}

impl fmt::Display for AlgoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for AlgoKind {
    type Err = GmviError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "neg" => Ok(AlgoKind::Neg),
            "negls" | "neg-ls" => Ok(AlgoKind::NegLs),
            other => Err(GmviError::Parse(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// Solver parameters of a cell. Absent line-search parameters fall back to
/// [`tuned_params`]; an absent `L` is computed with [`lipschitz_constant`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AlgoParams {
    pub gamma0: Option<f64>,
    pub lambda: Option<f64>,
    pub l: Option<f64>,
    pub nu: Option<f64>,
    pub horizon: Option<usize>,
}

/// One suite entry: an instance, a geometry and a solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchCell {
    pub instance: InstanceSpec,
    pub geometry: GeometryChoice,
    pub algo: AlgoKind,
    pub params: AlgoParams,
    pub gap_tol: f64,
    pub max_prox_calls: usize,
}

impl BenchCell {
    pub fn new(instance: InstanceSpec, geometry: GeometryChoice, algo: AlgoKind) -> Self {
        BenchCell {
            instance,
            geometry,
            algo,
            params: AlgoParams::default(),
            gap_tol: DEFAULT_GAP_TOL,
            max_prox_calls: DEFAULT_MAX_PROX,
        }
    }

    pub fn with_ls_params(mut self, gamma0: f64, lambda: f64) -> Self {
        self.params.gamma0 = Some(gamma0);
        self.params.lambda = Some(lambda);
        self
    }

    pub fn solver_config(&self, inst: &ProblemInstance) -> Result<SolverConfig> {
        let algorithm = match self.algo {
            AlgoKind::NegLs => {
                let tuned = tuned_params(self.instance.family, self.geometry);
                let pick = |given: Option<f64>, idx: usize| {
                    given.or(tuned.map(|t| if idx == 0 { t.0 } else { t.1 })).ok_or_else(|| {
                        GmviError::InvalidConfig(format!("no line-search parameters for {} / {}", self.instance, self.geometry))
                    })
                };
                Algorithm::NegLs { gamma0: pick(self.params.gamma0, 0)?, lambda: pick(self.params.lambda, 1)? }
            }
            AlgoKind::Neg => {
                let l = match self.params.l {
                    Some(l) => l,
                    None => lipschitz_constant(inst, self.geometry.build(inst.n()).norms())?,
                };
                Algorithm::NegFixed { l, nu: self.params.nu.unwrap_or(1.0), horizon: self.params.horizon }
            }
        };
        let cfg = SolverConfig::new(algorithm).with_tol(self.gap_tol).with_max_prox(self.max_prox_calls);
        cfg.validate(inst.n())?;
        Ok(cfg)
    }
}

/// One table record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub seed: Option<u64>,
    pub algorithm: String,
    pub geometry: String,
    pub gamma0: Option<f64>,
    pub lambda: Option<f64>,
    pub k: usize,
    pub np: usize,
    pub wall_seconds: f64,
    pub final_gap: f64,
    pub status: String,
}

/// A row together with the full run it summarizes.
#[derive(Clone, Debug)]
pub struct BenchOutcome {
    pub row: BenchRow,
    pub result: RunResult,
}

pub fn run_cell(cell: &BenchCell) -> Result<BenchOutcome> {
    let inst = cell.instance.build()?;
    let geometry = cell.geometry.build(inst.n());
    let cfg = cell.solver_config(&inst)?;
    let result = solve(&geometry, &inst, &cfg)?;
    let (gamma0, lambda) = match cfg.algorithm {
        Algorithm::NegLs { gamma0, lambda } => (Some(gamma0), Some(lambda)),
        Algorithm::NegFixed { .. } => (None, None),
    };
    let row = BenchRow {
        instance: inst.name().to_string(),
        n: inst.n(),
        seed: inst.seed(),
        algorithm: cell.algo.label().to_string(),
        geometry: cell.geometry.label().to_string(),
        gamma0,
        lambda,
        k: result.k,
        np: result.np,
        wall_seconds: result.wall_seconds,
        final_gap: result.final_gap,
        status: result.status.label().to_string(),
    };
    Ok(BenchOutcome { row, result })
}

/// Thread pool sized by `GMVI_THREADS`, or rayon's default when unset.
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| GmviError::Parse(format!("{THREADS_ENV}={v} is not a count")))?;
        builder = builder.num_threads(n.max(1));
    }
    builder.build().map_err(|e| GmviError::InvalidConfig(format!("thread pool: {e}")))
}

/// Runs every cell, in parallel, keeping input order.
pub fn run_bench_detailed(cells: &[BenchCell]) -> Result<Vec<BenchOutcome>> {
    let pool = worker_pool()?;
    pool.install(|| cells.par_iter().map(run_cell).collect())
}

pub fn run_bench(cells: &[BenchCell]) -> Result<Vec<BenchRow>> {
    Ok(run_bench_detailed(cells)?.into_iter().map(|o| o.row).collect())
}
