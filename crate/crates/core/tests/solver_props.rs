mod common;

use std::f64::consts::SQRT_2;

use gmvi::diagnostics::gap;
use gmvi::problems::{lipschitz_constant, make_kojima_shindo, make_mhph, make_rg, make_sun, make_watson};
use gmvi::solvers::{line_search, neg_iteration, solve, write_trace, GapPoint, IterationRecord, LineSearchOutcome, MAX_LS_TRIALS};
use gmvi::{GmviError, Geometry, Point, ProblemInstance, RunResult, RunStatus, SolverConfig};
use proptest::prelude::*;

use common::{geometries, random_point, rng};

fn instance(which: usize, seed: u64) -> ProblemInstance {
    match which {
        0 => make_sun(30).unwrap(),
        1 => make_watson(1 + (seed % 10) as usize).unwrap(),
        2 => make_mhph(15, seed).unwrap(),
        _ => make_rg(15, seed).unwrap(),
    }
}

fn fixed_config(g: &Geometry, inst: &ProblemInstance) -> SolverConfig {
    SolverConfig::neg_lipschitz(lipschitz_constant(inst, g.norms()).unwrap())
}

#[test]
fn config_validation() {
    let n = 4;
    let bad = [
        SolverConfig::neg_lipschitz(0.0),
        SolverConfig::neg_lipschitz(f64::INFINITY),
        SolverConfig::neg_holder(1.0, 0.0, 10),
        SolverConfig::neg_holder(1.0, 1.5, 10),
        SolverConfig::neg_holder(1.0, 0.5, 0),
        SolverConfig::neg_ls(1.0, 0.5),
        SolverConfig::neg_ls(0.5, 0.0),
        SolverConfig::neg_ls(0.5, 1.0),
        SolverConfig::neg_ls(0.5, 0.5).with_tol(0.0),
        SolverConfig::neg_ls(0.5, 0.5).with_max_prox(0),
    ];
    for cfg in &bad {
        assert!(matches!(cfg.validate(n), Err(GmviError::InvalidConfig(_))), "{cfg:?}");
    }
    let wrong_start = SolverConfig::neg_ls(0.5, 0.5).with_start(Point::center(3));
    assert!(matches!(wrong_start.validate(n), Err(GmviError::DimensionMismatch { .. })));
    assert!(SolverConfig::neg_holder(1.0, 0.5, 10).validate(n).is_ok());

    let ks = make_kojima_shindo();
    assert!(solve(&Geometry::euclidean(5), &ks, &SolverConfig::neg_ls(0.5, 0.5)).is_err());
    assert!(solve(&Geometry::euclidean(4), &ks, &bad[0]).is_err());
}

#[test]
fn holder_with_nu_one_is_the_lipschitz_run() {
    let inst = make_sun(40).unwrap();
    for g in geometries(40) {
        let l = lipschitz_constant(&inst, g.norms()).unwrap();
        let a = solve(&g, &inst, &SolverConfig::neg_lipschitz(l)).unwrap();
        let b = solve(&g, &inst, &SolverConfig::neg_holder(l, 1.0, 7)).unwrap();
        assert_eq!(a.trace, b.trace, "{}", g.label());
        assert_eq!(a.x_final, b.x_final);
        assert_eq!(a.status, b.status);
    }
}

#[test]
fn holder_horizon_runs_out() {
    let inst = make_sun(100).unwrap();
    let g = Geometry::euclidean(100);
    let l = lipschitz_constant(&inst, g.norms()).unwrap();
    let res = solve(&g, &inst, &SolverConfig::neg_holder(l, 0.5, 3).with_tol(1e-14)).unwrap();
    assert_eq!(res.status, RunStatus::HorizonExhausted);
    assert_eq!((res.k, res.np), (3, 6));
    assert_eq!(res.final_gap, res.trace.last().unwrap().gap);
}

#[test]
fn budget_exhaustion_reports_the_last_iterate() {
    let inst = make_sun(100).unwrap();
    let g = Geometry::entropy(100);
    let res = solve(&g, &inst, &fixed_config(&g, &inst).with_tol(1e-14).with_max_prox(11)).unwrap();
    assert_eq!(res.status, RunStatus::ProxBudgetExceeded);
    // two calls per iteration: the sixth pushes np past the budget
    assert_eq!((res.k, res.np), (6, 12));
    assert_eq!(res.final_gap, gap(&inst, &res.x_final));
}

#[test]
fn a_solution_as_start_needs_no_prox_calls() {
    let c = ProblemInstance::constant("c", vec![3.0, -1.0, 2.0]).unwrap();
    for g in geometries(3) {
        for cfg in [SolverConfig::neg_lipschitz(1.0), SolverConfig::neg_ls(0.5, 0.5)] {
            let res = solve(&g, &c, &cfg.with_start(Point::vertex(3, 1))).unwrap();
            assert_eq!(res.status, RunStatus::Converged);
            assert_eq!((res.k, res.np, res.final_gap), (0, 0, 0.0));
            assert!(res.trace.is_empty());
        }
    }
}

#[test]
fn line_search_at_a_strong_solution_is_stationary() {
    let ks = make_kojima_shindo();
    let x = Point::vertex(4, 2);
    for g in geometries(4) {
        let out = line_search(&g, &ks, &x, 0.5, 0.5).unwrap();
        assert!(matches!(out, LineSearchOutcome::Stationary { .. }), "{}: {out:?}", g.label());
        assert_eq!(out.trials(), 1);
    }
}

#[test]
fn constant_operator_moves_toward_its_minimizing_vertex() {
    let c = ProblemInstance::constant("c", vec![0.0, 1.0]).unwrap();
    let g = Geometry::euclidean(2);
    let (y, x1) = neg_iteration(&g, &c, &Point::center(2), 0.5).unwrap();
    assert_eq!(y.as_slice(), &[0.75, 0.25]);
    assert_eq!(x1.as_slice(), &[0.75, 0.25]);
    for g in geometries(2) {
        let res = solve(&g, &c, &SolverConfig::neg_ls(0.8, 0.5)).unwrap();
        assert_eq!(res.status, RunStatus::Converged, "{}", g.label());
        assert!(res.x_final.as_slice()[0] >= 1.0 - 1e-3);
    }
}

#[test]
fn trace_csv_and_json_round_trip() {
    let inst = make_mhph(20, 5).unwrap();
    let g = Geometry::pnorm(20);
    let res = solve(&g, &inst, &SolverConfig::neg_ls(0.4, 0.4)).unwrap();
    assert_eq!(res.status, RunStatus::Converged);
    assert!(res.best_certificate.is_some());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    write_trace(&res.trace, &path).unwrap();
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["k", "gamma", "ls_trials", "gap", "residual_norm", "np"]);
    let back: Vec<IterationRecord> = reader.deserialize().map(|r| r.unwrap()).collect();
    assert_eq!(back, res.trace);

    let empty = dir.path().join("empty.csv");
    write_trace(&[], &empty).unwrap();
    assert_eq!(std::fs::read_to_string(&empty).unwrap().trim(), "k,gamma,ls_trials,gap,residual_norm,np");

    let mut parsed = RunResult::from_json(&res.to_json().unwrap()).unwrap();
    assert!(parsed.best_certificate.is_none());
    parsed.best_certificate = res.best_certificate.clone();
    assert_eq!(parsed, res);
}

#[test]
fn gap_at_the_extrapolated_point() {
    let inst = make_sun(60).unwrap();
    for g in geometries(60) {
        let cfg = fixed_config(&g, &inst).with_gap_point(GapPoint::AtYk);
        let res = solve(&g, &inst, &cfg).unwrap();
        assert_eq!(res.status, RunStatus::Converged, "{}", g.label());
        assert!(gap(&inst, &res.x_final) <= 1e-3);
        assert_eq!(res.final_gap, gap(&inst, &res.x_final));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn fixed_step_spends_two_prox_calls_per_iteration(which in 0usize..4, geo in 0usize..3, seed in any::<u64>()) {
        let inst = instance(which, seed);
        let g = &geometries(inst.n())[geo];
        let res = solve(g, &inst, &fixed_config(g, &inst).with_max_prox(400)).unwrap();
        prop_assert_eq!(res.np, 2 * res.k);
        for (i, rec) in res.trace.iter().enumerate() {
            prop_assert_eq!(rec.k, i + 1);
            prop_assert_eq!(rec.np, 2 * rec.k);
            prop_assert_eq!(rec.ls_trials, 1);
        }
    }

    #[test]
    fn line_search_spends_trials_plus_one(which in 0usize..4, geo in 0usize..3, seed in any::<u64>(),
                                          gamma0 in 0.05f64..0.95, lambda in 0.05f64..0.95) {
        let inst = instance(which, seed);
        let g = &geometries(inst.n())[geo];
        let res = solve(g, &inst, &SolverConfig::neg_ls(gamma0, lambda).with_max_prox(600)).unwrap();
        let mut np = 0;
        for rec in &res.trace {
            prop_assert!(rec.ls_trials >= 1);
            np += rec.ls_trials + 1;
            prop_assert_eq!(rec.np, np);
        }
        if res.status == RunStatus::InternalError {
            // an exhausted backtrack still paid for every trial
            prop_assert!(res.message.as_deref().unwrap_or("").contains(&MAX_LS_TRIALS.to_string()));
            np += MAX_LS_TRIALS;
        }
        prop_assert_eq!(res.np, np);
    }

    #[test]
    fn accepted_stepsizes_stay_above_the_floor(which in 0usize..4, geo in 0usize..3, seed in any::<u64>(),
                                               gamma0 in 0.05f64..0.95, lambda in 0.05f64..0.95) {
        let inst = instance(which, seed);
        let g = &geometries(inst.n())[geo];
        let l = lipschitz_constant(&inst, g.norms()).unwrap();
        let floor = (lambda * g.alpha() / (SQRT_2 * l)).min(gamma0) * (1.0 - 1e-12);
        let res = solve(g, &inst, &SolverConfig::neg_ls(gamma0, lambda).with_max_prox(300)).unwrap();
        for rec in &res.trace {
            prop_assert!(rec.gamma >= floor, "gamma {} < {}", rec.gamma, floor);
            prop_assert!(rec.gamma <= gamma0);
        }
    }

    #[test]
    fn runs_are_bitwise_reproducible(which in 0usize..4, geo in 0usize..3, seed in any::<u64>(), ls in any::<bool>()) {
        let inst = instance(which, seed);
        let g = &geometries(inst.n())[geo];
        let x1 = random_point(&mut rng(seed), inst.n());
        let cfg = if ls { SolverConfig::neg_ls(0.4, 0.6) } else { fixed_config(g, &inst) };
        let cfg = cfg.with_max_prox(200).with_start(x1);
        let a = solve(g, &inst, &cfg).unwrap();
        let b = solve(g, &inst, &cfg).unwrap();
        prop_assert_eq!(&a.trace, &b.trace);
        prop_assert_eq!(&a.x_final, &b.x_final);
        prop_assert_eq!(a.status, b.status);
    }

    #[test]
    fn converged_runs_meet_the_tolerance(which in 0usize..4, geo in 0usize..3, seed in any::<u64>()) {
        let inst = instance(which, seed);
        let g = &geometries(inst.n())[geo];
        let res = solve(g, &inst, &SolverConfig::neg_ls(0.5, 0.5).with_max_prox(2000)).unwrap();
        if res.status == RunStatus::Converged {
            prop_assert!(gap(&inst, &res.x_final) <= 1e-3);
        }
        prop_assert_eq!(res.final_gap, gap(&inst, &res.x_final));
    }
}
