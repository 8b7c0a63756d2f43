mod common;

use gmvi::diagnostics::gap;
use gmvi::oracle::{brute_prox, grid_prox_3, reference_solution, OracleConfig, REFERENCE_GAP};
use gmvi::problems::{make_kojima_shindo, make_sun, make_watson};
use gmvi::{GmviError, Point, ProblemInstance};

use common::{geometries, l1, random_point, random_vec, rng};

fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
}

#[test]
fn sun_four_reference_is_the_last_vertex() {
    // F(e_4) = (1, 1, 1, 0)
    let sun = make_sun(4).unwrap();
    assert_eq!(sun.eval(Point::vertex(4, 3).as_slice()), vec![1.0, 1.0, 1.0, 0.0]);
    for g in geometries(4) {
        let x = reference_solution(&g, &sun, 20_000).unwrap();
        assert!(l1(x.as_slice(), &[0.0, 0.0, 0.0, 1.0]) <= 1e-8, "{}: {:?}", g.label(), x.as_slice());
        assert!(gap(&sun, &x) <= REFERENCE_GAP);
    }
}

#[test]
fn kojima_shindo_reference() {
    let ks = make_kojima_shindo();
    for g in geometries(4) {
        let x = reference_solution(&g, &ks, 20_000).unwrap();
        assert!(gap(&ks, &x) <= REFERENCE_GAP, "{}", g.label());
    }
}

#[test]
fn constant_operator_reference_is_the_argmin_vertex() {
    let mut r = rng(41);
    for n in [2, 3, 7, 20] {
        let mut value = random_vec(&mut r, n);
        let best = n / 2;
        value[best] = value.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
        let c = ProblemInstance::constant("c", value).unwrap();
        for g in geometries(n) {
            let x = reference_solution(&g, &c, 50_000).unwrap();
            assert!(max_abs(x.as_slice(), Point::vertex(n, best).as_slice()) <= 1e-10, "{} n={n}", g.label());
        }
    }
}

#[test]
fn watson_three_has_no_reference_within_budget() {
    let wat = make_watson(3).unwrap();
    for g in geometries(10) {
        match reference_solution(&g, &wat, 2_000) {
            Err(GmviError::NonConvergent { budget, final_gap }) => {
                assert_eq!(budget, 2_000);
                assert!(final_gap > REFERENCE_GAP);
            }
            other => panic!("{}: expected NonConvergent, got {other:?}", g.label()),
        }
    }
}

#[test]
fn brute_prox_agrees_with_the_grid_on_three_coordinates() {
    let cfg = OracleConfig::default();
    let mut r = rng(42);
    for _ in 0..10 {
        let x = random_point(&mut r, 3);
        let phi: Vec<f64> = random_vec(&mut r, 3).iter().map(|v| v.clamp(-2.0, 2.0)).collect();
        for g in geometries(3) {
            let z = brute_prox(&g, &x, &phi, &cfg);
            let grid = grid_prox_3(&g, &x, &phi, cfg.grid_resolution);
            let fast = g.prox(&x, &phi).unwrap();
            assert!(l1(z.as_slice(), fast.as_slice()) <= 1e-8, "{}", g.label());
            assert!(max_abs(z.as_slice(), grid.as_slice()) <= cfg.grid_resolution, "{}: {z:?} vs {grid:?}", g.label());
        }
    }
}
