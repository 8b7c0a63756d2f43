#![allow(dead_code)]

use gmvi::{Geometry, Point};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mostly interior points, with some sparse ones, vertices and points
/// crowded into a corner.
pub fn random_point(rng: &mut impl Rng, n: usize) -> Point {
    let kind = rng.gen_range(0..10);
    let mut w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    match kind {
        0 => {
            let i = rng.gen_range(0..n);
            return Point::vertex(n, i);
        }
        1 | 2 => {
            let keep = rng.gen_range(0..n);
            for (i, v) in w.iter_mut().enumerate() {
                if i != keep && rng.gen_bool(0.5) {
                    *v = 0.0;
                }
            }
        }
        3 => w.iter_mut().for_each(|v| *v = v.powi(8)),
        _ => {}
    }
    let s: f64 = w.iter().sum();
    Point::new(w.into_iter().map(|v| v / s).collect()).unwrap()
}

/// Entries uniform in `(-scale, scale)`, `scale` log-uniform on `[1e-3, 1e2]`.
pub fn random_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let scale = 10f64.powf(rng.gen_range(-3.0..2.0));
    (0..n).map(|_| scale * rng.gen_range(-1.0..1.0)).collect()
}

pub fn geometries(n: usize) -> [Geometry; 3] {
    [Geometry::euclidean(n), Geometry::pnorm(n), Geometry::entropy(n)]
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(v: &[f64], c: f64) -> Vec<f64> {
    v.iter().map(|x| c * x).collect()
}

/// Simplex points for proptest, including faces: weights below `cut` are zeroed.
pub fn simplex_point(n: usize) -> impl Strategy<Value = Point> {
    (prop::collection::vec(0.0f64..1.0, n), 0.0f64..0.5, 0usize..n).prop_map(move |(w, cut, keep)| {
        let mut w: Vec<f64> = w.into_iter().enumerate().map(|(i, v)| if i != keep && v < cut { 0.0 } else { v }).collect();
        if w[keep] == 0.0 {
            w[keep] = 1.0;
        }
        let s: f64 = w.iter().sum();
        Point::new(w.into_iter().map(|v| v / s).collect()).unwrap()
    })
}

pub fn vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
    (prop::collection::vec(-1.0f64..1.0, n), -3.0f64..2.0).prop_map(|(v, e)| v.into_iter().map(|x| x * 10f64.powf(e)).collect())
}
