use crate::problems::Point;

/// Euclidean projection onto the simplex (sort-and-threshold).
pub fn project_simplex_euclidean(v: &[f64]) -> Point {
    Point::from_solver(project_coords(v))
}

pub(crate) fn project_coords(v: &[f64]) -> Vec<f64> {
    assert!(!v.is_empty(), "cannot project an empty vector");
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (k as f64 + 1.0);
        if u - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    let mut out: Vec<f64> = v.iter().map(|&u| (u - theta).max(0.0)).collect();
    // absorb the O(n eps) drift of the running sum
    let s: f64 = out.iter().sum();
    if s > 0.0 && (s - 1.0).abs() > 1e-15 {
        out.iter_mut().for_each(|u| *u /= s);
    }
    out
}
