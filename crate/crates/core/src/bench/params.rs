use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{GmviError, Result};
use crate::geometry::GeometryChoice;
use crate::problems::Family;

const TUNED: &str = include_str!("../../data/tuned_params.txt");

/// Parses `family geometry gamma0 lambda` lines; `#` starts a comment.
pub fn parse_tuned_params(text: &str) -> Result<HashMap<(Family, GeometryChoice), (f64, f64)>> {
    let mut out = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |m: &str| GmviError::Parse(format!("tuned parameters line {}: {m}", lineno + 1));
        if fields.len() != 4 {
            return Err(err("expected 4 fields"));
        }
        let family: Family = fields[0].parse()?;
        let geometry: GeometryChoice = fields[1].parse()?;
        let gamma0: f64 = fields[2].parse().map_err(|_| err("bad gamma0"))?;
        let lambda: f64 = fields[3].parse().map_err(|_| err("bad lambda"))?;
        out.insert((family, geometry), (gamma0, lambda));
    }
    Ok(out)
}

/// Shipped N-EG-LS parameters for a family and geometry.
pub fn tuned_params(family: Family, geometry: GeometryChoice) -> Option<(f64, f64)> {
    static TABLE: OnceLock<HashMap<(Family, GeometryChoice), (f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| parse_tuned_params(TUNED).expect("bundled parameter file parses")).get(&(family, geometry)).copied()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table() {
        assert_eq!(tuned_params(Family::SUN, GeometryChoice::Euclidean), Some((0.4, 0.4)));
        assert_eq!(tuned_params(Family::SUN, GeometryChoice::PNorm), Some((0.2, 0.4)));
        assert_eq!(tuned_params(Family::SUN, GeometryChoice::Entropy), Some((0.8, 0.8)));
        assert_eq!(tuned_params(Family::KS, GeometryChoice::Euclidean), Some((0.2, 0.4)));
        assert_eq!(tuned_params(Family::WAT, GeometryChoice::Euclidean), Some((0.2, 0.8)));
        assert_eq!(tuned_params(Family::MHPH, GeometryChoice::Euclidean), Some((0.2, 0.4)));
        assert_eq!(tuned_params(Family::Custom, GeometryChoice::Euclidean), None);
        for f in [Family::KS, Family::WAT, Family::SUN, Family::MHPH, Family::RG] {
            for g in GeometryChoice::ALL {
                assert!(tuned_params(f, g).is_some(), "{f} {g}");
            }
        }
    }

    #[test]
    fn malformed_lines() {
        assert!(parse_tuned_params("SUN euclidean 0.4").is_err());
        assert!(parse_tuned_params("SUN sphere 0.4 0.4").is_err());
        assert!(parse_tuned_params("# only a comment\n\n").unwrap().is_empty());
    }
}
