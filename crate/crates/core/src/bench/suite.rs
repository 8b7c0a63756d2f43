//! Suite files: one cell per line as whitespace-separated `key=value` tokens.
//!
//! ```text
//! # family  size    geometry          solver
//! family=KS geometry=euclidean algo=negls gamma0=0.2 lambda=0.4
//! family=WAT index=3 offset=minus geometry=euclidean algo=neg
//! family=SUN n=8000 geometry=all
//! family=MHPH n=1000 seed=7 geometry=pnorm tol=1e-3 max_prox=100000
//! ```
//!
//! Keys: `family n seed index offset geometry algo gamma0 lambda L nu horizon tol max_prox`.
//! `geometry=all` expands to one cell per geometry. `algo` defaults to `negls`.

use std::path::Path;

use super::{AlgoKind, BenchCell, InstanceSpec};
use crate::error::{GmviError, Result};
use crate::geometry::GeometryChoice;
use crate::problems::{Family, WatsonOffset};

fn parse_line(line: &str, lineno: usize) -> Result<Vec<BenchCell>> {
    let err = |m: String| GmviError::Parse(format!("suite line {lineno}: {m}"));
    let mut family = None;
    let mut n = None;
    let mut seed = None;
    let mut index = None;
    let mut offset = None;
    let mut geometry = None;
    let mut algo = AlgoKind::NegLs;
    let mut cell = BenchCell::new(InstanceSpec::ks(), GeometryChoice::Euclidean, algo);

    fn num<T: std::str::FromStr>(key: &str, v: &str, lineno: usize) -> Result<T> {
        v.parse().map_err(|_| GmviError::Parse(format!("suite line {lineno}: bad value '{v}' for {key}")))
    }

    for token in line.split_whitespace() {
        let (key, value) = token.split_once('=').ok_or_else(|| err(format!("expected key=value, got '{token}'")))?;
        match key {
            "family" => family = Some(value.parse::<Family>()?),
            "n" => n = Some(num::<usize>(key, value, lineno)?),
            "seed" => seed = Some(num::<u64>(key, value, lineno)?),
            "index" => index = Some(num::<usize>(key, value, lineno)?),
            "offset" => offset = Some(value.parse::<WatsonOffset>()?),
            "geometry" => {
                geometry = Some(if value == "all" { GeometryChoice::ALL.to_vec() } else { vec![value.parse()?] })
            }
            "algo" => algo = value.parse()?,
            "gamma0" => cell.params.gamma0 = Some(num(key, value, lineno)?),
            "lambda" => cell.params.lambda = Some(num(key, value, lineno)?),
            "L" => cell.params.l = Some(num(key, value, lineno)?),
            "nu" => cell.params.nu = Some(num(key, value, lineno)?),
            "horizon" => cell.params.horizon = Some(num(key, value, lineno)?),
            "tol" => cell.gap_tol = num(key, value, lineno)?,
            "max_prox" => cell.max_prox_calls = num(key, value, lineno)?,
            other => return Err(err(format!("unknown key '{other}'"))),
        }
    }

    let family = family.ok_or_else(|| err("missing family".into()))?;
    let instance = match family {
        Family::KS => InstanceSpec::ks(),
        Family::WAT => {
            let spec = InstanceSpec::watson(index.ok_or_else(|| err("WAT needs index".into()))?);
            InstanceSpec { watson_offset: offset.unwrap_or_default(), ..spec }
        }
        Family::SUN => InstanceSpec::sun(n.ok_or_else(|| err("SUN needs n".into()))?),
        Family::MHPH | Family::RG => {
            let n = n.ok_or_else(|| err(format!("{family} needs n")))?;
            let seed = seed.ok_or_else(|| err(format!("{family} needs seed")))?;
            InstanceSpec::seeded(family, n, seed)
        }
        Family::Custom => return Err(err("custom instances cannot appear in a suite".into())),
    };
    if family != Family::WAT && offset.is_some() {
        return Err(err("offset applies to WAT only".into()));
    }
    if !family.is_seeded() && seed.is_some() {
        return Err(err(format!("{family} takes no seed")));
    }
    let geometries = geometry.ok_or_else(|| err("missing geometry".into()))?;
    cell.instance = instance;
    cell.algo = algo;
    Ok(geometries.into_iter().map(|g| BenchCell { geometry: g, ..cell.clone() }).collect())
}

pub fn parse_suite(text: &str) -> Result<Vec<BenchCell>> {
    let mut cells = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if !line.is_empty() {
            cells.extend(parse_line(line, i + 1)?);
        }
    }
    Ok(cells)
}

pub fn load_suite(path: &Path) -> Result<Vec<BenchCell>> {
    let text = std::fs::read_to_string(path).map_err(|source| GmviError::Io { path: path.to_path_buf(), source })?;
    parse_suite(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cells() {
        let cells = parse_suite(
            "# header\nfamily=KS geometry=euclidean gamma0=0.2 lambda=0.4\n\nfamily=SUN n=50 geometry=all algo=neg L=2 # trailing\nfamily=MHPH n=20 seed=3 geometry=pnorm tol=0.1 max_prox=500\n",
        )
        .unwrap();
        assert_eq!(cells.len(), 5);
        let wat = parse_suite("family=WAT index=4 offset=minus geometry=pnorm").unwrap();
        assert_eq!(wat[0].instance, InstanceSpec::watson_minus(4));
        assert_eq!(cells[0].params.gamma0, Some(0.2));
        assert_eq!(cells[1].geometry, GeometryChoice::Euclidean);
        assert_eq!(cells[3].geometry, GeometryChoice::Entropy);
        assert_eq!(cells[2].algo, AlgoKind::Neg);
        assert_eq!(cells[2].params.l, Some(2.0));
        assert_eq!(cells[4].instance, InstanceSpec::mhph(20, 3));
        assert_eq!((cells[4].gap_tol, cells[4].max_prox_calls), (0.1, 500));
    }

    #[test]
    fn rejects_bad_lines() {
        for bad in [
            "family=SUN geometry=euclidean",
            "family=RG n=10 geometry=euclidean",
            "family=KS geometry=euclidean seed=1",
            "family=SUN n=5 offset=minus geometry=euclidean",
            "family=WAT index=2 offset=sideways geometry=euclidean",
            "family=KS geometry=euclidean colour=red",
            "family=KS geometry=sphere",
            "family=KS",
            "family=SUN n=ten geometry=euclidean",
            "family=KS geometry=euclidean junk",
        ] {
            assert!(parse_suite(bad).is_err(), "{bad}");
        }
    }
}
