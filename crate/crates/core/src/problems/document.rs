use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{
    make_kojima_shindo, make_mhph, make_rg, make_sun, make_watson_with, AffineMatrix, Family, Monotonicity,
    OperatorSpec, ProblemInstance, WatsonOffset,
};
use crate::error::{GmviError, Result};

/// On-disk form of an instance. Matrices are row-major arrays of rows.
///
/// `matrix`/`offset` may be omitted for families that can be rebuilt from
/// `(name, n, seed)`; custom instances always carry them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub name: String,
    pub family: Family,
    pub n: usize,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<Vec<f64>>,
}

impl ProblemInstance {
    /// Document for caching. With `with_data` the affine data is embedded
    /// (except for the structured SUN matrix, which is implied by `n`).
    pub fn to_document(&self, with_data: bool) -> InstanceDocument {
        let (matrix, offset) = match self.operator() {
            OperatorSpec::Affine { matrix, offset } if with_data || self.family() == Family::Custom => {
                let rows = match matrix {
                    AffineMatrix::UnitUpperTwos { .. } => None,
                    AffineMatrix::Dense(_) => Some(matrix.rows()),
                };
                (rows, Some(offset.clone()))
            }
            _ => (None, None),
        };
        InstanceDocument {
            name: self.name().to_string(),
            family: self.family(),
            n: self.n(),
            seed: self.seed(),
            matrix,
            offset,
        }
    }

    pub fn from_document(doc: &InstanceDocument) -> Result<Self> {
        if doc.seed.is_some() != doc.family.is_seeded() {
            return Err(GmviError::InvalidInstance(format!(
                "family {} {} a seed",
                doc.family,
                if doc.family.is_seeded() { "requires" } else { "does not take" }
            )));
        }
        let inst = match (doc.family, &doc.matrix, &doc.offset) {
            (Family::KS, _, _) => make_kojima_shindo(),
            (Family::SUN, _, _) => make_sun(doc.n)?,
            (Family::WAT, None, None) => {
                let rest = doc.name.strip_prefix("WAT").unwrap_or("");
                let (digits, sign) = match rest.strip_suffix('-') {
                    Some(d) => (d, WatsonOffset::Minus),
                    None => (rest, WatsonOffset::Plus),
                };
                let idx = digits
                    .parse::<usize>()
                    .map_err(|_| GmviError::InvalidInstance(format!("cannot infer Watson index from '{}'", doc.name)))?;
                make_watson_with(idx, sign)?
            }
            (Family::MHPH, None, None) => make_mhph(doc.n, doc.seed.unwrap_or_default())?,
            (Family::RG, None, None) => make_rg(doc.n, doc.seed.unwrap_or_default())?,
            (family, Some(rows), Some(offset)) => {
                let n = offset.len();
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(GmviError::InvalidInstance("matrix is not square or does not match offset".into()));
                }
                let a = Array2::from_shape_fn((n, n), |(i, j)| rows[i][j]);
                let monotonicity = if family == Family::MHPH { Monotonicity::Monotone } else { Monotonicity::Unknown };
                let mut inst = ProblemInstance::custom_affine(doc.name.clone(), a, offset.clone(), monotonicity)?;
                inst.family = family;
                inst.seed = doc.seed;
                inst
            }
            (family, _, _) => {
                return Err(GmviError::InvalidInstance(format!("family {family} requires both matrix and offset")))
            }
        };
        if inst.n() != doc.n {
            return Err(GmviError::InvalidInstance(format!("document says n = {}, data has n = {}", doc.n, inst.n())));
        }
        Ok(inst)
    }

    pub fn to_json(&self, with_data: bool) -> Result<String> {
        Ok(serde_json::to_string(&self.to_document(with_data))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: InstanceDocument = serde_json::from_str(s)?;
        Self::from_document(&doc)
    }

    pub fn save(&self, path: &Path, with_data: bool) -> Result<()> {
        let json = self.to_json(with_data)?;
        std::fs::write(path, json).map_err(|source| GmviError::Io { path: path.to_path_buf(), source })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|source| GmviError::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&s)
    }
}
