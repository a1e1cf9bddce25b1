//! Basis, decomposition and exponential-map documents.

use qevo_core::gellmann::{decompose, GellMannBasis};
use qevo_core::su_exp::{exp_su2, exp_su3, exp_sud};
use qevo_core::{CMatrix, Complex64};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliError;

/// Dense matrix as a flat row-major list of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub dimension: usize,
    pub matrix: Vec<[f64; 2]>,
}

impl MatrixDocument {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let d = m.nrows();
        let mut matrix = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                matrix.push([m[(i, j)].re, m[(i, j)].im]);
            }
        }
        Self { dimension: d, matrix }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, CliError> {
        let d = self.dimension;
        if self.matrix.len() != d * d {
            return Err(CliError::Config(format!(
                "matrix of dimension {d} needs {} entries, got {}",
                d * d,
                self.matrix.len()
            )));
        }
        Ok(CMatrix::from_row_iterator(d, d, self.matrix.iter().map(|[re, im]| Complex64::new(*re, *im))))
    }
}

fn check_dim(expected: Option<usize>, found: usize) -> Result<(), CliError> {
    match expected {
        Some(d) if d != found => Err(CliError::Config(format!("--dim {d} does not match dimension {found}"))),
        _ => Ok(()),
    }
}

pub fn basis(d: usize) -> Result<Value, CliError> {
    let basis = GellMannBasis::new(d)?;
    Ok(serde_json::to_value(basis.to_document()).expect("basis serializes"))
}

pub fn decompose_matrix(text: &str, dim: Option<usize>) -> Result<Value, CliError> {
    let doc: MatrixDocument = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    check_dim(dim, doc.dimension)?;
    let basis = GellMannBasis::new(doc.dimension)?;
    let dec = decompose(&doc.to_matrix()?, &basis)?;
    Ok(json!({ "dimension": doc.dimension, "a0": dec.a0, "a": dec.a }))
}

/// Dimension with `d² − 1 = n`.
fn dimension_for(n: usize) -> Option<usize> {
    (2..=64).find(|d| d * d - 1 == n)
}

/// `exp{-i sqrt(d/2) r.Λ}` for a vector given as a JSON array.
pub fn expmap(text: &str, dim: Option<usize>) -> Result<Value, CliError> {
    let r: Vec<f64> =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("expected a JSON array: {e}")))?;
    let d =
        dimension_for(r.len()).ok_or_else(|| CliError::Config(format!("vector length {} is not d^2 - 1", r.len())))?;
    check_dim(dim, d)?;
    if r.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Config("vector has non-finite entries".into()));
    }
    let u = match d {
        2 => exp_su2(&[r[0], r[1], r[2]]),
        3 => exp_su3(&r.clone().try_into().expect("length checked")),
        _ => exp_sud(&r, &GellMannBasis::new(d)?)?,
    };
    Ok(serde_json::to_value(MatrixDocument::from_matrix(&u)).expect("matrix serializes"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expmap_of_zero_is_identity() {
        let v = expmap("[0,0,0,0,0,0,0,0]", None).unwrap();
        let doc: MatrixDocument = serde_json::from_value(v).unwrap();
        assert_eq!(doc.dimension, 3);
        assert_eq!(doc.to_matrix().unwrap(), CMatrix::identity(3, 3));
        assert!(expmap("[0,0]", None).is_err());
        assert!(expmap("[0,0,0]", Some(3)).is_err());
    }

    #[test]
    fn decompose_pauli_z() {
        let v = decompose_matrix(r#"{"dimension": 2, "matrix": [[1,0],[0,0],[0,0],[-1,0]]}"#, Some(2)).unwrap();
        assert_eq!(v["a"][2][0], 1.0);
        assert_eq!(v["a0"], json!([0.0, 0.0]));
    }

    #[test]
    fn basis_document_shape() {
        let v = basis(4).unwrap();
        assert_eq!(v["generators"].as_array().unwrap().len(), 15);
        assert!(basis(1).is_err());
    }
}
