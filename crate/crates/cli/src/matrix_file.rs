//! On-disk matrix format: subsystem dimensions plus row-major `[re, im]` pairs.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use quditsep::{CMatrix, DenseOperator};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Hermiticity tolerance applied when loading declared-Hermitian payloads.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

fn yes() -> bool {
    true
}

fn is_true(v: &bool) -> bool {
    *v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim_list: Vec<usize>,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub hermitian: bool,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(dim_list: Vec<usize>, m: &CMatrix) -> Self {
        let data = (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
            .collect();
        MatrixFile {
            dim_list,
            hermitian: true,
            data,
        }
    }

    pub fn from_operator(op: &DenseOperator) -> Self {
        Self::from_matrix(op.dims().to_vec(), op.matrix())
    }

    /// Checks shape and Hermiticity and returns the dense matrix.
    pub fn to_matrix(&self) -> Result<CMatrix, CliError> {
        if self.dim_list.is_empty() || self.dim_list.contains(&0) {
            return Err(CliError::Format("dim_list must be non-empty and positive".into()));
        }
        let side = self
            .dim_list
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| CliError::Format("dim_list product overflows".into()))?;
        if self.data.len() != side {
            return Err(CliError::Format(format!(
                "expected {side} rows from dim_list {:?}, found {}",
                self.dim_list,
                self.data.len()
            )));
        }
        if let Some((r, row)) = self.data.iter().enumerate().find(|(_, row)| row.len() != side) {
            return Err(CliError::Format(format!(
                "row {r} has {} entries, expected {side}",
                row.len()
            )));
        }
        if self.data.iter().flatten().flatten().any(|x| !x.is_finite()) {
            return Err(CliError::Format("non-finite entry".into()));
        }
        let m = CMatrix::from_fn(side, side, |r, c| {
            let [re, im] = self.data[r][c];
            Complex64::new(re, im)
        });
        if self.hermitian {
            let defect = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            if defect > HERMITIAN_TOLERANCE {
                return Err(CliError::Format(format!(
                    "matrix declared Hermitian but deviates by {defect:e}"
                )));
            }
        }
        Ok(m)
    }

    pub fn to_operator(&self) -> Result<DenseOperator, CliError> {
        Ok(DenseOperator::new(self.dim_list.clone(), self.to_matrix()?)?)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Format(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let file = Self::parse(&text)
            .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
        file.to_matrix()
            .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
        Ok(file)
    }
}
