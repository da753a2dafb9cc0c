//! Operators and pure states on composite qudit Hilbert spaces.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// Input slack for Hermiticity, trace and normalization checks.
pub const INPUT_TOLERANCE: f64 = 1e-10;

/// Dense complex operator together with the dimensions of its tensor factors.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dims: Vec<usize>,
    mat: CMatrix,
}

impl DenseOperator {
    pub fn new(dims: Vec<usize>, mat: CMatrix) -> Result<Self> {
        let side = total_dim(&dims)?;
        if mat.nrows() != side || mat.ncols() != side {
            return Err(Error::DimensionMismatch {
                expected: side,
                found: if mat.nrows() != side { mat.nrows() } else { mat.ncols() },
            });
        }
        Ok(Self { dims, mat })
    }

    /// Operator on a single qudit.
    pub fn single(mat: CMatrix) -> Result<Self> {
        let d = mat.nrows();
        Self::new(vec![d], mat)
    }

    /// Operator on `n` qudits of dimension `dim` each.
    pub fn uniform(dim: usize, n: usize, mat: CMatrix) -> Result<Self> {
        Self::new(vec![dim; n], mat)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn side(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.mat)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        linalg::hermiticity_defect(&self.mat) <= tol
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.mat)
    }

    /// Checks that this is a density operator: Hermitian and unit trace to
    /// [`INPUT_TOLERANCE`]. Positivity is not required here.
    pub fn validate_state(&self) -> Result<()> {
        let defect = linalg::hermiticity_defect(&self.mat);
        if defect > INPUT_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "operator is not Hermitian (defect {defect:e})"
            )));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > INPUT_TOLERANCE {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        Ok(())
    }

    /// Requires every tensor factor to have dimension `dim` and `n` factors.
    pub fn expect_uniform(&self, dim: usize, n: usize) -> Result<()> {
        if self.dims.len() != n || self.dims.iter().any(|&d| d != dim) {
            let expected = linalg::checked_pow(dim, n).unwrap_or(usize::MAX);
            return Err(Error::DimensionMismatch {
                expected,
                found: self.side(),
            });
        }
        Ok(())
    }
}

/// Normalized state vector with its tensor factor dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: CVector,
}

impl PureState {
    /// Wraps `amps`, requiring unit norm to [`INPUT_TOLERANCE`].
    pub fn new(dims: Vec<usize>, amps: CVector) -> Result<Self> {
        let side = total_dim(&dims)?;
        if amps.len() != side {
            return Err(Error::DimensionMismatch {
                expected: side,
                found: amps.len(),
            });
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > INPUT_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "state vector has norm {norm}, expected 1"
            )));
        }
        Ok(Self { dims, amps })
    }

    pub fn single(amps: CVector) -> Result<Self> {
        let d = amps.len();
        Self::new(vec![d], amps)
    }

    /// Normalizes `amps` first. Fails on the zero vector.
    pub fn normalized(dims: Vec<usize>, amps: CVector) -> Result<Self> {
        let norm = amps.norm();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::Degenerate("cannot normalize a zero vector".into()));
        }
        Self::new(dims, amps.unscale(norm))
    }

    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, amps: CVector) -> Self {
        Self { dims, amps }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn projector(&self) -> CMatrix {
        linalg::projector(&self.amps)
    }

    pub fn density(&self) -> DenseOperator {
        DenseOperator {
            dims: self.dims.clone(),
            mat: self.projector(),
        }
    }

    /// `<self|m|self>`.
    pub fn expectation(&self, m: &CMatrix) -> Complex64 {
        self.amps.dotc(&(m * &self.amps))
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        PureState {
            dims,
            amps: linalg::kron_vec(&self.amps, &other.amps),
        }
    }
}

fn total_dim(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidDimension(format!(
            "subsystem dimensions must be positive, got {dims:?}"
        )));
    }
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::ResourceCap(format!("dimension product {dims:?} overflows")))
}
