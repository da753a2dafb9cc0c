//! Dense complex linear-algebra helpers shared by every module.
//!
//! Matrices are `nalgebra` dynamic matrices over `Complex64`. Composite
//! systems use the row-major computational-basis convention: the product
//! basis vector `|a_1, ..., a_N>` (zero-based digits) sits at index
//! `a_1 D^{N-1} + ... + a_N`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// Kronecker product of a non-empty list of matrices, left to right.
pub fn kron_all<'a, I>(mats: I) -> Option<CMatrix>
where
    I: IntoIterator<Item = &'a CMatrix>,
{
    mats.into_iter().fold(None, |acc, m| match acc {
        None => Some(m.clone()),
        Some(a) => Some(kron(&a, m)),
    })
}

/// `|v><w|`.
pub fn outer(v: &CVector, w: &CVector) -> CMatrix {
    v * w.adjoint()
}

pub fn projector(v: &CVector) -> CMatrix {
    outer(v, v)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Frobenius norm of `m - m†`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    frobenius_distance(m, &m.adjoint())
}

/// Eigenvalues of a Hermitian matrix, sorted ascending. Only the Hermitian
/// part of `m` is used.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let herm = (m + m.adjoint()).scale(0.5);
    let mut vals: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m)
        .first()
        .copied()
        .unwrap_or(f64::NAN)
}

/// Partial transpose of the second factor of a `dim_a * dim_b` operator.
pub fn partial_transpose_b(m: &CMatrix, dim_a: usize, dim_b: usize) -> CMatrix {
    let n = dim_a * dim_b;
    debug_assert_eq!(m.shape(), (n, n));
    CMatrix::from_fn(n, n, |row, col| {
        let (i, j) = (row / dim_b, row % dim_b);
        let (k, l) = (col / dim_b, col % dim_b);
        m[(i * dim_b + l, k * dim_b + j)]
    })
}

/// Trace over the second factor of a `dim_a * dim_b` operator.
pub fn partial_trace_b(m: &CMatrix, dim_a: usize, dim_b: usize) -> CMatrix {
    CMatrix::from_fn(dim_a, dim_a, |i, k| {
        (0..dim_b).map(|j| m[(i * dim_b + j, k * dim_b + j)]).sum()
    })
}

/// Trace over the first factor of a `dim_a * dim_b` operator.
pub fn partial_trace_a(m: &CMatrix, dim_a: usize, dim_b: usize) -> CMatrix {
    CMatrix::from_fn(dim_b, dim_b, |j, l| {
        (0..dim_a).map(|i| m[(i * dim_b + j, i * dim_b + l)]).sum()
    })
}

pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = ONE;
    v
}

/// Row-major index of the product basis vector with the given digits.
pub fn product_index(digits: &[usize], dim: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * dim + d)
}

/// Checked `base^exp` for sizing allocations.
pub fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e))
}
