//! Hermitian generator basis of SU(D), its structure constants, and the
//! Bloch-vector expansion of single-qudit density operators.
//!
//! Generators are addressed by `j = 1, ..., D²-1`; index `α = 0` is reserved
//! for `λ₀ = I/√D`. The flat order is all diagonal generators `Γ_a`
//! (`a = 2..=D`), then the symmetric `Γ⁺_ab`, then the antisymmetric `Γ⁻_ab`,
//! each pair family in lexicographic `(a, b)` order with `a < b`. Labels use
//! one-based level indices `a, b ∈ 1..=D`.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, real, CMatrix, ZERO};
use crate::operator::DenseOperator;

/// Tolerance on algebraic identities that hold exactly in real arithmetic.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

/// Largest dimension for which dense structure constants are built.
pub const MAX_STRUCTURE_DIM: usize = 16;

/// Which member of the generalized Gell-Mann family a generator is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeneratorLabel {
    /// `Γ_a`, `2 ≤ a ≤ D`.
    Diag { a: usize },
    /// `Γ⁺_ab = (|a><b| + |b><a|)/√2`, `a < b`.
    Sym { a: usize, b: usize },
    /// `Γ⁻_ab = -i(|a><b| - |b><a|)/√2`, `a < b`.
    Antisym { a: usize, b: usize },
}

impl GeneratorLabel {
    pub fn is_antisymmetric(&self) -> bool {
        matches!(self, GeneratorLabel::Antisym { .. })
    }
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorLabel::Diag { a } => write!(f, "diag({a})"),
            GeneratorLabel::Sym { a, b } => write!(f, "sym({a},{b})"),
            GeneratorLabel::Antisym { a, b } => write!(f, "antisym({a},{b})"),
        }
    }
}

type SparseEntries = Vec<(usize, usize, Complex64)>;

/// Orthonormal Hermitian operator basis `{λ₀, λ₁, ..., λ_{D²-1}}`.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    dim: usize,
    /// `ops[0] = λ₀`, `ops[j] = λ_j`.
    ops: Vec<CMatrix>,
    sparse: Vec<SparseEntries>,
    labels: Vec<GeneratorLabel>,
    index: HashMap<GeneratorLabel, usize>,
}

/// Builds the generator basis for a `dim`-level system.
pub fn build_basis(dim: usize) -> Result<GeneratorBasis> {
    check_dim(dim)?;
    let mut labels = Vec::with_capacity(dim * dim - 1);
    labels.extend((2..=dim).map(|a| GeneratorLabel::Diag { a }));
    let pairs: Vec<(usize, usize)> = (1..=dim)
        .flat_map(|a| (a + 1..=dim).map(move |b| (a, b)))
        .collect();
    labels.extend(pairs.iter().map(|&(a, b)| GeneratorLabel::Sym { a, b }));
    labels.extend(pairs.iter().map(|&(a, b)| GeneratorLabel::Antisym { a, b }));

    let lambda0 = real(1.0 / (dim as f64).sqrt());
    let mut sparse: Vec<SparseEntries> = vec![(0..dim).map(|k| (k, k, lambda0)).collect()];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for label in &labels {
        let entries = match *label {
            GeneratorLabel::Diag { a } => {
                let norm = 1.0 / ((a * (a - 1)) as f64).sqrt();
                let mut e: SparseEntries = (0..a - 1).map(|k| (k, k, real(norm))).collect();
                e.push((a - 1, a - 1, real(-((a - 1) as f64) * norm)));
                e
            }
            GeneratorLabel::Sym { a, b } => vec![(a - 1, b - 1, real(h)), (b - 1, a - 1, real(h))],
            GeneratorLabel::Antisym { a, b } => vec![
                (a - 1, b - 1, Complex64::new(0.0, -h)),
                (b - 1, a - 1, Complex64::new(0.0, h)),
            ],
        };
        sparse.push(entries);
    }
    let ops = sparse
        .iter()
        .map(|entries| {
            let mut m = CMatrix::zeros(dim, dim);
            for &(r, c, v) in entries {
                m[(r, c)] = v;
            }
            m
        })
        .collect();
    let index = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i + 1))
        .collect();
    Ok(GeneratorBasis {
        dim,
        ops,
        sparse,
        labels,
        index,
    })
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of traceless generators, `D² - 1`.
    pub fn num_generators(&self) -> usize {
        self.ops.len() - 1
    }

    pub fn lambda0(&self) -> &CMatrix {
        &self.ops[0]
    }

    /// `λ_α` for `α ∈ 0..D²`.
    pub fn operator(&self, alpha: usize) -> &CMatrix {
        &self.ops[alpha]
    }

    /// All `D²` basis operators, `λ₀` first.
    pub fn operators(&self) -> &[CMatrix] {
        &self.ops
    }

    /// The traceless generators `λ_1, ..., λ_{D²-1}`.
    pub fn generators(&self) -> &[CMatrix] {
        &self.ops[1..]
    }

    /// Label of generator `j ≥ 1`.
    pub fn label(&self, j: usize) -> GeneratorLabel {
        assert!(j >= 1, "generator indices start at 1");
        self.labels[j - 1]
    }

    pub fn labels(&self) -> &[GeneratorLabel] {
        &self.labels
    }

    /// Flat index `j ≥ 1` of a label, if it belongs to this basis.
    pub fn index_of(&self, label: GeneratorLabel) -> Option<usize> {
        self.index.get(&label).copied()
    }

    /// Non-zero entries `(row, col, value)` of `λ_α`.
    pub fn entries(&self, alpha: usize) -> &[(usize, usize, Complex64)] {
        &self.sparse[alpha]
    }

    /// `tr(m λ_α)` using the sparsity of `λ_α`.
    pub fn trace_against(&self, m: &CMatrix, alpha: usize) -> Complex64 {
        self.sparse[alpha]
            .iter()
            .map(|&(r, c, v)| m[(c, r)] * v)
            .sum()
    }

    /// Largest `|tr(λ_α λ_β) - δ_αβ|` over the full basis.
    pub fn orthonormality_residual(&self) -> f64 {
        let n = self.ops.len();
        let mut worst = 0.0f64;
        for alpha in 0..n {
            for beta in 0..n {
                let t = self.trace_against(&self.ops[alpha], beta);
                let expected = if alpha == beta { 1.0 } else { 0.0 };
                worst = worst.max((t - real(expected)).norm());
            }
        }
        worst
    }

    /// Rebuilds `|a><b|` (one-based levels) from the generators by inverting
    /// their definitions, without using the orthonormal expansion directly.
    pub fn outer_from_generators(&self, a: usize, b: usize) -> CMatrix {
        let d = self.dim;
        assert!((1..=d).contains(&a) && (1..=d).contains(&b));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let gen = |label| &self.ops[self.index_of(label).expect("label in basis")];
        if a == b {
            let mut m = linalg::identity(d).unscale(d as f64);
            if a >= 2 {
                let coeff = -((a - 1) as f64) / ((a * (a - 1)) as f64).sqrt();
                m += gen(GeneratorLabel::Diag { a }).scale(coeff);
            }
            for c in a + 1..=d {
                let coeff = 1.0 / ((c * (c - 1)) as f64).sqrt();
                m += gen(GeneratorLabel::Diag { a: c }).scale(coeff);
            }
            m
        } else {
            let (lo, hi) = (a.min(b), a.max(b));
            let plus = gen(GeneratorLabel::Sym { a: lo, b: hi });
            let minus = gen(GeneratorLabel::Antisym { a: lo, b: hi });
            let sign = if a < b { 1.0 } else { -1.0 };
            (plus + minus * Complex64::new(0.0, sign)).scale(h)
        }
    }
}

/// Real coefficient vector `c_j = D tr(ρ λ_j)`, `j = 1, ..., D²-1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlochVector {
    dim: usize,
    components: Vec<f64>,
}

impl BlochVector {
    pub fn new(dim: usize, components: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if components.len() != dim * dim - 1 {
            return Err(Error::DimensionMismatch {
                expected: dim * dim - 1,
                found: components.len(),
            });
        }
        Ok(Self { dim, components })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            components: vec![0.0; dim * dim - 1],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Component `c_j` for `j ≥ 1`.
    pub fn get(&self, j: usize) -> f64 {
        self.components[j - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.components
    }

    /// `c·c`; equals `D(D-1)` for pure states.
    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|c| c * c).sum()
    }
}

fn check_basis_dim(basis: &GeneratorBasis, side: usize) -> Result<()> {
    if side != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: side,
        });
    }
    Ok(())
}

/// Bloch coefficients of a single-qudit density operator.
pub fn bloch_expand(rho: &DenseOperator, basis: &GeneratorBasis) -> Result<BlochVector> {
    check_basis_dim(basis, rho.side())?;
    rho.validate_state()?;
    let m = rho.matrix();
    let herm = (m + m.adjoint()).scale(0.5);
    let d = basis.dim() as f64;
    let mut components = Vec::with_capacity(basis.num_generators());
    for j in 1..=basis.num_generators() {
        let t = basis.trace_against(&herm, j);
        if t.im.abs() > IDENTITY_TOLERANCE {
            return Err(Error::Degenerate(format!(
                "tr(ρ λ_{j}) has imaginary part {:e}",
                t.im
            )));
        }
        components.push(d * t.re);
    }
    Ok(BlochVector {
        dim: basis.dim(),
        components,
    })
}

/// `ρ = (I + Σ_j c_j λ_j) / D`.
pub fn bloch_reconstruct(c: &BlochVector, basis: &GeneratorBasis) -> Result<DenseOperator> {
    check_basis_dim(basis, c.dim())?;
    let d = basis.dim();
    let mut m = linalg::identity(d);
    for (j, &cj) in c.components.iter().enumerate() {
        for &(r, col, v) in basis.entries(j + 1) {
            m[(r, col)] += v * cj;
        }
    }
    DenseOperator::single(m.unscale(d as f64))
}

/// Completely symmetric `d_jkl` and antisymmetric `f_jkl` tensors, stored
/// densely with one-based generator indices.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    dim: usize,
    n: usize,
    d: Vec<f64>,
    f: Vec<f64>,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn offset(&self, j: usize, k: usize, l: usize) -> usize {
        debug_assert!(j >= 1 && k >= 1 && l >= 1);
        ((j - 1) * self.n + (k - 1)) * self.n + (l - 1)
    }

    pub fn d(&self, j: usize, k: usize, l: usize) -> f64 {
        self.d[self.offset(j, k, l)]
    }

    pub fn f(&self, j: usize, k: usize, l: usize) -> f64 {
        self.f[self.offset(j, k, l)]
    }

    /// Largest deviation from complete symmetry of `d` and complete
    /// antisymmetry of `f` over all index permutations.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let d = self.d(j, k, l);
                    let f = self.f(j, k, l);
                    for (p, sign) in [
                        ((k, j, l), -1.0),
                        ((j, l, k), -1.0),
                        ((l, k, j), -1.0),
                        ((k, l, j), 1.0),
                        ((l, j, k), 1.0),
                    ] {
                        worst = worst.max((self.d(p.0, p.1, p.2) - d).abs());
                        worst = worst.max((self.f(p.0, p.1, p.2) - sign * f).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest Frobenius residual of
    /// `λ_j λ_k - δ_jk I/D - Σ_l (d_jkl + i f_jkl) λ_l` over all `(j, k)`.
    pub fn product_residual(&self, basis: &GeneratorBasis) -> f64 {
        let n = self.n;
        let dim = basis.dim();
        let mut worst = 0.0f64;
        for j in 1..=n {
            for k in 1..=n {
                let mut m = sparse_product(basis, j, k);
                if j == k {
                    for r in 0..dim {
                        m[(r, r)] -= real(1.0 / dim as f64);
                    }
                }
                for l in 1..=n {
                    let coeff = Complex64::new(self.d(j, k, l), self.f(j, k, l));
                    if coeff == ZERO {
                        continue;
                    }
                    for &(r, c, v) in basis.entries(l) {
                        m[(r, c)] -= coeff * v;
                    }
                }
                worst = worst.max(linalg::frobenius(&m));
            }
        }
        worst
    }
}

fn sparse_product(basis: &GeneratorBasis, j: usize, k: usize) -> CMatrix {
    let dim = basis.dim();
    let mut m = CMatrix::zeros(dim, dim);
    for &(r1, c1, v1) in basis.entries(j) {
        for &(r2, c2, v2) in basis.entries(k) {
            if c1 == r2 {
                m[(r1, c2)] += v1 * v2;
            }
        }
    }
    m
}

/// Structure constants from traces of generator triple products:
/// `d_jkl = tr({λ_j, λ_k} λ_l)/2`, `f_jkl = tr([λ_j, λ_k] λ_l)/(2i)`.
pub fn structure_constants(basis: &GeneratorBasis) -> Result<StructureConstants> {
    let dim = basis.dim();
    if dim > MAX_STRUCTURE_DIM {
        return Err(Error::ResourceCap(format!(
            "dense structure constants are limited to D ≤ {MAX_STRUCTURE_DIM}, got {dim}"
        )));
    }
    let n = basis.num_generators();
    // triple[j][k][l] = tr(λ_j λ_k λ_l)
    let mut triple = vec![ZERO; n * n * n];
    for j in 1..=n {
        for k in 1..=n {
            let p = sparse_product(basis, j, k);
            for l in 1..=n {
                triple[((j - 1) * n + (k - 1)) * n + (l - 1)] = basis.trace_against(&p, l);
            }
        }
    }
    let mut d = vec![0.0; n * n * n];
    let mut f = vec![0.0; n * n * n];
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                let jk = triple[(j * n + k) * n + l];
                let kj = triple[(k * n + j) * n + l];
                let idx = (j * n + k) * n + l;
                d[idx] = ((jk + kj) * 0.5).re;
                f[idx] = ((jk - kj) / Complex64::new(0.0, 2.0)).re;
            }
        }
    }
    Ok(StructureConstants { dim, n, d, f })
}
