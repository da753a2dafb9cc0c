//! Named qudit states: maximally entangled and cat states, their mixtures
//! with the maximally mixed state, the `z`-vector product ensemble that
//! decomposes the two-qudit mixture at its separability boundary, and the
//! local projection of ε-cat states onto a qubit subspace.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_dim, check_probability, Error, Result};
use crate::linalg::{self, real, CMatrix, CVector, ZERO};
use crate::operator::{DenseOperator, PureState, INPUT_TOLERANCE};
use crate::su_basis::{GeneratorBasis, IDENTITY_TOLERANCE};

/// Largest `D` for which the `4^D`-term `z` ensemble is enumerated.
pub const MAX_Z_DIM: usize = 8;
/// Largest state-vector length for cat states.
pub const MAX_STATE_LEN: usize = 1 << 20;
/// Largest side length of a dense operator built here.
pub const MAX_DENSE_SIDE: usize = 1 << 12;

fn check_state_len(dim: usize, n: usize) -> Result<usize> {
    check_dim(dim)?;
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "need at least two qudits, got {n}"
        )));
    }
    match linalg::checked_pow(dim, n) {
        Some(len) if len <= MAX_STATE_LEN => Ok(len),
        _ => Err(Error::ResourceCap(format!(
            "{dim}^{n} exceeds the state-vector cap {MAX_STATE_LEN}"
        ))),
    }
}

fn check_dense_side(dim: usize, n: usize) -> Result<usize> {
    let side = check_state_len(dim, n)?;
    if side > MAX_DENSE_SIDE {
        return Err(Error::ResourceCap(format!(
            "{dim}^{n} exceeds the dense-operator cap {MAX_DENSE_SIDE}"
        )));
    }
    Ok(side)
}

/// `|Ψ_cat> = (1/√D) Σ_a |a⟩^{⊗N}`.
pub fn cat_state(dim: usize, n: usize) -> Result<PureState> {
    let len = check_state_len(dim, n)?;
    let amp = real(1.0 / (dim as f64).sqrt());
    let mut v = CVector::zeros(len);
    for a in 0..dim {
        v[linalg::product_index(&vec![a; n], dim)] = amp;
    }
    Ok(PureState::from_parts_unchecked(vec![dim; n], v))
}

/// `|Ψ> = (1/√D) Σ_a |a⟩⊗|a⟩`.
pub fn max_entangled(dim: usize) -> Result<PureState> {
    cat_state(dim, 2)
}

/// `(1-ε) I/D^N + ε |Ψ_cat><Ψ_cat|`.
pub fn epsilon_cat(dim: usize, n: usize, eps: f64) -> Result<DenseOperator> {
    check_probability("eps", eps)?;
    let side = check_dense_side(dim, n)?;
    let mut m = CMatrix::zeros(side, side);
    let mixed = (1.0 - eps) / side as f64;
    for i in 0..side {
        m[(i, i)] = real(mixed);
    }
    let diag: Vec<usize> = (0..dim)
        .map(|a| linalg::product_index(&vec![a; n], dim))
        .collect();
    let coherent = eps / dim as f64;
    for &r in &diag {
        for &c in &diag {
            m[(r, c)] += real(coherent);
        }
    }
    DenseOperator::uniform(dim, n, m)
}

/// Two-qudit mixture `(1-ε) M_{D²} + ε |Ψ><Ψ|`.
pub fn epsilon_mixture(dim: usize, eps: f64) -> Result<DenseOperator> {
    epsilon_cat(dim, 2, eps)
}

/// Maximally mixed state on `n` qudits.
pub fn maximally_mixed(dim: usize, n: usize) -> Result<DenseOperator> {
    epsilon_cat(dim, n, 0.0)
}

/// Two-qudit correlation coefficients `c_αβ = D² tr(ρ λ_α ⊗ λ_β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQuditCoeffs {
    dim: usize,
    c: Vec<f64>,
}

impl TwoQuditCoeffs {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c_αβ`, with `α, β ∈ 0..D²`.
    pub fn get(&self, alpha: usize, beta: usize) -> f64 {
        let n = self.dim * self.dim;
        self.c[alpha * n + beta]
    }

    /// The diagonal `c_jj` for `j = 1, ..., D²-1`.
    pub fn diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        (1..self.dim * self.dim).map(|j| self.get(j, j))
    }
}

pub fn two_qudit_coeffs(rho: &DenseOperator, basis: &GeneratorBasis) -> Result<TwoQuditCoeffs> {
    let dim = basis.dim();
    if rho.side() != dim * dim {
        return Err(Error::DimensionMismatch {
            expected: dim * dim,
            found: rho.side(),
        });
    }
    rho.validate_state()?;
    let m = rho.matrix();
    let herm = (m + m.adjoint()).scale(0.5);
    let n = dim * dim;
    let scale = (dim * dim) as f64;
    let mut c = vec![0.0; n * n];
    for alpha in 0..n {
        for beta in 0..n {
            // tr(ρ (A ⊗ B)) = Σ A[r1,c1] B[r2,c2] ρ[(c1,c2),(r1,r2)]
            let mut t = ZERO;
            for &(r1, c1, va) in basis.entries(alpha) {
                for &(r2, c2, vb) in basis.entries(beta) {
                    t += va * vb * herm[(c1 * dim + c2, r1 * dim + r2)];
                }
            }
            if t.im.abs() > IDENTITY_TOLERANCE {
                return Err(Error::Degenerate(format!(
                    "coefficient ({alpha},{beta}) has imaginary part {:e}",
                    t.im
                )));
            }
            c[alpha * n + beta] = scale * t.re;
        }
    }
    Ok(TwoQuditCoeffs { dim, c })
}

/// One of the four allowed `z` components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZValue {
    PlusOne,
    MinusOne,
    PlusI,
    MinusI,
}

impl ZValue {
    pub const ALL: [ZValue; 4] = [ZValue::PlusOne, ZValue::MinusOne, ZValue::PlusI, ZValue::MinusI];

    /// Base-4 digit map `0 → +1, 1 → -1, 2 → +i, 3 → -i`.
    pub fn from_digit(digit: usize) -> ZValue {
        Self::ALL[digit % 4]
    }

    /// Exact value as a Gaussian integer `(re, im)`.
    pub fn gaussian(self) -> (i64, i64) {
        match self {
            ZValue::PlusOne => (1, 0),
            ZValue::MinusOne => (-1, 0),
            ZValue::PlusI => (0, 1),
            ZValue::MinusI => (0, -1),
        }
    }

    pub fn to_complex(self) -> Complex64 {
        let (re, im) = self.gaussian();
        Complex64::new(re as f64, im as f64)
    }

    pub fn conj(self) -> ZValue {
        match self {
            ZValue::PlusI => ZValue::MinusI,
            ZValue::MinusI => ZValue::PlusI,
            other => other,
        }
    }
}

/// Vector of `D` unit-modulus components drawn from `{±1, ±i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZVector {
    components: Vec<ZValue>,
}

impl ZVector {
    pub fn new(components: Vec<ZValue>) -> Result<Self> {
        check_dim(components.len())?;
        Ok(Self { components })
    }

    /// The `index`-th vector in base-4 counting order; the first component
    /// is the most significant digit.
    pub fn from_index(dim: usize, index: usize) -> Self {
        let mut components = vec![ZValue::PlusOne; dim];
        let mut rest = index;
        for slot in components.iter_mut().rev() {
            *slot = ZValue::from_digit(rest % 4);
            rest /= 4;
        }
        Self { components }
    }

    /// All `4^D` vectors in enumeration order.
    pub fn all(dim: usize) -> Result<impl Iterator<Item = ZVector>> {
        let count = z_count(dim)?;
        Ok((0..count).map(move |i| ZVector::from_index(dim, i)))
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ZValue] {
        &self.components
    }

    pub fn conj(&self) -> ZVector {
        ZVector {
            components: self.components.iter().map(|z| z.conj()).collect(),
        }
    }
}

fn z_count(dim: usize) -> Result<usize> {
    check_dim(dim)?;
    if dim > MAX_Z_DIM {
        return Err(Error::ResourceCap(format!(
            "z ensemble has 4^{dim} terms; limited to D ≤ {MAX_Z_DIM}"
        )));
    }
    Ok(1 << (2 * dim))
}

/// `|Φ_z> = (1/√D) Σ_a z_a |a>`.
pub fn phi_z(z: &ZVector) -> PureState {
    let dim = z.dim();
    let scale = 1.0 / (dim as f64).sqrt();
    let amps = CVector::from_iterator(dim, z.components.iter().map(|v| v.to_complex() * scale));
    PureState::from_parts_unchecked(vec![dim], amps)
}

/// `Σ_z z_a z_b* z_c* z_d` over all `4^D` vectors, in exact Gaussian-integer
/// arithmetic. Levels are zero-based.
pub fn z_moment_sum(dim: usize, a: usize, b: usize, c: usize, d: usize) -> Result<(i64, i64)> {
    let count = z_count(dim)?;
    let mul = |x: (i64, i64), y: (i64, i64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
    let conj = |x: (i64, i64)| (x.0, -x.1);
    let mut acc = (0i64, 0i64);
    for i in 0..count {
        let z = ZVector::from_index(dim, i);
        let g = |k: usize| z.components[k].gaussian();
        let term = mul(mul(g(a), conj(g(b))), mul(conj(g(c)), g(d)));
        acc = (acc.0 + term.0, acc.1 + term.1);
    }
    Ok(acc)
}

/// Closed form `4^D (δ_ab δ_cd + δ_ac δ_bd − δ_ab δ_cd δ_ac)` of the moment sum.
pub fn z_moment_closed_form(dim: usize, a: usize, b: usize, c: usize, d: usize) -> i64 {
    let delta = |x: usize, y: usize| i64::from(x == y);
    (1i64 << (2 * dim)) * (delta(a, b) * delta(c, d) + delta(a, c) * delta(b, d)
        - delta(a, b) * delta(c, d) * delta(a, c))
}

fn z_product_vector(z: &ZVector) -> CVector {
    linalg::kron_vec(phi_z(z).amplitudes(), phi_z(&z.conj()).amplitudes())
}

/// Uniform average of `|Φ_z><Φ_z| ⊗ |Φ_z*><Φ_z*|` over all `4^D` vectors.
pub fn z_ensemble_average(dim: usize) -> Result<DenseOperator> {
    let count = z_count(dim)?;
    let side = dim * dim;
    let mut acc = CMatrix::zeros(side, side);
    for z in ZVector::all(dim)? {
        let v = z_product_vector(&z);
        acc.ger(ONE_C, &v, &v.conjugate(), ONE_C);
    }
    DenseOperator::uniform(dim, 2, acc.unscale(count as f64))
}

const ONE_C: Complex64 = Complex64::new(1.0, 0.0);

/// `I⊗I/D² + |Ψ><Ψ|/D − (1/D²) Σ_a |aa><aa|`.
pub fn z_average_closed_form(dim: usize) -> Result<DenseOperator> {
    check_dim(dim)?;
    let side = dim * dim;
    let psi = max_entangled(dim)?;
    let d2 = (dim * dim) as f64;
    let mut m = linalg::identity(side).unscale(d2) + psi.projector().unscale(dim as f64);
    for a in 0..dim {
        let i = a * dim + a;
        m[(i, i)] -= real(1.0 / d2);
    }
    DenseOperator::uniform(dim, 2, m)
}

/// One weighted product term of an ensemble decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTerm {
    pub weight: f64,
    pub factors: Vec<PureState>,
}

/// Convex mixture of product pure states.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProductEnsemble {
    pub terms: Vec<ProductTerm>,
}

impl ProductEnsemble {
    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_weight(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.weight)
            .fold(f64::INFINITY, f64::min)
    }

    /// Scales every weight by `factor`.
    pub fn scaled(mut self, factor: f64) -> Self {
        for t in &mut self.terms {
            t.weight *= factor;
        }
        self
    }

    pub fn extend(&mut self, other: ProductEnsemble) {
        self.terms.extend(other.terms);
    }

    /// `Σ_k w_k ⊗_i |ψ_ki><ψ_ki|`. Fails on an empty ensemble or on terms
    /// whose factor dimensions disagree.
    pub fn density(&self) -> Result<DenseOperator> {
        let first = self
            .terms
            .first()
            .ok_or_else(|| Error::Degenerate("empty ensemble".into()))?;
        let dims: Vec<usize> = first.factors.iter().map(|f| f.dim()).collect();
        let side: usize = dims.iter().product();
        let mut acc = CMatrix::zeros(side, side);
        for term in &self.terms {
            let term_dims: Vec<usize> = term.factors.iter().map(|f| f.dim()).collect();
            if term_dims != dims {
                return Err(Error::DimensionMismatch {
                    expected: side,
                    found: term_dims.iter().product(),
                });
            }
            let v = term
                .factors
                .iter()
                .skip(1)
                .fold(term.factors[0].amplitudes().clone(), |acc, f| {
                    linalg::kron_vec(&acc, f.amplitudes())
                });
            acc.ger(real(term.weight), &v, &v.conjugate(), ONE_C);
        }
        DenseOperator::new(dims, acc)
    }
}

/// Product ensemble for the two-qudit mixture at `ε = 1/(1+D)`: all `4^D`
/// states `Φ_z ⊗ Φ_z*` with weight `D/((1+D)4^D)` each, followed by the `D`
/// states `|a>⊗|a>` with weight `1/((1+D)D)` each.
pub fn boundary_product_ensemble(dim: usize) -> Result<ProductEnsemble> {
    let count = z_count(dim)?;
    let d = dim as f64;
    let z_weight = d / ((1.0 + d) * count as f64);
    let mut terms = Vec::with_capacity(count + dim);
    for z in ZVector::all(dim)? {
        terms.push(ProductTerm {
            weight: z_weight,
            factors: vec![phi_z(&z), phi_z(&z.conj())],
        });
    }
    let diag_weight = 1.0 / ((1.0 + d) * d);
    for a in 0..dim {
        let ket = PureState::from_parts_unchecked(vec![dim], linalg::basis_vector(dim, a));
        terms.push(ProductTerm {
            weight: diag_weight,
            factors: vec![ket.clone(), ket],
        });
    }
    Ok(ProductEnsemble { terms })
}

/// Computational product basis with uniform weights: an ensemble for the
/// maximally mixed two-qudit state.
pub fn computational_product_ensemble(dim: usize) -> Result<ProductEnsemble> {
    check_dim(dim)?;
    let w = 1.0 / (dim * dim) as f64;
    let ket = |a| PureState::from_parts_unchecked(vec![dim], linalg::basis_vector(dim, a));
    let terms = (0..dim)
        .flat_map(|a| (0..dim).map(move |b| (a, b)))
        .map(|(a, b)| ProductTerm {
            weight: w,
            factors: vec![ket(a), ket(b)],
        })
        .collect();
    Ok(ProductEnsemble { terms })
}

/// `ε' = (2ε/D) / ((2/D)^N (1-ε) + 2ε/D)`: the mixing weight of the qubit
/// ε-cat state obtained by projecting every qudit onto `span{|1>, |2>}`.
pub fn epsilon_prime(dim: usize, n: usize, eps: f64) -> f64 {
    let d = dim as f64;
    let coherent = 2.0 * eps / d;
    coherent / ((2.0 / d).powi(n as i32) * (1.0 - eps) + coherent)
}

/// Result of locally projecting an ε-cat state onto qubits.
#[derive(Debug, Clone)]
pub struct QubitProjection {
    /// Normalized `2^N × 2^N` projected state.
    pub state: DenseOperator,
    /// Mixing weight read off the input state.
    pub eps: f64,
    /// `ε'` from the closed form.
    pub eps_prime: f64,
    /// `ε'` read off the projected matrix.
    pub eps_prime_measured: f64,
}

/// Applies `Π^{⊗N}` with `Π = |1><1| + |2><2|` to an ε-cat state and
/// renormalizes. The input must match `epsilon_cat(dim, n, ε)` for the `ε`
/// read off its `<1..1|ρ|2..2>` element.
pub fn project_to_qubits(rho: &DenseOperator, dim: usize, n: usize) -> Result<QubitProjection> {
    check_dense_side(dim, n)?;
    rho.expect_uniform(dim, n)?;
    let m = rho.matrix();
    let first = linalg::product_index(&vec![0; n], dim);
    let second = linalg::product_index(&vec![1; n], dim);
    let eps = dim as f64 * m[(first, second)].re;
    if !(-INPUT_TOLERANCE..=1.0 + INPUT_TOLERANCE).contains(&eps) {
        return Err(Error::InvalidState(format!(
            "inferred mixing weight {eps} is outside [0, 1]"
        )));
    }
    let eps = eps.clamp(0.0, 1.0);
    let reference = epsilon_cat(dim, n, eps)?;
    let gap = linalg::frobenius_distance(m, reference.matrix());
    if gap > INPUT_TOLERANCE {
        return Err(Error::InvalidState(format!(
            "input is not an ε-cat state (distance {gap:e} from ε = {eps})"
        )));
    }

    let qubit_side = 1usize << n;
    let embed: Vec<usize> = (0..qubit_side)
        .map(|q| {
            let digits: Vec<usize> = (0..n).map(|k| (q >> (n - 1 - k)) & 1).collect();
            linalg::product_index(&digits, dim)
        })
        .collect();
    let block = CMatrix::from_fn(qubit_side, qubit_side, |r, c| m[(embed[r], embed[c])]);
    let norm = linalg::trace(&block).re;
    if norm.is_nan() || norm <= f64::EPSILON {
        return Err(Error::Degenerate(format!(
            "projection has vanishing weight {norm:e}"
        )));
    }
    let projected = block.unscale(norm);
    let eps_prime_measured = 2.0 * projected[(0, qubit_side - 1)].re;
    Ok(QubitProjection {
        state: DenseOperator::uniform(2, n, projected)?,
        eps,
        eps_prime: epsilon_prime(dim, n, eps),
        eps_prime_measured,
    })
}
