//! Superoperators as `D² × D²` matrices in the outer-product operator basis
//! `τ_{ca} = |c><a|`, with flat index `(c, a) ↦ cD + a` (zero-based).
//!
//! A superoperator `S` acts on operators in two ways. The ordinary action
//! `S(A) = Σ S_{ca,db} |c><a| A |b><d|` is the usual map-on-operators, while
//! the left-right action `S|A)` multiplies the stored matrix against `A`
//! read as a row-major vector. [`sharp`] swaps the two.
//!
//! The centerpiece is the Haar-averaged projector superoperator
//! `G = ∫ dV |P_ψ)(P_ψ| = K(𝐈 + 𝓘)`, its inverse, and the dual operators
//! `Q_ψ = G⁻¹ P_ψ`.

use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::haar::{self, sigma_distance, Moments};
use crate::linalg::{self, real, CMatrix, CVector, ONE};
use crate::operator::{DenseOperator, PureState, INPUT_TOLERANCE};
use crate::su_basis::GeneratorBasis;

#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    mat: CMatrix,
}

impl Superoperator {
    pub fn from_matrix(dim: usize, mat: CMatrix) -> Result<Self> {
        check_dim(dim)?;
        let n = dim * dim;
        if mat.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: mat.nrows(),
            });
        }
        Ok(Self { dim, mat })
    }

    /// Builds from matrix elements `f(c, a, d, b) = S_{ca,db}`.
    pub fn from_elements<F>(dim: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize, usize, usize) -> Complex64,
    {
        check_dim(dim)?;
        let n = dim * dim;
        let mat = CMatrix::from_fn(n, n, |r, c| f(r / dim, r % dim, c / dim, c % dim));
        Ok(Self { dim, mat })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::from_elements(dim, |_, _, _, _| linalg::ZERO)
    }

    /// `𝐈 = Σ_α |τ_α)(τ_α|`, the identity for the left-right action.
    pub fn lr_identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            mat: linalg::identity(dim * dim),
        })
    }

    /// `𝓘 = I ⊙ I`, the identity for the ordinary action.
    pub fn ordinary_identity(dim: usize) -> Result<Self> {
        Self::from_elements(dim, |c, a, d, b| if c == a && d == b { ONE } else { linalg::ZERO })
    }

    /// `A ⊙ B`, whose ordinary action is `X ↦ A X B`.
    pub fn sandwich(left: &CMatrix, right: &CMatrix) -> Result<Self> {
        let dim = left.nrows();
        if left.shape() != (dim, dim) || right.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: right.nrows(),
            });
        }
        Self::from_elements(dim, |c, a, d, b| left[(c, a)] * right[(b, d)])
    }

    /// `|A)(B|`.
    pub fn lr_outer(a: &CMatrix, b: &CMatrix) -> Result<Self> {
        let dim = a.nrows();
        if a.shape() != (dim, dim) || b.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: b.nrows(),
            });
        }
        let va = vectorize(a);
        let vb = vectorize(b);
        Self::from_matrix(dim, &va * vb.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// `S_{ca,db}` with zero-based levels.
    pub fn element(&self, c: usize, a: usize, d: usize, b: usize) -> Complex64 {
        self.mat[(c * self.dim + a, d * self.dim + b)]
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            mat: self.mat.scale(factor),
        }
    }

    fn check_same(&self, other: &Superoperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    fn check_operand(&self, a: &CMatrix) -> Result<()> {
        if a.shape() != (self.dim, self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: a.nrows(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Superoperator) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            dim: self.dim,
            mat: &self.mat + &other.mat,
        })
    }

    pub fn distance(&self, other: &Superoperator) -> f64 {
        linalg::frobenius_distance(&self.mat, &other.mat)
    }

    pub fn is_lr_hermitian(&self, tol: f64) -> bool {
        linalg::hermiticity_defect(&self.mat) <= tol
    }
}

/// Row-major vectorization `A ↦ |A)` in the `τ_{ca}` basis.
pub fn vectorize(a: &CMatrix) -> CVector {
    let d = a.nrows();
    CVector::from_fn(d * d, |i, _| a[(i / d, i % d)])
}

pub fn unvectorize(v: &CVector, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |r, c| v[r * dim + c])
}

/// `S(A) = Σ S_{ca,db} |c><a| A |b><d|`.
pub fn ordinary_action(s: &Superoperator, a: &CMatrix) -> Result<CMatrix> {
    s.check_operand(a)?;
    let d = s.dim;
    Ok(CMatrix::from_fn(d, d, |c, dd| {
        let mut acc = linalg::ZERO;
        for aa in 0..d {
            for b in 0..d {
                acc += s.element(c, aa, dd, b) * a[(aa, b)];
            }
        }
        acc
    }))
}

/// `S|A) = Σ S_{αβ} |τ_α)(τ_β|A)`.
pub fn left_right_action(s: &Superoperator, a: &CMatrix) -> Result<CMatrix> {
    s.check_operand(a)?;
    Ok(unvectorize(&(&s.mat * vectorize(a)), s.dim))
}

/// `S^#_{ca,db} = S_{cd,ab}`.
pub fn sharp(s: &Superoperator) -> Superoperator {
    let d = s.dim;
    let mat = CMatrix::from_fn(d * d, d * d, |r, col| {
        let (c, a) = (r / d, r % d);
        let (dd, b) = (col / d, col % d);
        s.mat[(c * d + dd, a * d + b)]
    });
    Superoperator { dim: d, mat }
}

/// Adjoint for the left-right action: the conjugate transpose.
pub fn lr_adjoint(s: &Superoperator) -> Superoperator {
    Superoperator {
        dim: s.dim,
        mat: s.mat.adjoint(),
    }
}

/// Adjoint for the ordinary action, `S^× = Σ S*_{αβ} τ_α† ⊙ τ_β`, defined by
/// `tr([S^×(B)]† A) = tr(B† S(A))`.
pub fn ordinary_adjoint(s: &Superoperator) -> Superoperator {
    let d = s.dim;
    let mat = CMatrix::from_fn(d * d, d * d, |r, col| {
        let (c, a) = (r / d, r % d);
        let (dd, b) = (col / d, col % d);
        s.element(a, c, b, dd).conj()
    });
    Superoperator { dim: d, mat }
}

/// Product for the left-right action, `(RS)_{αβ} = Σ_γ R_{αγ} S_{γβ}`.
pub fn lr_multiply(r: &Superoperator, s: &Superoperator) -> Result<Superoperator> {
    r.check_same(s)?;
    Ok(Superoperator {
        dim: r.dim,
        mat: &r.mat * &s.mat,
    })
}

/// Composition for the ordinary action: `(R∘S)(A) = R(S(A))`.
pub fn ordinary_compose(r: &Superoperator, s: &Superoperator) -> Result<Superoperator> {
    Ok(sharp(&lr_multiply(&sharp(r), &sharp(s))?))
}

/// `Tr(S) = Σ_α (τ_α|S|τ_α)`, the matrix trace; equal to `tr(S(I))`.
pub fn lr_trace(s: &Superoperator) -> Complex64 {
    linalg::trace(&s.mat)
}

/// Projector `𝒯 = Σ_j |λ_j)(λ_j|` onto traceless operators.
pub fn traceless_projector(basis: &GeneratorBasis) -> Result<Superoperator> {
    let dim = basis.dim();
    let mut mat = CMatrix::zeros(dim * dim, dim * dim);
    for g in basis.generators() {
        let v = vectorize(g);
        mat.ger(ONE, &v, &v.conjugate(), ONE);
    }
    Superoperator::from_matrix(dim, mat)
}

/// Volume of projective Hilbert space and the Haar moments derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaarMoments {
    pub dim: usize,
    /// `V = π^{D-1}/(D-1)!`.
    pub volume: f64,
    /// `K = V / (D(D+1))`, the off-diagonal matrix element of `G`.
    pub k: f64,
    /// `γ = 2K = ∫ dV |<a|ψ>|⁴`.
    pub gamma: f64,
}

impl HaarMoments {
    pub fn new(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let volume = projective_volume(dim);
        let d = dim as f64;
        let k = volume / (d * (d + 1.0));
        Ok(Self {
            dim,
            volume,
            k,
            gamma: 2.0 * k,
        })
    }
}

/// `π^{D-1}/(D-1)!` as a running product of `π/k`, which never overflows.
pub fn projective_volume(dim: usize) -> f64 {
    (1..dim).fold(1.0, |acc, k| acc * std::f64::consts::PI / k as f64)
}

/// `G = K(𝐈 + 𝓘)`.
pub fn g_superoperator(dim: usize) -> Result<Superoperator> {
    let m = HaarMoments::new(dim)?;
    Ok(Superoperator::lr_identity(dim)?
        .add(&Superoperator::ordinary_identity(dim)?)?
        .scale(m.k))
}

/// `G = K((D+1)|I)(I|/D + 𝒯)`, assembled from the generator basis.
pub fn g_from_eigenbasis(basis: &GeneratorBasis) -> Result<Superoperator> {
    let dim = basis.dim();
    let m = HaarMoments::new(dim)?;
    let id = linalg::identity(dim);
    let unit = Superoperator::lr_outer(&id, &id)?.scale((dim as f64 + 1.0) / dim as f64);
    Ok(unit.add(&traceless_projector(basis)?)?.scale(m.k))
}

/// `G` from its matrix-element pattern: `K` when `a=b≠c=d` or `a=c≠b=d`,
/// `2K` when all four levels agree, zero otherwise.
pub fn g_from_matrix_elements(dim: usize) -> Result<Superoperator> {
    let m = HaarMoments::new(dim)?;
    Superoperator::from_elements(dim, |c, a, d, b| {
        let v = if a == b && b == c && c == d {
            m.gamma
        } else if (a == b && c == d) || (a == c && b == d) {
            m.k
        } else {
            0.0
        };
        real(v)
    })
}

/// `G⁻¹ = (1/K)(𝐈 − 𝓘/(D+1))` for the left-right action.
pub fn g_inverse(dim: usize) -> Result<Superoperator> {
    let m = HaarMoments::new(dim)?;
    let shifted = Superoperator::ordinary_identity(dim)?.scale(-1.0 / (dim as f64 + 1.0));
    Ok(Superoperator::lr_identity(dim)?.add(&shifted)?.scale(1.0 / m.k))
}

fn require_normalized(psi: &PureState) -> Result<()> {
    let norm = psi.amplitudes().norm();
    if (norm - 1.0).abs() > INPUT_TOLERANCE {
        return Err(Error::InvalidState(format!("state has norm {norm}, expected 1")));
    }
    if psi.dims().len() != 1 {
        return Err(Error::InvalidDimension(format!(
            "dual operators are single-qudit; got subsystem dims {:?}",
            psi.dims()
        )));
    }
    Ok(())
}

/// `Q_ψ = G⁻¹ P_ψ = (D/V)((D+1) P_ψ − I)`.
pub fn dual_operator(psi: &PureState) -> Result<DenseOperator> {
    require_normalized(psi)?;
    let dim = psi.dim();
    let m = HaarMoments::new(dim)?;
    let d = dim as f64;
    let q = (psi.projector().scale(d + 1.0) - linalg::identity(dim)).scale(d / m.volume);
    DenseOperator::single(q)
}

/// Dual frame `Q_α = G_N⁻¹ N_α` of a spanning family `N_α`, where
/// `G_N = Σ_α |N_α)(N_α|`. Fails when the family does not span.
pub fn dual_frame(ops: &[CMatrix]) -> Result<Vec<CMatrix>> {
    let first = ops
        .first()
        .ok_or_else(|| Error::Degenerate("empty operator family".into()))?;
    let dim = first.nrows();
    let mut frame = CMatrix::zeros(dim * dim, dim * dim);
    for op in ops {
        if op.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: op.nrows(),
            });
        }
        let v = vectorize(op);
        frame.ger(ONE, &v, &v.conjugate(), ONE);
    }
    let inv = frame
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("operator family does not span".into()))?;
    Ok(ops
        .iter()
        .map(|op| unvectorize(&(&inv * vectorize(op)), dim))
        .collect())
}

/// Monte Carlo estimate of `G = V · E[|P_ψ)(P_ψ|]` with per-entry standard
/// errors for the real and imaginary parts.
#[derive(Debug, Clone)]
pub struct MonteCarloG {
    pub estimate: Superoperator,
    pub std_error_re: CMatrixReal,
    pub std_error_im: CMatrixReal,
    pub samples: usize,
}

pub type CMatrixReal = nalgebra::DMatrix<f64>;

impl MonteCarloG {
    /// Largest per-entry deviation from `exact`, in standard errors.
    pub fn max_sigma_deviation(&self, exact: &Superoperator) -> f64 {
        let mut worst = 0.0f64;
        for (idx, (est, ex)) in self
            .estimate
            .mat
            .iter()
            .zip(exact.mat.iter())
            .enumerate()
        {
            let delta = est - ex;
            worst = worst.max(sigma_distance(delta.re, self.std_error_re[idx]));
            worst = worst.max(sigma_distance(delta.im, self.std_error_im[idx]));
        }
        worst
    }
}

/// Samples `samples` Haar-random states and averages `|P_ψ)(P_ψ|`, scaled
/// by the projective volume.
pub fn monte_carlo_g(dim: usize, samples: usize, seed: u64) -> Result<MonteCarloG> {
    check_dim(dim)?;
    if samples == 0 {
        return Err(Error::OutOfRange("need at least one sample".into()));
    }
    let n = dim * dim;
    let entries = n * n;
    let volume = projective_volume(dim);
    let moments = haar::chunked(
        samples,
        seed,
        |rng, count| {
            let mut re = vec![Moments::default(); entries];
            let mut im = vec![Moments::default(); entries];
            let mut p = vec![linalg::ZERO; n];
            for _ in 0..count {
                let v = haar::random_state_vector(rng, dim);
                for c in 0..dim {
                    for a in 0..dim {
                        p[c * dim + a] = v[c] * v[a].conj();
                    }
                }
                // column-major storage to match nalgebra's iteration order
                for col in 0..n {
                    let pc = p[col].conj();
                    for row in 0..n {
                        let x = p[row] * pc * volume;
                        re[col * n + row].push(x.re);
                        im[col * n + row].push(x.im);
                    }
                }
            }
            (re, im)
        },
        |(mut re_a, mut im_a), (re_b, im_b)| {
            for (x, y) in re_a.iter_mut().zip(re_b) {
                *x = x.merge(y);
            }
            for (x, y) in im_a.iter_mut().zip(im_b) {
                *x = x.merge(y);
            }
            (re_a, im_a)
        },
    )
    .expect("at least one chunk");
    let (re, im) = moments;
    let mat = CMatrix::from_iterator(
        n,
        n,
        re.iter()
            .zip(&im)
            .map(|(r, i)| Complex64::new(r.mean(), i.mean())),
    );
    Ok(MonteCarloG {
        estimate: Superoperator::from_matrix(dim, mat)?,
        std_error_re: CMatrixReal::from_iterator(n, n, re.iter().map(Moments::std_error)),
        std_error_im: CMatrixReal::from_iterator(n, n, im.iter().map(Moments::std_error)),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::random_unitary;
    use crate::linalg::{frobenius_distance, identity};
    use crate::su_basis::build_basis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        use rand::Rng;
        CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn random_superop(rng: &mut ChaCha8Rng, dim: usize) -> Superoperator {
        Superoperator::from_matrix(dim, random_matrix(rng, dim * dim)).unwrap()
    }

    #[test]
    fn identities_act_as_expected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for dim in 2..=4 {
            let a = random_matrix(&mut rng, dim);
            let ordinary = Superoperator::ordinary_identity(dim).unwrap();
            let lr = Superoperator::lr_identity(dim).unwrap();
            assert!(frobenius_distance(&ordinary_action(&ordinary, &a).unwrap(), &a) < 1e-15);
            assert!(frobenius_distance(&left_right_action(&lr, &a).unwrap(), &a) < 1e-15);
            let lr_on_identity = ordinary_action(&lr, &identity(dim)).unwrap();
            assert!(frobenius_distance(&lr_on_identity, &identity(dim).scale(dim as f64)) < 1e-14);
            assert_eq!(sharp(&lr), ordinary);
        }
    }

    #[test]
    fn sandwich_acts_by_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (l, r, x) = (
            random_matrix(&mut rng, 3),
            random_matrix(&mut rng, 3),
            random_matrix(&mut rng, 3),
        );
        let s = Superoperator::sandwich(&l, &r).unwrap();
        assert!(frobenius_distance(&ordinary_action(&s, &x).unwrap(), &(&l * &x * &r)) < 1e-13);
    }

    #[test]
    fn sharp_is_involution_and_exchanges_actions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in 2..=4 {
            let s = random_superop(&mut rng, dim);
            let a = random_matrix(&mut rng, dim);
            assert_eq!(sharp(&sharp(&s)), s);
            let lhs = ordinary_action(&sharp(&s), &a).unwrap();
            let rhs = left_right_action(&s, &a).unwrap();
            assert!(frobenius_distance(&lhs, &rhs) < 1e-13);
        }
    }

    #[test]
    fn compositions_and_adjoints() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for dim in 2..=4 {
            let r = random_superop(&mut rng, dim);
            let s = random_superop(&mut rng, dim);
            let a = random_matrix(&mut rng, dim);
            let b = random_matrix(&mut rng, dim);

            let composed = ordinary_action(&ordinary_compose(&r, &s).unwrap(), &a).unwrap();
            let nested = ordinary_action(&r, &ordinary_action(&s, &a).unwrap()).unwrap();
            assert!(frobenius_distance(&composed, &nested) < 1e-12);

            let multiplied = left_right_action(&lr_multiply(&r, &s).unwrap(), &a).unwrap();
            let chained = left_right_action(&r, &left_right_action(&s, &a).unwrap()).unwrap();
            assert!(frobenius_distance(&multiplied, &chained) < 1e-12);

            // (A|S†|B) = (B|S|A)*
            let inner = |x: &CMatrix, y: &CMatrix| linalg::trace(&(x.adjoint() * y));
            let lhs = inner(&a, &left_right_action(&lr_adjoint(&s), &b).unwrap());
            let rhs = inner(&b, &left_right_action(&s, &a).unwrap()).conj();
            assert!((lhs - rhs).norm() < 1e-12);

            // tr([S^×(B)]† A) = tr(B† S(A))
            let lhs = inner(&ordinary_action(&ordinary_adjoint(&s), &b).unwrap(), &a);
            let rhs = inner(&b, &ordinary_action(&s, &a).unwrap());
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn traces_of_identities_and_g() {
        for dim in 2..=6 {
            let d = dim as f64;
            let lr = lr_trace(&Superoperator::lr_identity(dim).unwrap());
            let ord = lr_trace(&Superoperator::ordinary_identity(dim).unwrap());
            assert!((lr.re - d * d).abs() < 1e-12 && lr.im == 0.0);
            assert!((ord.re - d).abs() < 1e-12 && ord.im == 0.0);
            let g = g_superoperator(dim).unwrap();
            let vol = projective_volume(dim);
            assert!((lr_trace(&g).re - vol).abs() / vol < 1e-12);
            let via_action = linalg::trace(&ordinary_action(&g, &identity(dim)).unwrap());
            assert!((via_action.re - vol).abs() / vol < 1e-12);
        }
    }

    #[test]
    fn trace_equals_trace_of_ordinary_action_on_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for dim in 2..=4 {
            let s = random_superop(&mut rng, dim);
            let via_action = linalg::trace(&ordinary_action(&s, &identity(dim)).unwrap());
            assert!((lr_trace(&s) - via_action).norm() < 1e-12);
        }
    }

    #[test]
    fn volume_and_moments() {
        let pi = std::f64::consts::PI;
        assert!((projective_volume(2) - pi).abs() < 1e-15);
        assert!((projective_volume(3) - pi * pi / 2.0).abs() < 1e-14);
        assert!((projective_volume(4) - pi.powi(3) / 6.0).abs() < 1e-13);
        for dim in 2..=16 {
            let m = HaarMoments::new(dim).unwrap();
            let d = dim as f64;
            let closed: f64 = pi.powi(dim as i32 - 1) / (1..dim).map(|k| k as f64).product::<f64>();
            assert!((m.volume - closed).abs() / closed < 1e-12);
            assert!((d * (d - 1.0) * m.k + d * m.gamma - m.volume).abs() / m.volume < 1e-12);
        }
    }

    #[test]
    fn g_forms_agree() {
        for dim in 2..=6 {
            let basis = build_basis(dim).unwrap();
            let g = g_superoperator(dim).unwrap();
            assert!(g.distance(&g_from_eigenbasis(&basis).unwrap()) < 1e-12);
            assert!(g.distance(&g_from_matrix_elements(dim).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn qubit_g_diagonal_element() {
        let g = g_superoperator(2).unwrap();
        let pi = std::f64::consts::PI;
        assert!((g.element(0, 0, 0, 0).re - pi / 3.0).abs() < 1e-15);
        assert!((g.element(0, 1, 0, 1).re - pi / 6.0).abs() < 1e-15);
        assert!((g.element(0, 0, 1, 1).re - pi / 6.0).abs() < 1e-15);
        assert_eq!(g.element(0, 1, 1, 0), linalg::ZERO);
    }

    #[test]
    fn g_eigenvalues_on_generators() {
        for dim in 2..=5 {
            let basis = build_basis(dim).unwrap();
            let m = HaarMoments::new(dim).unwrap();
            let g = g_superoperator(dim).unwrap();
            let ginv = g_inverse(dim).unwrap();
            let l0 = basis.lambda0();
            let on_l0 = left_right_action(&g, l0).unwrap();
            assert!(frobenius_distance(&on_l0, &l0.scale(m.volume / dim as f64)) < 1e-12);
            assert!((m.k * (dim as f64 + 1.0) - m.volume / dim as f64).abs() < 1e-12);
            for lam in basis.generators() {
                let on = left_right_action(&g, lam).unwrap();
                assert!(frobenius_distance(&on, &lam.scale(m.k)) < 1e-12);
                let back = left_right_action(&ginv, lam).unwrap();
                assert!(frobenius_distance(&back, &lam.unscale(m.k)) < 1e-12);
            }
            let on_identity = left_right_action(&ginv, &identity(dim)).unwrap();
            let want = identity(dim).scale(dim as f64 / m.volume);
            assert!(frobenius_distance(&on_identity, &want) < 1e-12);
            let g_of_identity = ordinary_action(&g, &identity(dim)).unwrap();
            let want = identity(dim).scale(m.volume / dim as f64);
            assert!(frobenius_distance(&g_of_identity, &want) < 1e-12);
        }
    }

    #[test]
    fn g_inverse_inverts() {
        for dim in 2..=6 {
            let prod = lr_multiply(&g_inverse(dim).unwrap(), &g_superoperator(dim).unwrap()).unwrap();
            assert!(prod.distance(&Superoperator::lr_identity(dim).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn g_symmetries() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for dim in 2..=4 {
            let g = g_superoperator(dim).unwrap();
            assert!(g.distance(&lr_adjoint(&g)) < 1e-12);
            assert!(g.distance(&ordinary_adjoint(&g)) < 1e-12);
            assert!(g.distance(&sharp(&g)) < 1e-12);
            for _ in 0..5 {
                let u = random_unitary(&mut rng, dim);
                let fwd = Superoperator::sandwich(&u, &u.adjoint()).unwrap();
                let back = Superoperator::sandwich(&u.adjoint(), &u).unwrap();
                let conj = ordinary_compose(&ordinary_compose(&fwd, &g).unwrap(), &back).unwrap();
                assert!(g.distance(&conj) < 1e-12);
            }
        }
    }

    #[test]
    fn dual_operator_qubit_example() {
        let psi = PureState::single(linalg::basis_vector(2, 0)).unwrap();
        let q = dual_operator(&psi).unwrap();
        let pi = std::f64::consts::PI;
        let want = CMatrix::from_diagonal(&CVector::from_vec(vec![real(4.0 / pi), real(-2.0 / pi)]));
        assert!(frobenius_distance(q.matrix(), &want) < 1e-15);
    }

    #[test]
    fn dual_operator_spectrum_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for dim in 2..=5 {
            let psi = haar::random_state(&mut rng, dim).unwrap();
            let q = dual_operator(&psi).unwrap();
            let m = HaarMoments::new(dim).unwrap();
            let d = dim as f64;
            let vals = q.eigenvalues();
            for v in &vals[..dim - 1] {
                assert!((v + d / m.volume).abs() < 1e-10);
            }
            assert!((vals[dim - 1] - d * d / m.volume).abs() < 1e-10);
            assert!((q.trace().re - d / m.volume).abs() < 1e-12);
            let back = left_right_action(&g_superoperator(dim).unwrap(), q.matrix()).unwrap();
            assert!(frobenius_distance(&back, &psi.projector()) < 1e-12);
        }
    }

    #[test]
    fn dual_operator_rejects_unnormalized() {
        let bad = PureState::from_parts_unchecked(vec![2], CVector::from_vec(vec![ONE, ONE]));
        assert!(matches!(dual_operator(&bad), Err(Error::InvalidState(_))));
    }

    #[test]
    fn dual_frame_resolves_identity() {
        for dim in 2..=4 {
            let basis = build_basis(dim).unwrap();
            let m = HaarMoments::new(dim).unwrap();
            // N_α = √q_α λ_α has frame operator G, so its dual is G⁻¹ N_α.
            let weights: Vec<f64> = (0..dim * dim)
                .map(|alpha| if alpha == 0 { m.k * (dim as f64 + 1.0) } else { m.k })
                .collect();
            let ops: Vec<CMatrix> = basis
                .operators()
                .iter()
                .zip(&weights)
                .map(|(l, w)| l.scale(w.sqrt()))
                .collect();
            let duals = dual_frame(&ops).unwrap();
            let ginv = g_inverse(dim).unwrap();
            let mut resolution = Superoperator::zeros(dim).unwrap();
            for (n_op, q_op) in ops.iter().zip(&duals) {
                let via_g = left_right_action(&ginv, n_op).unwrap();
                assert!(frobenius_distance(&via_g, q_op) < 1e-12);
                resolution = resolution.add(&Superoperator::lr_outer(q_op, n_op).unwrap()).unwrap();
            }
            assert!(resolution.distance(&Superoperator::lr_identity(dim).unwrap()) < 1e-12);
        }
        let degenerate = vec![identity(2), identity(2)];
        assert!(matches!(dual_frame(&degenerate), Err(Error::Degenerate(_))));
    }

    #[test]
    fn monte_carlo_g_is_exactly_symmetric() {
        let mc = monte_carlo_g(2, 5000, 1).unwrap();
        assert!(mc.estimate.is_lr_hermitian(1e-12));
        assert!(mc.estimate.distance(&sharp(&mc.estimate)) < 1e-12);
        assert!(mc.max_sigma_deviation(&g_superoperator(2).unwrap()) < 6.0);
        assert!(matches!(monte_carlo_g(2, 0, 1), Err(Error::OutOfRange(_))));
    }
}
