//! Quasi-probability representation of qudit states over product pure
//! states, `w_ρ(ψ₁, ..., ψ_N) = tr(ρ Q_{ψ₁} ⊗ ... ⊗ Q_{ψ_N})`, and the
//! separability certificate that follows from its lower bound.

use crate::bounds::{Certificate, SeparabilityVerdict, Verdict};
use crate::error::{check_dim, check_probability, Error, Result};
use crate::haar::{self, MeanEstimate};
use crate::linalg::{self, CMatrix};
use crate::operator::{DenseOperator, PureState};
use crate::superop::{dual_operator, projective_volume};

/// `w_ρ(ψ) = tr(ρ Q_ψ) = (D/V)((D+1)<ψ|ρ|ψ> − 1)`.
pub fn w_single(rho: &DenseOperator, psi: &PureState) -> Result<f64> {
    if rho.side() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.side(),
            found: psi.dim(),
        });
    }
    let q = dual_operator(psi)?;
    Ok(linalg::trace_product(rho.matrix(), q.matrix()).re)
}

/// Closed form of [`w_single`] in terms of the overlap `<ψ|ρ|ψ>`.
pub fn w_single_closed_form(rho: &CMatrix, psi: &crate::linalg::CVector) -> f64 {
    let dim = psi.len();
    let d = dim as f64;
    let overlap = psi.dotc(&(rho * psi)).re;
    d / projective_volume(dim) * ((d + 1.0) * overlap - 1.0)
}

/// `w_ρ(ψ₁, ..., ψ_N)` for an `N`-qudit `ρ`.
pub fn w_product(rho: &DenseOperator, psis: &[PureState]) -> Result<f64> {
    let duals = psis
        .iter()
        .map(|p| dual_operator(p).map(DenseOperator::into_matrix))
        .collect::<Result<Vec<_>>>()?;
    let q = linalg::kron_all(&duals)
        .ok_or_else(|| Error::InvalidDimension("need at least one factor".into()))?;
    let dims: Vec<usize> = psis.iter().map(PureState::dim).collect();
    if q.nrows() != rho.side() || (rho.dims().len() > 1 && rho.dims() != dims.as_slice()) {
        return Err(Error::DimensionMismatch {
            expected: rho.side(),
            found: q.nrows(),
        });
    }
    Ok(linalg::trace_product(rho.matrix(), &q).re)
}

/// `−D^{2N−1}/V^N`, the smallest eigenvalue of any `Q_{ψ₁} ⊗ ... ⊗ Q_{ψ_N}`.
pub fn w_floor(dim: usize, n: usize) -> Result<f64> {
    check_dim(dim)?;
    if n < 1 {
        return Err(Error::InvalidDimension("need at least one qudit".into()));
    }
    let d = dim as f64;
    let vol = projective_volume(dim);
    Ok(-d.powi(2 * n as i32 - 1) / vol.powi(n as i32))
}

/// `1/(1 + D^{2N−1})`: below this mixing weight every `ε`-mixture of the
/// maximally mixed state has a nonnegative quasi-distribution.
pub fn floor_threshold(dim: usize, n: usize) -> f64 {
    1.0 / (1.0 + (dim as f64).powi(2 * n as i32 - 1))
}

/// Certifies `(1−ε) M_{D^N} + ε ρ₁` separable when
/// `ε ≤ 1/(1 + D^{2N−1})`. Above the threshold the floor argument says
/// nothing and the verdict is indeterminate.
pub fn certify_separable_floor(
    rho1: &DenseOperator,
    dim: usize,
    n: usize,
    eps: f64,
) -> Result<SeparabilityVerdict> {
    check_dim(dim)?;
    check_probability("eps", eps)?;
    rho1.expect_uniform(dim, n)?;
    rho1.validate_state()?;
    Ok(floor_verdict(dim, n, eps))
}

pub(crate) fn floor_verdict(dim: usize, n: usize, eps: f64) -> SeparabilityVerdict {
    let threshold = floor_threshold(dim, n);
    let vol_n = projective_volume(dim).powi(n as i32);
    let floor = (1.0 - eps * (1.0 + (dim as f64).powi(2 * n as i32 - 1))) / vol_n;
    let certificate = Certificate::QuasiFloor {
        eps,
        threshold,
        w_lower_bound: floor,
    };
    let verdict = if eps <= threshold {
        Verdict::SeparableCertified
    } else {
        Verdict::Indeterminate
    };
    SeparabilityVerdict {
        verdict,
        certificate,
        boundary_used: threshold,
    }
}

/// `V · E_ψ[w_ρ(ψ)]`, which equals 1 for every state.
pub fn mc_normalization(rho: &DenseOperator, samples: usize, seed: u64) -> Result<MeanEstimate> {
    rho.validate_state()?;
    let dim = rho.side();
    let vol = projective_volume(dim);
    let m = rho.matrix().clone();
    haar::haar_mean(dim, samples, seed, move |psi| vol * w_single_closed_form(&m, psi))
}

/// `V · E_ψ[w_ρ(ψ) P_ψ]`, which reconstructs `ρ`. Returns the estimate
/// together with the per-entry standard errors of its real and imaginary
/// parts.
pub fn mc_reconstruction(
    rho: &DenseOperator,
    samples: usize,
    seed: u64,
) -> Result<(CMatrix, nalgebra::DMatrix<f64>, nalgebra::DMatrix<f64>)> {
    rho.validate_state()?;
    let dim = rho.side();
    let vol = projective_volume(dim);
    let m = rho.matrix().clone();
    let entries = dim * dim;
    let (re, im) = haar::chunked(
        samples,
        seed,
        |rng, count| {
            let mut re = vec![haar::Moments::default(); entries];
            let mut im = vec![haar::Moments::default(); entries];
            for _ in 0..count {
                let psi = haar::random_state_vector(rng, dim);
                let w = vol * w_single_closed_form(&m, &psi);
                for col in 0..dim {
                    for row in 0..dim {
                        let x = psi[row] * psi[col].conj() * w;
                        re[col * dim + row].push(x.re);
                        im[col * dim + row].push(x.im);
                    }
                }
            }
            (re, im)
        },
        |(mut ra, mut ia), (rb, ib)| {
            for (x, y) in ra.iter_mut().zip(rb) {
                *x = x.merge(y);
            }
            for (x, y) in ia.iter_mut().zip(ib) {
                *x = x.merge(y);
            }
            (ra, ia)
        },
    )
    .ok_or_else(|| Error::OutOfRange("need at least one sample".into()))?;
    let mean = CMatrix::from_iterator(
        dim,
        dim,
        re.iter()
            .zip(&im)
            .map(|(r, i)| num_complex::Complex64::new(r.mean(), i.mean())),
    );
    let se_re = nalgebra::DMatrix::from_iterator(dim, dim, re.iter().map(|m| m.std_error()));
    let se_im = nalgebra::DMatrix::from_iterator(dim, dim, im.iter().map(|m| m.std_error()));
    Ok((mean, se_re, se_im))
}
