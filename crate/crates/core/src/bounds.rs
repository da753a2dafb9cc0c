//! Closed-form separability boundaries, verdicts with certificates, and the
//! independent checks used to corroborate them (partial transpose and the
//! correlation-coefficient witness).

use serde::Serialize;

use crate::error::{check_dim, check_probability, Error, Result};
use crate::linalg;
use crate::operator::DenseOperator;
use crate::quasi;
use crate::states::{
    boundary_product_ensemble, computational_product_ensemble, epsilon_mixture, epsilon_prime,
    two_qudit_coeffs, ProductEnsemble, TwoQuditCoeffs, MAX_STATE_LEN,
};
use crate::su_basis::build_basis;

/// Minimum partial-transpose eigenvalues above `-PPT_TOLERANCE` count as
/// nonnegative.
pub const PPT_TOLERANCE: f64 = 1e-12;
/// Largest allowed Frobenius residual of an ensemble certificate.
pub const ENSEMBLE_TOLERANCE: f64 = 1e-10;
/// Interval width at which the partial-transpose bisection stops.
pub const BISECTION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    SeparableCertified,
    EntangledCertified,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::SeparableCertified => "separable-certified",
            Verdict::EntangledCertified => "entangled-certified",
            Verdict::Indeterminate => "indeterminate",
        }
    }

    pub fn is_decided(&self) -> bool {
        !matches!(self, Verdict::Indeterminate)
    }
}

/// Evidence backing a verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// Explicit product decomposition reproducing the state.
    ProductEnsemble {
        ensemble: ProductEnsemble,
        reconstruction_residual: f64,
    },
    /// The quasi-distribution of every such state is bounded below by
    /// `w_lower_bound ≥ 0`.
    QuasiFloor {
        eps: f64,
        threshold: f64,
        w_lower_bound: f64,
    },
    /// `eps` strictly exceeds a boundary beyond which the family is entangled.
    BoundaryExceedance {
        eps: f64,
        boundary: f64,
        condition: &'static str,
        /// Correlation witness `Σ|c_jj| / D(D-1)`; above 1 means entangled.
        necessity_ratio: Option<f64>,
        ppt_min_eigenvalue: Option<f64>,
        /// Mixing weight after projecting every qudit onto a qubit.
        eps_prime: Option<f64>,
        eps_prime_boundary: Option<f64>,
    },
    /// The partial transpose has a negative eigenvalue.
    PptNegativeEigenvalue { min_eigenvalue: f64 },
    /// `eps` lies between the known separable and entangled boundaries.
    BoundaryComparison { eps: f64, lower: f64, upper: f64 },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::ProductEnsemble { .. } => "product-ensemble",
            Certificate::QuasiFloor { .. } => "quasi-floor",
            Certificate::BoundaryExceedance { .. } => "boundary-exceedance",
            Certificate::PptNegativeEigenvalue { .. } => "ppt-negative-eigenvalue",
            Certificate::BoundaryComparison { .. } => "boundary-comparison",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityVerdict {
    pub verdict: Verdict,
    pub certificate: Certificate,
    pub boundary_used: f64,
}

/// `1/(1+D)`: the two-qudit mixture is separable exactly up to this weight.
pub fn two_qudit_boundary(dim: usize) -> Result<f64> {
    check_dim(dim)?;
    Ok(1.0 / (1.0 + dim as f64))
}

/// `(1/(1+D^{2N−1}), 1/(1+D^{N−1}))`: every ε-mixture of `M_{D^N}` below the
/// first is separable; the ε-cat state above the second is entangled.
pub fn neighborhood_bounds(dim: usize, n: usize) -> Result<(f64, f64)> {
    check_dim(dim)?;
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "need at least two qudits, got {n}"
        )));
    }
    let d = dim as f64;
    Ok((
        quasi::floor_threshold(dim, n),
        1.0 / (1.0 + d.powi(n as i32 - 1)),
    ))
}

/// Product ensemble for `ρ_ε` with `ε ≤ 1/(1+D)`: the boundary ensemble with
/// weight `ε(1+D)` mixed with the computational product basis.
pub fn mixture_ensemble(dim: usize, eps: f64) -> Result<ProductEnsemble> {
    let boundary = two_qudit_boundary(dim)?;
    check_probability("eps", eps)?;
    if eps > boundary {
        return Err(Error::OutOfRange(format!(
            "no product ensemble exists above ε = {boundary}"
        )));
    }
    let t = (eps / boundary).min(1.0);
    let mut ensemble = ProductEnsemble::default();
    if t > 0.0 {
        ensemble.extend(boundary_product_ensemble(dim)?.scaled(t));
    }
    if t < 1.0 {
        ensemble.extend(computational_product_ensemble(dim)?.scaled(1.0 - t));
    }
    Ok(ensemble)
}

/// Separability of `(1−ε) M_{D²} + ε|Ψ><Ψ|`, decided exactly at `1/(1+D)`
/// with the boundary itself separable.
pub fn classify_epsilon_mixture(dim: usize, eps: f64) -> Result<SeparabilityVerdict> {
    let boundary = two_qudit_boundary(dim)?;
    check_probability("eps", eps)?;
    let rho = epsilon_mixture(dim, eps)?;
    if eps <= boundary {
        let ensemble = mixture_ensemble(dim, eps)?;
        let residual = linalg::frobenius_distance(ensemble.density()?.matrix(), rho.matrix());
        if residual > ENSEMBLE_TOLERANCE {
            return Err(Error::Degenerate(format!(
                "ensemble reconstruction residual {residual:e} exceeds {ENSEMBLE_TOLERANCE:e}"
            )));
        }
        return Ok(SeparabilityVerdict {
            verdict: Verdict::SeparableCertified,
            certificate: Certificate::ProductEnsemble {
                ensemble,
                reconstruction_residual: residual,
            },
            boundary_used: boundary,
        });
    }
    let ppt = ppt_test(&rho, dim, dim)?;
    let coeffs = two_qudit_coeffs(&rho, &build_basis(dim)?)?;
    Ok(SeparabilityVerdict {
        verdict: Verdict::EntangledCertified,
        certificate: Certificate::BoundaryExceedance {
            eps,
            boundary,
            condition: "two-qudit mixture is separable iff eps <= 1/(1+D)",
            necessity_ratio: Some(necessity_check(&coeffs, dim)?),
            ppt_min_eigenvalue: Some(ppt.min_eigenvalue),
            eps_prime: None,
            eps_prime_boundary: None,
        },
        boundary_used: boundary,
    })
}

/// Separability of the `N`-qudit ε-cat state. Two qudits are decided
/// exactly; for `N ≥ 3` the state is separable up to `1/(1+D^{2N−1})`,
/// entangled strictly above `1/(1+D^{N−1})`, and undecided in between.
pub fn classify_epsilon_cat(dim: usize, n: usize, eps: f64) -> Result<SeparabilityVerdict> {
    let (lower, upper) = neighborhood_bounds(dim, n)?;
    check_probability("eps", eps)?;
    match linalg::checked_pow(dim, n) {
        Some(len) if len <= MAX_STATE_LEN => {}
        _ => {
            return Err(Error::ResourceCap(format!(
                "{dim}^{n} exceeds the state-vector cap {MAX_STATE_LEN}"
            )))
        }
    }
    if n == 2 {
        return classify_epsilon_mixture(dim, eps);
    }
    if eps <= lower {
        return Ok(quasi::floor_verdict(dim, n, eps));
    }
    if eps > upper {
        return Ok(SeparabilityVerdict {
            verdict: Verdict::EntangledCertified,
            certificate: Certificate::BoundaryExceedance {
                eps,
                boundary: upper,
                condition: "qubit projection of the eps-cat state is entangled iff eps > 1/(1+D^(N-1))",
                necessity_ratio: None,
                ppt_min_eigenvalue: None,
                eps_prime: Some(epsilon_prime(dim, n, eps)),
                eps_prime_boundary: Some(1.0 / (1.0 + 2f64.powi(n as i32 - 1))),
            },
            boundary_used: upper,
        });
    }
    Ok(SeparabilityVerdict {
        verdict: Verdict::Indeterminate,
        certificate: Certificate::BoundaryComparison { eps, lower, upper },
        boundary_used: upper,
    })
}

/// Minimum eigenvalue of the partial transpose and whether it is
/// nonnegative to [`PPT_TOLERANCE`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptReport {
    pub min_eigenvalue: f64,
    pub is_ppt: bool,
}

/// Partial-transpose test over the second subsystem. A negative eigenvalue
/// proves entanglement; a nonnegative spectrum proves separability only when
/// `dim_a * dim_b ≤ 6`.
pub fn ppt_test(rho: &DenseOperator, dim_a: usize, dim_b: usize) -> Result<PptReport> {
    let side = dim_a
        .checked_mul(dim_b)
        .ok_or_else(|| Error::ResourceCap("dimension product overflows".into()))?;
    if dim_a == 0 || dim_b == 0 || rho.side() != side {
        return Err(Error::DimensionMismatch {
            expected: side,
            found: rho.side(),
        });
    }
    let pt = linalg::partial_transpose_b(rho.matrix(), dim_a, dim_b);
    let min_eigenvalue = linalg::min_eigenvalue(&pt);
    Ok(PptReport {
        min_eigenvalue,
        is_ppt: min_eigenvalue >= -PPT_TOLERANCE,
    })
}

/// Bisects the mixing weight at which the two-qudit mixture stops having a
/// positive partial transpose.
pub fn ppt_zero_crossing(dim: usize) -> Result<f64> {
    check_dim(dim)?;
    let min_eig = |eps: f64| -> Result<f64> {
        Ok(ppt_test(&epsilon_mixture(dim, eps)?, dim, dim)?.min_eigenvalue)
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if min_eig(lo)? < 0.0 || min_eig(hi)? >= 0.0 {
        return Err(Error::Degenerate("no sign change on [0, 1]".into()));
    }
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if min_eig(mid)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Correlation witness `Σ_j |c_jj| / (D(D−1))`. Separable two-qudit states
/// satisfy `Σ_j |c_jj| ≤ D(D−1)`, so values above 1 certify entanglement.
pub fn necessity_check(coeffs: &TwoQuditCoeffs, dim: usize) -> Result<f64> {
    check_dim(dim)?;
    if coeffs.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: coeffs.dim(),
        });
    }
    let total: f64 = coeffs.diagonal().map(f64::abs).sum();
    Ok(total / (dim * (dim - 1)) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, projector};
    use crate::states::{epsilon_cat, maximally_mixed};

    #[test]
    fn boundary_values() {
        assert!((two_qudit_boundary(2).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((two_qudit_boundary(3).unwrap() - 0.25).abs() < 1e-15);
        let seq: Vec<f64> = (2..50).map(|d| two_qudit_boundary(d).unwrap()).collect();
        assert!(seq.windows(2).all(|w| w[1] < w[0]));
        assert!(two_qudit_boundary(1).is_err());
    }

    #[test]
    fn neighborhood_values() {
        let (lo, hi) = neighborhood_bounds(2, 2).unwrap();
        assert!((lo - 1.0 / 9.0).abs() < 1e-15 && (hi - 1.0 / 3.0).abs() < 1e-15);
        let (lo, hi) = neighborhood_bounds(3, 2).unwrap();
        assert!((lo - 1.0 / 28.0).abs() < 1e-15 && (hi - 0.25).abs() < 1e-15);
        for dim in 2..=8 {
            for n in 2..=6 {
                let (lo, hi) = neighborhood_bounds(dim, n).unwrap();
                assert!(lo < hi);
            }
        }
        assert!(neighborhood_bounds(2, 1).is_err());
    }

    #[test]
    fn mixture_verdicts() {
        let v = classify_epsilon_mixture(2, 0.2).unwrap();
        assert_eq!(v.verdict, Verdict::SeparableCertified);
        assert_eq!(v.certificate.kind(), "product-ensemble");

        let v = classify_epsilon_mixture(2, 0.5).unwrap();
        assert_eq!(v.verdict, Verdict::EntangledCertified);
        match v.certificate {
            Certificate::BoundaryExceedance {
                ppt_min_eigenvalue: Some(m),
                necessity_ratio: Some(r),
                ..
            } => {
                assert!(m < -PPT_TOLERANCE);
                assert!((r - 1.5).abs() < 1e-12);
            }
            other => panic!("unexpected certificate {other:?}"),
        }

        let v = classify_epsilon_mixture(4, 0.2).unwrap();
        assert_eq!(v.verdict, Verdict::SeparableCertified);
        assert!(classify_epsilon_mixture(3, 1.01).is_err());
    }

    #[test]
    fn separable_certificates_reconstruct() {
        for dim in 2..=4 {
            for k in 0..=10 {
                let eps = k as f64 / 10.0 * two_qudit_boundary(dim).unwrap();
                let v = classify_epsilon_mixture(dim, eps).unwrap();
                let Certificate::ProductEnsemble { ensemble, .. } = &v.certificate else {
                    panic!("expected an ensemble");
                };
                assert!(ensemble.min_weight() >= 0.0);
                assert!((ensemble.total_weight() - 1.0).abs() < 1e-12);
                let rho = epsilon_mixture(dim, eps).unwrap();
                let err = linalg::frobenius_distance(ensemble.density().unwrap().matrix(), rho.matrix());
                assert!(err < ENSEMBLE_TOLERANCE);
            }
        }
    }

    #[test]
    fn cat_verdicts() {
        let v = classify_epsilon_cat(2, 3, 0.3).unwrap();
        assert_eq!(v.verdict, Verdict::EntangledCertified);
        assert!((v.boundary_used - 0.2).abs() < 1e-15);

        let v = classify_epsilon_cat(2, 3, 0.03).unwrap();
        assert_eq!(v.verdict, Verdict::SeparableCertified);
        assert!((v.boundary_used - 1.0 / 33.0).abs() < 1e-15);

        let v = classify_epsilon_cat(2, 3, 0.05).unwrap();
        assert_eq!(v.verdict, Verdict::Indeterminate);

        // upper boundary itself is undecided for N ≥ 3
        let v = classify_epsilon_cat(2, 3, 0.2).unwrap();
        assert_eq!(v.verdict, Verdict::Indeterminate);

        let v = classify_epsilon_cat(2, 2, 0.1).unwrap();
        assert_eq!(v.verdict, Verdict::SeparableCertified);
        assert_eq!(classify_epsilon_cat(3, 4, 0.0).unwrap().verdict, Verdict::SeparableCertified);
        assert!(matches!(classify_epsilon_cat(2, 21, 0.5), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn ppt_examples() {
        let product = DenseOperator::uniform(
            3,
            2,
            kron(
                &projector(&linalg::basis_vector(3, 1)),
                &projector(&linalg::basis_vector(3, 2)),
            ),
        )
        .unwrap();
        assert!(ppt_test(&product, 3, 3).unwrap().is_ppt);
        assert!(ppt_test(&maximally_mixed(2, 2).unwrap(), 2, 2).unwrap().is_ppt);
        let above = epsilon_mixture(2, 1.0 / 3.0 + 1e-6).unwrap();
        assert!(ppt_test(&above, 2, 2).unwrap().min_eigenvalue < 0.0);
        assert!(ppt_test(&above, 2, 3).is_err());
    }

    #[test]
    fn ppt_crossing_matches_boundary() {
        for dim in 2..=4 {
            let crossing = ppt_zero_crossing(dim).unwrap();
            assert!((crossing - two_qudit_boundary(dim).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn necessity_ratio_values() {
        for dim in 2..=4 {
            let basis = build_basis(dim).unwrap();
            let b = two_qudit_boundary(dim).unwrap();
            let at = two_qudit_coeffs(&epsilon_mixture(dim, b).unwrap(), &basis).unwrap();
            assert!((necessity_check(&at, dim).unwrap() - 1.0).abs() < 1e-12);
            let mixed = two_qudit_coeffs(&maximally_mixed(dim, 2).unwrap(), &basis).unwrap();
            assert!(necessity_check(&mixed, dim).unwrap().abs() < 1e-12);
            let eps = 0.7;
            let c = two_qudit_coeffs(&epsilon_mixture(dim, eps).unwrap(), &basis).unwrap();
            assert!((necessity_check(&c, dim).unwrap() - eps * (dim as f64 + 1.0)).abs() < 1e-12);
            assert!(necessity_check(&c, dim + 1).is_err());
        }
    }

    #[test]
    fn cat_floor_certificate_is_nonnegative() {
        let v = classify_epsilon_cat(3, 3, 1.0 / 244.0).unwrap();
        assert_eq!(v.verdict, Verdict::SeparableCertified);
        let Certificate::QuasiFloor { w_lower_bound, .. } = v.certificate else {
            panic!("expected quasi floor");
        };
        assert!(w_lower_bound >= -1e-15);
        let _ = epsilon_cat(3, 3, 0.0).unwrap();
    }
}
