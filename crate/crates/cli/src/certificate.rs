//! JSON rendering of verdict certificates.

use quditsep::{Certificate, PureState, SeparabilityVerdict};
use serde_json::{json, Value};

fn amplitudes(psi: &PureState) -> Value {
    psi.amplitudes().iter().map(|z| json!([z.re, z.im])).collect()
}

pub fn certificate_body(cert: &Certificate) -> Value {
    match cert {
        Certificate::ProductEnsemble {
            ensemble,
            reconstruction_residual,
        } => json!({
            "reconstruction_residual": reconstruction_residual,
            "total_weight": ensemble.total_weight(),
            "terms": ensemble.terms.iter().map(|t| json!({
                "weight": t.weight,
                "factors": t.factors.iter().map(amplitudes).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
        Certificate::QuasiFloor {
            eps,
            threshold,
            w_lower_bound,
        } => json!({ "eps": eps, "threshold": threshold, "w_lower_bound": w_lower_bound }),
        Certificate::BoundaryExceedance {
            eps,
            boundary,
            condition,
            necessity_ratio,
            ppt_min_eigenvalue,
            eps_prime,
            eps_prime_boundary,
        } => json!({
            "eps": eps,
            "boundary": boundary,
            "condition": condition,
            "necessity_ratio": necessity_ratio,
            "ppt_min_eigenvalue": ppt_min_eigenvalue,
            "eps_prime": eps_prime,
            "eps_prime_boundary": eps_prime_boundary,
        }),
        Certificate::PptNegativeEigenvalue { min_eigenvalue } => {
            json!({ "min_eigenvalue": min_eigenvalue })
        }
        Certificate::BoundaryComparison { eps, lower, upper } => {
            json!({ "eps": eps, "lower": lower, "upper": upper })
        }
    }
}

/// Full certificate document as written by `--cert-out`.
pub fn certificate_document(family: &str, dim: usize, n: usize, eps: f64, v: &SeparabilityVerdict) -> Value {
    json!({
        "family": family,
        "dim": dim,
        "n": n,
        "eps": eps,
        "verdict": v.verdict.as_str(),
        "boundary_used": v.boundary_used,
        "kind": v.certificate.kind(),
        "evidence": certificate_body(&v.certificate),
    })
}
