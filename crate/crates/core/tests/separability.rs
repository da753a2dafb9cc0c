use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quditsep::bounds::{
    classify_epsilon_cat, classify_epsilon_mixture, necessity_check, ppt_test, two_qudit_boundary,
    Certificate, Verdict, ENSEMBLE_TOLERANCE,
};
use quditsep::haar::random_state;
use quditsep::linalg::{basis_vector, frobenius_distance, kron_all};
use quditsep::quasi::{certify_separable_floor, w_floor, w_product};
use quditsep::states::{epsilon_mixture, two_qudit_coeffs};
use quditsep::su_basis::build_basis;
use quditsep::{DenseOperator, PureState};

fn grid() -> impl Iterator<Item = f64> {
    (0..=50).map(|k| k as f64 / 50.0)
}

#[test]
fn no_state_is_both_separable_and_entangled() {
    for dim in 2..=6 {
        let basis = build_basis(dim).unwrap();
        for eps in grid() {
            let rho = epsilon_mixture(dim, eps).unwrap();
            let mut verdicts = vec![
                classify_epsilon_mixture(dim, eps).unwrap().verdict,
                classify_epsilon_cat(dim, 2, eps).unwrap().verdict,
                certify_separable_floor(&rho, dim, 2, eps).unwrap().verdict,
            ];
            if ppt_test(&rho, dim, dim).unwrap().min_eigenvalue < -1e-12 {
                verdicts.push(Verdict::EntangledCertified);
            }
            let coeffs = two_qudit_coeffs(&rho, &basis).unwrap();
            if necessity_check(&coeffs, dim).unwrap() > 1.0 + 1e-12 {
                verdicts.push(Verdict::EntangledCertified);
            }
            let sep = verdicts.contains(&Verdict::SeparableCertified);
            let ent = verdicts.contains(&Verdict::EntangledCertified);
            assert!(!(sep && ent), "D={dim}, eps={eps}: {verdicts:?}");
        }
    }
}

#[test]
fn separable_verdicts_carry_valid_ensembles() {
    for dim in 2..=6 {
        for eps in grid().filter(|&e| e <= two_qudit_boundary(dim).unwrap()) {
            let v = classify_epsilon_mixture(dim, eps).unwrap();
            let Certificate::ProductEnsemble { ensemble, reconstruction_residual } = v.certificate else {
                panic!("expected ensemble certificate");
            };
            assert!(reconstruction_residual < ENSEMBLE_TOLERANCE);
            let rho = epsilon_mixture(dim, eps).unwrap();
            assert!(frobenius_distance(ensemble.density().unwrap().matrix(), rho.matrix()) < ENSEMBLE_TOLERANCE);
        }
    }
}

#[test]
fn necessity_ratio_exceeds_one_exactly_when_entangled() {
    for dim in 2..=5 {
        let basis = build_basis(dim).unwrap();
        let boundary = two_qudit_boundary(dim).unwrap();
        for eps in grid() {
            let c = two_qudit_coeffs(&epsilon_mixture(dim, eps).unwrap(), &basis).unwrap();
            let ratio = necessity_check(&c, dim).unwrap();
            assert!((ratio - eps * (dim as f64 + 1.0)).abs() < 1e-12);
            if (eps - boundary).abs() > 1e-12 {
                assert_eq!(ratio > 1.0, eps > boundary, "D={dim}, eps={eps}");
            }
        }
    }
}

#[test]
fn three_way_cat_verdicts() {
    for dim in 2..=4 {
        for n in 3..=4 {
            let lower = 1.0 / (1.0 + (dim as f64).powi(2 * n as i32 - 1));
            let upper = 1.0 / (1.0 + (dim as f64).powi(n as i32 - 1));
            for eps in grid().chain([lower, upper]) {
                let v = classify_epsilon_cat(dim, n, eps).unwrap();
                let expected = if eps <= lower {
                    Verdict::SeparableCertified
                } else if eps > upper {
                    Verdict::EntangledCertified
                } else {
                    Verdict::Indeterminate
                };
                assert_eq!(v.verdict, expected, "D={dim}, N={n}, eps={eps}");
                if let Certificate::BoundaryExceedance { eps_prime: Some(p), eps_prime_boundary: Some(b), .. } = v.certificate {
                    assert!(p > b);
                }
            }
        }
    }
}

#[test]
fn floor_is_attained_and_never_undercut() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for (dim, n) in [(2, 2), (2, 3), (3, 2)] {
        let floor = w_floor(dim, n).unwrap();
        let points: Vec<PureState> = (0..n)
            .map(|k| PureState::single(basis_vector(dim, k % dim)).unwrap())
            .collect();
        let mut factors: Vec<_> = points.iter().map(|p| p.projector()).collect();
        factors[0] = PureState::single(basis_vector(dim, 1)).unwrap().projector();
        let rho = DenseOperator::uniform(dim, n, kron_all(&factors).unwrap()).unwrap();
        let attained = w_product(&rho, &points).unwrap();
        assert!((attained - floor).abs() < 1e-12, "({dim},{n}): {attained} vs {floor}");

        let target: Vec<PureState> = (0..n).map(|_| random_state(&mut rng, dim).unwrap()).collect();
        let projs: Vec<_> = target.iter().map(|p| p.projector()).collect();
        let rho = DenseOperator::uniform(dim, n, kron_all(&projs).unwrap()).unwrap();
        let samples = if n == 3 { 2_000 } else { 10_000 };
        for _ in 0..samples {
            let psis: Vec<PureState> = (0..n).map(|_| random_state(&mut rng, dim).unwrap()).collect();
            assert!(w_product(&rho, &psis).unwrap() >= floor - 1e-12);
        }
    }
}

#[test]
fn mixture_at_floor_threshold_is_nonnegative_at_worst_point() {
    for (dim, n) in [(2, 2), (2, 3), (3, 2)] {
        let eps = 1.0 / (1.0 + (dim as f64).powi(2 * n as i32 - 1));
        let worst: Vec<_> = (0..n)
            .map(|k| {
                let level = if k == 0 { 1 } else { 0 };
                PureState::single(basis_vector(dim, level)).unwrap().projector()
            })
            .collect();
        let rho1 = kron_all(&worst).unwrap();
        let side = rho1.nrows();
        let mixed = quditsep::linalg::identity(side).unscale(side as f64);
        let rho = DenseOperator::uniform(dim, n, mixed.scale(1.0 - eps) + rho1.scale(eps)).unwrap();
        let point: Vec<PureState> = (0..n)
            .map(|_| PureState::single(basis_vector(dim, 0)).unwrap())
            .collect();
        assert!(w_product(&rho, &point).unwrap() >= -1e-12);
        let v = certify_separable_floor(&rho, dim, n, eps).unwrap();
        assert_eq!(v.verdict, Verdict::SeparableCertified);
    }
}
