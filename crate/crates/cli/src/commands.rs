use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use quditsep::bounds::{self, Verdict};
use quditsep::haar::random_state;
use quditsep::linalg::{frobenius_distance, hermiticity_defect};
use quditsep::states::{
    boundary_product_ensemble, epsilon_cat, epsilon_mixture, epsilon_prime, project_to_qubits,
    z_average_closed_form, z_ensemble_average, z_moment_closed_form, z_moment_sum,
};
use quditsep::su_basis::{bloch_expand, build_basis, structure_constants};
use quditsep::superop::{
    g_inverse, g_superoperator, lr_adjoint, lr_multiply, lr_trace, monte_carlo_g, ordinary_adjoint,
    sharp, HaarMoments, Superoperator,
};

use crate::certificate::certificate_document;
use crate::{json, CliError, MatrixFile, Outcome, EXIT_INDETERMINATE, EXIT_NUMERIC, EXIT_OK};

pub const EXACT_TOLERANCE: f64 = 1e-12;
pub const SPECTRAL_TOLERANCE: f64 = 1e-10;
pub const SIGMA_BAND: f64 = 6.0;
pub const DEFAULT_SAMPLES: usize = 100_000;
const Z_MOMENT_MAX_DIM: usize = 4;

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    residual: f64,
    tolerance: f64,
    status: &'static str,
}

impl Check {
    fn new(name: &'static str, residual: f64, tolerance: f64) -> Self {
        let passed = residual.is_finite() && residual <= tolerance;
        Check {
            name,
            residual,
            tolerance,
            status: if passed { "pass" } else { "fail" },
        }
    }

    fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Serialize)]
struct BasisEntry {
    index: usize,
    label: String,
    matrix: MatrixFile,
}

#[derive(Serialize)]
struct BasisBundle {
    dim: usize,
    count: usize,
    matrices: Vec<BasisEntry>,
    orthonormality: Check,
}

#[derive(Serialize)]
struct BasisSummary<'a> {
    dim: usize,
    count: usize,
    path: &'a str,
    orthonormality: Check,
}

pub fn basis(dim: usize, out: Option<&Path>) -> Result<Outcome, CliError> {
    let basis = build_basis(dim)?;
    let matrices = basis
        .operators()
        .iter()
        .enumerate()
        .map(|(alpha, m)| BasisEntry {
            index: alpha,
            label: if alpha == 0 {
                "identity".to_string()
            } else {
                basis.label(alpha).to_string()
            },
            matrix: MatrixFile::from_matrix(vec![dim], m),
        })
        .collect::<Vec<_>>();
    let count = matrices.len();
    let orthonormality = Check::new("orthonormality", basis.orthonormality_residual(), EXACT_TOLERANCE);
    let code = if orthonormality.passed() { EXIT_OK } else { EXIT_NUMERIC };
    let bundle = BasisBundle {
        dim,
        count,
        matrices,
        orthonormality,
    };
    let stdout = match out {
        None => json::to_string(&bundle),
        Some(path) => {
            write_file(path, &json::to_string(&bundle))?;
            json::to_string(&BasisSummary {
                dim,
                count,
                path: &path.to_string_lossy(),
                orthonormality: bundle.orthonormality,
            })
        }
    };
    Ok(Outcome { stdout, code })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Mixture,
    Cat,
}

#[derive(Serialize)]
struct ClassifyRecord {
    verdict: Verdict,
    boundary_used: f64,
    certificate_kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate_path: Option<String>,
}

pub fn classify(
    family: Family,
    dim: usize,
    n: Option<usize>,
    eps: f64,
    cert_out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let (name, n, verdict) = match family {
        Family::Mixture => {
            if n.is_some_and(|n| n != 2) {
                return Err(CliError::Usage("the two-qudit mixture takes --n 2 only".into()));
            }
            ("mixture", 2, bounds::classify_epsilon_mixture(dim, eps)?)
        }
        Family::Cat => {
            let n = n.unwrap_or(2);
            ("cat", n, bounds::classify_epsilon_cat(dim, n, eps)?)
        }
    };
    let certificate_path = match cert_out {
        Some(path) => {
            let doc = certificate_document(name, dim, n, eps, &verdict);
            write_file(path, &json::to_string(&doc))?;
            Some(path.to_string_lossy().into_owned())
        }
        None => None,
    };
    let record = ClassifyRecord {
        verdict: verdict.verdict,
        boundary_used: verdict.boundary_used,
        certificate_kind: verdict.certificate.kind(),
        certificate_path,
    };
    let code = if verdict.verdict.is_decided() {
        EXIT_OK
    } else {
        EXIT_INDETERMINATE
    };
    Ok(Outcome {
        stdout: json::to_string(&record),
        code,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Ensemble,
    Haar,
    Ppt,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Ensemble => "ensemble",
            Suite::Haar => "haar",
            Suite::Ppt => "ppt",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions<'a> {
    pub dim: Option<usize>,
    pub n: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub input: Option<&'a Path>,
}

#[derive(Serialize)]
struct PptRecord {
    dim_list: Vec<usize>,
    min_eigenvalue: f64,
    is_ppt: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    suite: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ppt: Option<PptRecord>,
    status: &'static str,
}

pub fn verify(suite: Suite, opts: &VerifyOptions) -> Result<Outcome, CliError> {
    let require_dim = || {
        opts.dim
            .ok_or_else(|| CliError::Usage(format!("verify {} requires --dim", suite.name())))
    };
    let seed = opts.seed.unwrap_or(0);
    let mut report = VerifyReport {
        suite: suite.name(),
        dim: opts.dim,
        n: None,
        samples: None,
        seed: None,
        checks: Vec::new(),
        ppt: None,
        status: "pass",
    };
    match suite {
        Suite::Algebra => {
            report.seed = Some(seed);
            report.checks = verify_algebra(require_dim()?, seed)?;
        }
        Suite::Ensemble => {
            let n = opts.n.unwrap_or(2);
            report.n = Some(n);
            report.checks = verify_ensemble(require_dim()?, n)?;
        }
        Suite::Haar => {
            let samples = opts.samples.unwrap_or(DEFAULT_SAMPLES);
            report.samples = Some(samples);
            report.seed = Some(seed);
            report.checks = verify_haar(require_dim()?, samples, seed)?;
        }
        Suite::Ppt => match opts.input {
            Some(path) => {
                let (checks, ppt) = verify_ppt_input(path)?;
                report.dim = None;
                report.checks = checks;
                report.ppt = Some(ppt);
            }
            None => report.checks = verify_ppt(require_dim()?)?,
        },
    }
    let passed = report.checks.iter().all(Check::passed);
    if !passed {
        report.status = "fail";
    }
    Ok(Outcome {
        stdout: json::to_string(&report),
        code: if passed { EXIT_OK } else { EXIT_NUMERIC },
    })
}

fn verify_algebra(dim: usize, seed: u64) -> Result<Vec<Check>, CliError> {
    let basis = build_basis(dim)?;
    let sc = structure_constants(&basis)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = (dim * (dim - 1)) as f64;
    let mut norm_worst = 0.0f64;
    for _ in 0..100 {
        let psi = random_state(&mut rng, dim)?;
        let c = bloch_expand(&psi.density(), &basis)?;
        norm_worst = norm_worst.max((c.norm_sqr() - target).abs());
    }
    Ok(vec![
        Check::new("orthonormality", basis.orthonormality_residual(), EXACT_TOLERANCE),
        Check::new("structure-constant-symmetry", sc.symmetry_residual(), EXACT_TOLERANCE),
        Check::new("product-identity", sc.product_residual(&basis), EXACT_TOLERANCE),
        Check::new("pure-state-bloch-norm", norm_worst, SPECTRAL_TOLERANCE),
    ])
}

fn verify_ensemble(dim: usize, n: usize) -> Result<Vec<Check>, CliError> {
    let ensemble = boundary_product_ensemble(dim)?;
    let target = epsilon_mixture(dim, bounds::two_qudit_boundary(dim)?)?;
    let rebuilt = ensemble.density()?;
    let mut checks = vec![
        Check::new(
            "boundary-reconstruction",
            frobenius_distance(rebuilt.matrix(), target.matrix()),
            EXACT_TOLERANCE,
        ),
        Check::new("ensemble-weight", (ensemble.total_weight() - 1.0).abs(), EXACT_TOLERANCE),
        Check::new(
            "z-average",
            frobenius_distance(z_ensemble_average(dim)?.matrix(), z_average_closed_form(dim)?.matrix()),
            EXACT_TOLERANCE,
        ),
    ];
    if dim <= Z_MOMENT_MAX_DIM {
        let mut mismatches = 0usize;
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    for d in 0..dim {
                        if z_moment_sum(dim, a, b, c, d)? != (z_moment_closed_form(dim, a, b, c, d), 0) {
                            mismatches += 1;
                        }
                    }
                }
            }
        }
        checks.push(Check::new("z-moment-identity", mismatches as f64, 0.0));
    }
    let (_, upper) = bounds::neighborhood_bounds(dim, n)?;
    let projected = project_to_qubits(&epsilon_cat(dim, n, upper)?, dim, n)?;
    let expected = epsilon_cat(2, n, epsilon_prime(dim, n, upper))?;
    checks.push(Check::new(
        "qubit-projection",
        frobenius_distance(projected.state.matrix(), expected.matrix()),
        EXACT_TOLERANCE,
    ));
    Ok(checks)
}

fn verify_haar(dim: usize, samples: usize, seed: u64) -> Result<Vec<Check>, CliError> {
    let g = g_superoperator(dim)?;
    let volume = HaarMoments::new(dim)?.volume;
    let symmetry = g
        .distance(&lr_adjoint(&g))
        .max(g.distance(&ordinary_adjoint(&g)))
        .max(g.distance(&sharp(&g)));
    let inverse = lr_multiply(&g_inverse(dim)?, &g)?.distance(&Superoperator::lr_identity(dim)?);
    let mc = monte_carlo_g(dim, samples, seed)?;
    Ok(vec![
        Check::new("g-symmetries", symmetry, EXACT_TOLERANCE),
        Check::new("g-trace", (lr_trace(&g).re - volume).abs() / volume, EXACT_TOLERANCE),
        Check::new("g-inverse", inverse, EXACT_TOLERANCE),
        Check::new("g-monte-carlo-sigma", mc.max_sigma_deviation(&g), SIGMA_BAND),
    ])
}

fn verify_ppt(dim: usize) -> Result<Vec<Check>, CliError> {
    let boundary = bounds::two_qudit_boundary(dim)?;
    let crossing = bounds::ppt_zero_crossing(dim)?;
    let mut disagreements = 0usize;
    for k in 0..=50 {
        let eps = k as f64 / 50.0;
        let verdict = bounds::classify_epsilon_mixture(dim, eps)?.verdict;
        let ppt = bounds::ppt_test(&epsilon_mixture(dim, eps)?, dim, dim)?;
        if (verdict == Verdict::SeparableCertified) != ppt.is_ppt {
            disagreements += 1;
        }
    }
    Ok(vec![
        Check::new("ppt-crossing", (crossing - boundary).abs(), SPECTRAL_TOLERANCE),
        Check::new("verdict-ppt-agreement", disagreements as f64, 0.0),
    ])
}

fn verify_ppt_input(path: &Path) -> Result<(Vec<Check>, PptRecord), CliError> {
    let file = MatrixFile::load(path)?;
    let [dim_a, dim_b] = file.dim_list[..] else {
        return Err(CliError::Usage(format!(
            "{}: partial transpose needs exactly two subsystems, got {:?}",
            path.display(),
            file.dim_list
        )));
    };
    let rho = file.to_operator()?;
    let spectrum = rho.eigenvalues();
    let negativity = (-spectrum[0]).max(0.0);
    let report = bounds::ppt_test(&rho, dim_a, dim_b)?;
    let checks = vec![
        Check::new("hermitian", hermiticity_defect(rho.matrix()), SPECTRAL_TOLERANCE),
        Check::new("unit-trace", (rho.trace().re - 1.0).abs(), SPECTRAL_TOLERANCE),
        Check::new("positive-semidefinite", negativity, SPECTRAL_TOLERANCE),
    ];
    let record = PptRecord {
        dim_list: file.dim_list,
        min_eigenvalue: report.min_eigenvalue,
        is_ppt: report.is_ppt,
    };
    Ok((checks, record))
}
