//! Unitarily invariant sampling of pure states and unitaries, plus a
//! deterministic parallel Monte Carlo driver.
//!
//! Work is split into fixed-size chunks; chunk `k` draws from ChaCha stream
//! `k` of the root seed and chunk results are merged in chunk order, so
//! estimates are bitwise reproducible for a given `(seed, samples)`
//! regardless of how many worker threads run.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{check_dim, Result};
use crate::linalg::{CMatrix, CVector};
use crate::operator::PureState;

/// Samples per deterministic work unit.
pub const CHUNK_SAMPLES: usize = 1 << 14;

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Normalized vector of independent standard complex Gaussians.
pub fn random_state_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| complex_gaussian(rng));
        let norm = v.norm();
        if norm > 0.0 {
            return v.unscale(norm);
        }
    }
}

/// Haar-random pure state drawn with `rng`.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<PureState> {
    check_dim(dim)?;
    Ok(PureState::from_parts_unchecked(vec![dim], random_state_vector(rng, dim)))
}

/// Haar-random pure state, deterministic in `seed`.
pub fn haar_sample(dim: usize, seed: u64) -> Result<PureState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_state(&mut rng, dim)
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    q
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Runs `per_chunk(rng, count)` over the chunks covering `samples` draws and
/// folds the results in chunk order with `merge`.
pub fn chunked<T, F, M>(samples: usize, seed: u64, per_chunk: F, merge: M) -> Option<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync,
    M: Fn(T, T) -> T,
{
    let chunks = samples.div_ceil(CHUNK_SAMPLES);
    let parts: Vec<T> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let count = CHUNK_SAMPLES.min(samples - k * CHUNK_SAMPLES);
            per_chunk(&mut chunk_rng(seed, k), count)
        })
        .collect();
    parts.into_iter().reduce(merge)
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl MeanEstimate {
    /// `|mean - target|` in units of the standard error. Zero-variance
    /// estimates count as exact when within `1e-12` of the target.
    pub fn sigmas_from(&self, target: f64) -> f64 {
        sigma_distance(self.mean - target, self.std_error)
    }
}

pub(crate) fn sigma_distance(delta: f64, std_error: f64) -> f64 {
    if std_error > 0.0 {
        delta.abs() / std_error
    } else if delta.abs() <= 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Running first and second moments of a real statistic.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Moments {
    pub n: usize,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(self, other: Moments) -> Moments {
        Moments {
            n: self.n + other.n,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    /// Standard error of the mean from the unbiased sample variance.
    pub fn std_error(&self) -> f64 {
        if self.n < 2 {
            return f64::INFINITY;
        }
        let n = self.n as f64;
        let var = ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }

    pub fn estimate(&self) -> MeanEstimate {
        MeanEstimate {
            mean: self.mean(),
            std_error: self.std_error(),
            samples: self.n,
        }
    }
}

/// Monte Carlo mean of `f(ψ)` over Haar-random `dim`-level states.
pub fn haar_mean<F>(dim: usize, samples: usize, seed: u64, f: F) -> Result<MeanEstimate>
where
    F: Fn(&CVector) -> f64 + Sync,
{
    check_dim(dim)?;
    let moments = chunked(
        samples,
        seed,
        |rng, count| {
            let mut m = Moments::default();
            for _ in 0..count {
                m.push(f(&random_state_vector(rng, dim)));
            }
            m
        },
        Moments::merge,
    )
    .unwrap_or_default();
    Ok(moments.estimate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_distance, identity};

    #[test]
    fn samples_are_normalized_and_seeded() {
        for seed in 0..20 {
            let s = haar_sample(4, seed).unwrap();
            assert!((s.amplitudes().norm() - 1.0).abs() < 1e-14);
        }
        assert_eq!(haar_sample(3, 11).unwrap(), haar_sample(3, 11).unwrap());
        assert_ne!(haar_sample(3, 11).unwrap(), haar_sample(3, 12).unwrap());
    }

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for dim in 2..=5 {
            let u = random_unitary(&mut rng, dim);
            assert!(frobenius_distance(&(u.adjoint() * &u), &identity(dim)) < 1e-12);
        }
    }

    #[test]
    fn overlap_moments_converge() {
        for dim in 2..=4 {
            let d = dim as f64;
            let second = haar_mean(dim, 200_000, 3, |v| v[0].norm_sqr()).unwrap();
            assert!(second.sigmas_from(1.0 / d) < 6.0);
            let fourth = haar_mean(dim, 200_000, 4, |v| v[0].norm_sqr().powi(2)).unwrap();
            assert!(fourth.sigmas_from(2.0 / (d * (d + 1.0))) < 6.0);
        }
    }

    #[test]
    fn chunked_estimates_reproducible_across_pools() {
        let run = || haar_mean(3, 3 * CHUNK_SAMPLES + 17, 99, |v| v[1].re).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(run);
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(run);
        assert_eq!(single.mean.to_bits(), many.mean.to_bits());
        assert_eq!(single.std_error.to_bits(), many.std_error.to_bits());
        assert_eq!(single.samples, 3 * CHUNK_SAMPLES + 17);
    }
}
