//! Gaussian random initial data: Rayleigh moduli and uniform phases.
//!
//! Every draw is a pure function of (coefficients, seed). Monte Carlo
//! callers derive per-sample substreams from one master seed via the
//! ChaCha stream counter, so estimates do not depend on scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::spectral::{CoeffSeq, SpectralField};

/// One draw of the random data: moduli R_k >= 0 and phases in [0, 2π),
/// indexed k = -N..N, so that g_k = R_k e^{iφ_k} and E|g_k|^2 = 1 under
/// the untilted law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianSample {
    pub amplitudes: Vec<f64>,
    pub phases: Vec<f64>,
    pub seed: u64,
    /// Exponential-tilt parameter; `None` for the plain law.
    pub tilt: Option<f64>,
    /// Log importance weight relative to the untilted law; exactly 0 when
    /// `tilt` is `None`.
    pub log_weight: f64,
}

impl GaussianSample {
    pub fn n_modes(&self) -> usize {
        (self.amplitudes.len() - 1) / 2
    }

    /// Modulus R_k.
    pub fn amplitude(&self, k: i64) -> f64 {
        self.amplitudes[(k + self.n_modes() as i64) as usize]
    }

    /// The linear statistic sum_k c_k R_k (the FL^1 norm of the associated
    /// field, conserved by the linear and resonant flows).
    pub fn weighted_l1(&self, coeffs: &CoeffSeq) -> f64 {
        let terms: Vec<f64> = coeffs
            .values()
            .iter()
            .zip(&self.amplitudes)
            .map(|(c, r)| c * r)
            .collect();
        pairwise_sum(&terms)
    }

    /// sum_k c_k^2 R_k^2, the mass of the associated field.
    pub fn weighted_mass(&self, coeffs: &CoeffSeq) -> f64 {
        let terms: Vec<f64> = coeffs
            .values()
            .iter()
            .zip(&self.amplitudes)
            .map(|(c, r)| (c * r) * (c * r))
            .collect();
        pairwise_sum(&terms)
    }
}

/// Inverse-CDF Rayleigh draw for the density 2x e^{-x²}: R = sqrt(-ln(1-U)).
#[inline]
pub fn rayleigh_from_uniform(u: f64) -> f64 {
    (-(1.0 - u).ln()).sqrt()
}

/// Draws a sample from `rng` in the canonical order (R_k then φ_k for
/// k = -N..N). The seed recorded on the sample is supplied by the caller.
pub fn sample_with_rng(coeffs: &CoeffSeq, seed: u64, rng: &mut impl Rng) -> GaussianSample {
    let len = coeffs.len();
    let mut amplitudes = Vec::with_capacity(len);
    let mut phases = Vec::with_capacity(len);
    for _ in 0..len {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        amplitudes.push(rayleigh_from_uniform(u1));
        phases.push(2.0 * std::f64::consts::PI * u2);
    }
    GaussianSample {
        amplitudes,
        phases,
        seed,
        tilt: None,
        log_weight: 0.0,
    }
}

/// Builds the spectral field u_0 with amplitudes c_k R_k e^{iφ_k} at t = 0.
pub fn field_from_sample(coeffs: &CoeffSeq, sample: &GaussianSample) -> Result<SpectralField> {
    if sample.amplitudes.len() != coeffs.len() {
        return Err(Error::Consistency(format!(
            "sample has {} modes, coefficients have {}",
            sample.amplitudes.len(),
            coeffs.len()
        )));
    }
    let amps: Vec<Complex64> = coeffs
        .values()
        .iter()
        .zip(sample.amplitudes.iter().zip(&sample.phases))
        .map(|(c, (r, phi))| Complex64::from_polar(c * r, *phi))
        .collect();
    SpectralField::new(coeffs.n_modes(), amps, 0.0)
}

/// Draws one initial datum deterministically from `seed`.
pub fn sample_initial_data(coeffs: &CoeffSeq, seed: u64) -> (GaussianSample, SpectralField) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = sample_with_rng(coeffs, seed, &mut rng);
    let field = field_from_sample(coeffs, &sample)
        .expect("sample drawn from these coefficients always matches them");
    (sample, field)
}
