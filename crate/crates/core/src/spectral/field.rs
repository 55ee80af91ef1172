//! Truncated spectral representation of u(t, x) and its norms.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// A field on the torus held as Fourier amplitudes u_k, k in [-N, N],
/// together with the time it represents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralField {
    n_modes: usize,
    amps: Vec<Complex64>,
    time: f64,
}

impl SpectralField {
    /// Builds a field from 2N+1 amplitudes in index order k = -N..N.
    pub fn new(n_modes: usize, amps: Vec<Complex64>, time: f64) -> Result<Self> {
        if amps.len() != 2 * n_modes + 1 {
            return Err(Error::Validation(format!(
                "field with n_modes = {n_modes} needs {} amplitudes, got {}",
                2 * n_modes + 1,
                amps.len()
            )));
        }
        if !amps.iter().all(|a| a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::Validation(
                "field amplitudes must be finite".to_string(),
            ));
        }
        if !time.is_finite() {
            return Err(Error::Validation(format!("field time must be finite, got {time}")));
        }
        Ok(SpectralField { n_modes, amps, time })
    }

    pub fn zero(n_modes: usize) -> Self {
        SpectralField {
            n_modes,
            amps: vec![Complex64::ZERO; 2 * n_modes + 1],
            time: 0.0,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Amplitude u_k.
    pub fn amp(&self, k: i64) -> Complex64 {
        self.amps[(k + self.n_modes as i64) as usize]
    }

    /// Amplitudes in index order k = -N..N.
    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub(crate) fn set_time(&mut self, t: f64) {
        self.time = t;
    }

    /// Value of the trigonometric polynomial at x = 0, i.e. the plain sum
    /// of the amplitudes.
    pub fn point_value_at_zero(&self) -> Complex64 {
        let re: Vec<f64> = self.amps.iter().map(|a| a.re).collect();
        let im: Vec<f64> = self.amps.iter().map(|a| a.im).collect();
        Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
    }

    /// Fourier-Lebesgue norm: the l^p norm of the amplitude sequence.
    /// `p = f64::INFINITY` returns the largest modulus.
    pub fn fl_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::param("p", format!("FL^p needs p >= 1, got {p}")));
        }
        if p == f64::INFINITY {
            return Ok(self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max));
        }
        if p == 1.0 {
            let mods: Vec<f64> = self.amps.iter().map(|a| a.norm()).collect();
            return Ok(pairwise_sum(&mods));
        }
        if p == 2.0 {
            return Ok(self.mass().sqrt());
        }
        let pows: Vec<f64> = self.amps.iter().map(|a| a.norm().powf(p)).collect();
        Ok(pairwise_sum(&pows).powf(1.0 / p))
    }

    /// Sum of |u_k|^2 over the modes (Fourier-side mass; no 2π factor).
    pub fn mass(&self) -> f64 {
        let sq: Vec<f64> = self.amps.iter().map(|a| a.norm_sqr()).collect();
        pairwise_sum(&sq)
    }

    /// Maximum of |u(x)| over `grid_size` equispaced points, evaluated by a
    /// zero-padded FFT. Requires grid_size >= 4(2N+1) so the maximum of the
    /// trigonometric polynomial is well resolved.
    pub fn sup_norm(&self, grid_size: usize) -> Result<f64> {
        let eval = SupNormEvaluator::new(self.n_modes, grid_size)?;
        Ok(eval.eval(self))
    }
}

/// Reusable zero-padded FFT workspace for sup-norm evaluation. One instance
/// per thread; the plan is cached across fields of the same size.
pub struct SupNormEvaluator {
    n_modes: usize,
    grid_size: usize,
    fft: std::sync::Arc<dyn rustfft::Fft<f64>>,
}

impl SupNormEvaluator {
    pub fn new(n_modes: usize, grid_size: usize) -> Result<Self> {
        if grid_size < 4 * (2 * n_modes + 1) {
            return Err(Error::param(
                "grid_size",
                format!(
                    "need at least 4(2N+1) = {} evaluation points, got {grid_size}",
                    4 * (2 * n_modes + 1)
                ),
            ));
        }
        let fft = FftPlanner::new().plan_fft_inverse(grid_size);
        Ok(SupNormEvaluator {
            n_modes,
            grid_size,
            fft,
        })
    }

    pub fn eval(&self, field: &SpectralField) -> f64 {
        assert_eq!(field.n_modes, self.n_modes);
        let m = self.grid_size;
        let n = self.n_modes as i64;
        let mut buf = vec![Complex64::ZERO; m];
        for k in -n..=n {
            let idx = k.rem_euclid(m as i64) as usize;
            buf[idx] = field.amp(k);
        }
        self.fft.process(&mut buf);
        buf.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}
