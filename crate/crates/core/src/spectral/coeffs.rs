//! Coefficient families (c_k) for random Fourier data on the torus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// Decay family for the coefficients. `Exponential` and `Gaussian` are the
/// rapidly decaying families; `PowerLaw` covers the slowly decaying regime
/// used by the l1-sharpness experiments (p <= 1 leaves l1 while the l2 sum
/// stays finite for p > 1/2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoeffKind {
    /// c_k = a e^{-b|k|}
    Exponential { a: f64, b: f64 },
    /// c_k = a e^{-b k^2}
    Gaussian { a: f64, b: f64 },
    /// c_k = a (1+|k|)^{-p}
    PowerLaw { a: f64, p: f64 },
    /// Arbitrary nonnegative values, indexed k = -N..N.
    Explicit { values: Vec<f64> },
}

/// A truncated coefficient family: 2N+1 nonnegative values for k in [-N, N].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffSeq {
    kind: CoeffKind,
    n_modes: usize,
    values: Vec<f64>,
}

/// Builds the truncated sequence, evaluating the formula kinds exactly.
pub fn make_coeffs(kind: CoeffKind, n_modes: usize) -> Result<CoeffSeq> {
    let len = 2 * n_modes + 1;
    let values = match &kind {
        CoeffKind::Exponential { a, b } => {
            check_positive("a", *a)?;
            check_positive("b", *b)?;
            (0..len)
                .map(|i| {
                    let k = i as i64 - n_modes as i64;
                    a * (-b * k.unsigned_abs() as f64).exp()
                })
                .collect()
        }
        CoeffKind::Gaussian { a, b } => {
            check_positive("a", *a)?;
            check_positive("b", *b)?;
            (0..len)
                .map(|i| {
                    let k = (i as i64 - n_modes as i64) as f64;
                    a * (-b * k * k).exp()
                })
                .collect()
        }
        CoeffKind::PowerLaw { a, p } => {
            check_positive("a", *a)?;
            check_positive("p", *p)?;
            (0..len)
                .map(|i| {
                    let k = i as i64 - n_modes as i64;
                    a * (1.0 + k.unsigned_abs() as f64).powf(-p)
                })
                .collect()
        }
        CoeffKind::Explicit { values } => {
            if values.len() != len {
                return Err(Error::Validation(format!(
                    "explicit coefficient list has {} entries, expected {} for n_modes = {}",
                    values.len(),
                    len,
                    n_modes
                )));
            }
            for (i, &v) in values.iter().enumerate() {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(Error::Validation(format!(
                        "explicit coefficient at k = {} is {v}; coefficients must be finite and >= 0",
                        i as i64 - n_modes as i64
                    )));
                }
            }
            values.clone()
        }
    };
    Ok(CoeffSeq {
        kind,
        n_modes,
        values,
    })
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive and finite, got {v}")))
    }
}

impl CoeffSeq {
    pub fn kind(&self) -> &CoeffKind {
        &self.kind
    }

    /// Truncation level N; modes run over k in [-N, N].
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // always holds k = 0
    }

    /// Coefficient c_k.
    pub fn value(&self, k: i64) -> f64 {
        self.values[(k + self.n_modes as i64) as usize]
    }

    /// Values in index order k = -N..N.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sum of |c_k| over the truncation (pairwise summation).
    pub fn l1_sum(&self) -> f64 {
        pairwise_sum(&self.values)
    }

    /// Sum of c_k^2 over the truncation (pairwise summation).
    pub fn l2_sum(&self) -> f64 {
        let squares: Vec<f64> = self.values.iter().map(|c| c * c).collect();
        pairwise_sum(&squares)
    }

    /// Retruncates to a smaller N, preserving the formula kinds exactly.
    pub fn truncated(&self, n_modes: usize) -> Result<CoeffSeq> {
        if n_modes > self.n_modes {
            return Err(Error::param(
                "n_modes",
                format!("cannot extend truncation from {} to {n_modes}", self.n_modes),
            ));
        }
        let offset = self.n_modes - n_modes;
        let values = self.values[offset..offset + 2 * n_modes + 1].to_vec();
        Ok(CoeffSeq {
            kind: self.kind.clone(),
            n_modes,
            values,
        })
    }
}
