//! Coefficient sequences, spectral fields, norms, and random initial data.

mod coeffs;
mod field;
mod sampling;

pub use coeffs::{make_coeffs, CoeffKind, CoeffSeq};
pub use field::{SpectralField, SupNormEvaluator};
pub use sampling::{
    field_from_sample, rayleigh_from_uniform, sample_initial_data, sample_with_rng, GaussianSample,
};
