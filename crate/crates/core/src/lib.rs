//! Dilation-and-modulation (MD) frames on `L²(ℝ₊)` through the Θ_a transform.
//!
//! An MD system is the family `{Λ_m D_{a^j} ψ_l}` generated by `L` windows
//! under a-dilation periodic modulation `Λ_m` and unitary dilation
//! `D_{a^j}`. The Θ_a transform maps `L²(ℝ₊)` unitarily onto
//! `L²([1, a) × [0, 1))` and turns the frame operator into multiplication by
//! the spectral density `w = Σ_l |Θ_a ψ_l|²`. Every computation here happens
//! on a uniform Θ-grid where that picture is exact.

// negated comparisons such as `!(x > 0.0)` are how NaN gets rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod duals;
pub mod error;
pub mod frame;
pub mod gallery;
pub mod synthesis;
pub mod theta;
pub mod trig;
pub mod types;

mod dft;
mod sum;

pub use duals::{
    canonical_dual, dual_nonuniqueness_witness, duality_check, orthonormality_check,
    parametrized_dual, verify_duality, DualityReport, NonuniquenessWitness,
};
pub use error::{Axis, MdError, Result};
pub use frame::{
    apply_frame_operator, frame_report, invert_frame_operator, spectral_density, SpectralDensity,
    DEFAULT_TOL,
};
pub use synthesis::{analyze, analyze_family, reconstruct, synthesize, Analysis, Reconstruction};
pub use theta::{
    coef_to_grid, coef_to_time, covariance_apply, grid_to_coef, quasi_extend, theta_from_time,
    time_samples, BandSamples,
};
pub use trig::TrigPoly;
pub use types::{
    basis_eval, lambda_eval, CoefArray, DilationBase, FrameReport, GridShape, IndexWindow,
    ThetaGrid, WindowFamily,
};

pub use num_complex::Complex64;
