//! Numerical FBI transform on gridded functions and directional decay tests.

pub mod canonical;
mod cone;
mod decay;
mod generators;
mod sampled;
mod transform;

use thiserror::Error;

pub use cone::{
    axis_directions, circle_directions, cone_report, nnls, ConeReport, ConvexCone, CrossCheck, LeviContext, LeviPrediction,
    CHARACTERISTIC_TOL, MEMBERSHIP_TOL,
};
pub use decay::{
    classify_fit, classify_values, decay_profile, default_scales, fit_models, normalize_direction, Classification,
    DecayFit, DecayOptions, DecayProfile, Model, Sample, Thresholds,
};
pub use generators::{ComplexSample, GeneratorSpec, SampleInput};
pub use sampled::{Axis, Cutoff, Generator, PointwiseMap, SampledFunction, Samples};
pub use transform::{fbi_transform, fbi_transform_detailed, validate, FbiValue, WINDOW_EXPONENT};

#[derive(Debug, Error)]
pub enum FbiError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("K must be positive, got {0}")]
    NonPositiveK(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("probe point outside the sample grid")]
    ProbeOutsideGrid,
    #[error("probe point outside the region where the cutoff equals 1")]
    ProbeOutsideCutoff,
    #[error("cutoff support extends beyond the sample grid")]
    CutoffExceedsGrid,
    #[error("direction must be a nonzero finite vector")]
    Direction,
    #[error("scales must be positive, strictly increasing and at least 6")]
    Scales,
    #[error(transparent)]
    Cr(#[from] crate::cr::CrError),
}
