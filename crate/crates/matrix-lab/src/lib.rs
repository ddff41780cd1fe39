//! Random matrix models whose spectra converge to laws computed by
//! `freeconv-core`, with seeded parallel trials, empirical moments and
//! histograms.

pub mod error;
pub mod experiment;
pub mod linalg;
pub mod model;
pub mod stats;

pub use error::{LabError, Result};
pub use experiment::{
    run_additivity_sim, run_figure1, trial_seed, AdditivityParams, ComparisonReport, Figure1Params,
    RelativeErrors,
};
pub use model::{
    sample_sides, sample_sides_capped, sample_spectrum, sample_spectrum_capped, Factor, MatrixModel,
    SpectrumSample, CLAMP_TOLERANCE, DEFAULT_MAX_DIM,
};
pub use stats::{empirical_moments, histogram, kolmogorov_distance, value_range, HistogramBin};
