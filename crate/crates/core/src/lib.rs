//! Exact and floating-point truncated power series, moment sequences and the
//! transforms of free probability: free additive, free multiplicative and
//! rectangular free convolution, non-crossing partition combinatorics and
//! Lévy parameterisations of infinitely divisible laws.

pub mod convolution;
pub mod error;
pub mod infdiv;
pub mod measure;
pub mod moments;
pub mod nc;
pub mod scalar;
pub mod series;
pub mod transform;

pub use convolution::{
    boxplus, boxtimes, rect_boxplus, verify_main_identity, verify_rc_identity,
    verify_square_corollary, ConvolutionReport,
};
pub use error::{Error, Result};
pub use infdiv::{
    c_from_levy_g, check_nonneg_support, g_to_levy_pair, levy_law_moments, levy_pair_to_g,
    mp_product_law, mp_product_routes, mp_product_squared_law, r_from_levy_pair, LevyPair,
    RectLevyMeasure,
};
pub use measure::{
    marchenko_pastur_moments, moments_of, mu_lambda_density, mu_lambda_moments,
    stieltjes_positivity, HankelKind, MeasureSpec, Positivity,
};
pub use moments::MomentSequence;
pub use nc::{
    cumulants_from_moments_nc, enumerate_nc, moments_from_cumulants_nc, verify_cumulant_identity,
    CumulantIdentityReport, NcPartition,
};
pub use scalar::{parse_rational, Rational, Scalar, DEFAULT_TOLERANCE};
pub use series::{TruncatedSeries, DEFAULT_EXACT_ORDER, DEFAULT_FLOAT_ORDER};
pub use transform::{
    cumulant_series, moments_from_c, moments_from_linear_s, moments_from_r, moments_from_s, r_transform,
    rect_c_transform, s_transform, RatioParam,
};
