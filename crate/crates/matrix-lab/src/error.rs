use thiserror::Error;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("dimension {dim} exceeds the cap {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("eigenvalue iteration did not converge for a {0}x{0} matrix")]
    EigenFailure(usize),

    #[error("histogram range is empty: [{0}, {1}]")]
    EmptyRange(f64, f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Core(#[from] freeconv_core::Error),
}
