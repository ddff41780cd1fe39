use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("division by a series with zero constant term")]
    DivisionByZeroConstantTerm,

    #[error("inner series of a composition must have zero constant term")]
    InnerConstantTermNonzero,

    #[error("series is not compositionally invertible (needs c0 = 0 and c1 != 0)")]
    NotInvertible,

    #[error("square root needs a positive constant term")]
    NonpositiveConstantTerm,

    #[error("constant term {0} has no exact rational square root")]
    IrrationalSquareRoot(String),

    #[error("series has order {have}, at least {need} required")]
    InsufficientOrder { need: usize, have: usize },

    #[error("first moment vanishes for a law other than the Dirac mass at 0")]
    ZeroFirstMoment,

    #[error("measure has support below zero: {0}")]
    NegativeSupport(String),

    #[error("odd moments of a square-root push-forward are undetermined for {0}; symmetrize it or use atomic input")]
    OddMomentsUndetermined(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("ratio parameter must lie in [0, 1], got {0}")]
    RatioOutOfRange(String),

    #[error("mu_lambda at lambda = 0 is a Dirac mass and has no density")]
    LambdaZero,

    #[error("non-crossing enumeration is capped at n = {max}, got {n}")]
    TooLarge { n: usize, max: usize },

    #[error("Levy pair violates the non-negative support condition: {0}")]
    PositivityViolation(String),

    #[error("the two routes disagree, max discrepancy {0}")]
    RouteMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}
