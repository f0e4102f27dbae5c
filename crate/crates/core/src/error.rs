use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("every operator coefficient is zero")]
    AllCoefficientsZero,
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("operator has order {order}; at least {required} is required")]
    OrderTooLow { order: usize, required: usize },
    #[error("root isolation failed: {0}")]
    RootIsolation(String),
    #[error("point {location} is an irregular singular point")]
    IrregularPoint { location: String },
    #[error("operator is not Fuchsian: irregular at {points:?}")]
    NonFuchsian { points: Vec<String> },
    #[error(
        "path passes within {distance:.3e} of singular point {point}, below clearance {clearance:.3e}"
    )]
    PathTooCloseToSingularity {
        point: String,
        distance: f64,
        clearance: f64,
    },
    #[error("precision target {target:.1e} not reachable at order {order} near {near}")]
    PrecisionExhausted {
        target: f64,
        order: usize,
        near: String,
    },
    #[error("no valid base point: {0}")]
    NoValidBasepoint(String),
    #[error("cannot lift solution jets at the base point: {0}")]
    LiftFailure(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("function has a pole at {0}")]
    Pole(String),
}
