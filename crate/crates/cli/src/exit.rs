//! Exit codes and structured diagnostics.

use std::fmt;
use std::path::Path;

use pfext::Error;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitCode {
    Success,
    /// `compare` found the classes different or not comparable.
    NotEqual,
    Parse,
    NonFuchsian,
    Numerical,
    Inconclusive,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        match self {
            ExitCode::Success => 0,
            ExitCode::NotEqual => 1,
            ExitCode::Parse => 2,
            ExitCode::NonFuchsian => 3,
            ExitCode::Numerical => 4,
            ExitCode::Inconclusive => 5,
        }
    }

    /// The more severe of two outcomes; parse and input errors dominate.
    pub fn worst(self, other: Self) -> Self {
        self.max(other)
    }
}

/// A diagnostic that ends (part of) a pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub code: ExitCode,
    /// Stable identifier such as `PathTooCloseToSingularity`.
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn new(code: ExitCode, kind: &str, message: impl Into<String>) -> Self {
        Self {
            code,
            kind: kind.into(),
            message: message.into(),
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(ExitCode::Parse, "ParseError", message)
    }

    pub fn parse_in(field: &str, e: Error) -> Self {
        Self::new(ExitCode::Parse, error_kind(&e), format!("{field}: {e}"))
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::parse(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for Failure {}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::AllCoefficientsZero => "AllCoefficientsZero",
        Error::ZeroFunction => "ZeroFunction",
        Error::ZeroDenominator => "ZeroDenominator",
        Error::OrderTooLow { .. } => "OrderTooLow",
        Error::RootIsolation(_) => "RootIsolation",
        Error::IrregularPoint { .. } => "IrregularPoint",
        Error::NonFuchsian { .. } => "NonFuchsian",
        Error::PathTooCloseToSingularity { .. } => "PathTooCloseToSingularity",
        Error::PrecisionExhausted { .. } => "PrecisionExhausted",
        Error::NoValidBasepoint(_) => "NoValidBasepoint",
        Error::LiftFailure(_) => "LiftFailure",
        Error::DimensionMismatch { .. } => "DimensionMismatch",
        Error::InvalidPath(_) => "InvalidPath",
        Error::Parse { .. } => "ParseError",
        Error::Pole(_) => "Pole",
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. }
            | Error::AllCoefficientsZero
            | Error::ZeroDenominator
            | Error::ZeroFunction
            | Error::OrderTooLow { .. } => ExitCode::Parse,
            Error::NonFuchsian { .. } | Error::IrregularPoint { .. } => ExitCode::NonFuchsian,
            _ => ExitCode::Numerical,
        };
        Failure::new(code, error_kind(&e), e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_stable() {
        let codes: Vec<i32> = [
            ExitCode::Success,
            ExitCode::NotEqual,
            ExitCode::Parse,
            ExitCode::NonFuchsian,
            ExitCode::Numerical,
            ExitCode::Inconclusive,
        ]
        .iter()
        .map(|c| c.code())
        .collect();
        assert_eq!(codes, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn core_errors_map_to_codes() {
        let f: Failure = Error::NonFuchsian { points: vec!["infinity".into()] }.into();
        assert_eq!(f.code, ExitCode::NonFuchsian);
        let f: Failure = Error::PathTooCloseToSingularity {
            point: "0".into(),
            distance: 0.1,
            clearance: 1.0,
        }
        .into();
        assert_eq!((f.code, f.kind.as_str()), (ExitCode::Numerical, "PathTooCloseToSingularity"));
    }
}
