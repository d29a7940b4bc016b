use std::fmt;

use serde::Serialize;

/// Which endpoint vector of a telescopic linkage an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    /// The vector with the telescopic leg at its shortest length.
    Lower,
    /// The vector with the telescopic leg at its longest length.
    Upper,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Lower => f.write_str("lower"),
            Endpoint::Upper => f.write_str("upper"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("cannot parse {field} from {input:?}: {reason}")]
    Parse {
        field: String,
        input: String,
        reason: String,
    },

    #[error("invalid length data: {0}")]
    InvalidLengths(String),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    /// A subset whose signed sum vanishes: neither long nor short.
    #[error("subset {subset} has zero signed sum (neither long nor short)")]
    Degenerate { subset: String },

    /// A length vector admits a vanishing signed sum. `signs` lists the
    /// offending sign vector, one entry of +1 or -1 per leg.
    #[error("{which} length vector ({lengths}) is not generic: signs {signs:?} give zero")]
    NonGeneric {
        which: Endpoint,
        lengths: String,
        signs: Vec<i8>,
    },

    /// The equilateral parameters hit a wall.
    #[error("equilateral parameters are not generic: {0}")]
    NonGenericParameter(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),
}

impl Error {
    pub(crate) fn parse(field: &str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            field: field.to_string(),
            input: input.to_string(),
            reason: reason.into(),
        }
    }

    /// True for the errors that mean "the metric data sits on a wall".
    pub fn is_non_generic(&self) -> bool {
        matches!(
            self,
            Error::NonGeneric { .. } | Error::NonGenericParameter(_) | Error::Degenerate { .. }
        )
    }

    /// Short machine-readable tag used in serialized error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::InvalidLengths(_) => "invalid_lengths",
            Error::SizeMismatch { .. } => "size_mismatch",
            Error::Degenerate { .. } => "degenerate",
            Error::NonGeneric { .. } => "non_generic",
            Error::NonGenericParameter(_) => "non_generic",
            Error::Contract(_) => "contract",
            Error::Unsupported(_) => "unsupported",
            Error::NotApplicable(_) => "not_applicable",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
