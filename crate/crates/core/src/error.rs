use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// The variants are grouped by the exit-code classes used by the CLI:
/// parse, domain, parity, classification and assertion failures.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { name: String, offset: usize },

    #[error("domain error in `{node}`: {detail}")]
    Domain { node: String, detail: String },

    #[error("point ({0}, {1}) is lightlike; second fundamental form is undefined")]
    LightlikePoint(f64, f64),

    #[error("parity mismatch: transform {transform} needs {required}, found {found}")]
    ParityMismatch {
        transform: String,
        required: String,
        found: String,
    },

    #[error("point ({0}, {1}) is not lightlike (B = {2:e})")]
    NotLightlike(f64, f64, f64),

    #[error("cannot normalize lightlike line: {0}")]
    NormalizationFailure(String),

    #[error("characteristic is not constant along the line (spread {0:e})")]
    NonConstantCharacteristic(f64),

    #[error("approximation function matches no template (best residual {0:e})")]
    UnclassifiedProfile(f64),

    #[error("causal character mismatch: {0}")]
    CausalMismatch(String),

    #[error("degenerate null curve: {0}")]
    DegenerateNullCurve(String),

    #[error("graph is not minimal (residual {0:e})")]
    NotMinimal(f64),

    #[error("dual field is not exact (mismatch {0:e})")]
    NonExactField(f64),

    #[error("graph is not spacelike (B = {0:e})")]
    NotSpacelike(f64),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("unknown transform `{0}`")]
    UnknownTransform(String),

    #[error("graph kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("check failed: {0}")]
    Assertion(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(node: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Domain {
            node: node.into(),
            detail: detail.into(),
        }
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. } | Error::UnknownFunction { .. } | Error::InvalidArgument(_) => 2,
            Error::Domain { .. }
            | Error::LightlikePoint(..)
            | Error::NotSpacelike(_)
            | Error::KindMismatch { .. }
            | Error::UnknownEntry(_)
            | Error::UnknownTransform(_)
            | Error::Io(_) => 3,
            Error::ParityMismatch { .. } => 4,
            Error::NotLightlike(..)
            | Error::NormalizationFailure(_)
            | Error::NonConstantCharacteristic(_)
            | Error::UnclassifiedProfile(_)
            | Error::CausalMismatch(_)
            | Error::DegenerateNullCurve(_) => 5,
            Error::NotMinimal(_) | Error::NonExactField(_) | Error::Assertion(_) => 6,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
