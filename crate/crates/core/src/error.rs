use std::path::PathBuf;

use thiserror::Error;

use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a valid number: `{0}`")]
    BadNumber(String),

    #[error("invalid token `{0}`: must be non-empty without whitespace, `'` or `:`")]
    InvalidToken(String),

    #[error("{format} line {line}: {message}")]
    Parse {
        format: &'static str,
        line: usize,
        message: String,
    },

    #[error("{format}: {message}")]
    Invalid {
        format: &'static str,
        message: String,
    },

    #[error("unknown service `{0}`")]
    UnknownService(String),

    #[error("unknown location `{0}`")]
    UnknownLocation(String),

    #[error("service `{0}` has no assigned engine region")]
    Unassigned(String),

    #[error("workflow is invalid: {}", format_violations(.0))]
    InvalidWorkflow(Vec<Violation>),

    #[error("invalid solve request: {0}")]
    InvalidRequest(String),

    #[error("search space of {size} assignments exceeds the enumeration cap of {cap}")]
    SearchSpaceTooLarge { size: u128, cap: u128 },

    #[error("costs cannot be scaled to a common integer denominator without overflow")]
    ScaleOverflow,

    #[error("speedup undefined: optimized plan has zero data movement")]
    ZeroMovement,

    #[error("invalid generator parameters: {0}")]
    BadGenerator(String),

    #[error("rate list is empty")]
    EmptyRates,

    #[error("no host record for region `{0}`")]
    MissingHost(String),

    #[error("no data size for reference `{0}`")]
    MissingSize(String),

    #[error("service `{service}` declares input size {declared} but consumes {consumed}")]
    InconsistentInputSize {
        service: String,
        declared: String,
        consumed: String,
    },

    #[error("simulation deadlocked; blocked steps: {blocked:?}")]
    Deadlock { blocked: Vec<usize> },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    pub(crate) fn parse(format: &'static str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            format,
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(format: &'static str, message: impl Into<String>) -> Self {
        Error::Invalid {
            format,
            message: message.into(),
        }
    }
}
