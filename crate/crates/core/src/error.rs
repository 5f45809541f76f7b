//! Top-level error with stable process exit codes.

use thiserror::Error;

use crate::budget::{BudgetExceeded, InvalidBudget};
use crate::document::DocumentError;
use crate::group::GroupError;
use crate::sft::SftError;
use crate::sofic::SoficError;
use crate::zeta::ZetaError;

/// Exit statuses: 0 success, 1 usage, 2 validation, 3 budget, 4 consistency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage = 1,
    Validation = 2,
    Budget = 3,
    Consistency = 4,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    InvalidBudget(#[from] InvalidBudget),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid system document: {0}")]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Sft(#[from] SftError),
    #[error(transparent)]
    Sofic(#[from] SoficError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("consistency failure: {0}")]
    Consistency(String),
}

fn sft_kind(e: &SftError) -> ErrorKind {
    match e {
        SftError::Budget(_) => ErrorKind::Budget,
        SftError::Algebra(_) | SftError::Recode(_) => ErrorKind::Consistency,
        _ => ErrorKind::Validation,
    }
}

fn sofic_kind(e: &SoficError) -> ErrorKind {
    match e {
        SoficError::Budget(_) => ErrorKind::Budget,
        SoficError::Sft(inner) => sft_kind(inner),
        SoficError::NegativeCount { .. }
        | SoficError::PropertyFailure(_)
        | SoficError::MissingImage { .. }
        | SoficError::Algebra(_) => ErrorKind::Consistency,
        _ => ErrorKind::Validation,
    }
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Usage(_) | Error::InvalidBudget(_) | Error::Io { .. } => ErrorKind::Usage,
            Error::Document(DocumentError::Sft(e)) | Error::Sft(e) => sft_kind(e),
            Error::Document(DocumentError::Sofic(e)) | Error::Sofic(e) => sofic_kind(e),
            Error::Document(_) | Error::Group(_) => ErrorKind::Validation,
            Error::Zeta(z) => match z {
                ZetaError::Sft(e) => sft_kind(e),
                ZetaError::Sofic(e) => sofic_kind(e),
                ZetaError::Budget(_) => ErrorKind::Budget,
                ZetaError::Algebra(_) => ErrorKind::Consistency,
                ZetaError::BadSubsystem { .. } | ZetaError::NotFlip { .. } => ErrorKind::Usage,
            },
            Error::Budget(_) => ErrorKind::Budget,
            Error::Consistency(_) => ErrorKind::Consistency,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind().exit_code()
    }
}
