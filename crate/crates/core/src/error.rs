use std::fmt;

use thiserror::Error;

use crate::catalog::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceFormat {
    Json,
    Csv,
}

impl fmt::Display for SourceFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceFormat::Json => f.write_str("json"),
            SourceFormat::Csv => f.write_str("csv"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{format} parse error at line {line}, column {column}: {message}")]
    Parse {
        format: SourceFormat,
        line: u64,
        column: u64,
        message: String,
    },

    #[error("{}", fmt_violations(.0))]
    Validation(Vec<Violation>),

    #[error("at least one weight must be non-zero")]
    AllZeroWeights,

    #[error("weight must be an integer in [0,10] ({field}: {value})")]
    InvalidWeight { field: String, value: String },

    #[error("utility out of range [0,100]: {0}")]
    UtilityOutOfRange(f64),

    #[error("dataset {dataset} has no utility from source {source_label:?}")]
    MissingDimension {
        dataset: String,
        source_label: String,
    },

    #[error("unknown utility source {0:?}")]
    UnknownUtilitySource(String),

    #[error("decline rate must be a positive finite number, got {0}")]
    InvalidDeclineRate(f64),

    #[error("cannot normalize an empty list")]
    EmptyInput,

    #[error("catalog has no datasets")]
    EmptyCatalog,

    #[error("NDCG is undefined when every relevance is zero")]
    UndefinedMetric,

    #[error("k must be a positive integer")]
    InvalidK,

    #[error("ranking is not a permutation of the catalog ids: {0}")]
    NotPermutation(String),

    #[error("relevance and scores do not cover the same ids: {0}")]
    IdMismatch(String),

    #[error("score for {0:?} is not a finite number")]
    NonFiniteScore(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn fmt_violations(violations: &[Violation]) -> String {
    let mut out = String::from("validation failed");
    for v in violations {
        out.push_str("; ");
        out.push_str(&v.to_string());
    }
    out
}
