//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced while loading, validating, or analyzing cohort data.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv parse error in {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },

    #[error("{file} row {row}: duplicate student id `{id}`")]
    DuplicateStudent { file: String, row: u64, id: String },

    #[error("{file} row {row}: duplicate grade for student `{id}` in subject `{subject}`")]
    DuplicateGrade {
        file: String,
        row: u64,
        id: String,
        subject: String,
    },

    #[error("{file} row {row}: grade {value} outside [0, 10]")]
    GradeOutOfRange { file: String, row: u64, value: f64 },

    #[error("{file} row {row}: grade references unknown student `{id}`")]
    OrphanGrade { file: String, row: u64, id: String },

    #[error("{file} row {row}: unknown level `{level}` for factor `{factor}`")]
    UnknownGroupLevel {
        file: String,
        row: u64,
        factor: String,
        level: String,
    },

    #[error("{file} row {row}: entry year {year} outside configured range {min}..={max}")]
    YearOutOfRange {
        file: String,
        row: u64,
        year: i32,
        min: i32,
        max: i32,
    },

    #[error("{file} row {row}: {field} is not a finite number")]
    NonFiniteValue { file: String, row: u64, field: String },

    #[error("{file} row {row}: missing column `{column}`")]
    MissingColumn { file: String, row: u64, column: String },

    #[error("{file}: header mismatch, expected columns {expected:?}, found {found:?}")]
    HeaderMismatch {
        file: String,
        expected: Vec<String>,
        found: Vec<String>,
    },

    #[error("group pair ({g}, {g_prime}) has no admissible cells; its divergence component is undefined")]
    MissingPair { g: usize, g_prime: usize },

    #[error("contrast `{name}` has {cols} columns but the scheme defines {expected} group pairs")]
    ContrastDimension {
        name: String,
        cols: usize,
        expected: usize,
    },

    #[error("covariance estimation needs at least {needed} replicates, got {got}")]
    TooFewReplicates { needed: usize, got: usize },

    #[error("degenerate statistic: {reason}")]
    DegenerateStatistic { reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid model: {0}")]
    Model(String),

    #[error("replicate {index}: {source}")]
    Replicate {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
