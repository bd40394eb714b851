//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("segment endpoints out of order: a={a} > b={b}")]
    InvalidSegment { a: i32, b: i32 },

    #[error("GL cuspidal label `{name}` must have rank >= 1")]
    InvalidGlRank { name: String },

    #[error("label name `{name}` is already declared")]
    DuplicateLabel { name: String },

    #[error("label name `{name}` is reserved")]
    ReservedName { name: String },

    #[error("unknown label `{name}`")]
    UnknownLabel { name: String },

    #[error("inconsistent duality: `{name}` and `{partner}` do not pair up")]
    InconsistentDuality { name: String, partner: String },

    #[error("cut rank {q} out of range 0..={rank}")]
    CutRankOutOfRange { q: u32, rank: u32 },

    #[error("Levi rank {levi} out of range 0..={rank}")]
    LeviRankOutOfRange { levi: u32, rank: u32 },

    #[error("input is not in the admissible class: segments {first} and {second} are {reason}")]
    NotInAdmissibleClass {
        first: String,
        second: String,
        reason: &'static str,
    },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("malformed declaration `{line}`: {msg}")]
    Declaration { line: String, msg: String },

    #[error("malformed JSON value: {msg}")]
    Json { msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
