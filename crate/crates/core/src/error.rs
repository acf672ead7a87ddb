use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("containment failure: {0}")]
    NotContained(String),

    #[error("cannot parse {input:?}: {message}")]
    Parse { input: String, message: String },

    #[error("relation is not homogeneous: {relation}")]
    NonHomogeneous { relation: String },

    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),

    #[error("generator {name:?} has degree {degree}; degrees must be at least 1")]
    BadGeneratorDegree { name: String, degree: u32 },

    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),

    #[error("degree {degree} exceeds the working bound {bound}; re-normalize with a larger bound")]
    BoundExceeded { degree: u32, bound: u32 },

    #[error("bound {bound} is below the largest relation degree {needed}")]
    BoundTooSmall { bound: u32, needed: u32 },

    #[error("elements belong to different algebras")]
    AlgebraMismatch,

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("morphism is not well defined: relation {relation} maps to {image}")]
    IllDefinedMorphism { relation: String, image: String },

    #[error("d∘d is nonzero on page {r} starting at bidegree ({p}, {q})")]
    DifferentialSquare { r: u32, p: u32, q: u32 },

    #[error("dimension bookkeeping failed on page {r} in total degree {degree}: {detail}")]
    Bookkeeping { r: u32, degree: u32, detail: String },

    #[error("invalid transgression: {0}")]
    InvalidSeed(String),

    #[error("invalid page operation: {0}")]
    InvalidPage(String),

    #[error("invalid bundle specification: {0}")]
    InvalidSpec(String),

    #[error("unknown {kind} {name:?}; valid names: {valid}")]
    UnknownName {
        kind: &'static str,
        name: String,
        valid: String,
    },
}
