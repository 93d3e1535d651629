//! Exact computations with Lie-Rinehart algebras over polynomial quotient
//! rings: logarithmic derivations, universal enveloping algebras in PBW
//! normal form, their coproduct and counit, jets, and sheafification on
//! finite spaces.

pub mod bialgebra;
pub mod derivation;
pub mod display;
pub mod enveloping;
pub mod linalg;
pub mod polyring;
pub mod report;
pub mod sample;
pub mod sheafkit;
pub mod standard;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: expected {expected}, found {found}")]
    VariableMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("ring has no modulus")]
    NoModulus,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("derivation {0} is not logarithmic")]
    NotLogarithmic(String),
    #[error("syzygy does not hold")]
    UnverifiedSyzygy,
    #[error("point does not lie on the variety of the modulus")]
    PointNotOnVariety,
    #[error("presentation fails the Lie-Rinehart axioms: {0}")]
    UnverifiedPresentation(String),
    #[error("elements belong to different presentations")]
    PresentationMismatch,
    #[error("generator lists do not correspond: {0}")]
    GeneratorMismatch(String),
    #[error("rewriting exceeded the step limit of {0}")]
    StepLimit(usize),
    #[error("degree {degree} exceeds the truncation {truncation}")]
    TruncationExceeded { degree: u32, truncation: u32 },
    #[error("filtration degree {degree} exceeds {bound}")]
    DegreeExceeds { degree: usize, bound: usize },
    #[error("counit of the element is nonzero")]
    CounitNonzero,
    #[error("operation requires a free presentation")]
    NonFree,
    #[error("jet orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),
}
