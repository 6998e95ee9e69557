use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported degree {0} (supported: 2..=24)")]
    UnsupportedDegree(u32),

    #[error("polynomial {poly:#x} does not have degree {n}")]
    DegreeMismatch { n: u32, poly: u64 },

    #[error("reducible polynomial {0:#x}")]
    Reducible(u64),

    #[error("invalid subfield: {r} does not divide {n}")]
    InvalidSubfield { r: u32, n: u32 },

    #[error("census too large: n = {n} exceeds guard {guard}")]
    CensusTooLarge { n: u32, guard: u32 },

    #[error("not plateaued: components {0:?} are not plateaued")]
    NotPlateaued(Vec<u32>),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid family parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported e = {e} for k = {k}")]
    UnsupportedE { k: u32, e: u32 },

    #[error("preconditions unmet: {0}")]
    PreconditionsUnmet(String),

    #[error("alpha {0:#x} not admissible")]
    AlphaNotAdmissible(u32),

    #[error("not a function graph")]
    NotAFunctionGraph,

    #[error("zero difference direction")]
    ZeroDirection,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
