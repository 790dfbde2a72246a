//! Error type shared across the crate.
//!
//! Precision exhaustion is a first-class citizen: truncated series can
//! genuinely fail to decide a predicate, and callers (notably the formula
//! evaluator and the volume engine) map it to a three-valued `Unknown`
//! rather than treating it as a bug.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("division by a value indistinguishable from zero at the stored precision")]
    DivisionByIndistinguishable,

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("incompatible field descriptors: {0}")]
    FieldMismatch(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("wild ramification rejected: e = {e} is divisible by the residue characteristic p = {p}")]
    WildRamification { e: u32, p: u64 },

    #[error("index {0} outside the stored precision window")]
    IndexOutsideWindow(String),

    #[error("exact division does not terminate; use a finite target precision")]
    NonTerminatingDivision,

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("coefficient bound |alpha_{j}| <= q^(-r*{j}) violated")]
    CoefficientBound { j: usize },

    #[error("polynomial is not separable")]
    NotSeparable,

    #[error("constant term is zero")]
    ZeroConstantTerm,

    #[error("polynomial is not even")]
    NotEven,

    #[error("slope denominator {n} does not divide the degree {deg}")]
    SlopeIncompatible { n: i64, deg: i64 },

    #[error("element has ord {got}, expected {want}")]
    OrdMismatch { got: String, want: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not skew-symmetric")]
    NotSkew,

    #[error("pfaffian requires even dimension, got {0}")]
    OddDimension(usize),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("element is not restricted: {0}")]
    NotRestricted(String),

    #[error("pair is not G-regular: the factor polynomials share a root")]
    NotGRegular,

    #[error("enumeration bound exceeded: {0}")]
    EnumerationBound(String),

    #[error("group too large to enumerate: {0}")]
    GroupTooLarge(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("companion form could not be transformed to the standard form: {0}")]
    FormNotStandard(String),

    #[error("no pfaffian of the requested value exists: {0}")]
    PfaffianTarget(String),

    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("sort error at {line}:{col}: {msg}")]
    Sort { line: usize, col: usize, msg: String },

    #[error("probe bound exhausted after level {0}")]
    ProbeExhausted(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True when the error only signals insufficient stored precision, so a
    /// three-valued evaluator should report `Unknown` instead of failing.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted(_)
                | Error::DivisionByIndistinguishable
                | Error::IndexOutsideWindow(_)
        )
    }
}
