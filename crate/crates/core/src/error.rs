use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero modulus")]
    ZeroModulus,
    #[error("degenerate degree: polynomial is constant")]
    DegenerateDegree,
    #[error("reducible modulus {0}")]
    ReducibleModulus(String),
    #[error("field degree {0} is outside 1..=64")]
    UnsupportedDegree(usize),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("zero inverse")]
    ZeroInverse,
    #[error("zero element has no multiplicative order")]
    ZeroOrder,
    #[error("element representation {repr:#x} does not fit a degree-{degree} field")]
    ElementOutOfRange { repr: u64, degree: u32 },
    #[error("no order-{n} element: {n} does not divide {group_order}")]
    NoOrderNElement { n: u64, group_order: u64 },
    #[error("zero has no logarithm")]
    ZeroLogarithm,
    #[error("not in subgroup generated by the base")]
    NotInSubgroup,
    #[error("empty sequence")]
    EmptySequence,
    #[error("base order {order} != period {period}")]
    BaseOrderMismatch { order: u64, period: u64 },
    #[error("spectrum not binary-consistent at t = {0}")]
    NotBinaryConsistent(usize),
    #[error("spectrum violates conjugacy at k = {0}")]
    NotConjugate(usize),
    #[error("spectrum has {len} values but its base has order {order}")]
    SpectrumLength { len: usize, order: u64 },
    #[error("2 not invertible modulo {0}")]
    TwoNotInvertible(u64),
    #[error("moduli not coprime: {0} and {1}")]
    ModuliNotCoprime(u64, u64),
    #[error("invalid residue system: {0}")]
    InvalidModuli(String),
    #[error("expected {expected} residues, got {got}")]
    ResidueCount { expected: usize, got: usize },
    #[error("target base is not compatible with the base of constituent {0}")]
    IncompatibleBase(usize),
    #[error("invalid LFSR: {0}")]
    InvalidLfsr(String),
    #[error("arity mismatch: function takes {expected} inputs, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("monomial mask {mask:#x} uses a variable index >= {arity}")]
    MonomialOutOfRange { mask: u64, arity: usize },
    #[error("period exceeds the limit of {0}")]
    PeriodLimit(u64),
    #[error("window of {len} bits is below the minimum of {min} for period {period}")]
    WindowTooShort { len: usize, min: usize, period: u64 },
    #[error("window is not a subsequence of the reference")]
    WindowNotFound,
    #[error("reference component zero")]
    ReferenceComponentZero,
    #[error("index {k} not invertible modulo {n}")]
    IndexNotInvertible { k: u64, n: u64 },
    #[error("not enough bits: {got} supplied, {needed} needed")]
    InsufficientBits { got: usize, needed: usize },
    #[error("{0}")]
    Invalid(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
