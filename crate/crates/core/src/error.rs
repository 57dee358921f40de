use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,
    #[error("letter {position} has type {type_index}, outside 1..={alphabet_size}")]
    TypeOutOfRange {
        position: usize,
        type_index: u32,
        alphabet_size: u32,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("length bound must be at least 1")]
    ZeroBound,
    #[error("error exponent must be at least 1")]
    ZeroExponent,
    #[error("modulus for n_bound={n_bound}, c={c} does not fit in 64 bits")]
    ModulusOverflow { n_bound: u64, c: u32 },
    #[error("n_bound^(1+c) exceeds the fixed prime 2^61-1 (n_bound={n_bound}, c={c})")]
    PrimeTooSmall { n_bound: u64, c: u32 },
    #[error("malformed parameter record: {0}")]
    Record(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("declared length {declared} but the stream has {actual} letters")]
    LengthMismatch { declared: u64, actual: u64 },
    #[error("declared length {n} exceeds the hash parameter bound {n_bound}")]
    LengthExceedsBound { n: u64, n_bound: u64 },
    #[error("letter {position} has type {type_index}; the checkers take two types (reduce first)")]
    UnsupportedType { position: u64, type_index: u32 },
    #[error("stream read failed: {0}")]
    Source(String),
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("unexpected byte {byte:#04x} at offset {offset}")]
    UnknownByte { byte: u8, offset: usize },
    #[error("bad token {token:?} on line {line}")]
    BadToken { token: String, line: usize },
    #[error("token {token:?} on line {line} has type outside 1..={alphabet_size}")]
    TypeOutOfRange {
        token: String,
        line: usize,
        alphabet_size: u32,
    },
    #[error("line {line}: expected \"<name\" or \">name\"")]
    BadTagLine { line: usize },
    #[error("line {line}: empty tag name")]
    EmptyTagName { line: usize },
    #[error("chars2 format only carries two parenthesis types")]
    AlphabetTooLarge,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,
    #[error("type {type_index} outside 1..={alphabet_size}")]
    TypeOutOfRange { type_index: u32, alphabet_size: u32 },
    #[error("empty tag name")]
    EmptyTagName,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("k={k} outside 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("X has length {got}, expected n={n}")]
    BadLength { got: usize, n: usize },
    #[error("expected {m} entries for each of X, k, c; got {xs}, {ks}, {cs}")]
    DimensionMismatch { m: usize, xs: usize, ks: usize, cs: usize },
    #[error("m and n must be at least 1")]
    EmptyDimension,
    #[error("expected an opener (a or b), found {0}")]
    NotOpener(String),
    #[error("cannot mutate an empty word")]
    EmptyWord,
    #[error("input is not a member")]
    NotMember,
    #[error("fault coordinate {fault} outside 1..={m}")]
    FaultOutOfRange { fault: usize, m: usize },
    #[error("malformed instance record: {0}")]
    Record(String),
}
