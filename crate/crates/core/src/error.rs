use thiserror::Error;

/// Errors raised by the codec, the decoders and the frame reader.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid bit at position {position}")]
    InvalidBit { position: usize },

    #[error("codeword length k = {k} is below the minimum of {min}")]
    LengthTooSmall { k: usize, min: usize },

    #[error("modulus {m} is neither k + 1 nor 2k for k = {k}")]
    BadModulus { k: usize, m: usize },

    #[error("residue {a} is out of range for modulus {m}")]
    ResidueOutOfRange { a: usize, m: usize },

    #[error("residue {a} is excluded: it admits the constant word {word}")]
    ExcludedResidue { a: usize, word: &'static str },

    #[error("systematic encoding needs a power-of-two modulus, got {m}")]
    NotPowerOfTwo { m: usize },

    #[error("length mismatch: expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("word is not a member of the code")]
    NotAMember,

    #[error("no codeword within distance one of the received word")]
    Uncorrectable,

    #[error("segment count must be at least 1")]
    NoSegments,

    #[error("received length {received} is inconsistent with {segments} segments of {n} bits")]
    StreamLength {
        received: usize,
        segments: usize,
        n: usize,
    },

    #[error("segment {segment}: marker window matches no error pattern")]
    UnrecognizedMarker { segment: usize },

    #[error("segment {segment}: received bits ran out before the segment could be read")]
    Truncated { segment: usize },

    #[error("segment {segment}: reached case {case}, which no single-error channel output can produce")]
    Unreachable { segment: usize, case: &'static str },

    #[error("frame: {0}")]
    Frame(&'static str),
}
