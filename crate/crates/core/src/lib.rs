//! Marker-delimited Varshamov-Tenengolts codes for segmented channels.
//!
//! A stream is `t` segments of `n` bits. Each segment carries one VT codeword
//! between a short leading marker and a six-bit trailing marker, and the
//! channel may corrupt each segment with at most one error: an insertion or
//! deletion (code `C`, see [`insdel`]) or additionally a substitution (code
//! `C'`, see [`edit`]). Segment boundaries are not marked in the received
//! stream; the decoders recover them one segment at a time.

pub mod bench;
pub mod bitio;
pub mod bits;
pub mod edit;
pub mod error;
pub mod insdel;
pub mod oracle;
pub mod segment;
pub mod vt;

pub use bits::BitString;
pub use error::Error;
pub use segment::{
    BoundaryDecision, CodeParams, DecodeReport, InferredError, Marker, Mode, Orientation, Region,
    Stream,
};
pub use vt::{Message, VtCodeword, VtParams};
