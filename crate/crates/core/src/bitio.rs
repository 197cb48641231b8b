//! Bit packing and the framed on-disk format.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "SGC1"
//! 4       1     version (0x01)
//! 5       1     mode (0x00 insdel, 0x01 edit)
//! 6       2     k, big-endian
//! 8       2     a, big-endian
//! 10      4     t, big-endian
//! 14      8     payload bit count, big-endian
//! 22      ...   payload, MSB first, zero-padded to a whole byte
//! ```
//!
//! An encoder may append a trailer after the payload: the true message bit
//! count as a big-endian `u64`, used when the last segment was zero-padded.

use crate::bits::BitString;
use crate::error::Error;
use crate::segment::{CodeParams, Mode};

pub const MAGIC: &[u8; 4] = b"SGC1";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 22;

/// Packs bits most-significant first, zero-padding the last byte.
pub fn pack_bits(bits: &[u8]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |byte, (i, &b)| byte | (b << (7 - i)))
        })
        .collect()
}

/// Inverse of [`pack_bits`] for the first `bit_count` bits of `bytes`.
pub fn unpack_bits(bytes: &[u8], bit_count: usize) -> Result<BitString, Error> {
    if bytes.len() * 8 < bit_count {
        return Err(Error::Frame("truncated payload"));
    }
    let bits: Vec<u8> = (0..bit_count)
        .map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1)
        .collect();
    BitString::from_bits(bits)
}

/// A decoded frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub params: CodeParams,
    pub t: u32,
    pub payload: BitString,
    /// Message bits before padding, when the writer recorded it.
    pub message_bits: Option<u64>,
}

impl Frame {
    pub fn new(params: CodeParams, t: u32, payload: BitString) -> Self {
        Self {
            params,
            t,
            payload,
            message_bits: None,
        }
    }
}

fn mode_byte(mode: Mode) -> u8 {
    match mode {
        Mode::Insdel => 0x00,
        Mode::Edit => 0x01,
    }
}

/// Serializes a frame.
pub fn write_frame(frame: &Frame) -> Result<Vec<u8>, Error> {
    let p = &frame.params;
    let k = u16::try_from(p.k()).map_err(|_| Error::Frame("k does not fit in 16 bits"))?;
    let a = u16::try_from(p.vt().a()).map_err(|_| Error::Frame("a does not fit in 16 bits"))?;
    let mut out = Vec::with_capacity(HEADER_LEN + frame.payload.len().div_ceil(8) + 8);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(mode_byte(p.mode()));
    out.extend_from_slice(&k.to_be_bytes());
    out.extend_from_slice(&a.to_be_bytes());
    out.extend_from_slice(&frame.t.to_be_bytes());
    out.extend_from_slice(&(frame.payload.len() as u64).to_be_bytes());
    out.extend_from_slice(&pack_bits(&frame.payload));
    if let Some(m) = frame.message_bits {
        out.extend_from_slice(&m.to_be_bytes());
    }
    Ok(out)
}

/// Parses and validates a frame. Parameters go through the same checks as
/// [`CodeParams::new`].
pub fn read_frame(bytes: &[u8]) -> Result<Frame, Error> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Frame("truncated header"));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Frame("bad magic"));
    }
    if bytes[4] != VERSION {
        return Err(Error::Frame("unsupported version"));
    }
    let mode = match bytes[5] {
        0x00 => Mode::Insdel,
        0x01 => Mode::Edit,
        _ => return Err(Error::Frame("unknown mode byte")),
    };
    let k = u16::from_be_bytes([bytes[6], bytes[7]]) as usize;
    let a = u16::from_be_bytes([bytes[8], bytes[9]]) as usize;
    let t = u32::from_be_bytes(bytes[10..14].try_into().expect("4 bytes"));
    let bit_count = u64::from_be_bytes(bytes[14..22].try_into().expect("8 bytes"));
    let params = CodeParams::new(mode, k, Some(a))?;
    let bit_count = usize::try_from(bit_count).map_err(|_| Error::Frame("payload too large"))?;
    let payload_len = bit_count.div_ceil(8);
    let rest = &bytes[HEADER_LEN..];
    if rest.len() < payload_len {
        return Err(Error::Frame("truncated payload"));
    }
    let payload = unpack_bits(&rest[..payload_len], bit_count)?;
    let message_bits = match rest.len() - payload_len {
        0 => None,
        8 => Some(u64::from_be_bytes(rest[payload_len..].try_into().expect("8 bytes"))),
        _ => return Err(Error::Frame("trailing bytes after payload")),
    };
    Ok(Frame {
        params,
        t,
        payload,
        message_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn msb_first() {
        assert_eq!(pack_bits(&bits("10110")), vec![0xB0]);
        assert_eq!(pack_bits(&bits("")), Vec::<u8>::new());
        assert_eq!(unpack_bits(&[0xB0], 5).unwrap(), bits("10110"));
        assert!(unpack_bits(&[0xB0], 9).is_err());
    }

    #[test]
    fn frame_round_trip_and_validation() {
        let p = CodeParams::insdel(7, None).unwrap();
        let f = Frame::new(p, 0, BitString::new());
        let bytes = write_frame(&f).unwrap();
        assert_eq!(bytes.len(), HEADER_LEN);
        assert_eq!(read_frame(&bytes).unwrap(), f);

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert_eq!(read_frame(&bad), Err(Error::Frame("bad magic")));
        let mut bad = bytes.clone();
        bad[9] = 0; // a = 0 is excluded
        assert!(matches!(read_frame(&bad), Err(Error::ExcludedResidue { .. })));
        assert_eq!(read_frame(&bytes[..10]), Err(Error::Frame("truncated header")));
    }
}
