//! Owned bit strings with 1-based inclusive slicing.
//!
//! Bits are stored one per byte (`0` or `1`). Decoding touches every bit a
//! small constant number of times, so the unpacked layout is simpler and
//! faster than a packed one here; `bitio` handles the packed form.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::Error;

/// An ordered sequence of bits.
///
/// Positions in the public helpers are 1-based and ranges are inclusive on
/// both ends, so `slice(2, k + 1)` reads the same bits as the usual
/// `y[2:k+1]` notation.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn with_capacity(cap: usize) -> Self {
        Self(Vec::with_capacity(cap))
    }

    /// Builds a bit string from bytes that must each be 0 or 1.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self, Error> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidBit { position: pos + 1 });
        }
        Ok(Self(bits))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![1; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Bit at 1-based `pos`, or `None` past either end.
    pub fn get(&self, pos: usize) -> Option<u8> {
        pos.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    /// `self[i:j]`, 1-based and inclusive. Panics when out of range.
    pub fn slice(&self, i: usize, j: usize) -> &[u8] {
        &self.0[i - 1..j]
    }

    /// `self[i:∞]`, 1-based. Returns an empty slice when `i` is past the end.
    pub fn tail(&self, i: usize) -> &[u8] {
        let start = (i - 1).min(self.0.len());
        &self.0[start..]
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.0.push(bit);
    }

    pub fn extend_from_slice(&mut self, bits: &[u8]) {
        self.0.extend_from_slice(bits);
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    pub fn weight(&self) -> usize {
        weight(&self.0)
    }

    pub fn complement(&self) -> Self {
        Self(self.0.iter().map(|b| b ^ 1).collect())
    }

    /// Removes the bit at 1-based `pos`.
    pub fn deleted(&self, pos: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(pos - 1);
        Self(v)
    }

    /// Inserts `bit` so that it lands at 1-based `pos` (1..=len+1).
    pub fn inserted(&self, pos: usize, bit: u8) -> Self {
        let mut v = self.0.clone();
        v.insert(pos - 1, bit);
        Self(v)
    }

    /// Flips the bit at 1-based `pos`.
    pub fn flipped(&self, pos: usize) -> Self {
        let mut v = self.0.clone();
        v[pos - 1] ^= 1;
        Self(v)
    }
}

/// Hamming weight of a raw bit slice.
pub fn weight(bits: &[u8]) -> usize {
    bits.iter().filter(|&&b| b == 1).count()
}

impl Deref for BitString {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl From<&[u8]> for BitString {
    fn from(bits: &[u8]) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self(bits.to_vec())
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Parses `0`/`1` characters; ASCII whitespace and `_` are ignored so
    /// that grouped literals like `"111101 0 0"` read naturally.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut bits = Vec::with_capacity(s.len());
        for (idx, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                c if c.is_ascii_whitespace() || c == '_' => {}
                _ => return Err(Error::InvalidBit { position: idx + 1 }),
            }
        }
        Ok(Self(bits))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// Shorthand for tests and examples: `bits("0110")`. Panics on bad input.
pub fn bits(s: &str) -> BitString {
    s.parse().expect("bit literal")
}
