//! Varshamov–Tenengolts codes.
//!
//! `VT_a(m; k)` is the set of length-`k` words whose weighted position sum
//! `Σ i·v_i` (1-based) is congruent to `a` modulo `m`. With `m = k + 1` the
//! code corrects one insertion or deletion; with `m = 2k` it corrects one
//! insertion, deletion or substitution.
//!
//! The systematic encoder places parity bits at the power-of-two positions
//! `1, 2, 4, ..` up to `k`. Their syndrome contributions are distinct powers
//! of two summing to `m - 1`, so the residue deficit left by the message bits
//! is written directly in binary.

use crate::bits::{weight, BitString};
use crate::error::Error;

/// Smallest codeword length accepted anywhere in the library.
pub const MIN_K: usize = 3;

/// VT syndrome `Σ i·v_i mod m` with 1-based positions.
pub fn syndrome(v: &[u8], m: usize) -> usize {
    let mut s = 0usize;
    for (i, &b) in v.iter().enumerate() {
        if b == 1 {
            s += i + 1;
        }
    }
    s % m
}

/// Syndrome of the all-ones word of length `k`, i.e. `k(k+1)/2 mod m`.
pub fn all_ones_syndrome(k: usize, m: usize) -> usize {
    (k * (k + 1) / 2) % m
}

/// Default residue: 1, unless 1 would admit `0^k` or `1^k`, in which case 2.
pub fn default_residue(k: usize, m: usize) -> usize {
    let t = all_ones_syndrome(k, m);
    if t == 1 {
        2
    } else {
        1
    }
}

/// A VT code instance `VT_a(m; k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VtParams {
    k: usize,
    m: usize,
    a: usize,
}

impl VtParams {
    /// Validated parameters: `m ∈ {k+1, 2k}`, `a < m`, and `a` different from
    /// the syndromes of `0^k` and `1^k`.
    pub fn new(k: usize, m: usize, a: usize) -> Result<Self, Error> {
        let p = Self::any_residue(k, m, a)?;
        if a == 0 {
            return Err(Error::ExcludedResidue { a, word: "0^k" });
        }
        if a == p.all_ones_syndrome() {
            return Err(Error::ExcludedResidue { a, word: "1^k" });
        }
        Ok(p)
    }

    /// Like [`VtParams::new`] but accepts any residue in `Z_m`, including the
    /// ones whose code contains `0^k` or `1^k`. Useful for plain VT work
    /// outside the segmented constructions.
    pub fn any_residue(k: usize, m: usize, a: usize) -> Result<Self, Error> {
        if k < MIN_K {
            return Err(Error::LengthTooSmall { k, min: MIN_K });
        }
        if m != k + 1 && m != 2 * k {
            return Err(Error::BadModulus { k, m });
        }
        if a >= m {
            return Err(Error::ResidueOutOfRange { a, m });
        }
        Ok(Self { k, m, a })
    }

    /// `VT_a(k+1; k)`, defaulting `a` when not given.
    pub fn insdel(k: usize, a: Option<usize>) -> Result<Self, Error> {
        Self::new(k, k + 1, a.unwrap_or_else(|| default_residue(k, k + 1)))
    }

    /// `VT_a(2k; k)`, defaulting `a` when not given.
    pub fn edit(k: usize, a: Option<usize>) -> Result<Self, Error> {
        Self::new(k, 2 * k, a.unwrap_or_else(|| default_residue(k, 2 * k)))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn all_ones_syndrome(&self) -> usize {
        all_ones_syndrome(self.k, self.m)
    }

    pub fn corrects_edits(&self) -> bool {
        self.m == 2 * self.k
    }

    /// Parameters of the complemented code: complementing every word maps
    /// `VT_a(m; k)` onto `VT_{T-a}(m; k)`.
    pub fn complemented(&self) -> Self {
        let t = self.all_ones_syndrome();
        Self {
            k: self.k,
            m: self.m,
            a: (t + self.m - self.a) % self.m,
        }
    }

    /// Membership test.
    pub fn is_member(&self, v: &[u8]) -> Result<bool, Error> {
        self.check_len(v, self.k)?;
        Ok(self.contains(v))
    }

    /// Membership test without the length check; `false` for wrong lengths.
    #[inline]
    pub fn contains(&self, v: &[u8]) -> bool {
        v.len() == self.k && syndrome(v, self.m) == self.a
    }

    /// Number of parity positions, `log2(m)` for power-of-two moduli.
    pub fn parity_len(&self) -> Result<usize, Error> {
        if !self.m.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { m: self.m });
        }
        Ok(self.m.trailing_zeros() as usize)
    }

    /// Message bits carried by one systematic codeword.
    pub fn message_len(&self) -> Result<usize, Error> {
        Ok(self.k - self.parity_len()?)
    }

    /// Systematic encoder. Parity occupies the power-of-two positions up to
    /// `k`, message bits fill the rest in ascending order.
    pub fn encode_systematic(&self, msg: &Message) -> Result<VtCodeword, Error> {
        let msg_len = self.message_len()?;
        self.check_len(&msg.0, msg_len)?;
        let mut word = vec![0u8; self.k];
        let mut src = msg.0.iter();
        for (pos, slot) in (1..=self.k).zip(word.iter_mut()) {
            if !pos.is_power_of_two() {
                *slot = *src.next().expect("message length checked");
            }
        }
        let deficit = (self.a + self.m - syndrome(&word, self.m)) % self.m;
        let mut pos = 1;
        while pos <= self.k {
            if deficit & pos != 0 {
                word[pos - 1] = 1;
            }
            pos <<= 1;
        }
        debug_assert!(self.contains(&word));
        Ok(VtCodeword(BitString::from(&word[..])))
    }

    /// Inverse of [`VtParams::encode_systematic`].
    pub fn extract_message(&self, cw: &VtCodeword) -> Result<Message, Error> {
        self.message_len()?;
        if !self.is_member(&cw.0)? {
            return Err(Error::NotAMember);
        }
        let bits: Vec<u8> = cw
            .0
            .iter()
            .enumerate()
            .filter(|(i, _)| !(i + 1).is_power_of_two())
            .map(|(_, &b)| b)
            .collect();
        Ok(Message(BitString::from(&bits[..])))
    }

    /// Recovers the codeword from a word that lost one bit.
    ///
    /// With deficit `D = a - syndrome(y)` and `w` the weight of `y`: when
    /// `D <= w` a 0 was deleted and goes back with exactly `D` ones to its
    /// right; otherwise a 1 was deleted and goes back with exactly `D - w - 1`
    /// zeros to its left.
    pub fn correct_deletion(&self, y: &[u8]) -> Result<VtCodeword, Error> {
        self.check_len(y, self.k - 1)?;
        let d = (self.a + self.m - syndrome(y, self.m)) % self.m;
        let w = weight(y);
        let mut out = Vec::with_capacity(self.k);
        if d <= w {
            // position of the d-th one from the right, or the end when d = 0
            let mut at = y.len();
            let mut seen = 0;
            while seen < d {
                at -= 1;
                if y[at] == 1 {
                    seen += 1;
                }
            }
            out.extend_from_slice(&y[..at]);
            out.push(0);
            out.extend_from_slice(&y[at..]);
        } else {
            let zeros_left = d - w - 1;
            if zeros_left > y.len() - w {
                return Err(Error::Uncorrectable);
            }
            let mut at = 0;
            let mut seen = 0;
            while seen < zeros_left {
                if y[at] == 0 {
                    seen += 1;
                }
                at += 1;
            }
            out.extend_from_slice(&y[..at]);
            out.push(1);
            out.extend_from_slice(&y[at..]);
        }
        self.accept(out)
    }

    /// Recovers the codeword from a word with one extra bit by scanning the
    /// deletions of `y` with an incrementally maintained syndrome.
    pub fn correct_insertion(&self, y: &[u8]) -> Result<VtCodeword, Error> {
        self.check_len(y, self.k + 1)?;
        let full: usize = y
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(i, _)| i + 1)
            .sum();
        // deleting position j: every one to its right moves down by one
        let mut ones_right = 0usize;
        for j in (1..=y.len()).rev() {
            let bit = y[j - 1];
            let s = full - j * bit as usize - ones_right;
            // only the first bit of a run needs checking
            let run_start = j == 1 || y[j - 2] != bit;
            if run_start && s % self.m == self.a {
                let mut out = Vec::with_capacity(self.k);
                out.extend_from_slice(&y[..j - 1]);
                out.extend_from_slice(&y[j..]);
                return self.accept(out);
            }
            ones_right += bit as usize;
        }
        Err(Error::Uncorrectable)
    }

    /// Corrects one substitution (requires `m = 2k`).
    ///
    /// A 1 read as 0 at position `j` lowers the syndrome by `j`; a 0 read as
    /// 1 raises it by `j`. The deficit `D` therefore names the position
    /// directly, as `D` or `2k - D` depending on the received bit there.
    pub fn correct_substitution(&self, y: &[u8]) -> Result<VtCodeword, Error> {
        self.require_edit()?;
        self.check_len(y, self.k)?;
        let d = (self.a + self.m - syndrome(y, self.m)) % self.m;
        if d == 0 {
            return Ok(VtCodeword(BitString::from(y)));
        }
        if d <= self.k && y[d - 1] == 0 {
            let mut out = y.to_vec();
            out[d - 1] = 1;
            return self.accept(out);
        }
        let j = self.m - d;
        if (1..=self.k).contains(&j) && y[j - 1] == 1 {
            let mut out = y.to_vec();
            out[j - 1] = 0;
            return self.accept(out);
        }
        Err(Error::Uncorrectable)
    }

    /// Corrects one edit of any kind (requires `m = 2k`), dispatching on the
    /// received length.
    pub fn correct_single_edit(&self, y: &[u8]) -> Result<VtCodeword, Error> {
        self.require_edit()?;
        match y.len() {
            l if l + 1 == self.k => self.correct_deletion(y),
            l if l == self.k => self.correct_substitution(y),
            l if l == self.k + 1 => self.correct_insertion(y),
            l => Err(Error::LengthMismatch {
                expected: self.k,
                actual: l,
            }),
        }
    }

    /// Enumerates every member of the code. Exponential in `k`; meant for
    /// exhaustive checks at small lengths.
    pub fn members(&self) -> impl Iterator<Item = BitString> + '_ {
        assert!(self.k < usize::BITS as usize);
        (0u64..1 << self.k).filter_map(move |x| {
            let word: Vec<u8> = (0..self.k).map(|i| ((x >> (self.k - 1 - i)) & 1) as u8).collect();
            self.contains(&word).then(|| BitString::from(&word[..]))
        })
    }

    fn accept(&self, word: Vec<u8>) -> Result<VtCodeword, Error> {
        if self.contains(&word) {
            Ok(VtCodeword(BitString::from(&word[..])))
        } else {
            Err(Error::Uncorrectable)
        }
    }

    fn require_edit(&self) -> Result<(), Error> {
        if self.corrects_edits() {
            Ok(())
        } else {
            Err(Error::BadModulus {
                k: self.k,
                m: self.m,
            })
        }
    }

    fn check_len(&self, v: &[u8], expected: usize) -> Result<(), Error> {
        if v.len() == expected {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected,
                actual: v.len(),
            })
        }
    }
}

/// A member of some `VT_a(m; k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VtCodeword(pub(crate) BitString);

impl VtCodeword {
    /// Wraps `bits` after checking membership.
    pub fn new(bits: BitString, params: &VtParams) -> Result<Self, Error> {
        if params.is_member(&bits)? {
            Ok(Self(bits))
        } else {
            Err(Error::NotAMember)
        }
    }

    pub fn bits(&self) -> &BitString {
        &self.0
    }

    pub fn into_bits(self) -> BitString {
        self.0
    }
}

/// Payload carried by one systematic codeword.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Message(pub(crate) BitString);

impl Message {
    pub fn new(bits: BitString) -> Self {
        Self(bits)
    }

    pub fn bits(&self) -> &BitString {
        &self.0
    }

    pub fn into_bits(self) -> BitString {
        self.0
    }
}
