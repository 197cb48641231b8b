//! Shared machinery for the two segmented constructions.
//!
//! Every segment is `b v a`: a short leading marker, a VT codeword and a
//! six-bit trailing marker. `b` copies the orientation of `v_1` (rule R1) and
//! `a` announces the orientation of the next segment's `b` (rule R2); the last
//! segment always ends in `a_0`.

use std::fmt;

use crate::bits::BitString;
use crate::error::Error;
use crate::vt::{Message, VtCodeword, VtParams};
use crate::{edit, insdel};

/// Which channel a code is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// At most one insertion or deletion per segment.
    Insdel,
    /// At most one insertion, deletion or substitution per segment.
    Edit,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Insdel => "insdel",
            Mode::Edit => "edit",
        }
    }

    pub fn allows_substitution(self) -> bool {
        self == Mode::Edit
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "insdel" => Ok(Mode::Insdel),
            "edit" => Ok(Mode::Edit),
            other => Err(format!("unknown mode `{other}` (expected insdel or edit)")),
        }
    }
}

/// The two trailing-marker values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Marker {
    /// `000010`
    A0,
    /// `111101`
    A1,
}

pub const A0: [u8; 6] = [0, 0, 0, 0, 1, 0];
pub const A1: [u8; 6] = [1, 1, 1, 1, 0, 1];

impl Marker {
    pub fn bits(self) -> &'static [u8; 6] {
        match self {
            Marker::A0 => &A0,
            Marker::A1 => &A1,
        }
    }

    /// `0` for `a_0`, `1` for `a_1`; used in compact report output.
    pub fn short(self) -> char {
        match self {
            Marker::A0 => '0',
            Marker::A1 => '1',
        }
    }

    /// XOR mask that maps bits read under this orientation onto the
    /// canonical `a_1` orientation.
    pub(crate) fn mask(self) -> u8 {
        match self {
            Marker::A0 => 1,
            Marker::A1 => 0,
        }
    }
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Marker::A0 => "a0",
            Marker::A1 => "a1",
        })
    }
}

/// A segmented code instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeParams {
    mode: Mode,
    vt: VtParams,
}

impl CodeParams {
    /// Code `C`: `VT_a(k+1; k)` codewords, one-bit leading marker, `n = k + 7`.
    pub fn insdel(k: usize, a: Option<usize>) -> Result<Self, Error> {
        Ok(Self {
            mode: Mode::Insdel,
            vt: VtParams::insdel(k, a)?,
        })
    }

    /// Code `C'`: `VT_a(2k; k)` codewords, three-bit leading marker,
    /// `n = k + 9`. Needs `k >= 4`.
    pub fn edit(k: usize, a: Option<usize>) -> Result<Self, Error> {
        if k < 4 {
            return Err(Error::LengthTooSmall { k, min: 4 });
        }
        Ok(Self {
            mode: Mode::Edit,
            vt: VtParams::edit(k, a)?,
        })
    }

    pub fn new(mode: Mode, k: usize, a: Option<usize>) -> Result<Self, Error> {
        match mode {
            Mode::Insdel => Self::insdel(k, a),
            Mode::Edit => Self::edit(k, a),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn vt(&self) -> &VtParams {
        &self.vt
    }

    pub fn k(&self) -> usize {
        self.vt.k()
    }

    /// Length of the leading marker `b`.
    pub fn lead_len(&self) -> usize {
        match self.mode {
            Mode::Insdel => 1,
            Mode::Edit => 3,
        }
    }

    /// Segment length `n`.
    pub fn n(&self) -> usize {
        self.lead_len() + self.k() + 6
    }

    /// Leading marker for a codeword starting with `v1`: `b_0` when `v1 = 0`.
    pub fn lead_marker(&self, v1: u8) -> &'static [u8] {
        match (self.mode, v1) {
            (Mode::Insdel, 0) => &[0],
            (Mode::Insdel, _) => &[1],
            (Mode::Edit, 0) => &[1, 0, 0],
            (Mode::Edit, _) => &[0, 1, 1],
        }
    }

    /// Message bits per segment (power-of-two moduli only).
    pub fn message_len(&self) -> Result<usize, Error> {
        self.vt.message_len()
    }

    /// Encoded bits minus message bits per segment.
    pub fn redundancy(&self) -> Result<usize, Error> {
        Ok(self.n() - self.message_len()?)
    }

    /// Closed-form redundancy of the construction in terms of `n`:
    /// `log2(n-6)+7` for `C`, `log2(n-9)+10` for `C'`.
    pub fn redundancy_formula(&self) -> f64 {
        redundancy_formula(self.mode, self.n())
    }

    /// Smallest number of received bits for `t` segments.
    pub(crate) fn check_received_len(&self, received: usize, t: usize) -> Result<(), Error> {
        if t == 0 {
            return Err(Error::NoSegments);
        }
        let n = self.n();
        if received.abs_diff(n * t) > t {
            return Err(Error::StreamLength {
                received,
                segments: t,
                n,
            });
        }
        Ok(())
    }

    /// Encodes messages with the systematic VT encoder, then frames them.
    pub fn encode(&self, messages: &[Message]) -> Result<Stream, Error> {
        let codewords = messages
            .iter()
            .map(|m| self.vt.encode_systematic(m))
            .collect::<Result<Vec<_>, _>>()?;
        self.encode_codewords(&codewords)
    }

    /// Frames already-encoded codewords under rules R1/R2. The marker after
    /// segment `i` depends on `v_1` of segment `i+1`, so the encoder looks
    /// one segment ahead.
    pub fn encode_codewords(&self, codewords: &[VtCodeword]) -> Result<Stream, Error> {
        if codewords.is_empty() {
            return Err(Error::NoSegments);
        }
        let k = self.k();
        let mut bits = BitString::with_capacity(self.n() * codewords.len());
        for (i, cw) in codewords.iter().enumerate() {
            let v = cw.bits();
            if v.len() != k {
                return Err(Error::LengthMismatch {
                    expected: k,
                    actual: v.len(),
                });
            }
            if !self.vt.contains(v) {
                return Err(Error::NotAMember);
            }
            bits.extend_from_slice(self.lead_marker(v[0]));
            bits.extend_from_slice(v);
            let marker = match codewords.get(i + 1) {
                Some(next) if next.bits()[0] == 0 => Marker::A1,
                _ => Marker::A0,
            };
            bits.extend_from_slice(marker.bits());
        }
        Ok(Stream {
            bits,
            segments: codewords.len(),
        })
    }

    /// Runs the decoder for this code's mode.
    pub fn decode(&self, y: &[u8], t: usize) -> Result<DecodeReport, Error> {
        match self.mode {
            Mode::Insdel => insdel::decode_stream(y, self, t),
            Mode::Edit => edit::decode_stream(y, self, t),
        }
    }
}

/// `log2(n-6)+7` (insdel) or `log2(n-9)+10` (edit).
pub fn redundancy_formula(mode: Mode, n: usize) -> f64 {
    match mode {
        Mode::Insdel => ((n - 6) as f64).log2() + 7.0,
        Mode::Edit => ((n - 9) as f64).log2() + 10.0,
    }
}

/// An encoded stream `x = s^(1) ... s^(t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stream {
    pub bits: BitString,
    pub segments: usize,
}

impl Stream {
    pub fn segment(&self, params: &CodeParams, i: usize) -> &[u8] {
        let n = params.n();
        self.bits.slice((i - 1) * n + 1, i * n)
    }
}

/// Where the residual error in a segment was placed by the decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// Leading marker or codeword.
    Codeword,
    /// Trailing marker.
    Marker,
}

/// Error the decoder attributes to one segment.
///
/// Several error patterns can produce the same received bits; the decoder
/// reports one representative that is consistent with the chosen boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InferredError {
    None,
    Deletion(Region),
    Insertion(Region),
    Substitution(Region),
}

impl fmt::Display for InferredError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, region) = match self {
            InferredError::None => return f.write_str("none"),
            InferredError::Deletion(r) => ("deletion", r),
            InferredError::Insertion(r) => ("insertion", r),
            InferredError::Substitution(r) => ("substitution", r),
        };
        let region = match region {
            Region::Codeword => "codeword",
            Region::Marker => "marker",
        };
        write!(f, "{kind}@{region}")
    }
}

/// Decision for one segment boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryDecision {
    /// 1-based position in the residual stream after which the next segment
    /// begins.
    pub p: usize,
    pub inferred_error: InferredError,
    /// Label of the decision branch that produced `p`.
    pub case: &'static str,
}

/// Marker orientations seen at one boundary: the current segment's trailing
/// marker and the next one's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Orientation {
    pub near: Marker,
    pub far: Marker,
}

/// Output of a stream decoder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeReport {
    pub codewords: Vec<VtCodeword>,
    /// Extracted payloads; `None` when the modulus has no systematic form.
    pub messages: Option<Vec<Message>>,
    /// `p_1 .. p_{t-1}`, each relative to the residual stream it was found in.
    pub boundaries: Vec<usize>,
    /// The same boundaries as absolute 1-based positions in the received bits.
    pub absolute_boundaries: Vec<usize>,
    pub per_segment_error: Vec<InferredError>,
    pub orientations: Vec<Orientation>,
    /// Decision branch per boundary.
    pub cases: Vec<&'static str>,
}

/// Outcome of reading one segment out of a residual stream.
#[derive(Debug, Clone)]
pub(crate) struct SegmentStep {
    pub codeword: VtCodeword,
    pub decision: Option<BoundaryDecision>,
    pub orientation: Option<Orientation>,
    pub last_error: InferredError,
}

/// Shared decode loop: peel one segment at a time off the residual stream.
pub(crate) fn decode_with<F>(
    y: &[u8],
    params: &CodeParams,
    t: usize,
    mut step: F,
) -> Result<DecodeReport, Error>
where
    F: FnMut(&[u8], usize, bool) -> Result<SegmentStep, Error>,
{
    params.check_received_len(y.len(), t)?;
    let mut report = DecodeReport {
        codewords: Vec::with_capacity(t),
        messages: None,
        boundaries: Vec::with_capacity(t.saturating_sub(1)),
        absolute_boundaries: Vec::with_capacity(t.saturating_sub(1)),
        per_segment_error: Vec::with_capacity(t),
        orientations: Vec::with_capacity(t.saturating_sub(1)),
        cases: Vec::with_capacity(t.saturating_sub(1)),
    };
    let mut offset = 0usize;
    for i in 1..=t {
        let rest = y.get(offset..).unwrap_or(&[]);
        let last = i == t;
        let s = step(rest, i, last)?;
        report.codewords.push(s.codeword);
        match s.decision {
            Some(d) => {
                offset += d.p;
                report.boundaries.push(d.p);
                report.absolute_boundaries.push(offset);
                report.per_segment_error.push(d.inferred_error);
                report.cases.push(d.case);
                report.orientations.push(s.orientation.expect("orientation with boundary"));
            }
            None => report.per_segment_error.push(s.last_error),
        }
    }
    if params.vt().parity_len().is_ok() {
        report.messages = Some(
            report
                .codewords
                .iter()
                .map(|c| params.vt().extract_message(c))
                .collect::<Result<_, _>>()?,
        );
    }
    Ok(report)
}

/// Majority vote over three bits that originally agree.
pub(crate) fn majority(window: &[u8]) -> Marker {
    let ones = window.iter().filter(|&&b| b == 1).count();
    if ones * 2 > window.len() {
        Marker::A1
    } else {
        Marker::A0
    }
}

/// Classifies a possibly corrupted copy of the next trailing marker from a
/// six-bit window and its five-bit prefix, comparing zero and one counts.
/// Positions past the end of the stream are simply not counted.
pub(crate) fn classify_by_counts(six: &[u8], segment: usize, case: &'static str) -> Result<Marker, Error> {
    let count = |w: &[u8]| {
        let ones = w.iter().filter(|&&b| b == 1).count();
        (w.len() - ones, ones)
    };
    let (n0, n1) = count(six);
    if n0 != n1 {
        return Ok(if n0 < n1 { Marker::A1 } else { Marker::A0 });
    }
    let five = &six[..six.len().min(5)];
    let (m0, m1) = count(five);
    match m0.cmp(&m1) {
        std::cmp::Ordering::Less => Ok(Marker::A1),
        std::cmp::Ordering::Greater => Ok(Marker::A0),
        std::cmp::Ordering::Equal => Err(Error::Unreachable { segment, case }),
    }
}

/// A residual stream read under the two orientation frames.
///
/// Bits around the current trailing marker, the next leading marker and the
/// next codeword are read through the near mask; bits of the next trailing
/// marker and whatever follows it are read through the far mask. After
/// masking, both markers look like `a_1 = 111101`. Positions past the end
/// read as absent: they fail every literal and match only wildcards.
#[derive(Clone, Copy)]
pub(crate) struct View<'a> {
    pub y: &'a [u8],
    pub near: u8,
    pub far: u8,
}

impl<'a> View<'a> {
    pub fn new(y: &'a [u8], near: Marker, far: Marker) -> Self {
        Self {
            y,
            near: near.mask(),
            far: far.mask(),
        }
    }

    #[inline]
    fn raw(&self, pos: usize) -> Option<u8> {
        pos.checked_sub(1).and_then(|i| self.y.get(i).copied())
    }

    /// Near-frame bit at 1-based `pos`.
    #[inline]
    pub fn n(&self, pos: usize) -> Option<u8> {
        self.raw(pos).map(|b| b ^ self.near)
    }

    /// Near-frame bit that must exist.
    pub fn nb(&self, pos: usize, segment: usize) -> Result<u8, Error> {
        self.n(pos).ok_or(Error::Truncated { segment })
    }

    fn matches(&self, start: usize, pattern: &[u8], mask: u8) -> bool {
        pattern.iter().enumerate().all(|(j, &c)| match c {
            b'*' => true,
            b'0' | b'1' => self.raw(start + j).map(|b| b ^ mask) == Some(c - b'0'),
            _ => unreachable!("pattern byte"),
        })
    }

    /// Near-frame pattern match; `*` is a wildcard.
    pub fn near_is(&self, start: usize, pattern: &[u8]) -> bool {
        self.matches(start, pattern, self.near)
    }

    /// Far-frame pattern match; `*` is a wildcard.
    pub fn far_is(&self, start: usize, pattern: &[u8]) -> bool {
        self.matches(start, pattern, self.far)
    }

    /// Raw window `y[start : start+len-1]`, if entirely present.
    pub fn window(&self, start: usize, len: usize) -> Option<&'a [u8]> {
        self.y.get(start - 1..start - 1 + len)
    }

    /// Whether `y[start : start+k-1]` is a codeword. Complementing a window
    /// maps residue `a` to `T - a`, so testing the raw bits against `a` is
    /// the same as testing canonical bits against the transformed residue.
    pub fn member(&self, start: usize, vt: &VtParams) -> bool {
        self.window(start, vt.k()).is_some_and(|w| vt.contains(w))
    }
}
