//! Code `C'` for the segmented single-edit channel.
//!
//! Segment layout (1-based, relative to the start of the residual stream):
//!
//! ```text
//! y[1:3]     b         100 before v_1 = 0, 011 before v_1 = 1
//! y[4:k+3]   v         codeword of VT_a(2k; k)
//! y[k+4:k+9] a         000010 or 111101
//! ```
//!
//! The canonical frame has both trailing markers equal to `111101`, the next
//! leading marker `100` and the next codeword starting with 0, so the bits
//! after `v` read `111101 100 0 ...`. Boundary decisions dispatch on the
//! eight bits `y[k+4:k+11]`, then consult the next trailing marker
//! `y[2k+13:2k+18]` or VT syndromes of the next codeword where needed.

use crate::error::Error;
use crate::segment::{
    classify_by_counts, decode_with, majority, BoundaryDecision, CodeParams, DecodeReport,
    InferredError, Marker, Mode, Orientation, Region, SegmentStep, Stream, View,
};
use crate::vt::{syndrome, Message, VtCodeword, VtParams};

/// Validated parameters for code `C'`: `VT_a(2k; k)` codewords, `n = k + 9`.
pub fn make_params(k: usize, a: Option<usize>) -> Result<CodeParams, Error> {
    CodeParams::edit(k, a)
}

/// Encodes `t` messages into a stream of `t` segments.
pub fn encode_stream(messages: &[Message], params: &CodeParams) -> Result<Stream, Error> {
    require_mode(params)?;
    params.encode(messages)
}

/// Majority vote over `y[k+4:k+6]`.
pub fn classify_near_marker(window: &[u8]) -> Marker {
    majority(window)
}

/// Classifies the next trailing marker from `y[2k+13:2k+18]` (and its
/// five-bit prefix), truncated at the end of `y`.
pub fn classify_far_marker(y: &[u8], k: usize) -> Result<Marker, Error> {
    far_marker(y, k, 1)
}

fn far_marker(y: &[u8], k: usize, segment: usize) -> Result<Marker, Error> {
    let start = (2 * k + 12).min(y.len());
    let end = (2 * k + 18).min(y.len());
    classify_by_counts(&y[start..end], segment, "far-marker tie")
}

/// Recovers `v` when the codeword window `y[4:k+3]` is not a codeword; the
/// intact trailing marker tells which kind of edit hit `b v`.
pub fn retrieve_codeword(
    y: &[u8],
    params: &CodeParams,
    near: Marker,
) -> Result<(VtCodeword, Option<BoundaryDecision>), Error> {
    require_mode(params)?;
    retrieve(y, params.vt(), near, 1)
}

fn retrieve(
    y: &[u8],
    vt: &VtParams,
    near: Marker,
    segment: usize,
) -> Result<(VtCodeword, Option<BoundaryDecision>), Error> {
    let k = vt.k();
    let view = View::new(y, near, near);
    let window = view.window(4, k).ok_or(Error::Truncated { segment })?;
    if vt.contains(window) {
        return Ok((VtCodeword(window.into()), None));
    }
    let (cw, p, inferred_error, case) = if view.near_is(k + 4, b"11101*") {
        (
            vt.correct_deletion(&y[3..k + 2])?,
            k + 8,
            InferredError::Deletion(Region::Codeword),
            "retrieve:deletion",
        )
    } else if view.near_is(k + 4, b"111101") {
        (
            vt.correct_substitution(window)?,
            k + 9,
            InferredError::Substitution(Region::Codeword),
            "retrieve:substitution",
        )
    } else if view.near_is(k + 4, b"*11110") {
        let w = view.window(4, k + 1).ok_or(Error::Truncated { segment })?;
        (
            vt.correct_insertion(w)?,
            k + 10,
            InferredError::Insertion(Region::Codeword),
            "retrieve:insertion",
        )
    } else {
        return Err(Error::UnrecognizedMarker { segment });
    };
    Ok((
        cw,
        Some(BoundaryDecision {
            p,
            inferred_error,
            case,
        }),
    ))
}

/// Finds the boundary after a segment whose codeword window `y[4:k+3]` is a
/// codeword. `near` and `far` are the current and next trailing markers.
pub fn determine_boundary(
    y: &[u8],
    params: &CodeParams,
    near: Marker,
    far: Marker,
) -> Result<BoundaryDecision, Error> {
    require_mode(params)?;
    boundary(&View::new(y, near, far), params.vt(), 1)
}

struct Ctx<'a, 'b> {
    v: &'a View<'b>,
    vt: &'a VtParams,
    seg: usize,
}

impl Ctx<'_, '_> {
    fn k(&self) -> usize {
        self.vt.k()
    }

    fn bit(&self, off: usize) -> Result<u8, Error> {
        self.v.nb(self.k() + off, self.seg)
    }

    fn at(&self, off: usize, case: &'static str) -> Result<BoundaryDecision, Error> {
        let k = self.k();
        let p = k + off;
        let inferred_error = match off {
            8 => InferredError::Deletion(Region::Marker),
            10 => InferredError::Insertion(Region::Marker),
            _ if self.v.near_is(k + 4, b"111101") => InferredError::None,
            _ => InferredError::Substitution(Region::Marker),
        };
        Ok(BoundaryDecision {
            p,
            inferred_error,
            case,
        })
    }

    fn unreachable(&self, case: &'static str) -> Result<BoundaryDecision, Error> {
        Err(Error::Unreachable {
            segment: self.seg,
            case,
        })
    }

    fn far_is(&self, pattern: &[u8]) -> bool {
        self.v.far_is(2 * self.k() + 13, pattern)
    }

    /// Every hypothesis of the case spends the next segment's error on its
    /// leading bits, so the next trailing marker arrives intact and its
    /// position alone (two early, one early, on time) selects the boundary.
    fn by_deletions(&self, offs: [usize; 3], case: &'static str) -> Result<BoundaryDecision, Error> {
        if self.far_is(b"1101**") {
            self.at(offs[0], case)
        } else if self.far_is(b"11101*") {
            self.at(offs[1], case)
        } else if self.far_is(b"111101") {
            self.at(offs[2], case)
        } else {
            self.unreachable(case)
        }
    }

    /// As [`Ctx::by_deletions`] for hypotheses that shift the next trailing
    /// marker late: on time, one late, two late.
    fn by_insertions(&self, offs: [usize; 3], case: &'static str) -> Result<BoundaryDecision, Error> {
        if self.far_is(b"111101") {
            self.at(offs[0], case)
        } else if self.far_is(b"*11110") {
            self.at(offs[1], case)
        } else if self.far_is(b"**1111") {
            self.at(offs[2], case)
        } else {
            self.unreachable(case)
        }
    }

    /// Marker shifted one late or on time versus one early: used where the
    /// hypotheses mix a deletion in the current marker with an insertion or
    /// substitution in the next leading marker.
    fn by_mixed(&self, case: &'static str) -> Result<BoundaryDecision, Error> {
        if self.far_is(b"111101") || self.far_is(b"11101*") {
            self.at(8, case)
        } else if self.far_is(b"*11110") {
            self.at(9, case)
        } else {
            self.unreachable(case)
        }
    }
}

fn boundary(v: &View, vt: &VtParams, seg: usize) -> Result<BoundaryDecision, Error> {
    let c = Ctx { v, vt, seg };
    let k = vt.k();

    // B1: one 0 among the first three marker bits
    if !v.near_is(k + 4, b"111") {
        if !(v.near_is(k + 4, b"0111") || v.near_is(k + 4, b"1011") || v.near_is(k + 4, b"1101")) {
            return c.unreachable("B1");
        }
        return if c.bit(8)? == 0 { c.at(9, "B1") } else { c.at(10, "B1") };
    }
    // B2: 1110
    if c.bit(7)? == 0 {
        if c.bit(8)? == 0 {
            return c.at(9, "B2");
        }
        if c.bit(9)? == 1 {
            return c.at(8, "B2");
        }
        return match (c.bit(10)?, c.bit(11)?) {
            (0, 0) => c.at(8, "B2.1"),
            (0, 1) => c.unreachable("B2.2"),
            (1, 0) => c.at(10, "B2.3"),
            _ => c.at(10, "B2.4"),
        };
    }
    let tail = (c.bit(8)?, c.bit(9)?, c.bit(10)?, c.bit(11)?);
    match tail {
        (0, 0, 0, 0) => c.by_deletions([8, 8, 9], "B3"),
        (0, 0, 0, 1) => c.at(9, "B4"),
        (0, 0, 1, 0) => match (c.bit(12)?, c.bit(13)?) {
            (0, 0) => c.at(9, "B5.1"),
            (0, 1) => c.at(9, "B5.2"),
            (1, 0) => c.by_insertions([9, 9, 10], "B5.3"),
            _ => c.unreachable("B5.4"),
        },
        (0, 0, 1, 1) => c.at(10, "B6"),
        (0, 1, 0, 0) => case_b7(&c),
        (0, 1, 0, 1) => case_b8(&c),
        (0, 1, 1, 0) => {
            if c.bit(12)? == 1 {
                c.by_insertions([9, 9, 10], "B9.1")
            } else {
                c.at(9, "B9.2")
            }
        }
        (0, 1, 1, 1) => c.at(10, "B10"),
        (1, 0, 0, 0) => c.at(8, "B11"),
        (1, 0, 0, 1) => c.unreachable("B12"),
        (1, 0, 1, 0) => c.at(10, "B13"),
        (1, 0, 1, 1) => c.at(10, "B14"),
        (1, 1, 0, 0) => c.at(8, "B15"),
        (1, 1, 0, 1) => c.by_mixed("B16"),
        // the next segment's error may sit in its trailing marker, so that
        // marker's position is uninformative here; every hypothesis still
        // leaves the boundary at k+9
        (1, 1, 1, 0) => c.at(9, "B17"),
        _ => c.at(9, "B18"),
    }
}

/// `y[k+4:k+11] = 11110101`. Besides a 0 appended to the marker
/// (`p = k+10`) two readings survive: the marker lost its last 1 and the
/// next leading marker took a substitution (`p = k+8`), or a substitution
/// in this segment's leading marker used up its error, the marker is intact
/// and the next segment gained a leading 0 (`p = k+9`).
fn case_b8(c: &Ctx) -> Result<BoundaryDecision, Error> {
    let k = c.k();
    let lead = &c.v.y[..3];
    let expected: &[u8] = if c.v.y[3] == 0 { &[1, 0, 0] } else { &[0, 1, 1] };
    if lead != expected {
        return c.at(9, "B8:lead");
    }
    // Under p = k+8 the next codeword and marker are untouched. Under
    // p = k+10 the codeword one position earlier differs in syndrome by an
    // odd amount whenever that marker window also reads 111101, so both
    // cannot hold.
    if c.v.member(k + 12, c.vt) && c.v.far_is(2 * k + 12, b"111101") {
        return c.at(8, "B8:shift");
    }
    c.at(10, "B8")
}

/// `y[k+4:k+11] = 11110100`: a deletion in the marker (`p = k+8`) or a 0
/// appended to it (`p = k+10`).
fn case_b7(c: &Ctx) -> Result<BoundaryDecision, Error> {
    if c.bit(12)? == 1 {
        // only two insertions push the next marker two late
        return if c.far_is(b"**1111") { c.at(10, "B7.1") } else { c.at(8, "B7.1") };
    }
    if !c.far_is(b"*11110") {
        return c.at(8, "B7.2");
    }
    if c.far_is(b"0") {
        return c.at(10, "B7.2");
    }
    weight_gap(c)
}

/// Separates "marker lost a 1, next marker damaged" from "marker gained a 0,
/// next leading marker damaged" by the syndrome of `u = y[k+13:2k+12]`.
///
/// In the first case `u = v_2..v_k` followed by the next marker's first bit,
/// in the second `u = 0 v_1..v_{k-1}` with `v_k` equal to the bit before the
/// shifted marker. Relative to the next codeword's own residue the syndrome
/// moves by `k - w` versus `w + k - 1` when both markers share an
/// orientation, and by `-w` versus `w` otherwise, where `0 < w < k` is the
/// codeword weight. The ranges never meet.
fn weight_gap(c: &Ctx) -> Result<BoundaryDecision, Error> {
    let k = c.k();
    let m = c.vt.m();
    let Some(u) = c.v.window(k + 13, k) else {
        return c.unreachable("B7.2");
    };
    let near_frame: Vec<u8> = u.iter().map(|b| b ^ c.v.near).collect();
    let residue = if c.v.near == 1 {
        c.vt.complemented().a()
    } else {
        c.vt.a()
    };
    let shift = (syndrome(&near_frame, m) + m - residue) % m;
    let same_orientation = c.v.near == c.v.far;
    let (early, late) = if same_orientation {
        ((1..k).contains(&shift), (k..=2 * k - 2).contains(&shift))
    } else {
        ((k + 1..2 * k).contains(&shift), (1..k).contains(&shift))
    };
    match (early, late) {
        (true, false) => c.at(8, "B7.2:gap"),
        (false, true) => c.at(10, "B7.2:gap"),
        _ => c.unreachable("B7.2:gap"),
    }
}

fn step(y: &[u8], vt: &VtParams, seg: usize, last: bool) -> Result<SegmentStep, Error> {
    let k = vt.k();
    let near_window = y.get(k + 3..k + 6).ok_or(Error::Truncated { segment: seg })?;
    let near = majority(near_window);
    let (codeword, retrieved) = retrieve(y, vt, near, seg)?;
    if last {
        let last_error = retrieved.map_or(InferredError::None, |d| d.inferred_error);
        return Ok(SegmentStep {
            codeword,
            decision: None,
            orientation: None,
            last_error,
        });
    }
    let far = far_marker(y, k, seg)?;
    let decision = match retrieved {
        Some(d) => d,
        None => boundary(&View::new(y, near, far), vt, seg)?,
    };
    Ok(SegmentStep {
        codeword,
        decision: Some(decision),
        orientation: Some(Orientation { near, far }),
        last_error: InferredError::None,
    })
}

/// Decodes a received stream of `t` segments.
pub fn decode_stream(y: &[u8], params: &CodeParams, t: usize) -> Result<DecodeReport, Error> {
    require_mode(params)?;
    let vt = *params.vt();
    decode_with(y, params, t, |rest, seg, last| step(rest, &vt, seg, last))
}

fn require_mode(params: &CodeParams) -> Result<(), Error> {
    if params.mode() == Mode::Edit {
        Ok(())
    } else {
        Err(Error::BadModulus {
            k: params.k(),
            m: params.vt().m(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{bits, BitString};

    fn canonical_p(body: &str) -> Result<usize, Error> {
        let k = 8;
        let mut y = BitString::zeros(k + 3);
        y.extend_from_slice(&bits(body));
        let v = View::new(&y, Marker::A1, Marker::A1);
        let vt = VtParams::edit(k, None).unwrap();
        boundary(&v, &vt, 1).map(|d| d.p - k)
    }

    const REST: &str = "00000000 000000 000";

    #[test]
    fn boundary_table_rows() {
        assert_eq!(canonical_p(&format!("11111000 00 {REST}")), Ok(8));
        assert_eq!(canonical_p(&format!("11111011 00 {REST}")), Ok(10));
        assert_eq!(canonical_p(&format!("11111111 00 {REST}")), Ok(9));
        assert_eq!(
            canonical_p(&format!("11111001 00 {REST}")),
            Err(Error::Unreachable { segment: 1, case: "B12" })
        );
        assert_eq!(canonical_p(&format!("01111011 00 {REST}")), Ok(10));
        assert_eq!(canonical_p(&format!("01110100 00 {REST}")), Ok(9));
    }

    #[test]
    fn near_marker_majority() {
        assert_eq!(classify_near_marker(&bits("111")), Marker::A1);
        assert_eq!(classify_near_marker(&bits("000")), Marker::A0);
        assert_eq!(classify_near_marker(&bits("101")), Marker::A1);
    }

    #[test]
    fn far_marker_examples() {
        let k = 8;
        let mut y = BitString::zeros(2 * k + 12);
        y.extend_from_slice(&bits("111101"));
        assert_eq!(classify_far_marker(&y, k), Ok(Marker::A1));
        let mut y = BitString::zeros(2 * k + 12);
        y.extend_from_slice(&bits("000010"));
        assert_eq!(classify_far_marker(&y, k), Ok(Marker::A0));
    }

    #[test]
    fn error_free_round_trip() {
        let p = make_params(8, None).unwrap();
        let msgs: Vec<Message> = (0..3u8)
            .map(|i| Message((0..4).map(|j| (i >> j) & 1).collect::<Vec<_>>().as_slice().into()))
            .collect();
        let s = encode_stream(&msgs, &p).unwrap();
        let r = decode_stream(&s.bits, &p, 3).unwrap();
        assert_eq!(r.messages.unwrap(), msgs);
        assert_eq!(r.boundaries, vec![17, 17]);
    }

    #[test]
    fn retrieve_substitution_in_codeword() {
        let p = make_params(8, None).unwrap();
        let vt = *p.vt();
        let w = vt.members().find(|w| w[0] == 0).unwrap();
        let cw = VtCodeword::new(w.clone(), &vt).unwrap();
        let s = p.encode_codewords(&[cw.clone(), cw]).unwrap();
        for pos in 4..=11 {
            let y = s.bits.flipped(pos);
            let (got, d) = retrieve_codeword(&y, &p, Marker::A1).unwrap();
            assert_eq!(got.bits(), &w);
            assert_eq!(d.unwrap().p, 17);
        }
    }
}
