//! Code `C` for the segmented single-insdel channel.
//!
//! Segment layout (1-based, relative to the start of the residual stream):
//!
//! ```text
//! y_1        b         one bit, a copy of v_1
//! y[2:k+1]   v         codeword of VT_a(k+1; k)
//! y[k+2:k+7] a         000010 or 111101
//! ```
//!
//! The decoder reads one segment at a time. When the codeword window is not
//! a codeword, the error hit `b v` and the intact trailing marker tells
//! whether a bit was lost or gained. Otherwise the boundary is found from the
//! trailing marker, the next segment's leading bits, the next trailing marker
//! `y[2k+9:2k+14]` and, in a few cases, VT checks on shifted copies of the
//! next codeword.
//!
//! All window tests are written for the canonical orientation where both
//! trailing markers read `111101`; [`View`] masks the received bits into
//! that frame.

use crate::error::Error;
use crate::segment::{
    classify_by_counts, decode_with, majority, BoundaryDecision, CodeParams, DecodeReport,
    InferredError, Marker, Mode, Orientation, Region, SegmentStep, Stream, View,
};
use crate::vt::{Message, VtCodeword, VtParams};

/// Validated parameters for code `C`: `VT_a(k+1; k)` codewords, `n = k + 7`.
pub fn make_params(k: usize, a: Option<usize>) -> Result<CodeParams, Error> {
    CodeParams::insdel(k, a)
}

/// Encodes `t` messages into a stream of `t` segments.
pub fn encode_stream(messages: &[Message], params: &CodeParams) -> Result<Stream, Error> {
    require_mode(params)?;
    params.encode(messages)
}

/// Majority vote over `y[k+2:k+4]`.
pub fn classify_near_marker(window: &[u8]) -> Marker {
    majority(window)
}

/// Classifies the next trailing marker from `y[2k+9:2k+14]` (and its
/// five-bit prefix), truncated at the end of `y`.
pub fn classify_far_marker(y: &[u8], k: usize) -> Result<Marker, Error> {
    far_marker(y, k, 1)
}

fn far_marker(y: &[u8], k: usize, segment: usize) -> Result<Marker, Error> {
    let start = (2 * k + 8).min(y.len());
    let end = (2 * k + 14).min(y.len());
    classify_by_counts(&y[start..end], segment, "far-marker tie")
}

/// Recovers `v` from a segment whose codeword window `y[2:k+1]` is not a
/// codeword, using the intact trailing marker (read under `near`) to tell a
/// deletion from an insertion. Returns the boundary in that case; when the
/// codeword window is already a codeword, returns it with no boundary.
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
    let window = view.window(2, k).ok_or(Error::Truncated { segment })?;
    if vt.contains(window) {
        return Ok((VtCodeword(window.into()), None));
    }
    if view.near_is(k + 2, b"11101*") {
        let cw = vt.correct_deletion(&y[1..k])?;
        return Ok((
            cw,
            Some(BoundaryDecision {
                p: k + 6,
                inferred_error: InferredError::Deletion(Region::Codeword),
                case: "retrieve:deletion",
            }),
        ));
    }
    if view.near_is(k + 2, b"*11110") {
        let w = view.window(2, k + 1).ok_or(Error::Truncated { segment })?;
        let cw = vt.correct_insertion(w)?;
        return Ok((
            cw,
            Some(BoundaryDecision {
                p: k + 8,
                inferred_error: InferredError::Insertion(Region::Codeword),
                case: "retrieve:insertion",
            }),
        ));
    }
    Err(Error::UnrecognizedMarker { segment })
}

/// Finds the boundary after a segment whose codeword window `y[2:k+1]` is a
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

fn decision(k: usize, p: usize, case: &'static str) -> BoundaryDecision {
    let inferred_error = match p.cmp(&(k + 7)) {
        std::cmp::Ordering::Less => InferredError::Deletion(Region::Marker),
        std::cmp::Ordering::Equal => InferredError::None,
        std::cmp::Ordering::Greater => InferredError::Insertion(Region::Marker),
    };
    BoundaryDecision {
        p,
        inferred_error,
        case,
    }
}

fn boundary(v: &View, vt: &VtParams, seg: usize) -> Result<BoundaryDecision, Error> {
    let k = vt.k();
    let d = |off: usize, case| Ok(decision(k, k + off, case));

    // the three leading ones of the marker survive unless a 0 was inserted
    if !v.near_is(k + 2, b"111") {
        return d(8, "A1");
    }
    match (v.nb(k + 5, seg)?, v.nb(k + 6, seg)?, v.nb(k + 7, seg)?) {
        (0, 0, _) => Err(Error::Unreachable { segment: seg, case: "A2" }),
        (0, 1, 1) => d(6, "A2.1"),
        (0, 1, 0) => shift_pair(v, k, seg, "A2.2"),
        (1, 0, 0) => shift_pair(v, k, seg, "A3"),
        (1, 0, 1) => case_a4(v, vt, seg),
        (1, 1, 0) => shift_pair(v, k, seg, "A5"),
        _ => d(6, "A6"),
    }
}

/// Either the marker lost a bit (`p = k+6`) or gained one (`p = k+8`). A 0 at
/// `y_{k+8}` can only be the next segment's leading bits after a deletion.
/// Otherwise, a deletion here combined with the deletion of `b v_1` of the
/// next segment leaves the next trailing marker two positions early, which
/// no insertion hypothesis can imitate.
fn shift_pair(v: &View, k: usize, seg: usize, case: &'static str) -> Result<BoundaryDecision, Error> {
    if v.nb(k + 8, seg)? == 0 {
        return Ok(decision(k, k + 6, case));
    }
    let two_early = v.far_is(2 * k + 9, b"1101") && !v.far_is(2 * k + 13, b"11");
    Ok(decision(k, if two_early { k + 6 } else { k + 8 }, case))
}

fn case_a4(v: &View, vt: &VtParams, seg: usize) -> Result<BoundaryDecision, Error> {
    let k = vt.k();
    let d = |off: usize, case| Ok(decision(k, k + off, case));
    let far = 2 * k + 9;
    let peek = 2 * k + 15;

    // 1111011: the seventh bit cannot belong to the next segment
    if v.nb(k + 8, seg)? == 1 {
        return d(8, "A4:y8");
    }
    // y[k+8:k+9] = 01: the next marker is one early, one late, or two late
    if v.nb(k + 9, seg)? == 1 {
        return if v.far_is(far + 2, b"1111") {
            d(8, "A4:y9")
        } else {
            d(7, "A4:y9")
        };
    }
    // A4.1: only two insertions push the next marker's leading ones into
    // y[2k+11:2k+14] while its tail 01 spills into y[2k+15:2k+16]
    if v.nb(k + 10, seg)? == 1 {
        return if v.far_is(far + 2, b"1111") && v.far_is(peek, b"01") {
            d(8, "A4.1")
        } else {
            d(7, "A4.1")
        };
    }
    // A4.2: intact marker (p = k+7) versus a 0 appended to it (p = k+8).
    // Under the latter the next codeword sits at y[k+10:2k+9].
    let next_in_place = v.member(k + 9, vt);
    if v.far_is(far, b"*10111") || v.far_is(far, b"*01111") || v.far_is(far, b"0*1111") {
        return d(8, "A4.2:d'-4");
    }
    if v.far_is(far, b"*11101") {
        if v.far_is(far, b"0") {
            return d(8, "A4.2:d'-2");
        }
        return if next_in_place { d(7, "A4.2:d'-5") } else { d(8, "A4.2:d'-5") };
    }
    if v.far_is(far, b"*11110") {
        if next_in_place {
            return d(7, "A4.2:d'-6");
        }
        return if v.member(k + 10, vt) { d(8, "A4.2:d'-1") } else { d(7, "A4.2:d'-1") };
    }
    if v.far_is(far, b"*11011") {
        if v.far_is(far, b"0") || v.far_is(peek, b"01") {
            return d(8, "A4.2:d'-3");
        }
        return d(7, "A4.2:d'-3");
    }
    if v.far_is(far, b"*1110*") {
        return if next_in_place { d(7, "A4.2:d'-8") } else { d(8, "A4.2:d'-8") };
    }
    if v.far_is(far, b"**1111") {
        if !v.far_is(peek, b"00") {
            return d(8, "A4.2:e'");
        }
        return if next_in_place { d(7, "A4.2:e'") } else { d(8, "A4.2:e'") };
    }
    d(7, "A4.2:a'")
}

fn step(y: &[u8], vt: &VtParams, seg: usize, last: bool) -> Result<SegmentStep, Error> {
    let k = vt.k();
    let near_window = y.get(k + 1..k + 4).ok_or(Error::Truncated { segment: seg })?;
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
    if params.mode() == Mode::Insdel {
        Ok(())
    } else {
        Err(Error::BadModulus {
            k: params.k(),
            m: params.vt().m(),
        })
    }
}
