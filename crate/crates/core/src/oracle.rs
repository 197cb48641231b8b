//! Brute-force ground truth for the decoders.
//!
//! Everything here is deliberately naive: balls are enumerated and
//! deduplicated, membership is a small dynamic program, and verification
//! decodes every element of a segmented ball and compares against the
//! transmitted codewords.

use std::collections::{BTreeMap, HashSet};
use std::fmt::{self, Write as _};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::BitString;
use crate::error::Error;
use crate::segment::{CodeParams, DecodeReport, Marker, Mode, Stream};
use crate::vt::{VtCodeword, VtParams};

/// Name of the generator used by every randomized routine, for reports.
pub const GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64 + set_stream(shard)";

/// Samples per independently seeded shard in [`sampled_verify`].
pub const SHARD_SAMPLES: u64 = 4096;

/// Failures kept verbatim in a report; the rest are only counted.
pub const MAX_RECORDED_FAILURES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErrorKind {
    None,
    Delete,
    Insert,
    Substitute,
}

/// One segment's error. `position` is 1-based within the segment; for an
/// insertion it is the position the new bit occupies afterwards, so it
/// ranges over `1..=n+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ErrorSpec {
    pub segment: usize,
    pub kind: ErrorKind,
    pub position: usize,
    pub bit: u8,
}

impl ErrorSpec {
    pub fn none(segment: usize) -> Self {
        Self {
            segment,
            kind: ErrorKind::None,
            position: 0,
            bit: 0,
        }
    }

    /// Applies this error to one segment's bits.
    pub fn apply(&self, s: &[u8]) -> BitString {
        let s = BitString::from(s);
        match self.kind {
            ErrorKind::None => s,
            ErrorKind::Delete => s.deleted(self.position),
            ErrorKind::Insert => s.inserted(self.position, self.bit),
            ErrorKind::Substitute => s.flipped(self.position),
        }
    }
}

impl fmt::Display for ErrorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ErrorKind::None => write!(f, "s{}:none", self.segment),
            ErrorKind::Delete => write!(f, "s{}:del@{}", self.segment, self.position),
            ErrorKind::Insert => write!(f, "s{}:ins{}@{}", self.segment, self.bit, self.position),
            ErrorKind::Substitute => write!(f, "s{}:sub@{}", self.segment, self.position),
        }
    }
}

/// Proof that `y` lies in a segmented ball: how many bits each segment
/// gained or lost, and one error that explains each segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallMembershipWitness {
    pub offsets: Vec<i8>,
    pub errors: Vec<ErrorSpec>,
}

/// `{u}` plus every distinct single deletion and insertion of `u`, sorted.
pub fn single_insdel_ball(u: &[u8]) -> Vec<BitString> {
    ball(u, false)
}

/// The insdel ball plus every single substitution, sorted.
pub fn single_edit_ball(u: &[u8]) -> Vec<BitString> {
    ball(u, true)
}

/// Per-mode single-error ball.
pub fn single_ball(u: &[u8], mode: Mode) -> Vec<BitString> {
    ball(u, mode.allows_substitution())
}

fn ball(u: &[u8], substitutions: bool) -> Vec<BitString> {
    let u = BitString::from(u);
    let mut set = HashSet::new();
    set.insert(u.clone());
    for pos in 1..=u.len() {
        set.insert(u.deleted(pos));
        if substitutions {
            set.insert(u.flipped(pos));
        }
    }
    for pos in 1..=u.len() + 1 {
        set.insert(u.inserted(pos, 0));
        set.insert(u.inserted(pos, 1));
    }
    let mut out: Vec<_> = set.into_iter().collect();
    out.sort();
    out
}

/// Streams the Cartesian product of per-segment balls without
/// materializing it.
pub struct SegmentedBall {
    balls: Vec<Vec<BitString>>,
    idx: Vec<usize>,
    done: bool,
}

impl SegmentedBall {
    /// Number of elements the iterator yields.
    pub fn size(&self) -> u128 {
        self.balls.iter().map(|b| b.len() as u128).product()
    }
}

impl Iterator for SegmentedBall {
    type Item = BitString;

    fn next(&mut self) -> Option<BitString> {
        if self.done {
            return None;
        }
        let mut out = BitString::new();
        for (b, &i) in self.balls.iter().zip(&self.idx) {
            out.extend_from_slice(&b[i]);
        }
        // odometer, last segment fastest
        self.done = true;
        for j in (0..self.idx.len()).rev() {
            self.idx[j] += 1;
            if self.idx[j] < self.balls[j].len() {
                self.done = false;
                break;
            }
            self.idx[j] = 0;
        }
        Some(out)
    }
}

/// All outputs of the segmented single-error channel for `x`.
pub fn segmented_ball(x: &Stream, params: &CodeParams) -> SegmentedBall {
    let balls: Vec<_> = (1..=x.segments)
        .map(|i| single_ball(x.segment(params, i), params.mode()))
        .collect();
    SegmentedBall {
        idx: vec![0; balls.len()],
        done: balls.is_empty(),
        balls,
    }
}

/// One error turning `s` into `w`, if any.
fn explain(s: &[u8], w: &[u8], mode: Mode, segment: usize) -> Option<ErrorSpec> {
    let first_diff = s.iter().zip(w).position(|(a, b)| a != b).unwrap_or(s.len().min(w.len()));
    let spec = |kind, position, bit| ErrorSpec {
        segment,
        kind,
        position,
        bit,
    };
    if w.len() == s.len() {
        if first_diff == s.len() {
            return Some(ErrorSpec::none(segment));
        }
        let ok = mode.allows_substitution() && s[first_diff + 1..] == w[first_diff + 1..];
        return ok.then(|| spec(ErrorKind::Substitute, first_diff + 1, 0));
    }
    if w.len() + 1 == s.len() {
        let ok = s[first_diff + 1..] == w[first_diff..];
        return ok.then(|| spec(ErrorKind::Delete, first_diff + 1, 0));
    }
    if w.len() == s.len() + 1 {
        let ok = s[first_diff..] == w[first_diff + 1..];
        return ok.then(|| spec(ErrorKind::Insert, first_diff + 1, w[first_diff]));
    }
    None
}

/// Whether `y` is a channel output for the segments of `x`, with a witness.
///
/// Dynamic program over (segment, cumulative offset). Offsets stay within
/// `[-t, t]` because each segment changes length by at most one.
pub fn is_in_segmented_ball(
    y: &[u8],
    x: &Stream,
    params: &CodeParams,
) -> Option<BallMembershipWitness> {
    ball_witness(y, &x.bits, x.segments, params.n(), params.mode())
}

/// [`is_in_segmented_ball`] against segments `first..=t` of `x`.
pub fn suffix_in_segmented_ball(
    y: &[u8],
    x: &Stream,
    params: &CodeParams,
    first: usize,
) -> Option<BallMembershipWitness> {
    let n = params.n();
    let segments = x.segments + 1 - first;
    ball_witness(y, &x.bits[(first - 1) * n..], segments, n, params.mode())
}

fn ball_witness(
    y: &[u8],
    x: &[u8],
    t: usize,
    n: usize,
    mode: Mode,
) -> Option<BallMembershipWitness> {
    if y.len().abs_diff(n * t) > t {
        return None;
    }
    let width = 2 * t + 1;
    // back[j][o]: error that reached offset o after segment j, and the offset before it
    let mut back: Vec<Vec<Option<(ErrorSpec, usize)>>> = vec![vec![None; width]; t + 1];
    let mut alive = vec![false; width];
    alive[t] = true;
    for j in 0..t {
        let s = &x[j * n..(j + 1) * n];
        let mut next = vec![false; width];
        for o in (0..width).filter(|&o| alive[o]) {
            let start = (j * n + o).checked_sub(t)?;
            for d in [-1i64, 0, 1] {
                let no = o as i64 + d;
                if no < 0 || no >= width as i64 || next[no as usize] {
                    continue;
                }
                let end = start as i64 + n as i64 + d;
                if end as usize > y.len() {
                    continue;
                }
                if let Some(e) = explain(s, &y[start..end as usize], mode, j + 1) {
                    next[no as usize] = true;
                    back[j + 1][no as usize] = Some((e, o));
                }
            }
        }
        alive = next;
    }
    let end = (y.len() + t).checked_sub(n * t)?;
    if end >= width || !alive[end] {
        return None;
    }
    let mut errors = Vec::with_capacity(t);
    let mut offsets = Vec::with_capacity(t);
    let mut o = end;
    for j in (1..=t).rev() {
        let (e, prev) = back[j][o]?;
        errors.push(e);
        offsets.push((o as i64 - prev as i64) as i8);
        o = prev;
    }
    errors.reverse();
    offsets.reverse();
    Some(BallMembershipWitness { offsets, errors })
}

/// Draws one uniformly chosen legal error for a segment of length `n`.
fn random_error<R: Rng>(rng: &mut R, segment: usize, n: usize, mode: Mode) -> ErrorSpec {
    let kinds: &[ErrorKind] = if mode.allows_substitution() {
        &[ErrorKind::Delete, ErrorKind::Insert, ErrorKind::Substitute]
    } else {
        &[ErrorKind::Delete, ErrorKind::Insert]
    };
    let kind = kinds[rng.random_range(0..kinds.len())];
    let position = match kind {
        ErrorKind::Insert => rng.random_range(1..=n + 1),
        _ => rng.random_range(1..=n),
    };
    let bit = if kind == ErrorKind::Insert {
        rng.random_range(0..=1u8)
    } else {
        0
    };
    ErrorSpec {
        segment,
        kind,
        position,
        bit,
    }
}

/// Passes `x` through the channel using the caller's generator.
pub fn apply_random_errors_with<R: Rng>(
    rng: &mut R,
    x: &Stream,
    params: &CodeParams,
    per_segment_error_prob: f64,
) -> (BitString, Vec<ErrorSpec>) {
    let n = params.n();
    let mut out = BitString::with_capacity(x.bits.len() + x.segments);
    let mut specs = Vec::with_capacity(x.segments);
    for i in 1..=x.segments {
        let spec = if rng.random_bool(per_segment_error_prob) {
            random_error(rng, i, n, params.mode())
        } else {
            ErrorSpec::none(i)
        };
        out.extend_from_slice(&spec.apply(x.segment(params, i)));
        specs.push(spec);
    }
    (out, specs)
}

/// Passes `x` through the channel: each segment independently suffers one
/// error with the given probability. Deterministic in `seed`.
pub fn apply_random_errors(
    x: &Stream,
    params: &CodeParams,
    seed: u64,
    per_segment_error_prob: f64,
) -> (BitString, Vec<ErrorSpec>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    apply_random_errors_with(&mut rng, x, params, per_segment_error_prob)
}

/// One decode that went wrong, with enough data to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub stream: BitString,
    pub received: BitString,
    pub expected: Vec<BitString>,
    pub actual: Result<Vec<BitString>, String>,
    pub boundaries: Vec<usize>,
    pub reason: String,
}

/// Result of an exhaustive or sampled verification run. Shard reports
/// merge commutatively.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub mode: Option<Mode>,
    pub k: usize,
    pub a: usize,
    pub t: usize,
    pub generator: Option<String>,
    pub streams: u64,
    pub decodes: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    pub soundness_checks: u64,
    pub soundness_violations: u64,
    /// Boundary counts keyed by (current, next) trailing marker.
    pub orientations: BTreeMap<(Marker, Marker), u64>,
    pub cases: BTreeMap<&'static str, u64>,
    pub unreachable: BTreeMap<&'static str, u64>,
}

impl VerificationReport {
    fn empty(params: &CodeParams, t: usize) -> Self {
        Self {
            mode: Some(params.mode()),
            k: params.k(),
            a: params.vt().a(),
            t,
            ..Self::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.soundness_violations == 0
    }

    /// Count for one orientation pair, zero if never seen.
    pub fn orientation_count(&self, near: Marker, far: Marker) -> u64 {
        self.orientations.get(&(near, far)).copied().unwrap_or(0)
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.mode = self.mode.or(other.mode);
        self.generator = self.generator.or(other.generator);
        self.streams += other.streams;
        self.decodes += other.decodes;
        self.failure_count += other.failure_count;
        self.soundness_checks += other.soundness_checks;
        self.soundness_violations += other.soundness_violations;
        for (key, c) in other.orientations {
            *self.orientations.entry(key).or_default() += c;
        }
        for (key, c) in other.cases {
            *self.cases.entry(key).or_default() += c;
        }
        for (key, c) in other.unreachable {
            *self.unreachable.entry(key).or_default() += c;
        }
        self.failures.extend(other.failures);
        // keep the recorded subset independent of merge order
        self.failures
            .sort_by(|a, b| (&a.stream, &a.received).cmp(&(&b.stream, &b.received)));
        self.failures.truncate(MAX_RECORDED_FAILURES);
        self
    }

    /// One summary line, then one line per recorded failure.
    pub fn to_text(&self) -> String {
        let mode = self.mode.map_or("?", Mode::as_str);
        let mut s = format!(
            "mode={mode} k={} a={} t={} streams={} decodes={} failures={} soundness_checks={} soundness_violations={}",
            self.k,
            self.a,
            self.t,
            self.streams,
            self.decodes,
            self.failure_count,
            self.soundness_checks,
            self.soundness_violations,
        );
        s.push_str(" orientations=");
        let combos = [
            (Marker::A1, Marker::A1),
            (Marker::A1, Marker::A0),
            (Marker::A0, Marker::A1),
            (Marker::A0, Marker::A0),
        ];
        let parts: Vec<String> = combos
            .iter()
            .map(|&(n, f)| format!("{}{}:{}", n.short(), f.short(), self.orientation_count(n, f)))
            .collect();
        s.push_str(&parts.join(","));
        let unreachable: Vec<String> =
            self.unreachable.iter().map(|(c, n)| format!("{c}:{n}")).collect();
        let _ = write!(s, " unreachable={}", if unreachable.is_empty() { "none".into() } else { unreachable.join(",") });
        if let Some(g) = &self.generator {
            let _ = write!(s, " generator=\"{g}\"");
        }
        s.push('\n');
        for f in &self.failures {
            let expected: Vec<String> = f.expected.iter().map(|b| b.to_string()).collect();
            let actual = match &f.actual {
                Ok(cws) => cws.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","),
                Err(e) => format!("error({e})"),
            };
            let _ = writeln!(
                s,
                "FAIL stream={} received={} expected={} actual={} boundaries={:?} reason={}",
                f.stream,
                f.received,
                expected.join(","),
                actual,
                f.boundaries,
                f.reason
            );
        }
        s
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A stream decoder under test: received bits and segment count in, report
/// out. [`CodeParams::decode`] is the real one.
pub type Decoder<'a> = &'a (dyn Fn(&[u8], usize) -> Result<DecodeReport, Error> + Sync);

/// Decodes `y` and checks it against the transmitted codewords, including
/// soundness of every boundary the decoder picked.
pub fn check_decode(
    report: &mut VerificationReport,
    params: &CodeParams,
    x: &Stream,
    codewords: &[VtCodeword],
    y: &[u8],
) {
    check_decode_with(report, params, &|y, t| params.decode(y, t), x, codewords, y)
}

/// [`check_decode`] with a substitute decoder.
pub fn check_decode_with(
    report: &mut VerificationReport,
    params: &CodeParams,
    decode: Decoder,
    x: &Stream,
    codewords: &[VtCodeword],
    y: &[u8],
) {
    report.decodes += 1;
    let expected = || codewords.iter().map(|c| c.bits().clone()).collect::<Vec<_>>();
    let fail = |report: &mut VerificationReport, actual, boundaries, reason: String| {
        report.failure_count += 1;
        if report.failures.len() < MAX_RECORDED_FAILURES {
            report.failures.push(Failure {
                stream: x.bits.clone(),
                received: BitString::from(y),
                expected: expected(),
                actual,
                boundaries,
                reason,
            });
        }
    };
    let decoded = match decode(y, x.segments) {
        Ok(d) => d,
        Err(e) => {
            if let Error::Unreachable { case, .. } = e {
                *report.unreachable.entry(case).or_default() += 1;
            }
            fail(report, Err(e.to_string()), vec![], "decoder error".into());
            return;
        }
    };
    for o in &decoded.orientations {
        *report.orientations.entry((o.near, o.far)).or_default() += 1;
    }
    for c in &decoded.cases {
        *report.cases.entry(c).or_default() += 1;
    }
    for (i, &p) in decoded.absolute_boundaries.iter().enumerate() {
        report.soundness_checks += 1;
        let rest = y.get(p..).unwrap_or(&[]);
        if suffix_in_segmented_ball(rest, x, params, i + 2).is_none() {
            report.soundness_violations += 1;
            fail(
                report,
                Ok(decoded.codewords.iter().map(|c| c.bits().clone()).collect()),
                decoded.absolute_boundaries.clone(),
                format!("boundary {} at {p} unsound ({})", i + 1, decoded.cases[i]),
            );
            return;
        }
    }
    if decoded.codewords != codewords {
        fail(
            report,
            Ok(decoded.codewords.iter().map(|c| c.bits().clone()).collect()),
            decoded.absolute_boundaries.clone(),
            "codeword mismatch".into(),
        );
    }
}

/// Decodes every element of the segmented ball of every stream of `t`
/// codewords. Shards on the first codeword and runs them in parallel.
pub fn exhaustive_verify(params: &CodeParams, t: usize) -> Result<VerificationReport, Error> {
    exhaustive_verify_with(params, t, &|y, t| params.decode(y, t))
}

/// [`exhaustive_verify`] against a substitute decoder.
pub fn exhaustive_verify_with(
    params: &CodeParams,
    t: usize,
    decode: Decoder,
) -> Result<VerificationReport, Error> {
    if t == 0 {
        return Err(Error::NoSegments);
    }
    let vt = *params.vt();
    let members: Vec<VtCodeword> = vt.members().map(VtCodeword).collect();
    let total = members.len().pow(t as u32 - 1);
    let report = members
        .par_iter()
        .map(|first| {
            let mut report = VerificationReport::empty(params, t);
            let mut tuple = vec![first.clone(); t];
            for mut idx in 0..total {
                for slot in tuple[1..].iter_mut().rev() {
                    *slot = members[idx % members.len()].clone();
                    idx /= members.len();
                }
                let x = params.encode_codewords(&tuple).expect("members encode");
                report.streams += 1;
                for y in segmented_ball(&x, params) {
                    check_decode_with(&mut report, params, decode, &x, &tuple, &y);
                }
            }
            report
        })
        .reduce(|| VerificationReport::empty(params, t), VerificationReport::merge);
    Ok(report)
}

/// Decodes `samples` random channel outputs of random codeword streams.
///
/// Samples are split into fixed shards of [`SHARD_SAMPLES`], each with its
/// own ChaCha8 stream, so the result depends only on `seed`.
pub fn sampled_verify(
    params: &CodeParams,
    t: usize,
    samples: u64,
    seed: u64,
    per_segment_error_prob: f64,
) -> Result<VerificationReport, Error> {
    if t == 0 {
        return Err(Error::NoSegments);
    }
    let vt = *params.vt();
    let members: Vec<VtCodeword> = vt.members().map(VtCodeword).collect();
    let shards = samples.div_ceil(SHARD_SAMPLES);
    let mut report = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let mut report = VerificationReport::empty(params, t);
            let count = SHARD_SAMPLES.min(samples - shard * SHARD_SAMPLES);
            for _ in 0..count {
                let tuple: Vec<VtCodeword> = (0..t)
                    .map(|_| members[rng.random_range(0..members.len())].clone())
                    .collect();
                let x = params.encode_codewords(&tuple).expect("members encode");
                let (y, _) = apply_random_errors_with(&mut rng, &x, params, per_segment_error_prob);
                report.streams += 1;
                check_decode(&mut report, params, &x, &tuple, &y);
            }
            report
        })
        .reduce(|| VerificationReport::empty(params, t), VerificationReport::merge);
    report.generator = Some(format!("{GENERATOR}; seed={seed}"));
    Ok(report)
}

/// Counts codewords `c` and delete-then-insert compositions `c'` with
/// `c' != c` yet `c'` a member. The VT property says this is always zero.
pub fn fact1_violations(vt: &VtParams) -> u64 {
    let mut violations = 0;
    for c in vt.members() {
        let mut seen = HashSet::new();
        for d in 1..=c.len() {
            let short = c.deleted(d);
            for i in 1..=short.len() + 1 {
                for bit in 0..=1 {
                    let w = short.inserted(i, bit);
                    if w != c && seen.insert(w.clone()) && vt.contains(&w) {
                        violations += 1;
                    }
                }
            }
        }
    }
    violations
}
