use segcode::oracle::{exhaustive_verify, segmented_ball, single_ball, suffix_in_segmented_ball};
use segcode::{edit, insdel, BitString, CodeParams, Error, Marker, Mode, Stream, VtCodeword, VtParams};

fn members(params: &CodeParams) -> Vec<VtCodeword> {
    let vt = *params.vt();
    vt.members().map(|b| VtCodeword::new(b, &vt).unwrap()).collect()
}

/// Members starting with 0 and with 1, a handful of each.
fn sample_members(params: &CodeParams) -> Vec<VtCodeword> {
    let all = members(params);
    let zeros = all.iter().filter(|c| c.bits()[0] == 0).take(3);
    let ones = all.iter().filter(|c| c.bits()[0] == 1).take(3);
    zeros.chain(ones).cloned().collect()
}

fn true_marker(next: &VtCodeword) -> Marker {
    if next.bits()[0] == 0 {
        Marker::A1
    } else {
        Marker::A0
    }
}

fn codes() -> [CodeParams; 2] {
    [CodeParams::insdel(7, None).unwrap(), CodeParams::edit(8, None).unwrap()]
}

/// Every channel output of segments i and i+1 (with a clean segment i+2
/// behind them) classifies both trailing markers correctly.
#[test]
fn marker_classification_over_reachable_windows() {
    for params in codes() {
        let k = params.k();
        let lead = params.lead_len();
        let all = members(&params);
        let tails = sample_members(&params);
        let mut checked = 0;
        for c1 in &all {
            for c2 in &tails {
                for c3 in &tails {
                    let x = params.encode_codewords(&[c1.clone(), c2.clone(), c3.clone()]).unwrap();
                    let seg3 = x.segment(&params, 3).to_vec();
                    for s1 in single_ball(x.segment(&params, 1), params.mode()) {
                        for s2 in single_ball(x.segment(&params, 2), params.mode()) {
                            let mut y = s1.clone();
                            y.extend_from_slice(&s2);
                            y.extend_from_slice(&seg3);
                            let near_window = &y[k + lead..k + lead + 3];
                            let (near, far) = match params.mode() {
                                Mode::Insdel => (
                                    insdel::classify_near_marker(near_window),
                                    insdel::classify_far_marker(&y, k),
                                ),
                                Mode::Edit => (
                                    edit::classify_near_marker(near_window),
                                    edit::classify_far_marker(&y, k),
                                ),
                            };
                            assert_eq!(near, true_marker(c2), "{}: y={y}", params.mode());
                            assert_eq!(far, Ok(true_marker(c3)), "{}: y={y}", params.mode());
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 10_000);
    }
}

/// A deletion or insertion inside `b v` is corrected by retrieval, which
/// also fixes the boundary one short of or one past `n`.
#[test]
fn retrieval_of_leading_marker_and_codeword_errors() {
    for params in codes() {
        let n = params.n();
        let span = params.lead_len() + params.k();
        let tails = sample_members(&params);
        for c in members(&params) {
            for next in &tails {
                let x = params.encode_codewords(&[c.clone(), next.clone()]).unwrap();
                let near = true_marker(next);
                for pos in 1..=span {
                    let y = x.bits.deleted(pos);
                    let (got, d) = retrieve(&params, &y, near);
                    if d.is_some() {
                        assert_eq!(got, c, "deletion at {pos}");
                        assert_eq!(d.unwrap(), n - 1);
                    } else {
                        // the deletion only shifted a run: the window still reads c
                        assert_eq!(got, c);
                    }
                }
                for pos in 1..=span + 1 {
                    for bit in 0..=1 {
                        let y = x.bits.inserted(pos, bit);
                        let (got, d) = retrieve(&params, &y, near);
                        assert_eq!(got, c, "insertion of {bit} at {pos}");
                        if let Some(p) = d {
                            assert_eq!(p, n + 1);
                        }
                    }
                }
                if params.mode() == Mode::Edit {
                    for pos in 4..=span {
                        let (got, d) = retrieve(&params, &x.bits.flipped(pos), near);
                        assert_eq!((got, d), (c.clone(), Some(n)));
                    }
                }
            }
        }
    }
}

fn retrieve(params: &CodeParams, y: &[u8], near: Marker) -> (VtCodeword, Option<usize>) {
    let r = match params.mode() {
        Mode::Insdel => insdel::retrieve_codeword(y, params, near),
        Mode::Edit => edit::retrieve_codeword(y, params, near),
    };
    let (cw, d) = r.unwrap();
    (cw, d.map(|d| d.p))
}

/// Decoding the complement of a stream under residue `T - a` returns the
/// complemented codewords.
#[test]
fn complement_decodes_under_transformed_residue() {
    for params in codes() {
        let vt = *params.vt();
        let flipped = CodeParams::new(params.mode(), params.k(), Some(vt.complemented().a())).unwrap();
        let all = members(&params);
        let mut checked = 0u64;
        for c1 in &all {
            for c2 in &all {
                let x = params.encode_codewords(&[c1.clone(), c2.clone()]).unwrap();
                for y in segmented_ball(&x, &params) {
                    let direct = params.decode(&y, 2).unwrap();
                    let mirrored = flipped.decode(&y.complement(), 2).unwrap();
                    let back: Vec<BitString> =
                        mirrored.codewords.iter().map(|c| c.bits().complement()).collect();
                    let direct: Vec<BitString> = direct.codewords.iter().map(|c| c.bits().clone()).collect();
                    assert_eq!(direct, back);
                    checked += 1;
                }
            }
        }
        assert!(checked > 100_000);
    }
}

#[test]
fn single_segment_streams_verify() {
    for params in codes() {
        let r = exhaustive_verify(&params, 1).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.decodes > 0);
    }
}

/// A deletion in the middle segment of three, in the spirit of a short
/// worked example: every segment comes back.
#[test]
fn deletion_in_middle_segment() {
    let params = CodeParams::insdel(7, None).unwrap();
    let all = members(&params);
    let cws = [all[1].clone(), all[5].clone(), all[9].clone()];
    let x = params.encode_codewords(&cws).unwrap();
    let n = params.n();
    for pos in n + 1..=2 * n {
        let y = x.bits.deleted(pos);
        let r = params.decode(&y, 3).unwrap();
        assert_eq!(r.codewords, cws);
        assert_eq!(r.absolute_boundaries[1], 2 * n - 1);
    }
}

#[test]
fn edit_unreachable_cases_never_fire() {
    let params = CodeParams::edit(8, None).unwrap();
    let r = exhaustive_verify(&params, 2).unwrap();
    assert!(r.passed());
    assert!(r.unreachable.is_empty(), "{:?}", r.unreachable);
    for case in ["B12", "B5.4", "B2.2"] {
        assert!(!r.cases.contains_key(case));
    }
}

/// Every input that reaches the weight-gap test, over full balls of
/// codeword triples in both marker orientations, gets a sound boundary.
#[test]
fn edit_weight_gap_is_decisive() {
    let params = CodeParams::edit(8, None).unwrap();
    let all = members(&params);
    let tails = sample_members(&params);
    let mut reached = 0;
    for c1 in all.iter().step_by(3) {
        for c2 in &all {
            for c3 in &tails {
                let cws = [c1.clone(), c2.clone(), c3.clone()];
                let x = params.encode_codewords(&cws).unwrap();
                for y in gap_candidates(&x, &params) {
                    let r = params.decode(&y, 3).unwrap();
                    for (i, case) in r.cases.iter().enumerate() {
                        if *case == "B7.2:gap" {
                            reached += 1;
                            let p = r.absolute_boundaries[i];
                            assert!(suffix_in_segmented_ball(&y[p..], &x, &params, i + 2).is_some());
                        }
                    }
                    assert_eq!(r.codewords, cws);
                }
            }
        }
    }
    assert!(reached > 0);
}

/// Outputs where segment 1 kept its codeword window and its trailing
/// marker lost or gained a bit, with any error in segment 2.
fn gap_candidates(x: &Stream, params: &CodeParams) -> Vec<BitString> {
    let n = params.n();
    let s1 = x.segment(params, 1);
    let mut firsts = vec![];
    for pos in n - 5..=n {
        firsts.push(BitString::from(s1).deleted(pos));
    }
    for pos in n - 5..=n + 1 {
        firsts.push(BitString::from(s1).inserted(pos, 0));
    }
    let mut out = vec![];
    for f in firsts {
        for s2 in single_ball(x.segment(params, 2), params.mode()) {
            let mut y = f.clone();
            y.extend_from_slice(&s2);
            y.extend_from_slice(x.segment(params, 3));
            out.push(y);
        }
    }
    out
}

#[test]
fn mode_and_length_errors() {
    let ins = CodeParams::insdel(7, None).unwrap();
    let ed = CodeParams::edit(8, None).unwrap();
    let y = BitString::zeros(ed.n());
    assert!(insdel::decode_stream(&y, &ed, 1).is_err());
    assert!(edit::decode_stream(&y, &ins, 1).is_err());
    assert!(matches!(ins.decode(&BitString::zeros(30), 1), Err(Error::StreamLength { .. })));
    assert_eq!(ins.decode(&[], 0), Err(Error::NoSegments));
    // two deletions in one segment leave the stream too short
    let c = members(&ins)[3].clone();
    let x = ins.encode_codewords(&[c.clone(), c]).unwrap();
    let y = x.bits.deleted(2).deleted(2).deleted(16);
    assert!(ins.decode(&y, 2).is_err());
}

#[test]
fn messages_round_trip_through_both_codes() {
    for params in codes() {
        let len = params.message_len().unwrap();
        let vt: VtParams = *params.vt();
        let msgs: Vec<_> = (0..1u32 << len)
            .map(|v| {
                let bits: Vec<u8> = (0..len).map(|i| ((v >> i) & 1) as u8).collect();
                segcode::Message::new(BitString::from(&bits[..]))
            })
            .collect();
        let x = params.encode(&msgs).unwrap();
        assert_eq!(x.bits.len(), params.n() * msgs.len());
        let r = params.decode(&x.bits, msgs.len()).unwrap();
        assert_eq!(r.messages.unwrap(), msgs);
        for c in &r.codewords {
            assert!(vt.contains(c.bits()));
        }
    }
}
