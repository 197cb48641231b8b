use segcode::bits::{bits, BitString};
use segcode::vt::{all_ones_syndrome, syndrome};
use segcode::{Message, VtParams};

/// Members of the code that reach `y` with one deletion, insertion or
/// (optionally) substitution, found by trying every member.
fn brute_nearest(vt: &VtParams, y: &[u8], substitutions: bool) -> Vec<BitString> {
    let close = |c: &BitString| {
        let near = |w: &BitString| w.as_slice() == y;
        (1..=c.len()).any(|p| near(&c.deleted(p)))
            || (1..=c.len() + 1).any(|p| near(&c.inserted(p, 0)) || near(&c.inserted(p, 1)))
            || (substitutions && (1..=c.len()).any(|p| near(&c.flipped(p))))
            || c.as_slice() == y
    };
    vt.members().filter(close).collect()
}

#[test]
fn deletion_correction_matches_brute_force() {
    let vt = VtParams::insdel(7, None).unwrap();
    for c in vt.members() {
        for p in 1..=7 {
            let y = c.deleted(p);
            assert_eq!(brute_nearest(&vt, &y, false), vec![c.clone()]);
            assert_eq!(vt.correct_deletion(&y).unwrap().bits(), &c);
        }
    }
}

#[test]
fn insertion_correction_matches_brute_force() {
    let vt = VtParams::insdel(7, None).unwrap();
    for c in vt.members() {
        for p in 1..=8 {
            for b in 0..=1 {
                let y = c.inserted(p, b);
                assert_eq!(brute_nearest(&vt, &y, false), vec![c.clone()]);
                assert_eq!(vt.correct_insertion(&y).unwrap().bits(), &c);
            }
        }
    }
}

#[test]
fn substitution_correction_matches_brute_force() {
    let vt = VtParams::edit(8, None).unwrap();
    for c in vt.members() {
        for p in 1..=8 {
            let y = c.flipped(p);
            assert_eq!(brute_nearest(&vt, &y, true), vec![c.clone()]);
            assert_eq!(vt.correct_substitution(&y).unwrap().bits(), &c);
            assert_eq!(vt.correct_single_edit(&y).unwrap().bits(), &c);
        }
    }
}

/// One corrupted word per branch, built from 1100 in VT_3(8;4).
#[test]
fn small_edit_code_branches() {
    let vt = VtParams::new(4, 8, 3).unwrap();
    let c = bits("1100");
    assert!(vt.contains(&c));
    for y in [bits("100"), bits("11000"), bits("1110"), bits("0100")] {
        assert_eq!(brute_nearest(&vt, &y, true), vec![c.clone()]);
        assert_eq!(vt.correct_single_edit(&y).unwrap().bits(), &c);
    }
}

#[test]
fn systematic_round_trip_all_messages() {
    let vt = VtParams::edit(8, None).unwrap();
    assert_eq!(vt.message_len().unwrap(), 4);
    for v in 0u8..16 {
        let m: Vec<u8> = (0..4).map(|i| (v >> i) & 1).collect();
        let msg = Message::new(BitString::from(&m[..]));
        let cw = vt.encode_systematic(&msg).unwrap();
        assert!(vt.contains(cw.bits()));
        assert_eq!(vt.extract_message(&cw).unwrap(), msg);
    }
    let vt = VtParams::insdel(15, None).unwrap();
    assert_eq!(vt.message_len().unwrap(), 11);
}

#[test]
fn complement_syndrome_identity() {
    for k in 3..=12 {
        for m in [k + 1, 2 * k] {
            let t = all_ones_syndrome(k, m);
            for x in 0u32..1 << k {
                let v: Vec<u8> = (0..k).map(|i| ((x >> i) & 1) as u8).collect();
                let c: Vec<u8> = v.iter().map(|b| b ^ 1).collect();
                assert_eq!(syndrome(&c, m), (t + m - syndrome(&v, m)) % m);
            }
        }
    }
}

#[test]
fn code_sizes_match_enumeration() {
    // residue classes of a VT code partition all words, so sizes sum to 2^k
    for k in 3..=10 {
        for m in [k + 1, 2 * k] {
            let total: usize = (0..m)
                .map(|a| VtParams::any_residue(k, m, a).unwrap().members().count())
                .sum();
            assert_eq!(total, 1 << k);
        }
    }
}

#[test]
fn parameter_validation() {
    assert!(VtParams::new(2, 3, 1).is_err());
    assert!(VtParams::new(7, 9, 1).is_err());
    assert!(VtParams::new(7, 8, 8).is_err());
    assert!(VtParams::new(7, 8, 0).is_err());
    // T = 28 mod 8 = 4 is excluded too
    assert!(VtParams::new(7, 8, 4).is_err());
    assert!(VtParams::any_residue(7, 8, 0).is_ok());
    assert!(VtParams::new(6, 7, 1).unwrap().message_len().is_err());
}
