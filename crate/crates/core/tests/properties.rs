use proptest::prelude::*;
use segcode::bitio::{pack_bits, unpack_bits};
use segcode::oracle::{apply_random_errors, is_in_segmented_ball};
use segcode::vt::{all_ones_syndrome, syndrome};
use segcode::{BitString, CodeParams, Message, Mode};

fn params_strategy() -> impl Strategy<Value = CodeParams> {
    prop_oneof![
        (prop_oneof![Just(3usize), Just(7), Just(15)]).prop_map(|k| CodeParams::insdel(k, None).unwrap()),
        (prop_oneof![Just(4usize), Just(8), Just(16)]).prop_map(|k| CodeParams::edit(k, None).unwrap()),
    ]
}

fn messages(params: &CodeParams, raw: &[u8]) -> Vec<Message> {
    let len = params.message_len().unwrap();
    let t = raw.len().div_ceil(len).max(1);
    let mut bits = raw.to_vec();
    bits.resize(t * len, 0);
    bits.chunks(len).map(|c| Message::new(c.into())).collect()
}

proptest! {
    #[test]
    fn pack_unpack_inverse(bits in proptest::collection::vec(0u8..=1, 0..300)) {
        let back = unpack_bits(&pack_bits(&bits), bits.len()).unwrap();
        prop_assert_eq!(back.as_slice(), &bits[..]);
    }

    #[test]
    fn complement_syndrome(bits in proptest::collection::vec(0u8..=1, 3..40), double in any::<bool>()) {
        let k = bits.len();
        let m = if double { 2 * k } else { k + 1 };
        let v = BitString::from(&bits[..]);
        let t = all_ones_syndrome(k, m);
        prop_assert_eq!(syndrome(&v.complement(), m), (t + m - syndrome(&v, m)) % m);
    }

    #[test]
    fn noisy_streams_decode(
        params in params_strategy(),
        raw in proptest::collection::vec(0u8..=1, 1..200),
        seed in any::<u64>(),
        prob in 0.0f64..=1.0,
    ) {
        let msgs = messages(&params, &raw);
        let x = params.encode(&msgs).unwrap();
        let (y, _) = apply_random_errors(&x, &params, seed, prob);
        prop_assert!(is_in_segmented_ball(&y, &x, &params).is_some());
        let r = params.decode(&y, msgs.len()).unwrap();
        prop_assert_eq!(r.messages.unwrap(), msgs);
        prop_assert_eq!(r.boundaries.len(), x.segments - 1);
    }

    #[test]
    fn bit_string_text_round_trip(bits in proptest::collection::vec(0u8..=1, 0..100)) {
        let b = BitString::from(&bits[..]);
        let back: BitString = b.to_string().parse().unwrap();
        prop_assert_eq!(back, b);
    }

    #[test]
    fn substitutions_break_insdel_streams_cleanly(
        raw in proptest::collection::vec(0u8..=1, 8..60),
        pos in any::<prop::sample::Index>(),
    ) {
        // an insdel decoder given a substitution may fail or return other
        // codewords, but it must not panic
        let params = CodeParams::new(Mode::Insdel, 7, None).unwrap();
        let msgs = messages(&params, &raw);
        let x = params.encode(&msgs).unwrap();
        let y = x.bits.flipped(pos.index(x.bits.len()) + 1);
        let _ = params.decode(&y, msgs.len());
    }
}
