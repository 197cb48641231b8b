use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use segcode::bitio::{pack_bits, read_frame, unpack_bits, write_frame, Frame, HEADER_LEN};
use segcode::{BitString, CodeParams, Error};

#[test]
fn random_bits_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let bits: Vec<u8> = (0..100_000).map(|_| rng.random_range(0..=1u8)).collect();
    let packed = pack_bits(&bits);
    assert_eq!(packed.len(), 12_500);
    assert_eq!(unpack_bits(&packed, bits.len()).unwrap().as_slice(), &bits[..]);
    for len in 0..20 {
        let b = &bits[..len];
        assert_eq!(unpack_bits(&pack_bits(b), len).unwrap().as_slice(), b);
    }
}

#[test]
fn frame_layout_is_bit_exact() {
    let params = CodeParams::edit(8, Some(3)).unwrap();
    let payload: BitString = "10110".parse().unwrap();
    let mut frame = Frame::new(params, 7, payload);
    let bytes = write_frame(&frame).unwrap();
    assert_eq!(
        bytes,
        [b'S', b'G', b'C', b'1', 0x01, 0x01, 0, 8, 0, 3, 0, 0, 0, 7, 0, 0, 0, 0, 0, 0, 0, 5, 0xB0]
    );
    assert_eq!(read_frame(&bytes).unwrap(), frame);

    frame.message_bits = Some(4);
    let bytes = write_frame(&frame).unwrap();
    assert_eq!(bytes.len(), HEADER_LEN + 1 + 8);
    let back = read_frame(&bytes).unwrap();
    assert_eq!(back, frame);
    assert_eq!(write_frame(&back).unwrap(), bytes);
}

#[test]
fn encoded_stream_frame_round_trip() {
    let params = CodeParams::insdel(15, None).unwrap();
    let msgs = segcode::bench::random_messages(&params, 5000, 3).unwrap();
    let x = params.encode(&msgs).unwrap();
    let frame = Frame::new(params, x.segments as u32, x.bits.clone());
    let bytes = write_frame(&frame).unwrap();
    let back = read_frame(&bytes).unwrap();
    assert_eq!(back.payload.len(), params.n() * x.segments);
    let r = back.params.decode(&back.payload, back.t as usize).unwrap();
    assert_eq!(r.messages.unwrap(), msgs);
}

#[test]
fn malformed_frames_are_rejected() {
    let params = CodeParams::insdel(7, None).unwrap();
    let good = write_frame(&Frame::new(params, 1, BitString::zeros(14))).unwrap();
    let mut bad = good.clone();
    bad[4] = 2;
    assert_eq!(read_frame(&bad), Err(Error::Frame("unsupported version")));
    let mut bad = good.clone();
    bad[5] = 9;
    assert_eq!(read_frame(&bad), Err(Error::Frame("unknown mode byte")));
    assert_eq!(read_frame(&good[..good.len() - 1]), Err(Error::Frame("truncated payload")));
    let mut bad = good.clone();
    bad.push(0);
    assert_eq!(read_frame(&bad), Err(Error::Frame("trailing bytes after payload")));
    let mut bad = good.clone();
    bad[7] = 2; // k = 2
    assert!(matches!(read_frame(&bad), Err(Error::LengthTooSmall { .. })));
    let mut bad = good;
    bad[9] = 4; // a = T for k = 7
    assert!(matches!(read_frame(&bad), Err(Error::ExcludedResidue { .. })));
}
