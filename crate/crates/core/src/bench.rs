//! Throughput measurement for encode and decode.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitString;
use crate::error::Error;
use crate::oracle::apply_random_errors_with;
use crate::segment::{CodeParams, Stream};
use crate::vt::Message;

/// Channel condition for a measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Load {
    /// No errors.
    Clean,
    /// One random error in every segment.
    MaxErrors,
}

impl Load {
    pub fn as_str(self) -> &'static str {
        match self {
            Load::Clean => "clean",
            Load::MaxErrors => "max-errors",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Throughput {
    /// Bits processed per repetition (stream length for encode, received
    /// length for decode).
    pub bits: usize,
    pub reps: u32,
    pub elapsed: Duration,
}

impl Throughput {
    pub fn bits_per_sec(&self) -> f64 {
        self.bits as f64 * f64::from(self.reps) / self.elapsed.as_secs_f64()
    }
}

/// Random messages for a stream of about `target_bits` bits.
pub fn random_messages(params: &CodeParams, target_bits: usize, seed: u64) -> Result<Vec<Message>, Error> {
    let t = target_bits.div_ceil(params.n()).max(1);
    let len = params.message_len()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..t)
        .map(|_| {
            let bits: Vec<u8> = (0..len).map(|_| rng.random_range(0..=1u8)).collect();
            Message::new(BitString::from(&bits[..]))
        })
        .collect())
}

/// Received stream under the given load.
pub fn channel(stream: &Stream, params: &CodeParams, load: Load, seed: u64) -> BitString {
    match load {
        Load::Clean => stream.bits.clone(),
        Load::MaxErrors => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            apply_random_errors_with(&mut rng, stream, params, 1.0).0
        }
    }
}

fn repeat<F: FnMut() -> Result<(), Error>>(bits: usize, min_time: Duration, mut f: F) -> Result<Throughput, Error> {
    let start = Instant::now();
    let mut reps = 0u32;
    loop {
        f()?;
        reps += 1;
        let elapsed = start.elapsed();
        if elapsed >= min_time {
            return Ok(Throughput { bits, reps, elapsed });
        }
    }
}

/// Encodes a stream of about `target_bits` bits repeatedly for at least
/// `min_time`.
pub fn measure_encode(
    params: &CodeParams,
    target_bits: usize,
    seed: u64,
    min_time: Duration,
) -> Result<Throughput, Error> {
    let messages = random_messages(params, target_bits, seed)?;
    let bits = messages.len() * params.n();
    repeat(bits, min_time, || params.encode(&messages).map(drop))
}

/// Decodes a received stream of about `target_bits` bits repeatedly for at
/// least `min_time`.
pub fn measure_decode(
    params: &CodeParams,
    target_bits: usize,
    load: Load,
    seed: u64,
    min_time: Duration,
) -> Result<Throughput, Error> {
    let messages = random_messages(params, target_bits, seed)?;
    let stream = params.encode(&messages)?;
    let y = channel(&stream, params, load, seed.wrapping_add(1));
    let t = stream.segments;
    repeat(y.len(), min_time, || {
        let r = params.decode(&y, t)?;
        debug_assert_eq!(r.messages.as_deref(), Some(&messages[..]));
        Ok(())
    })
}
