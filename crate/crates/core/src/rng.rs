//! Seeded random streams.
//!
//! Every episode owns a seed; each consumer (environment draws, policy
//! sampling, instance generation) reads from its own ChaCha stream. The
//! environment additionally jumps to a fixed word offset per round, so the
//! reward and cost draws of round `t` are the same no matter how many
//! numbers earlier rounds consumed. Two policies run on the same seed
//! therefore face common random numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// 32-bit words reserved per environment round (one reward draw plus up to
/// 31 cost draws at two words per `f64`).
const WORDS_PER_ROUND: u128 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Environment = 1,
    Policy = 2,
    Instances = 3,
}

pub fn stream(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Generator positioned at the start of round `round`'s environment block.
pub fn environment_round(seed: u64, round: usize) -> ChaCha8Rng {
    let mut rng = stream(seed, Stream::Environment);
    rng.set_word_pos(round as u128 * WORDS_PER_ROUND);
    rng
}
