//! Counter-based random streams: every (seed, point, frame, lane) has its own
//! generator, so results do not depend on how frames are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lane {
    /// Message bits or symbols of a user.
    Message(usize),
    /// Fading gains and noise seen by a user, drawn per channel use.
    Channel(usize),
}

impl Lane {
    fn id(self) -> u64 {
        match self {
            Lane::Message(j) => 2 * j as u64,
            Lane::Channel(j) => 2 * j as u64 + 1,
        }
    }
}

pub fn substream(seed: u64, point: u64, frame: u64, lane: Lane) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    for (chunk, word) in key.chunks_exact_mut(8).zip([seed, point, frame, 0]) {
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(lane.id());
    rng
}
