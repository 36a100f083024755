//! Named random substreams derived from a base seed.
//!
//! Every consumer of randomness draws from `ChaCha8Rng::seed_from_u64(seed)`
//! with a fixed stream id, so changing how many numbers one consumer draws
//! never shifts another consumer's sequence.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    EdgeWeights,
    GraphPairing,
    SpectrumParameters,
    HaarStates,
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Stream::EdgeWeights => 1,
            Stream::GraphPairing => 2,
            Stream::SpectrumParameters => 3,
            Stream::HaarStates => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stream::EdgeWeights => "edge-weights",
            Stream::GraphPairing => "graph-pairing",
            Stream::SpectrumParameters => "spectrum-parameters",
            Stream::HaarStates => "haar-states",
        }
    }
}

pub fn substream(seed: u64, stream: Stream) -> ChaCha8Rng {
    log::trace!("rng substream {} from seed {seed}", stream.name());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.id());
    rng
}

/// Mixes a tag into a seed (SplitMix64 finalizer), for per-item seeds such
/// as one spectrum sample set per (graph, layer, ansatz).
pub fn derive(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
