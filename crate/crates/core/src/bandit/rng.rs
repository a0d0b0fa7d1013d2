use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used everywhere in the crate: ChaCha8 with a 64-bit stream id.
pub type BanditRng = ChaCha8Rng;

/// Returns the stream `stream_id` of the ChaCha8 generator keyed by `base_seed`.
///
/// Distinct stream ids give independent keystreams under the same key, so a
/// repetition can hand separate streams to contexts, rewards and the policy.
pub fn seeded_rng(base_seed: u64, stream_id: u64) -> BanditRng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(stream_id);
    rng
}
