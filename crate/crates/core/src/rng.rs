//! Seeded random streams.
//!
//! Every random draw in the crate comes from xoshiro256** seeded through
//! SplitMix64 with the user seed, then advanced by `stream` jumps of 2^128
//! steps. Independent consumers (trace sampling, channel draws, relay
//! combining coefficients, parallel runs) use distinct stream ids, so adding
//! draws to one never shifts another.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256StarStar;

pub type StreamRng = Xoshiro256StarStar;

pub const TRACE_STREAM: u64 = 0;
pub const CHANNEL_STREAM: u64 = 1;
pub const COMBINER_STREAM: u64 = 2;
pub const PENALTY_STREAM: u64 = 3;

pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    for _ in 0..stream {
        rng.jump();
    }
    rng
}
