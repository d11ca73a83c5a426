//! Seed substream derivation.
//!
//! Every piece of randomness in a simulation flows through a `ChaCha8Rng`
//! derived from one base seed, so a full experiment is bit-reproducible
//! regardless of thread count or execution order. Derivation is a pure
//! hash chain:
//!
//! ```text
//! run    = derive(base, policy-name, run-index)
//! arms   = derive(run, "arms", 0)        permutation of the mean vector
//! policy = derive(run, "policy", 0)      scheduler shuffles, fillers, UCB ties
//! init/m = derive(run, "init", m)        agent m's initial random action
//! chan/m = derive(run, "channel", m)     agent m's erasure draws
//! rew/m  = derive(run, "reward", m)      agent m's reward noise
//! ```
//!
//! The mix is FNV-1a over the tag folded into SplitMix64, which is stable
//! across platforms and rust versions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The RNG used throughout the workspace.
pub type SimRng = ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Derives a child seed from `(seed, tag, index)`.
pub fn derive(seed: u64, tag: &str, index: u64) -> u64 {
    splitmix64(splitmix64(seed ^ fnv1a(tag)) ^ index)
}

/// Convenience: a fresh RNG on the derived substream.
pub fn stream(seed: u64, tag: &str, index: u64) -> SimRng {
    SimRng::seed_from_u64(derive(seed, tag, index))
}
