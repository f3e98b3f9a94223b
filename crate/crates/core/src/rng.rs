//! Seed plumbing. Every random stream in a run is derived from one master
//! seed plus a component label and index, so trials can run in any order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SwarmRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SwarmRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for `(component, index)` under `master`.
///
/// The component label is folded in with FNV-1a so the derivation is stable
/// across platforms and compiler versions.
pub fn child_seed(master: u64, component: &str, index: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in component.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    splitmix64(splitmix64(master ^ h).wrapping_add(index))
}
