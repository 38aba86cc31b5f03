//! Deterministic seed derivation for independent replica streams.
//!
//! Experiments address random streams by `(base_seed, stream, replica)`.
//! The derivation below is a pure mixing function, so replicas can be
//! generated in any order (or in parallel) and still see identical streams.

/// SplitMix64 finalizer. Bijective on `u64`, strong avalanche.
fn mix(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed for `(stream, replica)` from a base seed.
///
/// Three rounds of the SplitMix64 finalizer with the two indices xored in
/// between rounds: `mix(mix(mix(base) ^ stream) ^ replica)`. Each round is
/// bijective, so for a fixed base and stream, distinct replicas can never
/// collide; across streams collisions are as unlikely as a 64-bit hash
/// collision.
pub fn split_seed(base: u64, stream: u64, replica: u64) -> u64 {
    mix(mix(mix(base) ^ stream) ^ replica)
}
