/// SplitMix64 finalizer; a bijection on `u64` with strong avalanche.
fn mix(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run_index` in grid cell `cell_id`, derived from the
/// experiment's master seed.
pub fn seed_for_run(master_seed: u64, cell_id: u64, run_index: u64) -> u64 {
    mix(mix(mix(master_seed) ^ cell_id) ^ run_index)
}
