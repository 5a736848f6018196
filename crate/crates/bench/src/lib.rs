//! Inputs shared by the benchmarks.

use qtfa_core::random::band_limited_pair;
use qtfa_core::{GridSpec, SampledSignal};

pub const SEED: u64 = 7;

/// A seeded band-limited (signal, window) pair on the `d = 1` grid with `n` samples per axis.
pub fn pair(n: usize, half_extent: f64) -> (SampledSignal, SampledSignal) {
    let grid = GridSpec::new(1, n, half_extent).expect("valid grid");
    let (f, g) = band_limited_pair(&grid, SEED, 0).expect("seeded pair");
    (f.sample(&grid).expect("sampled"), g.sample(&grid).expect("sampled"))
}
