//! Workloads shared by the benchmarks in `benches/`.

use conepdo::fixtures::{random_envelope, rng, EnvelopeParams};
use conepdo::{make_grid, BlockPartition, Grid, SampledField};

/// A single-block grid of `dims` axes with `m` nodes each on `[−10, 10)`.
pub fn grid(dims: usize, m: usize) -> Grid {
    make_grid(BlockPartition::single_block(dims).expect("dims ≥ 1"), vec![10.0; dims], vec![m; dims])
        .expect("valid grid")
}

/// Seeded space-side test field.
pub fn field(grid: &Grid, seed: u64) -> SampledField {
    random_envelope(grid, &EnvelopeParams::default(), &mut rng(seed))
}
