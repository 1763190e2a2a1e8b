//! Block-partitioned grids, the Fourier transform and Sobolev–Slobodetskii norms.

mod field;
mod fft;
mod grid;
pub mod io;
mod norms;
mod partition;

pub use field::{SampledField, Side};
pub use fft::{transform, transform_axes, Direction};
pub use grid::{make_grid, Grid};
pub use norms::{norm_hs, norm_hs0_upper, weight, weight_values};
pub use partition::{BlockPartition, SmoothnessVector};
