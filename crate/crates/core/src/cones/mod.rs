//! Cone geometry, restriction to the cone and its frequency-side realizations.

mod bochner;
mod geometry;
mod projector;
mod pv;

pub use bochner::{bochner_project, jump_decompose, JumpPair};
pub use geometry::{indicator, interior_indicator, project_space, BlockCone, ConeRestricted, ConeSpec, Orientation};
pub use projector::{halfline_projector, projector_fourier, shear_fourier, shift_along, ProjectorMode};
pub use pv::pv_transform;
