//! Spectral solvers for model elliptic pseudo-differential equations on cones.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`] holds block partitions, uniform grids, the Fourier transform
//!   with kernel `e^{+ix·ξ}`, anisotropic weights and Sobolev–Slobodetskii norms.
//! * [`symbols`] evaluates operator symbols, certifies ellipticity, inverts on
//!   the whole space and validates wave factorizations.
//! * [`cones`] covers cone geometry, the restriction operator and its
//!   frequency-side realizations.
//! * [`solver`] solves the equation on a cone (unique and general solutions)
//!   and reports diagnostics.
//! * [`fixtures`] generates seeded random fields for tests and scenarios.

pub mod cones;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod solver;
pub mod symbols;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use cones::{BlockCone, ConeRestricted, ConeSpec, JumpPair, ProjectorMode};
pub use lattice::{
    make_grid, BlockPartition, Direction, Grid, SampledField, Side, SmoothnessVector,
};
pub use solver::{ExtensionMode, GeneralSolutionParams, SolveReport};
pub use symbols::{FactorizedSymbol, IndexDecomposition, SymbolSpec};
