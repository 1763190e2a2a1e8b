//! Unique and general solutions of `P_C A u = v` on a cone, shears and diagnostics.

mod diagnostics;
mod extend;
mod shear;
mod solve;

pub use diagnostics::{diagnostics, support_leak, GridEcho, LayerNorm, RemainderNorms, SolveReport};
pub use extend::{extend, ExtensionMode};
pub use shear::{shear, vphi_apply};
pub use solve::{general_solve, solve_cone, GeneralSolutionParams, Layer, LayerField};
