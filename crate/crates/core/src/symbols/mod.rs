//! Operator symbols, ellipticity, whole-space inversion and wave factorizations.

mod ellipticity;
mod factor;
mod index;
mod spec;

pub use ellipticity::{apply_pdo, check_ellipticity, solve_full_space, EllipticityReport, FullSpaceSolution, ELLIPTICITY_TOL};
pub use factor::{validate_factor_support, FactorizedSymbol, FactorizationReport, SupportReport, SUPPORT_TOL};
pub use index::{build_qn, decompose_index, IndexDecomposition};
pub use spec::{eval_symbol, FactorSide, SymbolSpec};
