use ndarray::Dimension;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{norm_hs, transform, weight_values, Direction, SampledField, Side, SmoothnessVector};

/// Default threshold on `c1` below which a symbol is declared degenerate.
pub const ELLIPTICITY_TOL: f64 = 1e-10;

/// Grid certificate for `c1 w_α ≤ |A| ≤ c2 w_α`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EllipticityReport {
    pub c1: f64,
    pub c2: f64,
    pub elliptic: bool,
    /// Node where `|A|/w_α` is smallest.
    pub argmin: Vec<usize>,
}

pub fn check_ellipticity(a: &SampledField, alpha: &SmoothnessVector, tol: f64) -> Result<EllipticityReport> {
    a.expect_side(Side::Frequency)?;
    let w = weight_values(a.grid(), alpha)?;
    let mut c1 = f64::INFINITY;
    let mut c2 = 0.0_f64;
    let mut argmin = vec![0; a.grid().dims()];
    for ((idx, v), w) in a.values().indexed_iter().zip(w.iter()) {
        let r = v.norm() / w;
        if r < c1 || r.is_nan() {
            c1 = r;
            argmin = idx.slice().to_vec();
        }
        c2 = c2.max(r);
    }
    Ok(EllipticityReport { c1, c2, elliptic: c1 > tol, argmin })
}

/// `u ↦ F^{-1}(A ũ)`.
pub fn apply_pdo(a: &SampledField, u: &SampledField) -> Result<SampledField> {
    a.expect_side(Side::Frequency)?;
    u.expect_side(Side::Space)?;
    a.check_same_grid(u)?;
    let ut = transform(u, Direction::Forward)?;
    transform(&ut.mul(a)?, Direction::Inverse)
}

#[derive(Clone, Debug)]
pub struct FullSpaceSolution {
    pub u: SampledField,
    /// `‖u‖_S / ‖v‖_{S−α}`.
    pub ratio: f64,
    /// Ellipticity constant; `ratio ≤ 1/c1` always holds.
    pub c1: f64,
}

/// Unique solution of `Au = v` on `ℝ^M`: `ũ = ṽ / A`.
pub fn solve_full_space(
    a: &SampledField,
    v: &SampledField,
    s: &SmoothnessVector,
    alpha: &SmoothnessVector,
) -> Result<FullSpaceSolution> {
    v.expect_side(Side::Space)?;
    a.check_same_grid(v)?;
    let cert = check_ellipticity(a, alpha, ELLIPTICITY_TOL)?;
    if !cert.elliptic {
        return Err(Error::NotElliptic { ratio: cert.c1, node: cert.argmin });
    }
    let vt = transform(v, Direction::Forward)?;
    let ut = vt.div(a)?;
    let den = norm_hs(&vt, &(s - alpha))?;
    let ratio = if den == 0.0 { 0.0 } else { norm_hs(&ut, s)? / den };
    Ok(FullSpaceSolution { u: transform(&ut, Direction::Inverse)?, ratio, c1: cert.c1 })
}
