use serde::Serialize;

use crate::cones::{ConeRestricted, Orientation};
use crate::error::Result;
use crate::lattice::{norm_hs, transform, Direction, Grid, SampledField, Side, SmoothnessVector};
use crate::symbols::FactorizedSymbol;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridEcho {
    pub blocks: Vec<Vec<usize>>,
    pub extents: Vec<f64>,
    pub counts: Vec<usize>,
}

impl From<&Grid> for GridEcho {
    fn from(g: &Grid) -> Self {
        Self {
            blocks: g.partition().blocks().to_vec(),
            extents: g.extents().to_vec(),
            counts: g.counts().to_vec(),
        }
    }
}

/// Norms of `A_=^{-1} ũ₋`, where `ũ₋ = Aũ − ℓ̃v` is the part of `Au` not
/// accounted for by the data, at two candidate orders.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RemainderNorms {
    /// Order `S + α − æ`.
    pub s_plus_alpha_minus_index: f64,
    /// Order `S − æ`.
    pub s_minus_index: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LayerNorm {
    pub l: Vec<u32>,
    pub order: SmoothnessVector,
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    /// `‖χ_C (Au − ℓv)‖₀ / ‖v‖₀`, restricted to the open cone.
    pub residual_rel: f64,
    /// Fraction of `Σ|u|²` on nodes outside `C̄`.
    pub support_leak: f64,
    /// `‖u‖_S / ‖ℓv‖_{S−α}`.
    pub apriori_ratio: f64,
    pub remainder_norms: RemainderNorms,
    pub layer_norms: Vec<LayerNorm>,
    pub grid: GridEcho,
}

/// Fraction of `Σ|u|²` carried by nodes outside `C̄`.
pub fn support_leak(u: &SampledField, cone: &crate::cones::ConeSpec) -> Result<f64> {
    u.expect_side(Side::Space)?;
    let mask = cone.mask(u.grid(), false, Orientation::Direct)?;
    let (mut out, mut total) = (0.0, 0.0);
    for (v, &inside) in u.values().iter().zip(mask.iter()) {
        let e = v.norm_sqr();
        total += e;
        if !inside {
            out += e;
        }
    }
    Ok(if total > 0.0 { out / total } else { 0.0 })
}

/// Postcondition checks for a candidate solution `u` of `P_C A u = v`.
///
/// `lv` is the continuation of `v` the solver used.
pub fn diagnostics(
    u: &SampledField,
    v: &ConeRestricted,
    lv: &SampledField,
    fac: &FactorizedSymbol,
    s: &SmoothnessVector,
) -> Result<SolveReport> {
    let grid = u.grid();
    let cone = &fac.cone;
    let plus = fac.eval_plus(grid)?;
    let minus = fac.eval_minus(grid)?;
    let a = plus.mul(&minus)?;

    let ut = transform(u, Direction::Forward)?;
    let lvt = transform(lv, Direction::Forward)?;
    let aut = ut.mul(&a)?;
    let au = transform(&aut, Direction::Inverse)?;

    let interior = cone.mask(grid, true, Orientation::Direct)?;
    let mut num = 0.0;
    for ((x, y), &inside) in au.values().iter().zip(lv.values().iter()).zip(interior.iter()) {
        if inside {
            num += (x - y).norm_sqr();
        }
    }
    let den = v.zero_extension().sum_sq();
    let residual_rel = if den > 0.0 { (num / den).sqrt() } else if num > 0.0 { f64::INFINITY } else { 0.0 };

    let rhs_norm = norm_hs(&lvt, &(s - &fac.order))?;
    let apriori_ratio = if rhs_norm > 0.0 { norm_hs(&ut, s)? / rhs_norm } else { 0.0 };

    let rest = aut.sub(&lvt)?.div(&minus)?;
    let s_minus_index = s - &fac.index;
    let remainder_norms = RemainderNorms {
        s_plus_alpha_minus_index: norm_hs(&rest, &(&s_minus_index + &fac.order))?,
        s_minus_index: norm_hs(&rest, &s_minus_index)?,
    };

    Ok(SolveReport {
        residual_rel,
        support_leak: support_leak(u, cone)?,
        apriori_ratio,
        remainder_norms,
        layer_norms: Vec::new(),
        grid: GridEcho::from(grid),
    })
}
