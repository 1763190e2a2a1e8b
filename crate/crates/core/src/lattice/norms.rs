use ndarray::Dimension;
use ndarray::{ArrayD, IxDyn};
use num_complex::Complex64;

use crate::cones::ConeRestricted;
use crate::error::{Error, Result};

use super::{transform, Direction, Grid, SampledField, Side, SmoothnessVector};

/// `w_S(ξ) = ∏_j (1 + |ξ_{K_j}|)^{s_j}` as a real array over the frequency grid.
pub fn weight_values(grid: &Grid, s: &SmoothnessVector) -> Result<ArrayD<f64>> {
    let partition = grid.partition();
    s.check(partition, "smoothness vector")?;
    let axes: Vec<Vec<f64>> = (0..grid.dims()).map(|i| grid.axis_xi(i)).collect();
    let mut out = ArrayD::from_elem(IxDyn(grid.counts()), 1.0);
    for (idx, w) in out.indexed_iter_mut() {
        let idx = idx.slice();
        for (j, &sj) in s.values().iter().enumerate() {
            if sj == 0.0 {
                continue;
            }
            let r2: f64 = partition.block(j).iter().map(|&a| axes[a][idx[a]].powi(2)).sum();
            *w *= (1.0_f64 + r2.sqrt()).powf(sj);
        }
    }
    Ok(out)
}

/// The weight `w_S` as a frequency-side field (real and positive).
pub fn weight(grid: &Grid, s: &SmoothnessVector) -> Result<SampledField> {
    let w = weight_values(grid, s)?;
    SampledField::from_values(grid, Side::Frequency, w.mapv(Complex64::from))
}

/// Discrete `H^S` norm `((2π)^{-M} Σ w_S² |ũ|² ∏Δξ)^{1/2}`.
///
/// Space-side fields are transformed first. With `S = 0` the value equals the
/// discrete L² norm `(∏h Σ|u|²)^{1/2}` exactly (Plancherel on the grid).
pub fn norm_hs(f: &SampledField, s: &SmoothnessVector) -> Result<f64> {
    let spectrum;
    let ft = match f.side() {
        Side::Frequency => f,
        Side::Space => {
            spectrum = transform(f, Direction::Forward)?;
            &spectrum
        }
    };
    let w = weight_values(f.grid(), s)?;
    let total: f64 = ft
        .values()
        .iter()
        .zip(w.iter())
        .map(|(v, w)| w * w * v.norm_sqr())
        .sum();
    Ok((total * f.grid().dual_cell_volume()).sqrt())
}

/// Upper bound for the quotient norm `inf ‖ℓv‖_S` over continuations `ℓv`.
///
/// Returns the minimum of `norm_hs` over the supplied candidates; the true
/// infimum over all continuations can only be smaller.
pub fn norm_hs0_upper(v: &ConeRestricted, candidates: &[SampledField], s: &SmoothnessVector) -> Result<f64> {
    if candidates.is_empty() {
        return Err(Error::Shape("at least one continuation is required".into()));
    }
    let mut best = f64::INFINITY;
    for c in candidates {
        v.check_agrees(c)?;
        best = best.min(norm_hs(c, s)?);
    }
    Ok(best)
}
