use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::BlockPartition;

/// Uniform grid on the box `∏[-ℓ_i, ℓ_i)` with its dual frequency grid.
///
/// Node ordering is row-major with the last axis fastest. Along axis `i`
/// space index `j ∈ 0..m` sits at `x = -ℓ + j·h` with `h = 2ℓ/m`, so `x = 0`
/// is index `m/2`. Frequency index `p ∈ 0..m` sits at `ξ = π(p - m/2)/ℓ`:
/// the Nyquist node `-m/2` is present, `+m/2` is not, and `ξ = 0` is `m/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    partition: BlockPartition,
    extents: Vec<f64>,
    counts: Vec<usize>,
}

pub fn make_grid(partition: BlockPartition, extents: Vec<f64>, counts: Vec<usize>) -> Result<Grid> {
    let dims = partition.dims();
    if extents.len() != dims || counts.len() != dims {
        return Err(Error::Grid(format!(
            "expected {dims} extents and counts, got {} and {}",
            extents.len(),
            counts.len()
        )));
    }
    for (i, &l) in extents.iter().enumerate() {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::Grid(format!("extent {l} on axis {i} must be positive")));
        }
    }
    for (i, &m) in counts.iter().enumerate() {
        if m == 0 || m % 2 != 0 {
            return Err(Error::Grid(format!("count {m} on axis {i} must be positive and even")));
        }
    }
    Ok(Grid { partition, extents, counts })
}

impl Grid {
    pub fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    pub fn dims(&self) -> usize {
        self.counts.len()
    }

    pub fn extents(&self) -> &[f64] {
        &self.extents
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        2.0 * self.extents[axis] / self.counts[axis] as f64
    }

    pub fn dxi(&self, axis: usize) -> f64 {
        PI / self.extents[axis]
    }

    pub fn x(&self, axis: usize, j: usize) -> f64 {
        -self.extents[axis] + j as f64 * self.spacing(axis)
    }

    /// Centered frequency index `k = p - m/2`.
    pub fn freq_index(&self, axis: usize, p: usize) -> i64 {
        p as i64 - (self.counts[axis] / 2) as i64
    }

    pub fn xi(&self, axis: usize, p: usize) -> f64 {
        self.freq_index(axis, p) as f64 * self.dxi(axis)
    }

    pub fn axis_x(&self, axis: usize) -> Vec<f64> {
        (0..self.counts[axis]).map(|j| self.x(axis, j)).collect()
    }

    pub fn axis_xi(&self, axis: usize) -> Vec<f64> {
        (0..self.counts[axis]).map(|p| self.xi(axis, p)).collect()
    }

    /// `∏ h_i`, the space-side cell volume.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dims()).map(|i| self.spacing(i)).product()
    }

    /// `(2π)^{-M} ∏ Δξ_i`, the frequency-side measure used by the norms.
    pub fn dual_cell_volume(&self) -> f64 {
        (0..self.dims()).map(|i| self.dxi(i) / (2.0 * PI)).product()
    }

    /// Same partition and extents, different counts.
    pub fn with_counts(&self, counts: Vec<usize>) -> Result<Grid> {
        make_grid(self.partition.clone(), self.extents.clone(), counts)
    }

    pub(crate) fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.dims() {
            return Err(Error::Axis { axis, dims: self.dims() });
        }
        Ok(())
    }
}
