use ndarray::Dimension;
use std::fmt;

use ndarray::{ArrayD, IxDyn};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::Grid;

/// Which domain a field's samples live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Space,
    Frequency,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Space => "space",
            Side::Frequency => "frequency",
        })
    }
}

/// Complex samples on every node of a grid, tagged with their side.
#[derive(Clone, Debug)]
pub struct SampledField {
    grid: Grid,
    side: Side,
    values: ArrayD<Complex64>,
}

impl SampledField {
    pub fn zeros(grid: &Grid, side: Side) -> Self {
        Self {
            values: ArrayD::zeros(IxDyn(grid.counts())),
            grid: grid.clone(),
            side,
        }
    }

    pub fn from_values(grid: &Grid, side: Side, values: ArrayD<Complex64>) -> Result<Self> {
        if values.shape() != grid.counts() {
            return Err(Error::Shape(format!(
                "values have shape {:?}, grid has {:?}",
                values.shape(),
                grid.counts()
            )));
        }
        Ok(Self { grid: grid.clone(), side, values })
    }

    /// Row-major samples, last axis fastest.
    pub fn from_vec(grid: &Grid, side: Side, values: Vec<Complex64>) -> Result<Self> {
        let n = values.len();
        let arr = ArrayD::from_shape_vec(IxDyn(grid.counts()), values)
            .map_err(|_| Error::Shape(format!("{n} values for a grid of {} nodes", grid.len())))?;
        Ok(Self { grid: grid.clone(), side, values: arr })
    }

    /// Samples `f` at the node coordinates of `side` (`x` or `ξ`).
    pub fn from_fn(grid: &Grid, side: Side, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let mut out = Self::zeros(grid, side);
        out.fill_with(|_, c| f(c));
        out
    }

    /// Overwrites every value with `f(multi-index, coordinates)`.
    pub fn fill_with(&mut self, mut f: impl FnMut(&[usize], &[f64]) -> Complex64) {
        let axes = node_coordinates(&self.grid, self.side);
        let mut coords = vec![0.0; axes.len()];
        for (idx, v) in self.values.indexed_iter_mut() {
            let idx = idx.slice();
            for (c, (&i, ax)) in coords.iter_mut().zip(idx.iter().zip(&axes)) {
                *c = ax[i];
            }
            *v = f(idx, &coords);
        }
    }

    /// Multiplies every value by `f(multi-index, coordinates)`.
    pub fn scale_with(&mut self, mut f: impl FnMut(&[usize], &[f64]) -> Complex64) {
        let axes = node_coordinates(&self.grid, self.side);
        let mut coords = vec![0.0; axes.len()];
        for (idx, v) in self.values.indexed_iter_mut() {
            let idx = idx.slice();
            for (c, (&i, ax)) in coords.iter_mut().zip(idx.iter().zip(&axes)) {
                *c = ax[i];
            }
            *v *= f(idx, &coords);
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn values(&self) -> &ArrayD<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut ArrayD<Complex64> {
        &mut self.values
    }

    pub fn into_values(self) -> ArrayD<Complex64> {
        self.values
    }

    /// Row-major copy of the samples.
    pub fn to_vec(&self) -> Vec<Complex64> {
        self.values.iter().copied().collect()
    }

    pub(crate) fn with_values(&self, values: ArrayD<Complex64>) -> Self {
        debug_assert_eq!(values.shape(), self.values.shape());
        Self { grid: self.grid.clone(), side: self.side, values }
    }

    pub(crate) fn retagged(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    pub fn expect_side(&self, side: Side) -> Result<()> {
        if self.side != side {
            return Err(Error::Side { expected: side, found: self.side });
        }
        Ok(())
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.check_same_grid(other)?;
        other.expect_side(self.side)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.with_values(&self.values + &other.values))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.with_values(&self.values - &other.values))
    }

    /// Pointwise product; the result keeps `self`'s side.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(self.with_values(&self.values * &other.values))
    }

    /// Pointwise quotient; the result keeps `self`'s side.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(self.with_values(&self.values / &other.values))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.with_values(self.values.mapv(|v| v * c))
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        self.with_values(self.values.mapv(f))
    }

    /// `Σ|v|²` over all samples, without any measure.
    pub fn sum_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Relative ℓ² distance `‖self − reference‖ / ‖reference‖`.
    ///
    /// Both fields must share grid and side; by Plancherel the value is the
    /// same on either side.
    pub fn rel_distance(&self, reference: &Self) -> Result<f64> {
        self.check_compatible(reference)?;
        let diff: f64 = self
            .values
            .iter()
            .zip(reference.values.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den = reference.sum_sq();
        Ok(if den == 0.0 {
            if diff == 0.0 { 0.0 } else { f64::INFINITY }
        } else {
            (diff / den).sqrt()
        })
    }
}

/// Per-axis node coordinates for the given side.
pub(crate) fn node_coordinates(grid: &Grid, side: Side) -> Vec<Vec<f64>> {
    (0..grid.dims())
        .map(|i| match side {
            Side::Space => grid.axis_x(i),
            Side::Frequency => grid.axis_xi(i),
        })
        .collect()
}
