use ndarray::{ArrayD, Axis};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::{Grid, SampledField, Side};

/// Direction of a transform or of a shear.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        }
    }
}

/// Fourier transform with kernel `e^{+ix·ξ}`.
///
/// Forward maps space to frequency as the Riemann sum `∏h_i Σ_x e^{ix·ξ} u(x)`;
/// inverse carries `(2π)^{-M} ∏Δξ_i`, so the two are exact inverses on the
/// grid. Per axis, with `k = p - m/2`,
///
/// ```text
/// forward: ũ[p] = h (-1)^k  Σ_j (-1)^j u[j] e^{+2πi jp/m}
/// inverse: u[j] = (-1)^j / (m h) Σ_p (-1)^k ũ[p] e^{-2πi jp/m}
/// ```
///
/// The inner sums are an unnormalized inverse and forward DFT respectively.
pub fn transform(f: &SampledField, direction: Direction) -> Result<SampledField> {
    let (from, to) = match direction {
        Direction::Forward => (Side::Space, Side::Frequency),
        Direction::Inverse => (Side::Frequency, Side::Space),
    };
    f.expect_side(from)?;
    let mut values = f.values().clone();
    let axes: Vec<usize> = (0..f.grid().dims()).collect();
    transform_axes(&mut values, f.grid(), &axes, direction);
    Ok(f.with_values(values).retagged(to))
}

/// Applies the one-dimensional transform along each listed axis in place.
///
/// Partial transforms leave the array in a mixed representation, which is
/// what band-limited shifts along a single axis need.
pub fn transform_axes(values: &mut ArrayD<Complex64>, grid: &Grid, axes: &[usize], direction: Direction) {
    let mut planner = FftPlanner::new();
    for &axis in axes {
        axis_pass(values, grid, axis, direction, &mut planner);
    }
}

fn alternating(m: usize, offset: usize) -> impl Iterator<Item = f64> {
    (0..m).map(move |j| if (j + offset) % 2 == 0 { 1.0 } else { -1.0 })
}

fn axis_pass(
    values: &mut ArrayD<Complex64>,
    grid: &Grid,
    axis: usize,
    direction: Direction,
    planner: &mut FftPlanner<f64>,
) {
    let m = grid.counts()[axis];
    let h = grid.spacing(axis);
    // (-1)^k = (-1)^(p + m/2).
    let half = m / 2;
    let (fft, pre, post): (_, Vec<f64>, Vec<f64>) = match direction {
        Direction::Forward => (
            planner.plan_fft_inverse(m),
            alternating(m, 0).collect(),
            alternating(m, half).map(|s| s * h).collect(),
        ),
        Direction::Inverse => {
            let c = 1.0 / (m as f64 * h);
            (
                planner.plan_fft_forward(m),
                alternating(m, half).collect(),
                alternating(m, 0).map(|s| s * c).collect(),
            )
        }
    };
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for mut lane in values.lanes_mut(Axis(axis)) {
        for ((b, v), s) in buf.iter_mut().zip(lane.iter()).zip(&pre) {
            *b = v * s;
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        for ((v, b), s) in lane.iter_mut().zip(&buf).zip(&post) {
            *v = b * s;
        }
    }
}
