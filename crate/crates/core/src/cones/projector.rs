use ndarray::{ArrayD, Axis};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{transform_axes, Direction, Grid, SampledField, Side};

use super::pv::pv_in_place;
use super::{BlockCone, ConeSpec};

/// How off-grid arguments `ξ_t ± aξ_n` are reached.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProjectorMode {
    /// Integer node shifts only; anything else is an error.
    #[default]
    ExactShift,
    /// Integer shifts where possible, trigonometric interpolation otherwise.
    Interpolate,
}

/// Replaces `U(ξ_t, ξ_n)` by `U(ξ_t + bξ_n, ξ_n)` on a frequency-side array.
///
/// Shifts wrap periodically along `t`.
pub fn shift_along(
    values: &mut ArrayD<Complex64>,
    grid: &Grid,
    t: usize,
    n: usize,
    b: f64,
    mode: ProjectorMode,
) -> Result<()> {
    if b == 0.0 {
        return Ok(());
    }
    let ratio = b * grid.dxi(n) / grid.dxi(t);
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-9 * ratio.abs().max(1.0) {
        roll_by_frequency(values, grid, t, n, nearest as i64);
        return Ok(());
    }
    match mode {
        ProjectorMode::ExactShift => Err(Error::NonIntegerShift { axis: t, shift: ratio }),
        ProjectorMode::Interpolate => {
            // A frequency shift by β along t is multiplication by e^{i x_t β}.
            transform_axes(values, grid, &[t], Direction::Inverse);
            let xt = grid.axis_x(t);
            let xin = grid.axis_xi(n);
            for (idx, v) in values.indexed_iter_mut() {
                *v *= Complex64::from_polar(1.0, xt[idx[t]] * b * xin[idx[n]]);
            }
            transform_axes(values, grid, &[t], Direction::Forward);
            Ok(())
        }
    }
}

/// `out[p_t] = U[p_t + r·k_n]` cyclically, with `k_n` the centered index on `n`.
fn roll_by_frequency(values: &mut ArrayD<Complex64>, grid: &Grid, t: usize, n: usize, r: i64) {
    let mt = grid.counts()[t] as i64;
    let tt = if t > n { t - 1 } else { t };
    let mut buf = vec![Complex64::new(0.0, 0.0); mt as usize];
    for pn in 0..grid.counts()[n] {
        let shift = (r * grid.freq_index(n, pn)).rem_euclid(mt) as usize;
        if shift == 0 {
            continue;
        }
        let mut slab = values.index_axis_mut(Axis(n), pn);
        for mut lane in slab.lanes_mut(Axis(tt)) {
            buf.iter_mut().zip(lane.iter()).for_each(|(b, v)| *b = *v);
            for (p, v) in lane.iter_mut().enumerate() {
                *v = buf[(p + shift) % mt as usize];
            }
        }
    }
}

/// Half-line projector along `axis`: `½U + SU + (1/2m) Σ_p U`.
///
/// The last term is the weight of the boundary node `x = 0`, which the closed
/// cone keeps in full; the continuum formula `½U + SU` would give it half.
fn halfline_in_place(values: &mut ArrayD<Complex64>, axis: usize) {
    let m = values.shape()[axis];
    let total = values.sum_axis(Axis(axis)).insert_axis(Axis(axis)) / Complex64::from(2.0 * m as f64);
    let mut s = values.clone();
    pv_in_place(&mut s, axis);
    values.mapv_inplace(|v| v * 0.5);
    *values += &s;
    *values += &total;
}

/// `F P_+ F^{-1}` for the half-line `x_axis ≥ 0`, realized on the frequency side.
pub fn halfline_projector(f: &SampledField, axis: usize) -> Result<SampledField> {
    f.expect_side(Side::Frequency)?;
    f.grid().check_axis(axis)?;
    let mut values = f.values().clone();
    halfline_in_place(&mut values, axis);
    Ok(f.with_values(values))
}

/// Projector onto the half-space `x_n ≥ Σ_i b_i x_{t_i}`.
///
/// Flattening the boundary shifts frequencies `ξ_{t_i} → ξ_{t_i} − b_iξ_n`, the
/// half-line formula acts along `ξ_n`, and the shifts are undone.
fn sheared_halfspace(
    values: &mut ArrayD<Complex64>,
    grid: &Grid,
    tangential: &[(usize, f64)],
    n: usize,
    mode: ProjectorMode,
) -> Result<()> {
    for &(t, b) in tangential {
        shift_along(values, grid, t, n, -b, mode)?;
    }
    halfline_in_place(values, n);
    for &(t, b) in tangential {
        shift_along(values, grid, t, n, b, mode)?;
    }
    Ok(())
}

/// All sign patterns `σ ∈ {+1, −1}^len`, `+` first.
fn sign_patterns(len: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..1usize << len).map(move |bits| {
        (0..len)
            .map(|i| if bits >> (len - 1 - i) & 1 == 0 { 1.0 } else { -1.0 })
            .collect()
    })
}

/// `F P_C F^{-1} ũ` computed without leaving the frequency side.
///
/// Per block: a half-space is the half-line formula along the last axis; the
/// angular cones are intersections of the half-spaces bounded by their faces
/// (`x₂ ≥ ±a x₁`, or `x₃ ≥ ±a₁x₁ ± a₂x₂`), each a half-line formula in
/// sheared frequencies. Blocks are composed in declared order.
pub fn projector_fourier(f: &SampledField, cone: &ConeSpec, mode: ProjectorMode) -> Result<SampledField> {
    f.expect_side(Side::Frequency)?;
    let grid = f.grid();
    cone.validate(grid.partition())?;
    let mut values = f.values().clone();
    for (j, block_cone) in cone.blocks.iter().enumerate() {
        let block = grid.partition().block(j);
        let n = grid.partition().last_axis(j);
        match block_cone {
            BlockCone::Full => {}
            BlockCone::Halfspace => halfline_in_place(&mut values, n),
            BlockCone::Cone2d { .. } | BlockCone::Cone3d { .. } => {
                let slopes = block_cone.slopes(block.len()).expect("bounded cone");
                for signs in sign_patterns(slopes.len()) {
                    let tangential: Vec<(usize, f64)> = block
                        .iter()
                        .zip(&slopes)
                        .zip(&signs)
                        .map(|((&t, a), s)| (t, s * a))
                        .collect();
                    sheared_halfspace(&mut values, grid, &tangential, n, mode)?;
                }
            }
        }
    }
    Ok(f.with_values(values))
}

/// Frequency-side shear `V_φ^{±1}` from singular integrals along the
/// tangential axes.
///
/// Splitting `u(x', x_n ∓ φ(x'))` by the signs of the tangential coordinates
/// gives, per angular block with slopes `a_i`,
///
/// ```text
/// Σ_σ ∏_i (½ + σ_i S_{t_i}) ũ(ξ_{t_1} ± σ_1 a_1 ξ_n, …, ξ_n)
/// ```
///
/// with the upper sign for the inverse shear. Half-space and full blocks have
/// `φ = 0` and are left unchanged.
pub fn shear_fourier(
    f: &SampledField,
    cone: &ConeSpec,
    direction: Direction,
    mode: ProjectorMode,
) -> Result<SampledField> {
    f.expect_side(Side::Frequency)?;
    let grid = f.grid();
    cone.validate(grid.partition())?;
    let outer = match direction {
        Direction::Inverse => 1.0,
        Direction::Forward => -1.0,
    };
    let mut values = f.values().clone();
    for (j, block_cone) in cone.blocks.iter().enumerate() {
        if matches!(block_cone, BlockCone::Full | BlockCone::Halfspace) {
            continue;
        }
        let block = grid.partition().block(j);
        let n = grid.partition().last_axis(j);
        let slopes = block_cone.slopes(block.len()).expect("bounded cone");
        let mut acc = ArrayD::zeros(values.raw_dim());
        for signs in sign_patterns(slopes.len()) {
            let mut w = values.clone();
            for ((&t, a), s) in block.iter().zip(&slopes).zip(&signs) {
                shift_along(&mut w, grid, t, n, outer * s * a, mode)?;
            }
            for (&t, s) in block.iter().zip(&signs) {
                let mut sw = w.clone();
                pv_in_place(&mut sw, t);
                w.mapv_inplace(|v| v * 0.5);
                w.scaled_add(Complex64::from(*s), &sw);
            }
            acc += &w;
        }
        values = acc;
    }
    Ok(f.with_values(values))
}
