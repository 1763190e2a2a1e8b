use ndarray::Dimension;
use ndarray::ArrayD;
use num_complex::Complex64;

use crate::cones::{BlockCone, ConeSpec};
use crate::error::Result;
use crate::lattice::{transform, transform_axes, Direction, SampledField, Side};

/// The change of variables `T_φ` flattening each block's cone surface.
///
/// Forward: `(T_φ u)(x', t) = u(x', t + φ(x'))`, so the surface `t = φ(x')`
/// lands on `t = 0`; inverse undoes it. The remap is a cyclic shift along the
/// block's last axis, exact when `φ(x')/h` is integral on every node and a
/// band-limited Fourier shift otherwise.
pub fn shear(u: &SampledField, cone: &ConeSpec, direction: Direction) -> Result<SampledField> {
    u.expect_side(Side::Space)?;
    let grid = u.grid();
    cone.validate(grid.partition())?;
    let partition = grid.partition();
    let sign = match direction {
        Direction::Forward => 1.0,
        Direction::Inverse => -1.0,
    };
    let axes: Vec<Vec<f64>> = (0..grid.dims()).map(|i| grid.axis_x(i)).collect();
    let mut values = u.values().clone();
    for (j, block_cone) in cone.blocks.iter().enumerate() {
        if matches!(block_cone, BlockCone::Full | BlockCone::Halfspace) {
            continue;
        }
        let n = partition.last_axis(j);
        let h = grid.spacing(n);
        let m = grid.counts()[n];
        let mut point = vec![0.0; grid.dims()];
        // Node offset sign·φ(x')/h for every node.
        let offset = ArrayD::from_shape_fn(values.raw_dim(), |idx| {
            for (i, p) in point.iter_mut().enumerate() {
                *p = axes[i][idx[i]];
            }
            sign * cone.surface(partition, j, &point).expect("bounded cone") / h
        });
        let exact = offset.iter().all(|s| (s - s.round()).abs() <= 1e-9);
        if exact {
            let src = values.clone();
            let mut at = vec![0; grid.dims()];
            for ((idx, v), s) in values.indexed_iter_mut().zip(offset.iter()) {
                at.copy_from_slice(idx.slice());
                at[n] = (idx[n] as i64 + s.round() as i64).rem_euclid(m as i64) as usize;
                *v = src[at.as_slice()];
            }
        } else {
            // u(t + d) ↔ e^{-iξd} ũ(ξ) along the last axis.
            transform_axes(&mut values, grid, &[n], Direction::Forward);
            let xi = grid.axis_xi(n);
            for ((idx, v), s) in values.indexed_iter_mut().zip(offset.iter()) {
                *v *= Complex64::from_polar(1.0, -xi[idx[n]] * s * h);
            }
            transform_axes(&mut values, grid, &[n], Direction::Inverse);
        }
    }
    SampledField::from_values(grid, Side::Space, values)
}

/// `V_φ^{±1} f = F T_φ^{±1} F^{-1} f`.
pub fn vphi_apply(f: &SampledField, cone: &ConeSpec, direction: Direction) -> Result<SampledField> {
    f.expect_side(Side::Frequency)?;
    let u = transform(f, Direction::Inverse)?;
    transform(&shear(&u, cone, direction)?, Direction::Forward)
}
