use ndarray::Dimension;
use num_complex::Complex64;

use crate::cones::{ConeRestricted, Orientation};
use crate::error::{Error, Result};
use crate::lattice::SampledField;

/// How data given on `C̄` is continued to the whole grid.
#[derive(Clone, Debug)]
pub enum ExtensionMode {
    /// Zero outside `C̄`.
    Zero,
    /// Mirror image across each violated block boundary (along the block's
    /// last axis), damped by `exp(−(d/width)²)` in the distance `d` to it.
    Taper { width: f64 },
    /// A caller-supplied continuation; must agree with the data on `C̄`.
    User(SampledField),
}

pub fn extend(v: &ConeRestricted, mode: &ExtensionMode) -> Result<SampledField> {
    match mode {
        ExtensionMode::Zero => Ok(v.zero_extension().clone()),
        ExtensionMode::User(f) => {
            v.check_agrees(f)?;
            Ok(f.clone())
        }
        ExtensionMode::Taper { width } => {
            if !(width.is_finite() && *width > 0.0) {
                return Err(Error::Shape(format!("taper width {width} must be positive")));
            }
            taper(v, *width)
        }
    }
}

fn taper(v: &ConeRestricted, width: f64) -> Result<SampledField> {
    let grid = v.grid();
    let cone = v.cone();
    let partition = grid.partition();
    let inside = cone.mask(grid, false, Orientation::Direct)?;
    let src = v.zero_extension();
    let mut out = src.clone();
    let axes: Vec<Vec<f64>> = (0..grid.dims()).map(|i| grid.axis_x(i)).collect();
    let mut point = vec![0.0; grid.dims()];
    let mut mirror = vec![0; grid.dims()];
    for ((idx, value), &is_in) in out.values_mut().indexed_iter_mut().zip(inside.iter()) {
        if is_in {
            continue;
        }
        for (i, p) in point.iter_mut().enumerate() {
            *p = axes[i][idx[i]];
        }
        mirror.copy_from_slice(idx.slice());
        let mut damp = 1.0;
        let mut in_range = true;
        for j in 0..partition.n_blocks() {
            let Some(phi) = cone.surface(partition, j, &point) else { continue };
            let k = partition.last_axis(j);
            let d = phi - point[k];
            if d <= 0.0 {
                continue;
            }
            damp *= (-(d / width).powi(2)).exp();
            let jr = ((phi + d + grid.extents()[k]) / grid.spacing(k)).round();
            if jr < 0.0 || jr >= grid.counts()[k] as f64 {
                in_range = false;
                break;
            }
            mirror[k] = jr as usize;
        }
        *value = if in_range {
            src.values()[mirror.as_slice()] * damp
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    Ok(out)
}
