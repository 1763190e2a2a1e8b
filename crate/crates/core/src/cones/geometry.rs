use ndarray::Dimension;
use ndarray::{ArrayD, IxDyn};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{BlockPartition, Grid, SampledField, Side};

/// Cone carried by a single block `K_j`, in the block's declared axis order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum BlockCone {
    /// The whole block space; no boundary.
    #[serde(rename = "full-block")]
    Full,
    /// `x_k ≥ 0` on the block's last axis.
    #[serde(rename = "halfspace")]
    Halfspace,
    /// `x₂ ≥ a|x₁|`.
    #[serde(rename = "cone2d")]
    Cone2d { a: f64 },
    /// `x₃ ≥ a₁|x₁| + a₂|x₂|`.
    #[serde(rename = "cone3d")]
    Cone3d { a1: f64, a2: f64 },
}

impl BlockCone {
    /// Surface slopes `a_i` for the tangential axes (all but the last).
    pub(crate) fn slopes(&self, block_size: usize) -> Option<Vec<f64>> {
        match *self {
            BlockCone::Full => None,
            BlockCone::Halfspace => Some(vec![0.0; block_size - 1]),
            BlockCone::Cone2d { a } => Some(vec![a]),
            BlockCone::Cone3d { a1, a2 } => Some(vec![a1, a2]),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BlockCone::Full => "full-block",
            BlockCone::Halfspace => "halfspace",
            BlockCone::Cone2d { .. } => "cone2d",
            BlockCone::Cone3d { .. } => "cone3d",
        }
    }
}

/// Product cone `C = C_{K_1} × … × C_{K_n}`, one entry per block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConeSpec {
    pub blocks: Vec<BlockCone>,
}

/// Whether to test membership in `C` or in the reflected cone `-C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Direct,
    Reflected,
}

impl ConeSpec {
    pub fn new(blocks: Vec<BlockCone>) -> Self {
        Self { blocks }
    }

    /// The full space `ℝ^M` under the given partition.
    pub fn full(partition: &BlockPartition) -> Self {
        Self::new(vec![BlockCone::Full; partition.n_blocks()])
    }

    /// Half-space on the last axis of every block.
    pub fn halfspaces(partition: &BlockPartition) -> Self {
        Self::new(vec![BlockCone::Halfspace; partition.n_blocks()])
    }

    pub fn validate(&self, partition: &BlockPartition) -> Result<()> {
        if self.blocks.len() != partition.n_blocks() {
            return Err(Error::Cone(format!(
                "{} block cones for {} blocks",
                self.blocks.len(),
                partition.n_blocks()
            )));
        }
        for (j, b) in self.blocks.iter().enumerate() {
            let k = partition.block_size(j);
            let ok_size = match b {
                BlockCone::Full | BlockCone::Halfspace => true,
                BlockCone::Cone2d { .. } => k == 2,
                BlockCone::Cone3d { .. } => k == 3,
            };
            if !ok_size {
                return Err(Error::Cone(format!("block {j} has {k} axes, incompatible with {}", b.name())));
            }
            let slopes_ok = match *b {
                BlockCone::Cone2d { a } => a.is_finite() && a > 0.0,
                BlockCone::Cone3d { a1, a2 } => a1.is_finite() && a2.is_finite() && a1 > 0.0 && a2 > 0.0,
                _ => true,
            };
            if !slopes_ok {
                return Err(Error::Cone(format!("block {j}: slopes must be positive and finite")));
            }
        }
        Ok(())
    }

    /// True when no block cone is a full block, i.e. the product contains no
    /// whole straight line.
    pub fn contains_no_line(&self) -> bool {
        self.blocks.iter().all(|b| *b != BlockCone::Full)
    }

    /// `φ_j(x')` for block `j`, given the point's full coordinate vector.
    pub fn surface(&self, partition: &BlockPartition, j: usize, point: &[f64]) -> Option<f64> {
        let block = partition.block(j);
        let slopes = self.blocks[j].slopes(block.len())?;
        Some(slopes.iter().zip(block).map(|(a, &ax)| a * point[ax].abs()).sum())
    }

    /// Membership of a point in `C̄` (or its interior), with an absolute
    /// tolerance `tol[i]` per axis on the distinguished coordinates.
    pub fn contains(&self, partition: &BlockPartition, point: &[f64], open: bool, tol: &[f64]) -> bool {
        (0..self.blocks.len()).all(|j| match self.surface(partition, j, point) {
            None => true,
            Some(phi) => {
                let k = partition.last_axis(j);
                if open {
                    point[k] > phi + tol[k]
                } else {
                    point[k] >= phi - tol[k]
                }
            }
        })
    }

    /// Membership in the conjugate cone `*C = {y : x·y > 0 for x ∈ C}`,
    /// computed blockwise as the product of the block duals.
    pub fn dual_contains(&self, partition: &BlockPartition, y: &[f64]) -> bool {
        self.blocks.iter().enumerate().all(|(j, b)| {
            let block = partition.block(j);
            let yk = y[*block.last().expect("nonempty")];
            let tangential = &block[..block.len() - 1];
            match *b {
                BlockCone::Full => false,
                BlockCone::Halfspace => yk > 0.0 && tangential.iter().all(|&a| y[a] == 0.0),
                BlockCone::Cone2d { a } => yk > y[tangential[0]].abs() / a,
                BlockCone::Cone3d { a1, a2 } => {
                    yk > y[tangential[0]].abs() / a1 && yk > y[tangential[1]].abs() / a2
                }
            }
        })
    }

    /// 0/1 mask over the space grid.
    pub fn mask(&self, grid: &Grid, open: bool, orientation: Orientation) -> Result<ArrayD<bool>> {
        self.validate(grid.partition())?;
        let partition = grid.partition();
        let tol: Vec<f64> = (0..grid.dims()).map(|i| 1e-9 * grid.spacing(i)).collect();
        let axes: Vec<Vec<f64>> = (0..grid.dims()).map(|i| grid.axis_x(i)).collect();
        let sign = match orientation {
            Orientation::Direct => 1.0,
            Orientation::Reflected => -1.0,
        };
        let mut point = vec![0.0; grid.dims()];
        let mut out = ArrayD::from_elem(IxDyn(grid.counts()), false);
        for (idx, m) in out.indexed_iter_mut() {
            for (i, p) in point.iter_mut().enumerate() {
                *p = sign * axes[i][idx[i]];
            }
            *m = self.contains(partition, &point, open, &tol);
        }
        Ok(out)
    }
}

fn mask_field(grid: &Grid, mask: &ArrayD<bool>) -> SampledField {
    let values = mask.mapv(|b| Complex64::from(if b { 1.0 } else { 0.0 }));
    SampledField::from_values(grid, Side::Space, values).expect("mask has the grid's shape")
}

/// Indicator of the closed cone `C̄`: boundary nodes count as inside.
pub fn indicator(cone: &ConeSpec, grid: &Grid) -> Result<SampledField> {
    Ok(mask_field(grid, &cone.mask(grid, false, Orientation::Direct)?))
}

/// Indicator of the open cone `C` (boundary nodes excluded).
pub fn interior_indicator(cone: &ConeSpec, grid: &Grid) -> Result<SampledField> {
    Ok(mask_field(grid, &cone.mask(grid, true, Orientation::Direct)?))
}

/// Restriction to `C̄`: pointwise product with the indicator.
pub fn project_space(u: &SampledField, cone: &ConeSpec) -> Result<SampledField> {
    u.expect_side(Side::Space)?;
    let mask = cone.mask(u.grid(), false, Orientation::Direct)?;
    let mut out = u.clone();
    ndarray::Zip::from(out.values_mut()).and(&mask).for_each(|v, &inside| {
        if !inside {
            *v = Complex64::new(0.0, 0.0);
        }
    });
    Ok(out)
}

/// Data `v` given on the nodes of `C̄`; values elsewhere are zero.
#[derive(Clone, Debug)]
pub struct ConeRestricted {
    cone: ConeSpec,
    field: SampledField,
}

impl ConeRestricted {
    /// Keeps the values of `v` on `C̄` and discards the rest.
    pub fn new(v: &SampledField, cone: &ConeSpec) -> Result<Self> {
        Ok(Self { field: project_space(v, cone)?, cone: cone.clone() })
    }

    pub fn from_fn(grid: &Grid, cone: &ConeSpec, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        Self::new(&SampledField::from_fn(grid, Side::Space, f), cone)
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn grid(&self) -> &Grid {
        self.field.grid()
    }

    /// The zero extension of `v` to the whole grid.
    pub fn zero_extension(&self) -> &SampledField {
        &self.field
    }

    /// Errors unless `candidate` equals `v` on every node of `C̄`, up to a
    /// relative tolerance of 1e-12.
    pub fn check_agrees(&self, candidate: &SampledField) -> Result<()> {
        candidate.expect_side(Side::Space)?;
        candidate.check_same_grid(&self.field)?;
        let mask = self.cone.mask(self.grid(), false, Orientation::Direct)?;
        let tol = 1e-12 * self.field.max_abs();
        for ((idx, &inside), (c, v)) in mask
            .indexed_iter()
            .zip(candidate.values().iter().zip(self.field.values().iter()))
        {
            if inside && (c - v).norm() > tol {
                return Err(Error::Disagreement { node: idx.slice().to_vec() });
            }
        }
        Ok(())
    }
}
