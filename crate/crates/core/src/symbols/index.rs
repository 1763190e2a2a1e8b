use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Grid, SampledField, SmoothnessVector};

use super::{eval_symbol, FactorSide, SymbolSpec};

/// `æ − S = N + δ` with `n_j ≥ 0` integral and `|δ_j| < ½`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexDecomposition {
    pub n: Vec<u32>,
    pub delta: SmoothnessVector,
}

impl IndexDecomposition {
    /// True in the unique-solvability regime `|æ_j − s_j| < ½` for all `j`.
    pub fn is_unique_regime(&self) -> bool {
        self.n.iter().all(|&n| n == 0)
    }
}

pub fn decompose_index(s: &SmoothnessVector, index: &SmoothnessVector) -> Result<IndexDecomposition> {
    if s.len() != index.len() {
        return Err(Error::Shape(format!("S has {} components, æ has {}", s.len(), index.len())));
    }
    let mut n = Vec::with_capacity(s.len());
    let mut delta = Vec::with_capacity(s.len());
    for (j, (&sj, &aj)) in s.values().iter().zip(index.values()).enumerate() {
        let d = aj - sj;
        if !d.is_finite() {
            return Err(Error::Index { component: j, reason: "æ_j − s_j is not finite".into() });
        }
        let nearest = d.round();
        let frac = d - nearest;
        if (frac.abs() - 0.5).abs() <= 1e-12 {
            return Err(Error::Index {
                component: j,
                reason: format!("æ_j − s_j = {d} is a half-integer"),
            });
        }
        if nearest < 0.0 {
            return Err(Error::Index {
                component: j,
                reason: format!("æ_j − s_j = {d} ≤ −1/2"),
            });
        }
        n.push(nearest as u32);
        delta.push(frac);
    }
    Ok(IndexDecomposition { n, delta: SmoothnessVector::new(delta) })
}

/// `Q_N(ξ) = ∏_j (ξ_{k_j} + i(1 + |ξ'_{K_j}|))^{n_j}`.
pub fn build_qn(grid: &Grid, n: &[u32]) -> Result<SampledField> {
    if n.len() != grid.partition().n_blocks() {
        return Err(Error::Shape(format!(
            "N has {} components for {} blocks",
            n.len(),
            grid.partition().n_blocks()
        )));
    }
    eval_symbol(
        &SymbolSpec::HalfspaceEskinFactor {
            gamma: n.iter().map(|&v| v as f64).collect(),
            side: FactorSide::Plus,
        },
        grid,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{make_grid, weight_values, BlockPartition};

    fn sv(v: &[f64]) -> SmoothnessVector {
        SmoothnessVector::new(v.to_vec())
    }

    #[test]
    fn examples() {
        let d = decompose_index(&sv(&[0.3]), &sv(&[2.1])).unwrap();
        assert_eq!(d.n, vec![2]);
        assert!((d.delta.0[0] + 0.2).abs() < 1e-15);
        let d = decompose_index(&sv(&[0.0]), &sv(&[0.3])).unwrap();
        assert_eq!(d.n, vec![0]);
        assert!(d.is_unique_regime());
        assert!(decompose_index(&sv(&[0.0]), &sv(&[1.5])).is_err());
        assert!(decompose_index(&sv(&[1.0]), &sv(&[0.4])).is_err());
        assert!(decompose_index(&sv(&[0.0]), &sv(&[-0.3])).is_ok());
    }

    #[test]
    fn error_names_component() {
        let e = decompose_index(&sv(&[0.0, 0.0]), &sv(&[0.2, 2.5])).unwrap_err();
        assert!(matches!(e, Error::Index { component: 1, .. }));
    }

    #[test]
    fn qn_modulus_bounds() {
        let g = make_grid(BlockPartition::singletons(1).unwrap(), vec![10.0], vec![512]).unwrap();
        let q = build_qn(&g, &[1]).unwrap();
        let w = weight_values(&g, &sv(&[1.0])).unwrap();
        for (q, w) in q.values().iter().zip(w.iter()) {
            let r = q.norm() / w;
            assert!((std::f64::consts::FRAC_1_SQRT_2 - 1e-12..=1.0 + 1e-12).contains(&r));
        }
        let q0 = build_qn(&g, &[0]).unwrap();
        assert!(q0.values().iter().all(|v| *v == num_complex::Complex64::from(1.0)));
    }

    #[test]
    fn qn_is_multiplicative() {
        let p = BlockPartition::new(vec![vec![0, 1], vec![2]]).unwrap();
        let g = make_grid(p, vec![3.0; 3], vec![8; 3]).unwrap();
        let a = build_qn(&g, &[1, 2]).unwrap();
        let b = build_qn(&g, &[2, 0]).unwrap();
        let ab = build_qn(&g, &[3, 2]).unwrap();
        assert!(a.mul(&b).unwrap().rel_distance(&ab).unwrap() < 1e-14);
    }
}
