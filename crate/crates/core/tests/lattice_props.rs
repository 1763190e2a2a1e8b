use std::f64::consts::PI;

use conepdo::fixtures::{random_envelope, rng, EnvelopeParams};
use conepdo::lattice::*;
use conepdo::Complex64;
use proptest::prelude::*;

/// Direct Riemann sum `h Σ_j e^{+i x_j ξ} u(x_j)` evaluated at arbitrary `ξ`,
/// independent of the FFT path.
fn direct_transform_1d(u: impl Fn(f64) -> f64, ell: f64, m: usize, xi: f64) -> Complex64 {
    let h = 2.0 * ell / m as f64;
    (0..m)
        .map(|j| {
            let x = -ell + j as f64 * h;
            Complex64::from_polar(u(x) * h, x * xi)
        })
        .sum()
}

fn grid_strategy() -> impl Strategy<Value = Grid> {
    (1usize..=3)
        .prop_flat_map(|dims| {
            (
                Just(dims),
                prop::collection::vec(1usize..=8, dims),
                prop::collection::vec(0.5f64..8.0, dims),
                any::<bool>(),
            )
        })
        .prop_map(|(dims, half, extents, single)| {
            let partition = if single {
                BlockPartition::single_block(dims).unwrap()
            } else {
                BlockPartition::singletons(dims).unwrap()
            };
            make_grid(partition, extents, half.iter().map(|h| 2 * h).collect()).unwrap()
        })
}

fn noise(grid: &Grid, seed: u64) -> SampledField {
    let p = EnvelopeParams { width: 2.0, kmax: 4.0, modes: 3, center: None };
    random_envelope(grid, &p, &mut rng(seed))
}

#[test]
fn gaussian_transform_matches_quadrature_oracle() {
    let g = make_grid(BlockPartition::singletons(1).unwrap(), vec![10.0], vec![256]).unwrap();
    let u = SampledField::from_fn(&g, Side::Space, |x| Complex64::from((-x[0] * x[0]).exp()));
    let t = transform(&u, Direction::Forward).unwrap();
    // Oracle: a 16× finer Riemann sum at the same frequencies, plus the closed form.
    let mut worst_fine: f64 = 0.0;
    let mut worst_closed: f64 = 0.0;
    for p in 0..256 {
        let xi = g.xi(0, p);
        let fine = direct_transform_1d(|x| (-x * x).exp(), 10.0, 4096, xi);
        let closed = PI.sqrt() * (-xi * xi / 4.0).exp();
        worst_fine = worst_fine.max((t.values()[[p]] - fine).norm());
        worst_closed = worst_closed.max((t.values()[[p]] - closed).norm());
    }
    assert!(worst_fine / PI.sqrt() < 1e-8, "{worst_fine}");
    assert!(worst_closed / PI.sqrt() < 1e-8, "{worst_closed}");
}

#[test]
fn gaussian_l2_norm_value() {
    let g = make_grid(BlockPartition::singletons(1).unwrap(), vec![10.0], vec![256]).unwrap();
    let u = SampledField::from_fn(&g, Side::Space, |x| Complex64::from((-x[0] * x[0]).exp()));
    let n = norm_hs(&u, &SmoothnessVector::zeros(1)).unwrap();
    // ∫ e^{-2x²} dx = √(π/2), so the L² norm is (π/2)^{1/4}.
    let want = (PI / 2.0).powf(0.25);
    assert!(((n - want) / want).abs() < 1e-8);
    assert!((want - 1.119_51).abs() < 1e-5);
}

#[test]
fn two_dimensional_transform_separates() {
    let p = BlockPartition::singletons(2).unwrap();
    let g = make_grid(p, vec![8.0, 6.0], vec![64, 48]).unwrap();
    let u = SampledField::from_fn(&g, Side::Space, |x| Complex64::from((-x[0] * x[0] - 2.0 * x[1] * x[1]).exp()));
    let want = SampledField::from_fn(&g, Side::Frequency, |xi| {
        Complex64::from(PI.sqrt() * (-xi[0] * xi[0] / 4.0).exp() * (PI / 2.0).sqrt() * (-xi[1] * xi[1] / 8.0).exp())
    });
    assert!(transform(&u, Direction::Forward).unwrap().rel_distance(&want).unwrap() < 1e-8);
}

#[test]
fn hs0_upper_bound_is_a_minimum() {
    use conepdo::cones::{ConeRestricted, ConeSpec};
    let g = make_grid(BlockPartition::singletons(1).unwrap(), vec![6.0], vec![64]).unwrap();
    let cone = ConeSpec::halfspaces(g.partition());
    let v = ConeRestricted::from_fn(&g, &cone, |x| Complex64::from((-(x[0] - 2.0).powi(2)).exp())).unwrap();
    let s = SmoothnessVector::new(vec![0.5]);
    let zero = v.zero_extension().clone();
    let only = norm_hs0_upper(&v, std::slice::from_ref(&zero), &s).unwrap();
    assert_eq!(only, norm_hs(&zero, &s).unwrap());
    let smooth = SampledField::from_fn(&g, Side::Space, |x| Complex64::from((-(x[0] - 2.0).powi(2)).exp()));
    let both = norm_hs0_upper(&v, &[zero.clone(), smooth], &s).unwrap();
    assert!(both <= only);
    let bad = SampledField::from_fn(&g, Side::Space, |_| Complex64::from(1.0));
    assert!(norm_hs0_upper(&v, &[bad], &s).is_err());
    let vz = ConeRestricted::from_fn(&g, &cone, |_| Complex64::from(0.0)).unwrap();
    assert_eq!(norm_hs0_upper(&vz, &[vz.zero_extension().clone()], &s).unwrap(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn round_trip_is_identity(grid in grid_strategy(), seed in any::<u64>()) {
        let u = noise(&grid, seed);
        let back = transform(&transform(&u, Direction::Forward).unwrap(), Direction::Inverse).unwrap();
        prop_assert!(back.rel_distance(&u).unwrap() <= 1e-12);
    }

    #[test]
    fn plancherel_on_the_grid(grid in grid_strategy(), seed in any::<u64>()) {
        let u = noise(&grid, seed);
        let l2 = (u.sum_sq() * grid.cell_volume()).sqrt();
        let ut = transform(&u, Direction::Forward).unwrap();
        let n0 = norm_hs(&ut, &SmoothnessVector::zeros(grid.partition().n_blocks())).unwrap();
        prop_assert!(((n0 - l2) / l2).abs() <= 1e-12);
    }

    #[test]
    fn transform_is_linear(grid in grid_strategy(), s1 in any::<u64>(), s2 in any::<u64>(), c in -3.0f64..3.0) {
        let a = noise(&grid, s1);
        let b = noise(&grid, s2);
        let lhs = transform(&a.scale(Complex64::from(c)).add(&b).unwrap(), Direction::Forward).unwrap();
        let rhs = transform(&a, Direction::Forward).unwrap().scale(Complex64::from(c))
            .add(&transform(&b, Direction::Forward).unwrap()).unwrap();
        prop_assert!(lhs.rel_distance(&rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn weights_multiply(grid in grid_strategy(), s in prop::collection::vec(-2.0f64..2.0, 3), t in prop::collection::vec(-2.0f64..2.0, 3)) {
        let n = grid.partition().n_blocks();
        let s = SmoothnessVector::new(s[..n].to_vec());
        let t = SmoothnessVector::new(t[..n].to_vec());
        let ws = weight_values(&grid, &s).unwrap();
        let wt = weight_values(&grid, &t).unwrap();
        let wst = weight_values(&grid, &(&s + &t)).unwrap();
        for ((a, b), c) in ws.iter().zip(wt.iter()).zip(wst.iter()) {
            // Equal up to the rounding of two `powf` calls.
            prop_assert!((a * b - c).abs() <= 1e-13 * c);
            prop_assert!(*c > 0.0);
        }
    }

    #[test]
    fn norms_grow_with_smoothness(grid in grid_strategy(), seed in any::<u64>(), lo in prop::collection::vec(-2.0f64..2.0, 3), bump in prop::collection::vec(0.0f64..2.0, 3)) {
        let n = grid.partition().n_blocks();
        let lo = SmoothnessVector::new(lo[..n].to_vec());
        let hi = &lo + &SmoothnessVector::new(bump[..n].to_vec());
        let u = noise(&grid, seed);
        prop_assert!(norm_hs(&u, &hi).unwrap() >= norm_hs(&u, &lo).unwrap());
    }
}
