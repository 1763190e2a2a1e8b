use conepdo::cones::*;
use conepdo::fixtures::{member_seed, random_envelope, rng, EnvelopeParams};
use conepdo::lattice::*;
use conepdo::solver::vphi_apply;
use conepdo::Complex64;
use proptest::prelude::*;

fn field(grid: &Grid, seed: u64) -> SampledField {
    random_envelope(grid, &EnvelopeParams::default(), &mut rng(seed))
}

fn cone_case() -> impl Strategy<Value = (Grid, ConeSpec)> {
    prop_oneof![
        (1usize..=4).prop_map(|h| {
            let g = make_grid(BlockPartition::singletons(1).unwrap(), vec![5.0], vec![8 * h]).unwrap();
            let c = ConeSpec::halfspaces(g.partition());
            (g, c)
        }),
        (0.25f64..3.0).prop_map(|a| {
            let g = make_grid(BlockPartition::single_block(2).unwrap(), vec![5.0, 5.0], vec![16, 16]).unwrap();
            (g, ConeSpec::new(vec![BlockCone::Cone2d { a }]))
        }),
        (0.25f64..3.0, 0.25f64..3.0).prop_map(|(a1, a2)| {
            let g = make_grid(BlockPartition::single_block(3).unwrap(), vec![5.0; 3], vec![8; 3]).unwrap();
            (g, ConeSpec::new(vec![BlockCone::Cone3d { a1, a2 }]))
        }),
        Just({
            let p = BlockPartition::new(vec![vec![0], vec![1, 2]]).unwrap();
            let g = make_grid(p, vec![5.0; 3], vec![8; 3]).unwrap();
            (g, ConeSpec::new(vec![BlockCone::Halfspace, BlockCone::Cone2d { a: 1.0 }]))
        }),
    ]
}

/// Complement projection `u − P_C u` computed through the mask directly.
fn project_complement(u: &SampledField, cone: &ConeSpec) -> SampledField {
    let ind = indicator(cone, u.grid()).unwrap();
    let mut out = u.clone();
    ndarray::Zip::from(out.values_mut()).and(ind.values()).for_each(|v, m| {
        if m.re != 0.0 {
            *v = Complex64::new(0.0, 0.0);
        }
    });
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn spatial_projection_is_idempotent((grid, cone) in cone_case(), seed in any::<u64>()) {
        let u = field(&grid, seed);
        let once = project_space(&u, &cone).unwrap();
        let twice = project_space(&once, &cone).unwrap();
        prop_assert_eq!(once.to_vec(), twice.to_vec());
    }

    #[test]
    fn complement_completes((grid, cone) in cone_case(), seed in any::<u64>()) {
        let u = field(&grid, seed);
        let sum = project_space(&u, &cone).unwrap().add(&project_complement(&u, &cone)).unwrap();
        prop_assert_eq!(sum.to_vec(), u.to_vec());
    }

    #[test]
    fn bochner_is_idempotent((grid, cone) in cone_case(), seed in any::<u64>()) {
        let ut = transform(&field(&grid, seed), Direction::Forward).unwrap();
        let once = bochner_project(&ut, &cone).unwrap();
        let twice = bochner_project(&once, &cone).unwrap();
        prop_assert!(twice.rel_distance(&once).unwrap() <= 1e-12);
    }

    #[test]
    fn jump_pair_reconstructs((grid, cone) in cone_case(), seed in any::<u64>()) {
        let ut = transform(&field(&grid, seed), Direction::Forward).unwrap();
        let pair = jump_decompose(&ut, &cone).unwrap();
        let back = pair.plus.add(&pair.minus).unwrap();
        // plus + (f − plus) differs from f only by rounding of one subtraction.
        prop_assert!(back.rel_distance(&ut).unwrap() <= 1e-15);
    }

    #[test]
    fn projection_contracts((grid, cone) in cone_case(), seed in any::<u64>()) {
        let u = field(&grid, seed);
        prop_assert!(project_space(&u, &cone).unwrap().sum_sq() <= u.sum_sq());
    }

    #[test]
    fn block_order_does_not_matter(seed in any::<u64>()) {
        let p = BlockPartition::new(vec![vec![0], vec![1, 2]]).unwrap();
        let g = make_grid(p, vec![5.0; 3], vec![8; 3]).unwrap();
        let first = ConeSpec::new(vec![BlockCone::Halfspace, BlockCone::Full]);
        let second = ConeSpec::new(vec![BlockCone::Full, BlockCone::Cone2d { a: 1.0 }]);
        let u = field(&g, seed);
        let ab = project_space(&project_space(&u, &first).unwrap(), &second).unwrap();
        let ba = project_space(&project_space(&u, &second).unwrap(), &first).unwrap();
        prop_assert_eq!(ab.to_vec(), ba.to_vec());
    }
}

fn mean_route_distance(grid: &Grid, cone: &ConeSpec, n: u64) -> f64 {
    (0..n)
        .map(|s| {
            let ut = transform(&field(grid, member_seed(11, s)), Direction::Forward).unwrap();
            let a = projector_fourier(&ut, cone, ProjectorMode::ExactShift).unwrap();
            a.rel_distance(&bochner_project(&ut, cone).unwrap()).unwrap()
        })
        .sum::<f64>()
        / n as f64
}

#[test]
fn halfline_route_on_even_field() {
    let g = make_grid(BlockPartition::singletons(1).unwrap(), vec![10.0], vec![512]).unwrap();
    let u = SampledField::from_fn(&g, Side::Space, |x| Complex64::from((-x[0] * x[0] / 2.0).exp()));
    let ut = transform(&u, Direction::Forward).unwrap();
    let p = projector_fourier(&ut, &ConeSpec::halfspaces(g.partition()), ProjectorMode::ExactShift).unwrap();
    let ratio = p.sum_sq() / ut.sum_sq();
    assert!((ratio - 0.5).abs() / 0.5 < 5e-2, "{ratio}");
}

#[test]
fn projector_fixes_fields_supported_in_the_cone() {
    let errs: Vec<f64> = [64usize, 128]
        .iter()
        .map(|&m| {
            let g = make_grid(BlockPartition::single_block(2).unwrap(), vec![10.0; 2], vec![m; 2]).unwrap();
            let cone = ConeSpec::new(vec![BlockCone::Cone2d { a: 1.0 }]);
            let u = SampledField::from_fn(&g, Side::Space, |x| {
                Complex64::from((-(x[0] * x[0] + (x[1] - 5.0).powi(2))).exp())
            });
            let ut = transform(&u, Direction::Forward).unwrap();
            projector_fourier(&ut, &cone, ProjectorMode::ExactShift).unwrap().rel_distance(&ut).unwrap()
        })
        .collect();
    // Both sit at the Gaussian truncation floor, far inside the tolerance.
    assert!(errs.iter().all(|e| *e <= 5e-2), "{errs:?}");
}

#[test]
fn route_distance_decreases_under_refinement() {
    let d: Vec<f64> = [64usize, 128, 256]
        .iter()
        .map(|&m| {
            let g = make_grid(BlockPartition::single_block(2).unwrap(), vec![10.0; 2], vec![m; 2]).unwrap();
            mean_route_distance(&g, &ConeSpec::new(vec![BlockCone::Cone2d { a: 1.0 }]), 4)
        })
        .collect();
    assert!(d[1] < d[0] && d[2] < d[1], "{d:?}");
}

#[test]
fn fourier_projector_is_nearly_idempotent() {
    let g = make_grid(BlockPartition::single_block(2).unwrap(), vec![10.0; 2], vec![128; 2]).unwrap();
    let cone = ConeSpec::new(vec![BlockCone::Cone2d { a: 1.0 }]);
    let ut = transform(&field(&g, 3), Direction::Forward).unwrap();
    let once = projector_fourier(&ut, &cone, ProjectorMode::ExactShift).unwrap();
    let twice = projector_fourier(&once, &cone, ProjectorMode::ExactShift).unwrap();
    assert!(twice.rel_distance(&once).unwrap() <= 2.0 * 5e-2);
}

#[test]
fn interpolated_shifts_track_the_oracle() {
    // a = 1/2 needs half-node shifts on an isotropic grid.
    let d: Vec<f64> = [64usize, 128]
        .iter()
        .map(|&m| {
            let g = make_grid(BlockPartition::single_block(2).unwrap(), vec![10.0; 2], vec![m; 2]).unwrap();
            let cone = ConeSpec::new(vec![BlockCone::Cone2d { a: 0.5 }]);
            let ut = transform(&field(&g, 5), Direction::Forward).unwrap();
            let a = projector_fourier(&ut, &cone, ProjectorMode::Interpolate).unwrap();
            a.rel_distance(&bochner_project(&ut, &cone).unwrap()).unwrap()
        })
        .collect();
    assert!(d[1] < d[0] && d[0] < 0.3, "{d:?}");
}

#[test]
fn singular_integral_shear_matches_spatial_shear() {
    // The two-sided half-sum formulas for angular cones represent V_φ^{±1}.
    for direction in [Direction::Inverse, Direction::Forward] {
        let d: Vec<f64> = [64usize, 128]
            .iter()
            .map(|&m| {
                let g = make_grid(BlockPartition::single_block(2).unwrap(), vec![10.0; 2], vec![m; 2]).unwrap();
                let cone = ConeSpec::new(vec![BlockCone::Cone2d { a: 1.0 }]);
                let ut = transform(&field(&g, 9), Direction::Forward).unwrap();
                let a = shear_fourier(&ut, &cone, direction, ProjectorMode::ExactShift).unwrap();
                a.rel_distance(&vphi_apply(&ut, &cone, direction).unwrap()).unwrap()
            })
            .collect();
        assert!(d[0] < 0.1 && d[1] < 0.7 * d[0], "{direction:?} {d:?}");
    }
    let d: Vec<f64> = [32usize, 48]
        .iter()
        .map(|&m| {
            let g = make_grid(BlockPartition::single_block(3).unwrap(), vec![10.0; 3], vec![m; 3]).unwrap();
            let cone = ConeSpec::new(vec![BlockCone::Cone3d { a1: 1.0, a2: 1.0 }]);
            let ut = transform(&field(&g, 9), Direction::Forward).unwrap();
            let a = shear_fourier(&ut, &cone, Direction::Inverse, ProjectorMode::ExactShift).unwrap();
            a.rel_distance(&vphi_apply(&ut, &cone, Direction::Inverse).unwrap()).unwrap()
        })
        .collect();
    assert!(d[0] < 0.3 && d[1] < d[0], "{d:?}");
}

#[test]
fn jump_pair_of_one_sided_fields() {
    let g = make_grid(BlockPartition::singletons(1).unwrap(), vec![10.0], vec![256]).unwrap();
    let cone = ConeSpec::halfspaces(g.partition());
    let inside = SampledField::from_fn(&g, Side::Space, |x| Complex64::from((-(x[0] - 5.0).powi(2)).exp()));
    let outside = SampledField::from_fn(&g, Side::Space, |x| Complex64::from((-(x[0] + 5.0).powi(2)).exp()));
    let pin = jump_decompose(&transform(&inside, Direction::Forward).unwrap(), &cone).unwrap();
    assert!(pin.minus.sum_sq().sqrt() <= 1e-9 * pin.plus.sum_sq().sqrt());
    let pout = jump_decompose(&transform(&outside, Direction::Forward).unwrap(), &cone).unwrap();
    assert!(pout.plus.sum_sq().sqrt() <= 1e-9 * pout.minus.sum_sq().sqrt());
}

#[test]
fn principal_value_square_is_a_quarter() {
    // S corresponds to multiplication by sign(x)/2, so S∘S = I/4 away from
    // the jump at the origin; the field below is tiny there.
    let errs: Vec<f64> = [256usize, 512, 1024]
        .iter()
        .map(|&m| {
            let g = make_grid(BlockPartition::singletons(1).unwrap(), vec![10.0], vec![m]).unwrap();
            let u = SampledField::from_fn(&g, Side::Space, |x| Complex64::from((-(x[0] - 3.0).powi(2)).exp()));
            let f = transform(&u, Direction::Forward).unwrap();
            let ss = pv_transform(&pv_transform(&f, 0).unwrap(), 0).unwrap();
            ss.rel_distance(&f.scale(Complex64::from(0.25))).unwrap()
        })
        .collect();
    assert!(errs[0] <= 5e-2 && errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
}

#[test]
fn lorentzian_hilbert_pair_oracle() {
    // Closed-form pair: S[1/(1+η²)](ξ) = iξ/(2(1+ξ²)). Tail mass beyond the
    // grid, ∫_{|ξ|>X} (1+ξ²)^{-2}, is below 1e-6 for X = π m / (2ℓ) at ℓ = 5.
    let g = make_grid(BlockPartition::singletons(1).unwrap(), vec![5.0], vec![512]).unwrap();
    let f = SampledField::from_fn(&g, Side::Frequency, |xi| Complex64::from(1.0 / (1.0 + xi[0] * xi[0])));
    let want = SampledField::from_fn(&g, Side::Frequency, |xi| Complex64::new(0.0, xi[0] / (2.0 * (1.0 + xi[0] * xi[0]))));
    let err = pv_transform(&f, 0).unwrap().rel_distance(&want).unwrap();
    assert!(err <= 2e-2, "{err}");
}
