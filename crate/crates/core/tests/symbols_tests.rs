use conepdo::cones::ConeSpec;
use conepdo::fixtures::{member_seed, random_envelope, rng, EnvelopeParams};
use conepdo::lattice::*;
use conepdo::symbols::*;
use conepdo::{Complex64, Error};
use proptest::prelude::*;

fn grid1(ell: f64, m: usize) -> Grid {
    make_grid(BlockPartition::singletons(1).unwrap(), vec![ell], vec![m]).unwrap()
}

#[test]
fn full_space_ratio_is_bounded_by_ellipticity() {
    // A = (ξ + 2i)², α = 2. The ratio |A| / (1+|ξ|)² = (ξ²+4)/(1+|ξ|)² has its
    // minimum 4/5 at |ξ| = 4, which is a node when ℓ = π.
    let g = grid1(std::f64::consts::PI, 128);
    let a = eval_symbol(&SymbolSpec::ShiftedAxis { axis: 0, shift: 2.0, power: 2.0 }, &g).unwrap();
    let alpha = SmoothnessVector::new(vec![2.0]);
    let s = SmoothnessVector::new(vec![1.0]);
    let cert = check_ellipticity(&a, &alpha, ELLIPTICITY_TOL).unwrap();
    assert!((cert.c1 - 0.8).abs() < 1e-12, "{}", cert.c1);
    assert!(cert.c2 <= 4.0 + 1e-12);
    let params = EnvelopeParams { width: 0.8, ..EnvelopeParams::default() };
    for i in 0..100 {
        let v = random_envelope(&g, &params, &mut rng(member_seed(7, i)));
        let sol = solve_full_space(&a, &v, &s, &alpha).unwrap();
        assert!(sol.ratio <= 1.0 / cert.c1 + 1e-9, "member {i}: {}", sol.ratio);
        let back = apply_pdo(&a, &sol.u).unwrap();
        assert!(back.rel_distance(&v).unwrap() < 1e-12);
    }
}

#[test]
fn full_space_rejects_vanishing_symbol() {
    let g = grid1(4.0, 64);
    let a = eval_symbol(&SymbolSpec::ShiftedAxis { axis: 0, shift: 0.0, power: 1.0 }, &g).unwrap();
    let v = SampledField::from_fn(&g, Side::Space, |x| Complex64::from((-x[0] * x[0]).exp()));
    let one = SmoothnessVector::new(vec![1.0]);
    assert!(matches!(solve_full_space(&a, &v, &one, &one), Err(Error::NotElliptic { .. })));
}

#[test]
fn eskin_growth_certificate() {
    // |ξ_n ± i(1+|ξ'|)| / (1+|ξ|) lies in [1/√2, 1].
    for (p, counts) in [
        (BlockPartition::singletons(1).unwrap(), vec![256]),
        (BlockPartition::single_block(2).unwrap(), vec![64, 64]),
        (BlockPartition::single_block(3).unwrap(), vec![16, 16, 16]),
    ] {
        let g = make_grid(p.clone(), vec![6.0; counts.len()], counts).unwrap();
        for side in [FactorSide::Plus, FactorSide::Minus] {
            for gamma in [1.0, -1.0, 0.5] {
                let f = eval_symbol(&SymbolSpec::HalfspaceEskinFactor { gamma: vec![gamma], side }, &g).unwrap();
                let cert = check_ellipticity(&f, &SmoothnessVector::new(vec![gamma]), ELLIPTICITY_TOL).unwrap();
                let (lo, hi) = if gamma > 0.0 {
                    (0.5f64.powf(gamma / 2.0), 1.0)
                } else {
                    (1.0, 2.0f64.powf(-gamma / 2.0))
                };
                assert!(cert.c1 >= lo - 1e-12 && cert.c2 <= hi + 1e-12, "{gamma} {cert:?}");
            }
        }
    }
}

#[test]
fn eskin_leak_shrinks_and_wrong_side_is_caught() {
    let leaks: Vec<f64> = [512usize, 1024, 2048]
        .iter()
        .map(|&m| {
            let g = grid1(6.0, m);
            let f = eval_symbol(&SymbolSpec::HalfspaceEskinFactor { gamma: vec![1.0], side: FactorSide::Plus }, &g).unwrap();
            let cone = ConeSpec::halfspaces(g.partition());
            let rep = validate_factor_support(&f, &cone, FactorSide::Plus, SUPPORT_TOL).unwrap();
            let wrong = validate_factor_support(&f, &cone, FactorSide::Minus, SUPPORT_TOL).unwrap();
            assert!(wrong.leak >= 0.5 && !wrong.pass, "{wrong:?}");
            rep.leak
        })
        .collect();
    assert!(leaks[0] <= SUPPORT_TOL && leaks[1] < leaks[0] && leaks[2] < leaks[1], "{leaks:?}");
}

#[test]
fn constant_factor_has_no_leak() {
    let g = grid1(6.0, 512);
    let f = eval_symbol(&SymbolSpec::WeightPower { gamma: vec![0.0] }, &g).unwrap();
    let rep = validate_factor_support(&f, &ConeSpec::halfspaces(g.partition()), FactorSide::Plus, SUPPORT_TOL).unwrap();
    assert!(!rep.mollified && rep.leak == 0.0 && rep.pass, "{rep:?}");
}

#[test]
fn polynomial_reciprocals_are_mollified() {
    // The kernel of (ξ + i) sits at the origin; the mollified kernel is a
    // centred bump, so roughly half of it falls outside the half-line.
    let g = grid1(6.0, 512);
    let f = eval_symbol(&SymbolSpec::HalfspaceEskinFactor { gamma: vec![-1.0], side: FactorSide::Plus }, &g).unwrap();
    let rep = validate_factor_support(&f, &ConeSpec::halfspaces(g.partition()), FactorSide::Plus, SUPPORT_TOL).unwrap();
    assert!(rep.mollified && !rep.pass, "{rep:?}");
}

#[test]
fn eskin_factorization_is_consistent() {
    let g = grid1(6.0, 512);
    let fac = FactorizedSymbol::eskin_halfspace(g.partition(), vec![1.0], vec![1.0]);
    let total = SymbolSpec::Product {
        factors: vec![
            SymbolSpec::ShiftedAxis { axis: 0, shift: 1.0, power: 1.0 },
            SymbolSpec::ShiftedAxis { axis: 0, shift: -1.0, power: 1.0 },
        ],
    };
    let rep = fac.validate(&g, SUPPORT_TOL, Some(&total)).unwrap();
    assert!(rep.consistency.unwrap() < 1e-14);
    assert!(rep.pass());
}

#[test]
fn reciprocal_of_product_inverts() {
    let g = make_grid(BlockPartition::single_block(2).unwrap(), vec![5.0; 2], vec![32; 2]).unwrap();
    let spec = SymbolSpec::Product {
        factors: vec![
            SymbolSpec::HalfspaceEskinFactor { gamma: vec![1.5], side: FactorSide::Plus },
            SymbolSpec::Cone2dLorentzFactor { block: 0, a: 0.7, p: 1, side: FactorSide::Minus },
        ],
    };
    let a = eval_symbol(&spec, &g).unwrap();
    let r = eval_symbol(&spec.reciprocal(), &g).unwrap();
    let one = SampledField::from_fn(&g, Side::Frequency, |_| Complex64::from(1.0));
    assert!(a.mul(&r).unwrap().rel_distance(&one).unwrap() < 1e-13);
    assert_eq!(spec.nominal_order(g.partition()).unwrap().values(), &[3.5]);
}

#[test]
fn qn_matches_plus_factor_power() {
    let g = make_grid(BlockPartition::single_block(2).unwrap(), vec![5.0; 2], vec![16; 2]).unwrap();
    let q = build_qn(&g, &[2]).unwrap();
    let want = SampledField::from_fn(&g, Side::Frequency, |xi| {
        Complex64::new(xi[1], 1.0 + xi[0].abs()).powi(2)
    });
    assert!(q.rel_distance(&want).unwrap() < 1e-15);
}

#[test]
fn index_decomposition_examples() {
    let s = SmoothnessVector::new(vec![0.2, -1.0]);
    let a = SmoothnessVector::new(vec![1.5, 1.1]);
    let d = decompose_index(&s, &a).unwrap();
    assert_eq!(d.n, vec![1, 2]);
    assert!(!d.is_unique_regime());
    assert!(decompose_index(&SmoothnessVector::new(vec![0.0]), &SmoothnessVector::new(vec![0.5])).is_err());
    assert!(decompose_index(&SmoothnessVector::new(vec![2.0]), &SmoothnessVector::new(vec![0.0])).is_err());
}

proptest! {
    #[test]
    fn decomposition_reassembles(pairs in prop::collection::vec((-3.0f64..3.0, -0.45f64..6.0), 1..4)) {
        let s = SmoothnessVector::new(pairs.iter().map(|p| p.0).collect());
        let a = SmoothnessVector::new(pairs.iter().map(|p| p.0 + p.1).collect());
        if let Ok(d) = decompose_index(&s, &a) {
            for j in 0..pairs.len() {
                let lhs = a.values()[j] - s.values()[j];
                prop_assert!((d.n[j] as f64 + d.delta.values()[j] - lhs).abs() <= 1e-15 * lhs.abs().max(1.0));
                prop_assert!(d.delta.values()[j].abs() < 0.5);
            }
        }
    }

    #[test]
    fn pdo_composes_multiplicatively(g1 in -1.5f64..1.5, g2 in -1.5f64..1.5, seed in any::<u64>()) {
        let g = grid1(6.0, 64);
        let a = eval_symbol(&SymbolSpec::WeightPower { gamma: vec![g1] }, &g).unwrap();
        let b = eval_symbol(&SymbolSpec::WeightPower { gamma: vec![g2] }, &g).unwrap();
        let ab = eval_symbol(&SymbolSpec::WeightPower { gamma: vec![g1 + g2] }, &g).unwrap();
        let u = random_envelope(&g, &EnvelopeParams::default(), &mut rng(seed));
        let lhs = apply_pdo(&a, &apply_pdo(&b, &u).unwrap()).unwrap();
        let rhs = apply_pdo(&ab, &u).unwrap();
        prop_assert!(lhs.rel_distance(&rhs).unwrap() <= 1e-12);
    }
}
