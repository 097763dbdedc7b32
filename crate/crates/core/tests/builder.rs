mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::Rng;

use uniton_core::factor::{big_cell_check, bruhat_cell, flow_limit};
use uniton_core::loops::LoopMat;
use uniton_core::scalar::{GaussianRational, RatFun, Scalar};
use uniton_core::verify::{check_extended, check_superhorizontal, check_t_invariant, uniton_number_report};
use uniton_core::weierstrass::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn u4_free(a: [RatFun; 6]) -> BTreeMap<Slot, RatFun> {
    let [a1, a2, a3, d1, d2, f1] = a;
    [
        (Slot::new(0, 0, 1), a1),
        (Slot::new(0, 1, 2), a2),
        (Slot::new(0, 2, 3), a3),
        (Slot::new(1, 0, 2), d1),
        (Slot::new(1, 1, 3), d2),
        (Slot::new(2, 0, 3), f1),
    ]
    .into_iter()
    .collect()
}

#[test]
fn u4_weierstrass_data_pattern() {
    let mut rng = common::rng(7);
    for _ in 0..5 {
        let data: [RatFun; 6] = std::array::from_fn(|_| common::random_nonconstant(&mut rng, 3));
        let spec = build_from_free_functions(&[3, 2, 1, 0], &u4_free(data.clone())).unwrap();
        assert!(check_extended(&spec).passed());
        let v = big_cell_check(&spec).unwrap().v;
        let [a1, a2, a3, d1, d2, f1] = data;
        let expected = [
            ((0, 1), a1),
            ((1, 2), a2),
            ((2, 3), a3),
            ((0, 2), d1),
            ((1, 3), d2),
            ((0, 3), f1),
        ];
        for ((a, b), f) in expected {
            assert_eq!(v[(a, b)], f.differentiate());
        }
        for a in 0..4 {
            for b in 0..=a {
                assert!(v[(a, b)].is_zero());
            }
        }
    }
}

#[test]
fn perturbing_the_u4_corner_breaks_the_lambda_one_condition() {
    let mut rng = common::rng(8);
    let data: [RatFun; 6] = std::array::from_fn(|_| common::random_nonconstant(&mut rng, 2));
    let spec = build_from_free_functions(&[3, 2, 1, 0], &u4_free(data)).unwrap();
    let e1 = Slot::new(1, 0, 3);
    let bad = spec.with_slot(e1, spec.get(&e1) + RatFun::z()).unwrap();
    let report = check_extended(&bad);
    let failed: Vec<_> = report.checks.iter().filter(|c| !c.pass).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0].name, "lambda^1 coefficient in f_2");
    assert!(format!("{:?}", failed[0].evidence).contains("g_3"));
}

#[test]
fn zero_spec_checks_pass() {
    let spec = ExtendedSolutionSpec::trivial(vec![3, 2, 1, 0]).unwrap();
    assert!(check_extended(&spec).passed());
    assert_eq!(uniton_number_report(&spec).unwrap().ad_width, 3);
    let constant = ExtendedSolutionSpec::trivial(vec![0, 0]).unwrap();
    assert_eq!(uniton_number_report(&constant).unwrap().ad_width, 0);
}

#[test]
fn veronese_uniton_numbers_and_cells() {
    for n in 2..=5 {
        let spec = veronese_solution(n).unwrap();
        let numbers = uniton_number_report(&spec).unwrap();
        assert_eq!(numbers.ad_width, n as u32 - 1);
        assert!(numbers.report().passed());
    }
    let spec = veronese_solution(4).unwrap();
    assert_eq!(bruhat_cell(&spec.assemble_loop()).unwrap().exponents, vec![3, 2, 1, 0]);
}

#[test]
fn grassmannian_transforms_of_the_veronese() {
    let spec = veronese_solution(3).unwrap();
    for d in [1usize, 2] {
        let j: BTreeSet<usize> = [d].into_iter().collect();
        let t = transform_subset(&spec, &j).unwrap();
        assert!(check_extended(&t).passed());
        assert_eq!(t.height(), 1);
    }
    let j: BTreeSet<usize> = [3].into_iter().collect();
    assert!(matches!(transform_subset(&spec, &j), Err(BuildError::NotAFlagStep(3))));
}

#[test]
fn n4_frame_transform_exponents() {
    let spec = veronese_solution(4).unwrap();
    for (d, k) in [(1usize, vec![1, 1, 1, 0]), (2, vec![1, 1, 0, 0]), (3, vec![1, 0, 0, 0])] {
        let t = transform_subset(&spec, &[d].into_iter().collect()).unwrap();
        assert_eq!(t.exponents(), &k[..]);
        assert!(check_extended(&t).passed());
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn builder_output_is_an_extended_solution(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = common::rng(seed);
        let spec = common::random_spec(&mut rng, n, 3);
        prop_assert!(check_extended(&spec).passed());
        prop_assert!(spec.in_big_cell_chart());
        prop_assert!(big_cell_check(&spec).is_ok());
        prop_assert_eq!(spec.assemble_loop().det_monomial().unwrap().1, spec.exponents().iter().sum::<i32>());
    }

    #[test]
    fn perturbing_a_determined_slot_fails(seed in any::<u64>(), n in 3usize..=4) {
        let mut rng = common::rng(seed);
        let spec = common::random_spec(&mut rng, n, 2);
        let k = spec.exponents().to_vec();
        let determined: Vec<Slot> = big_cell_slots(&k).into_iter().filter(|s| s.grade(&k) >= s.i as i32 + 2).collect();
        prop_assume!(!determined.is_empty());
        let slot = determined[rng.gen_range(0..determined.len())];
        let p = common::random_nonconstant(&mut rng, 2);
        let bad = spec.with_slot(slot, spec.get(&slot) + p).unwrap();
        prop_assert!(!check_extended(&bad).passed());
    }

    #[test]
    fn uniton_number_equals_height(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = common::rng(seed);
        let spec = common::random_spec(&mut rng, n, 2);
        let numbers = uniton_number_report(&spec).unwrap();
        prop_assert!(numbers.report().passed());
        let limit = flow_limit(&spec);
        prop_assert_eq!(uniton_number_report(&limit).unwrap().ad_width, numbers.ad_width);
        prop_assert!(check_superhorizontal(&limit).unwrap().passed());
    }

    #[test]
    fn closed_form_frames_are_superhorizontal(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = common::rng(seed);
        let f: Vec<RatFun> = (0..n).map(|_| common::random_poly(&mut rng, 3)).collect();
        match closed_form_full_flag_c0(&f) {
            Ok(e) => {
                let spec = spec_from_c0_exponential(&e).unwrap();
                prop_assert!(check_superhorizontal(&spec).unwrap().passed());
                prop_assert!(check_extended(&spec).passed());
            }
            Err(err) => prop_assert_eq!(err, BuildError::DegenerateFrame),
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn transforms_stay_extended(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = common::rng(seed);
        let spec = common::random_spec(&mut rng, n, 2);
        let steps: Vec<usize> = flag_steps(spec.exponents()).into_iter().collect();
        let subset: BTreeSet<usize> = steps.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        prop_assume!(!subset.is_empty());
        let t = transform_subset(&spec, &subset).unwrap();
        prop_assert!(check_extended(&t).passed());
    }

    #[test]
    fn even_builds_are_twist_invariant(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = common::rng(seed);
        let k = common::random_exponents(&mut rng, n, 3);
        let spec = even_grassmannian_build(&k, &common::random_free(&mut rng, &k, true, 2)).unwrap();
        prop_assert!(check_extended(&spec).passed());
        prop_assert!(check_t_invariant(&spec.based_loop()).passed());
        if spec.height() <= 2 {
            prop_assert!(spec.is_s1_invariant());
            prop_assert!(free_slots(&k, true).iter().all(|s| s.i == 0));
        }
    }
}

#[test]
fn gamma_twist_and_exactness() {
    let g = LoopMat::<RatFun>::gamma(&[2, 2, 0]);
    assert!(check_t_invariant(&g).passed());
    let half = RatFun::constant(GaussianRational::from_ratio(1, 2));
    assert_eq!(half.clone() + half, RatFun::one());
}
