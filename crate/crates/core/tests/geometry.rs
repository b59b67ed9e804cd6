mod common;

use std::collections::BTreeSet;

use common::*;
use critfan_core::arrangement::{check_compatibility, eval_exponent, face_restriction_violations};
use critfan_core::criticality::{analyze, refine_arrangement, GlobalVerdict, ShiftMode};
use critfan_core::exactgeom::{
    cone_partition, delta_max, dd_convert, fan_from_hyperplanes, faces, is_valid_fan, rat, relint_sign, star_fan,
    Cone, Functional, Sign,
};
use critfan_core::repspec::{weights_of, RepExpr};
use critfan_core::rootdata::{build_root_datum, Family, GroupSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn d4_chamber() -> Cone {
    build_root_datum(&GroupSpec::single(Family::SoEven, 4)).unwrap().antidominant
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dd_round_trip(n in 1usize..=5, rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 0..=12)) {
        let ineqs: Vec<Functional> = rows.iter().map(|r| f(&r[..n])).collect();
        let c = dd_convert(n, &ineqs, &[]).unwrap();
        prop_assert!(c.is_consistent());
        let again = Cone::from_h(n, c.ineqs(), c.eqs()).unwrap();
        prop_assert_eq!(&again, &c);
        let from_v = Cone::from_generators(n, c.rays(), c.lineality()).unwrap();
        prop_assert_eq!(&from_v, &c);
        if c.is_pointed() && c.dim() == n {
            let oracle = brute_force_rays(&ineqs, n);
            let got: Vec<_> = c.rays().to_vec();
            prop_assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), oracle.into_iter().collect::<BTreeSet<_>>());
        }
    }
}

#[test]
fn d4_face_count_matches_subset_oracle() {
    let pointed = d4_chamber();
    assert!(pointed.is_pointed());
    let n_faces = faces(&pointed).unwrap().len();
    let ineqs = pointed.ineqs().to_vec();
    let rays = pointed.rays().to_vec();
    let mut oracle = BTreeSet::new();
    for mask in 0u32..(1 << ineqs.len()) {
        let tight: Vec<usize> = (0..rays.len())
            .filter(|&r| (0..ineqs.len()).all(|i| mask & (1 << i) == 0 || ineqs[i].pair(&rays[r]) == rat(0)))
            .collect();
        oracle.insert(tight);
    }
    assert_eq!(n_faces, oracle.len());
    assert_eq!(n_faces, 16);
}

#[test]
fn d4_fan_with_last_coordinate_wall() {
    let c = d4_chamber();
    let hyps: Vec<Functional> = (0..4)
        .map(|i| {
            let mut e = vec![0; 4];
            e[i] = 1;
            f(&e)
        })
        .collect();
    let fan = fan_from_hyperplanes(&c, &hyps).unwrap();
    assert!(is_valid_fan(&fan).is_empty());
    assert_eq!(fan.maximal_cones().len(), 2);
    let rays: BTreeSet<_> = fan.rays().iter().cloned().collect();
    let expected: BTreeSet<_> = [
        v(&[-1, 0, 0, 0]),
        v(&[-1, -1, 0, 0]),
        v(&[-1, -1, -1, -1]),
        v(&[-1, -1, -1, 1]),
        v(&[-1, -1, -1, 0]),
    ]
    .into_iter()
    .collect();
    assert_eq!(rays, expected);
    assert_eq!(relint_sign(&hyps[3], &c), Sign::Mixed);

    let v1 = Cone::from_rays(4, &[v(&[-1, 0, 0, 0])]).unwrap();
    let star = star_fan(&fan, &v1).unwrap();
    let maxes = star.fan.maximal_cones();
    assert_eq!(maxes.len(), 2);
    assert!(maxes.iter().all(|&i| star.fan.cone(i).dim() == 3));
    assert!(is_valid_fan(&star.fan).is_empty());
}

#[test]
fn gross_prasad_b3_has_single_cone() {
    let g = GroupSpec::single(Family::SoOdd, 3);
    let e = RepExpr::Sum(vec![RepExpr::Adjoint(0), RepExpr::Std(0)]);
    let b = analyze(&g, &e, ShiftMode::None).unwrap();
    let a = b.arrangement.unwrap();
    assert_eq!(a.fan.maximal_cones().len(), 1);
    assert_eq!(b.report.global_verdict, GlobalVerdict::NonCritical);
}

#[test]
fn random_fans_are_valid_and_sign_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..200 {
        let (_, a) = random_arrangement(&mut rng);
        let fan = &a.fan;
        let n = fan.ambient();
        assert!(is_valid_fan(fan).is_empty(), "case {case}: {:?}", is_valid_fan(fan));
        assert!(check_compatibility(&a).is_empty(), "case {case}");
        assert!(face_restriction_violations(&a).is_empty(), "case {case}");
        let weights = a.weights.nonzero_weights();
        for _ in 0..12 {
            let fc = &fan.cones()[rng.random_range(0..fan.cones().len())];
            if fc.cone.rays().is_empty() {
                continue;
            }
            {
                let p = random_relint_point(&mut rng, fc.cone.rays(), n);
                // exactly one cone holds p in its relative interior
                let owners = fan.cones().iter().filter(|d| d.cone.in_relint(&p)).count();
                assert_eq!(owners, 1, "case {case}");
                let q = fc.cone.relint_point();
                for w in &weights {
                    assert_eq!(w.pair(&p).cmp(&rat(0)), w.pair(&q).cmp(&rat(0)), "case {case}");
                }
            }
        }
    }
}

#[test]
fn refinement_keeps_exponents() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..60 {
        let (_, a) = random_arrangement(&mut rng);
        let mode = ShiftMode::None;
        let r = refine_arrangement(&a, &mode).unwrap();
        assert!(r.fan.is_simplicial());
        assert_eq!(r.fan.support(), a.fan.support());
        let n = a.fan.ambient();
        let maxes = a.fan.maximal_cones();
        for _ in 0..20 {
            let c = &a.fan.cone(maxes[rng.random_range(0..maxes.len())]);
            let p = random_relint_point(&mut rng, c.rays(), n);
            if c.rays().is_empty() {
                continue;
            }
            assert_eq!(eval_exponent(&a, &p).unwrap(), eval_exponent(&r, &p).unwrap(), "case {case}");
        }
    }
}

#[test]
fn partition_covers_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let c = Cone::from_rays(3, &[v(&[1, 0, 0]), v(&[1, 1, 0]), v(&[1, 0, 1]), v(&[1, 1, 1])]).unwrap();
    let d = delta_max(&c).unwrap();
    let regions = cone_partition(&c, &d).unwrap();
    assert!(!regions.is_empty());
    for _ in 0..1000 {
        let p = random_relint_point(&mut rng, c.rays(), 3);
        assert!(regions.iter().any(|r| r.contains(&p)));
    }
}

#[test]
fn b3_weights_for_adjoint_plus_std() {
    let rd = build_root_datum(&GroupSpec::single(Family::SoOdd, 3)).unwrap();
    let w = weights_of(&RepExpr::Sum(vec![RepExpr::Adjoint(0), RepExpr::Std(0)]), &rd).unwrap();
    assert_eq!(w.dim(), 21 + 7);
}
