mod common;

use common::{f, v};
use critfan_core::criticality::{analyze, GlobalVerdict, ShiftMode};
use critfan_core::exactgeom::{rat, Rational, RationalVector};
use critfan_core::repspec::RepExpr;
use critfan_core::rootdata::{Family, GroupSpec};
use num_traits::Signed;

/// Positive roots of B_m / D_m in epsilon coordinates, enumerated directly.
fn positive_roots(family: Family, m: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for s in [1, -1] {
                let mut r = vec![0; m];
                r[i] = 1;
                r[j] = -s;
                out.push(r);
            }
        }
        if family == Family::SoOdd {
            let mut r = vec![0; m];
            r[i] = 1;
            out.push(r);
        }
    }
    out
}

/// Criticality of `n` copies of the standard representation, ray by ray,
/// from first principles: the exponent on ray `v` pairs to `-n sum |v_k|`.
fn oracle_critical(family: Family, m: usize, n: u64, rays: &[RationalVector]) -> bool {
    // coordinates of 2 rho
    let rho: Vec<i64> = (0..m)
        .map(|k| positive_roots(family, m).iter().map(|r| r[k]).sum())
        .collect();
    rays.iter().any(|ray| {
        let chi: Rational = ray.coords().iter().map(|x| x.abs()).sum::<Rational>() * rat(-(n as i64));
        let two_rho: Rational = ray.coords().iter().zip(&rho).map(|(x, r)| x * rat(*r)).sum();
        chi == two_rho
    })
}

#[test]
fn kudla_rallis_rows_match_ray_oracle() {
    for (family, ms) in [(Family::SoEven, 2..=5usize), (Family::SoOdd, 1..=5usize)] {
        for m in ms {
            for n in 1..=10u64 {
                let g = GroupSpec::single(family, m);
                let b = analyze(&g, &RepExpr::mult(RepExpr::Std(0), n), ShiftMode::None).unwrap();
                let rays: Vec<RationalVector> = b.report.rays.iter().map(|r| r.ray.clone()).collect();
                let expect = oracle_critical(family, m, n, &rays);
                assert_eq!(b.report.is_critical(), expect, "{family} m={m} n={n}");
                let formula = match family {
                    Family::SoEven => (m as u64 - 1..=2 * m as u64 - 2).contains(&n),
                    _ => (m as u64..=2 * m as u64 - 1).contains(&n),
                };
                assert_eq!(expect, formula, "{family} m={m} n={n}");
            }
        }
    }
}

#[test]
fn kudla_rallis_d4_rays() {
    let g = GroupSpec::single(Family::SoEven, 4);
    let b = analyze(&g, &RepExpr::mult(RepExpr::Std(0), 4), ShiftMode::None).unwrap();
    let witnesses: Vec<_> = b.report.witnesses.clone();
    assert_eq!(b.report.global_verdict, GlobalVerdict::Critical);
    // n = 4 hits the ray -(e1 + e2 + e3): 4 * 3 = 2 * (3 + 2 + 1)
    assert!(witnesses.contains(&v(&[-1, -1, -1, 0])));
}

#[test]
fn gross_prasad_never_critical() {
    for (family, ms) in [(Family::SoOdd, 1..=5usize), (Family::SoEven, 3..=5usize)] {
        for m in ms {
            let g = GroupSpec::single(family, m);
            let e = RepExpr::Sum(vec![RepExpr::Adjoint(0), RepExpr::Std(0)]);
            let b = analyze(&g, &e, ShiftMode::None).unwrap();
            assert_eq!(b.report.global_verdict, GlobalVerdict::NonCritical, "{family} {m}");
            assert!(b.report.rays.iter().all(|r| !r.critical));
            let maxes = b.arrangement.unwrap().fan.maximal_cones().len();
            assert_eq!(maxes, if family == Family::SoEven { 2 } else { 1 }, "{family} {m}");
        }
    }
}

#[test]
fn tate_witness_moves_under_haar() {
    let g = GroupSpec::single(Family::Torus, 1);
    let plain = analyze(&g, &RepExpr::Std(0), ShiftMode::None).unwrap();
    assert_eq!(plain.report.witnesses, vec![v(&[-1])]);
    let haar = analyze(&g, &RepExpr::Std(0), ShiftMode::Haar).unwrap();
    assert_eq!(haar.report.witnesses, vec![v(&[1])]);
    assert_eq!(haar.report.shift, Some(f(&[1])));
}
