mod common;

use common::v;
use critfan_core::arrangement::{build_arrangement, eval_exponent};
use critfan_core::asymlab::{
    box_sum, fit_exponent, invariance_check, lattice_sum, lattice_sum_detailed, mellin_regularize, plain_integral,
    poisson_identity_check, residual_check, theta, AsymError, AsymFun1D, LatticeSumProbe, ProbeFunction,
    TorusAction,
};
use critfan_core::exactgeom::Functional;
use critfan_core::repspec::{weights_of, RepExpr};
use critfan_core::rootdata::{build_root_datum, Family, GroupSpec};

const SQRT_PI: f64 = 1.772_453_850_905_516;
/// sum_n exp(-pi n^2)
const THETA_ONE: f64 = 1.086_434_811_213_308;
/// 2 K_0(2)
const BESSEL_REF: f64 = 0.227_787_745_499_066_87;
/// Gamma(-0.3)
const GAMMA_M03: f64 = -4.326_851_108_825_193;

/// Trapezoid rule in `u = log t` on a wide window; exponentially accurate for
/// integrands decaying at both ends.
fn trapezoid_log(g: impl Fn(f64) -> f64) -> f64 {
    let h = 1e-3;
    let (lo, hi) = (-40.0, 40.0);
    let n = ((hi - lo) / h) as usize;
    (0..=n)
        .map(|k| {
            let u = lo + k as f64 * h;
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            let val = g(u.exp());
            if val.is_finite() {
                w * val
            } else {
                0.0
            }
        })
        .sum::<f64>()
        * h
}

fn naive_theta(a: f64, radius: i64) -> f64 {
    (-radius..=radius).map(|n| (-std::f64::consts::PI * (n as f64 * a).powi(2)).exp()).sum()
}

#[test]
fn theta_against_direct_sum() {
    let gl1 = TorusAction::new(vec![vec![1]]).unwrap();
    for a in [0.3, 0.7, 1.0, 2.5] {
        let s = lattice_sum(&gl1, &ProbeFunction::Gaussian, &[a]).unwrap();
        assert!((s - naive_theta(a, 60)).abs() < 1e-14, "{a}");
    }
    assert!((theta(1.0) - THETA_ONE).abs() < 1e-15);
    let b = box_sum(&gl1, &ProbeFunction::Gaussian, &[1.0], &[10]).unwrap();
    assert!((b - THETA_ONE).abs() < 1e-15);
}

#[test]
fn tail_bound_dominates_truncation() {
    let gl1 = TorusAction::new(vec![vec![1]]).unwrap();
    let full = lattice_sum_detailed(&gl1, &ProbeFunction::Gaussian, &[0.05]).unwrap();
    assert!(full.tail_bound < 1e-12);
    let mut prev = 0.0;
    for r in 1..60 {
        let s = box_sum(&gl1, &ProbeFunction::Gaussian, &[0.05], &[r]).unwrap();
        assert!(s >= prev);
        prev = s;
    }
    assert!((prev - full.value).abs() < 1e-10);
}

#[test]
fn scaled_gaussian_poisson() {
    let gl1 = TorusAction::new(vec![vec![1]]).unwrap();
    let f = ProbeFunction::ScaledGaussian(vec![2.0]);
    let s = lattice_sum(&gl1, &f, &[0.2]).unwrap();
    assert!((s - naive_theta(0.4, 200)).abs() < 1e-13);
    assert!(poisson_identity_check(&gl1, &f, &[0.2]).unwrap() < 1e-10);
    let three = TorusAction::new(vec![vec![1, 0], vec![0, 1], vec![1, -1]]).unwrap();
    assert!(poisson_identity_check(&three, &ProbeFunction::Gaussian, &[0.3, 2.0]).unwrap() < 1e-10);
}

fn probe(weights: Vec<Vec<i64>>, lambda: &[i64]) -> LatticeSumProbe {
    LatticeSumProbe {
        action: TorusAction::new(weights).unwrap(),
        f: ProbeFunction::Gaussian,
        lambda: v(lambda),
        t_grid: LatticeSumProbe::geometric_grid(1e-3, 1e-1, 12),
    }
}

/// Exponent predicted by the exact arrangement of the torus model.
fn predicted(weights: &[Vec<i64>], lambda: &[i64]) -> f64 {
    let rank = weights[0].len();
    let rd = build_root_datum(&GroupSpec::single(Family::Torus, rank)).unwrap();
    let list = weights.iter().map(|w| (Functional::from_ints(w), 1)).collect();
    let w = weights_of(&RepExpr::DirectWeights(list), &rd).unwrap();
    let a = build_arrangement(&rd, &w).unwrap();
    use num_traits::ToPrimitive;
    eval_exponent(&a, &v(lambda)).unwrap().to_f64().unwrap()
}

#[test]
fn slopes_match_exact_exponents() {
    let cases: Vec<(Vec<Vec<i64>>, Vec<i64>)> = vec![
        (vec![vec![1]], vec![1]),
        (vec![vec![1], vec![-1]], vec![1]),
        (vec![vec![1], vec![-1]], vec![-1]),
        (vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]], vec![1, 2]),
        (vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]], vec![-2, 1]),
        (vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]], vec![-1, -1]),
        (vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]], vec![3, -1]),
    ];
    for (w, l) in cases {
        let exact = predicted(&w, &l);
        let l1: i64 = l.iter().map(|x| x.abs()).sum();
        if w.len() == 4 {
            assert_eq!(exact, -(l1 as f64));
        }
        let slope = fit_exponent(&probe(w.clone(), &l)).unwrap();
        assert!((slope - exact).abs() < 0.05, "{w:?} {l:?}: {slope} vs {exact}");
    }
}

#[test]
fn residual_bounded() {
    let w = vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]];
    let quadrant = critfan_core::exactgeom::Cone::from_rays(2, &[v(&[1, 0]), v(&[0, 1])]).unwrap();
    let r = residual_check(&probe(w.clone(), &[1, 2]), &quadrant).unwrap();
    assert!(r <= 1.0, "{r}");
    assert_eq!(residual_check(&probe(w, &[1, 0]), &quadrant), Err(AsymError::OutsideRelint));
}

#[test]
fn regularized_values() {
    let t_exp = AsymFun1D::builtin("t_exp").unwrap();
    assert!((mellin_regularize(&t_exp).unwrap() - 1.0).abs() < 1e-8);
    let bessel = AsymFun1D::builtin("bessel").unwrap();
    let reg = mellin_regularize(&bessel).unwrap();
    let oracle = trapezoid_log(|t| bessel.eval(t));
    assert!((oracle - BESSEL_REF).abs() < 1e-12);
    assert!((reg - oracle).abs() < 1e-8);
    assert!((plain_integral(&bessel).unwrap() - oracle).abs() < 1e-8);
    assert!((plain_integral(&t_exp).unwrap() - 1.0).abs() < 1e-8);

    let g = AsymFun1D::builtin("tpow_exp=-0.3").unwrap();
    assert!((mellin_regularize(&g).unwrap() - GAMMA_M03).abs() < 1e-8);
    let h = AsymFun1D::builtin("sqrt_exp_inv").unwrap();
    assert!((mellin_regularize(&h).unwrap() + 2.0 * SQRT_PI).abs() < 1e-8);
}

#[test]
fn invariance_defects() {
    for name in ["t_exp", "bessel", "inv_sqrt_exp", "sqrt_exp_inv", "tpow_exp=-0.3"] {
        let g = AsymFun1D::builtin(name).unwrap();
        for u in [0.1, 0.5, 2.0, 10.0] {
            assert!(invariance_check(&g, u).unwrap() <= 1e-7, "{name} at {u}");
        }
    }
}

#[test]
fn constant_tail_is_critical() {
    let g = AsymFun1D::builtin("exp").unwrap();
    assert_eq!(mellin_regularize(&g), Err(AsymError::CriticalExponent("0")));
    let k = AsymFun1D::new("one_minus_exp", |t| -(-t).exp_m1(), (1.0, 1.0), (0.0, 1.0));
    assert_eq!(mellin_regularize(&k), Err(AsymError::CriticalExponent("infinity")));
}
