//! Regression table and seeded property suites.

use critfan_core::arrangement::{
    build_arrangement, check_compatibility, eval_exponent, face_restriction_violations, ExponentArrangement,
};
use critfan_core::asymlab::{
    fit_exponent, invariance_check, mellin_regularize, poisson_identity_check, AsymFun1D, LatticeSumProbe,
    ProbeFunction, TorusAction,
};
use critfan_core::criticality::{criticality_report, refine_arrangement, CriticalityReport, GlobalVerdict, ShiftMode};
use critfan_core::exactgeom::{dd_convert, is_valid_fan, rat, Cone, Functional, RationalVector};
use critfan_core::repspec::{weights_of, RepExpr};
use critfan_core::rootdata::{build_root_datum, Family, GroupSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::sha256_hex;

pub const SUITES: [&str; 5] = ["kudla", "gross_prasad", "tate", "properties", "numerics"];
pub const PROPERTY_SEED: u64 = 0x00c0_ffee;
pub const PROPERTY_CASES: usize = 40;

/// Deliberate faults for mutation checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inject {
    WrongTwoRho,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn case(suite: &'static str, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Case {
    Case {
        suite,
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn report_for(g: &GroupSpec, e: &RepExpr, mode: ShiftMode, inject: Option<Inject>) -> Result<(CriticalityReport, Option<ExponentArrangement>), String> {
    let mut rd = build_root_datum(g).map_err(|e| e.to_string())?;
    if inject == Some(Inject::WrongTwoRho) {
        let n = rd.dim_a;
        rd.two_rho = &rd.two_rho + &Functional::new(vec![rat(1); n]);
    }
    let w = weights_of(e, &rd).map_err(|e| e.to_string())?;
    match build_arrangement(&rd, &w) {
        Ok(a) => Ok((criticality_report(&a, &rd, mode), Some(a))),
        Err(critfan_core::arrangement::ArrangementError::CentralTorusActsTrivially) => {
            Ok((CriticalityReport::central_trivial(mode), None))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn kudla(inject: Option<Inject>) -> Vec<Case> {
    let mut out = Vec::new();
    for (family, label, ms) in [(Family::SoEven, "D", 2..=5usize), (Family::SoOdd, "B", 2..=5usize)] {
        for m in ms {
            for n in 1..=10u64 {
                let name = format!("kudla_rallis {label}{m} n={n}");
                let (lo, hi) = match family {
                    Family::SoEven => (m as u64 - 1, 2 * m as u64 - 2),
                    _ => (m as u64, 2 * m as u64 - 1),
                };
                let expect = (lo..=hi).contains(&n);
                let g = GroupSpec::single(family, m);
                match report_for(&g, &RepExpr::mult(RepExpr::Std(0), n), ShiftMode::None, inject) {
                    Ok((r, _)) => {
                        let got = r.global_verdict == GlobalVerdict::Critical;
                        out.push(case(
                            "kudla",
                            name,
                            got == expect,
                            format!("expected critical={expect} got {} witnesses={}", r.global_verdict, r.witnesses.len()),
                        ));
                    }
                    Err(e) => out.push(case("kudla", name, false, e)),
                }
            }
        }
    }
    out
}

fn gross_prasad(inject: Option<Inject>) -> Vec<Case> {
    let mut out = Vec::new();
    for (family, label, ms) in [(Family::SoOdd, "B", 1..=5usize), (Family::SoEven, "D", 3..=5usize)] {
        for m in ms {
            let name = format!("gross_prasad {label}{m}");
            let g = GroupSpec::single(family, m);
            let e = RepExpr::Sum(vec![RepExpr::Adjoint(0), RepExpr::Std(0)]);
            match report_for(&g, &e, ShiftMode::None, inject) {
                Ok((r, Some(a))) => {
                    let maxes = a.fan.maximal_cones().len();
                    let want = if family == Family::SoEven { 2 } else { 1 };
                    let ok = r.global_verdict == GlobalVerdict::NonCritical && maxes == want;
                    out.push(case(
                        "gross_prasad",
                        name,
                        ok,
                        format!("{} with {maxes} maximal cones over {} rays", r.global_verdict, r.rays.len()),
                    ));
                }
                Ok((r, None)) => out.push(case("gross_prasad", name, false, r.global_verdict.to_string())),
                Err(e) => out.push(case("gross_prasad", name, false, e)),
            }
        }
    }
    out
}

fn tate(inject: Option<Inject>) -> Vec<Case> {
    let g = GroupSpec::single(Family::Torus, 1);
    let mut out = Vec::new();
    for (mode, want) in [(ShiftMode::None, -1), (ShiftMode::Haar, 1)] {
        let name = format!("tate shift={}", mode.name());
        match report_for(&g, &RepExpr::Std(0), mode, inject) {
            Ok((r, _)) => {
                let ok = r.global_verdict == GlobalVerdict::Critical && r.witnesses == vec![RationalVector::from_ints(&[want])];
                let w: Vec<String> = r.witnesses.iter().map(|v| v.to_string()).collect();
                out.push(case("tate", name, ok, format!("witnesses {}", w.join(" "))));
            }
            Err(e) => out.push(case("tate", name, false, e)),
        }
    }
    out
}

/// Random torus or classical group of rank at most 4 with at most 10 direct
/// weights; resamples until the arrangement exists.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (GroupSpec, ExponentArrangement) {
    loop {
        let rank = rng.random_range(1..=4usize);
        let family = match rng.random_range(0..5) {
            0 => Family::Torus,
            1 => Family::GL,
            2 => Family::SoOdd,
            3 => Family::Sp,
            _ if rank >= 2 => Family::SoEven,
            _ => Family::Torus,
        };
        let g = GroupSpec::single(family, rank);
        let rd = build_root_datum(&g).expect("ranks 1..=4 are supported");
        let k = rng.random_range(1..=10usize);
        let list: Vec<(Functional, u64)> = (0..k)
            .map(|_| {
                let c: Vec<i64> = (0..rank).map(|_| rng.random_range(-2..=2)).collect();
                (Functional::from_ints(&c), rng.random_range(1..=2u64))
            })
            .collect();
        let w = weights_of(&RepExpr::DirectWeights(list), &rd).expect("dimensions match");
        if let Ok(a) = build_arrangement(&rd, &w) {
            return (g, a);
        }
    }
}

/// Positive integer combination of the given rays.
pub fn random_relint_point(rng: &mut ChaCha8Rng, rays: &[RationalVector], n: usize) -> RationalVector {
    rays.iter().fold(RationalVector::zeros(n), |acc, r| &acc + &r.scale(&rat(rng.random_range(1..=9))))
}

/// Random support point: a random cone of the fan and a point in its relative interior.
pub fn random_support_point(rng: &mut ChaCha8Rng, a: &ExponentArrangement) -> RationalVector {
    let cones = a.fan.cones();
    let c = &cones[rng.random_range(0..cones.len())].cone;
    random_relint_point(rng, c.rays(), a.fan.ambient())
}

/// Property checks on one random instance; returns the failures.
pub fn check_instance(rng: &mut ChaCha8Rng, a: &ExponentArrangement, points: usize) -> Vec<String> {
    let mut fails = Vec::new();
    let fan = &a.fan;
    fails.extend(is_valid_fan(fan).into_iter().map(|d| format!("fan: {d}")));
    fails.extend(check_compatibility(a).into_iter().map(|d| format!("compatibility: {d}")));
    fails.extend(face_restriction_violations(a).into_iter().map(|d| format!("face restriction: {d}")));
    let weights = a.weights.nonzero_weights();
    for _ in 0..8 {
        let fc = &fan.cones()[rng.random_range(0..fan.cones().len())];
        let p = random_relint_point(rng, fc.cone.rays(), fan.ambient());
        let q = fc.cone.relint_point();
        for w in &weights {
            if w.pair(&p).cmp(&rat(0)) != w.pair(&q).cmp(&rat(0)) {
                fails.push(format!("sign constancy: weight {w} on cone {:?}", fc.rays));
            }
        }
    }
    for fc in fan.cones() {
        let again = dd_convert(fan.ambient(), fc.cone.ineqs(), fc.cone.eqs());
        let back = Cone::from_generators(fan.ambient(), fc.cone.rays(), fc.cone.lineality());
        if again.as_ref() != Ok(&fc.cone) || back.as_ref() != Ok(&fc.cone) {
            fails.push(format!("dd round trip: cone {:?}", fc.rays));
        }
    }
    let rep = criticality_report(a, &a.root_datum, ShiftMode::None);
    if rep.global_verdict == GlobalVerdict::NonCritical {
        match refine_arrangement(a, &ShiftMode::None) {
            Ok(r) => {
                let rr = criticality_report(&r, &r.root_datum, ShiftMode::None);
                if rr.global_verdict != GlobalVerdict::NonCritical {
                    fails.push("refinement changed the verdict".into());
                }
                for _ in 0..points {
                    let p = random_support_point(rng, a);
                    if eval_exponent(a, &p).ok() != eval_exponent(&r, &p).ok() {
                        fails.push(format!("refinement changed the exponent at {p}"));
                    }
                }
            }
            Err(e) => fails.push(format!("refinement: {e}")),
        }
    }
    fails
}

fn properties() -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(PROPERTY_SEED);
    (0..PROPERTY_CASES)
        .map(|i| {
            let (g, a) = random_instance(&mut rng);
            let fails = check_instance(&mut rng, &a, 10);
            let desc: Vec<String> = g.factors.iter().map(|f| format!("{}{}", f.family, f.rank)).collect();
            let detail = if fails.is_empty() {
                format!("{} with {} weights: {} cones", desc.join("x"), a.weights.entries().len(), a.fan.cones().len())
            } else {
                fails.join("; ")
            };
            case("properties", format!("random instance {i}"), fails.is_empty(), detail)
        })
        .collect()
}

fn slope_case(weights: Vec<Vec<i64>>, lambda: &[i64], exact: f64) -> Case {
    let name = format!("slope {weights:?} along {lambda:?}");
    let probe = TorusAction::new(weights).map(|action| LatticeSumProbe {
        action,
        f: ProbeFunction::Gaussian,
        lambda: RationalVector::from_ints(lambda),
        t_grid: LatticeSumProbe::geometric_grid(1e-3, 1e-1, 12),
    });
    match probe.and_then(|p| fit_exponent(&p)) {
        Ok(s) => case("numerics", name, (s - exact).abs() < 0.05, format!("slope {s:.6} vs {exact}")),
        Err(e) => case("numerics", name, false, e.to_string()),
    }
}

fn numerics() -> Vec<Case> {
    let so = vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]];
    let mut out = vec![
        slope_case(vec![vec![1]], &[1], -1.0),
        slope_case(vec![vec![1], vec![-1]], &[1], -1.0),
        slope_case(vec![vec![1], vec![-1]], &[-1], -1.0),
        slope_case(so.clone(), &[1, 2], -3.0),
        slope_case(so, &[-2, -1], -3.0),
    ];
    let gl1 = TorusAction::new(vec![vec![1]]).expect("valid action");
    let p = poisson_identity_check(&gl1, &ProbeFunction::Gaussian, &[0.5]);
    out.push(match p {
        Ok(v) => case("numerics", "poisson gaussian", v < 1e-10, format!("residual {v:.3e}")),
        Err(e) => case("numerics", "poisson gaussian", false, e.to_string()),
    });
    for (name, exact) in [("t_exp", Some(1.0)), ("bessel", Some(0.227_787_745_499_066_87)), ("exp", None)] {
        let g = AsymFun1D::builtin(name).expect("built-in");
        let c = match (mellin_regularize(&g), exact) {
            (Ok(v), Some(x)) => {
                let d = invariance_check(&g, 2.0).unwrap_or(f64::INFINITY);
                case("numerics", format!("regularize {name}"), (v - x).abs() < 1e-8 && d < 1e-7, format!("{v:.9}"))
            }
            (Err(e), None) => case("numerics", format!("regularize {name}"), true, e.to_string()),
            (r, _) => case("numerics", format!("regularize {name}"), false, format!("{r:?}")),
        };
        out.push(c);
    }
    out
}

pub fn run_suites(filter: Option<&str>, inject: Option<Inject>) -> Vec<Case> {
    let mut cases = Vec::new();
    for suite in SUITES {
        if filter.is_some_and(|f| !suite.contains(&f.to_ascii_lowercase())) {
            continue;
        }
        cases.extend(match suite {
            "kudla" => kudla(inject),
            "gross_prasad" => gross_prasad(inject),
            "tate" => tate(inject),
            "properties" => properties(),
            _ => numerics(),
        });
    }
    cases
}

pub fn cases_json(cases: &[Case]) -> Value {
    Value::Array(
        cases
            .iter()
            .map(|c| json!({"suite": c.suite, "name": c.name, "passed": c.passed, "detail": c.detail}))
            .collect(),
    )
}

/// Hash of the canonical case list.
pub fn report_hash(cases: &[Case]) -> String {
    sha256_hex(serde_json::to_string(&cases_json(cases)).expect("serializable").as_bytes())
}
