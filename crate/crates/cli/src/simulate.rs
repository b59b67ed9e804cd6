//! Split-torus desk model: numeric exponents against the exact arrangement.

use critfan_core::arrangement::{build_arrangement, eval_exponent};
use critfan_core::asymlab::{
    fit_exponent, poisson_identity_check, residual_check, LatticeSumProbe, ProbeFunction, TorusAction,
};
use critfan_core::exactgeom::{fmt_rational, RationalVector};
use critfan_core::repspec::{weights_of, RepExpr, WeightMultiset};
use critfan_core::rootdata::{build_root_datum, Family, GroupSpec};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::report::int_vector;
use crate::spec::GridSpec;

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("unsupported for simulation: {0}")]
    UnsupportedForSimulation(String),
}

fn unsupported(msg: impl Into<String>) -> SimError {
    SimError::UnsupportedForSimulation(msg.into())
}

/// Torus model: one coordinate per weight (with multiplicity).
fn torus_model(w: &WeightMultiset) -> Result<TorusAction, SimError> {
    let d = w.dim() as usize;
    if d > TorusAction::MAX_D {
        return Err(unsupported(format!("{d} coordinates exceed the limit of {}", TorusAction::MAX_D)));
    }
    let mut rows = Vec::with_capacity(d);
    for (f, m) in w.iter() {
        let ints: Option<Vec<i64>> = f
            .coords()
            .iter()
            .map(|q| if q.is_integer() { q.to_integer().to_i64() } else { None })
            .collect();
        let ints = ints.ok_or_else(|| unsupported(format!("weight {f} is not integral")))?;
        for _ in 0..m {
            rows.push(ints.clone());
        }
    }
    TorusAction::new(rows).map_err(|e| unsupported(e.to_string()))
}

/// Interior directions of a cone: the ray sum and two skewed sums.
fn directions(rays: &[RationalVector]) -> Vec<RationalVector> {
    let n = rays[0].len();
    let sum = rays.iter().fold(RationalVector::zeros(n), |acc, r| &acc + r);
    let mut out = vec![sum.primitive()];
    if rays.len() > 1 {
        out.push((&sum + &rays[0]).primitive());
        out.push((&sum + &rays[rays.len() - 1]).primitive());
    }
    out.dedup();
    out
}

pub fn simulate(weights: &WeightMultiset, grid: &GridSpec) -> Result<Value, SimError> {
    let action = torus_model(weights)?;
    let r = weights.ambient();
    let g = GroupSpec::single(Family::Torus, r);
    let rd = build_root_datum(&g).map_err(|e| unsupported(e.to_string()))?;
    let list = weights.iter().map(|(f, m)| (f.clone(), m)).collect();
    let w = weights_of(&RepExpr::DirectWeights(list), &rd).map_err(|e| unsupported(e.to_string()))?;
    let a = build_arrangement(&rd, &w).map_err(|e| unsupported(format!("torus model: {e}")))?;
    let t_grid = LatticeSumProbe::geometric_grid(grid.t_min, grid.t_max, grid.points);

    let mut slopes = Vec::new();
    let mut residuals = Vec::new();
    let mut max_gap: f64 = 0.0;
    for i in a.fan.maximal_cones() {
        let cone = a.fan.cone(i);
        if cone.rays().is_empty() {
            continue;
        }
        for (k, lambda) in directions(cone.rays()).into_iter().enumerate() {
            let exact = eval_exponent(&a, &lambda).map_err(|e| unsupported(e.to_string()))?;
            let probe = LatticeSumProbe {
                action: action.clone(),
                f: ProbeFunction::Gaussian,
                lambda: lambda.clone(),
                t_grid: t_grid.clone(),
            };
            let prediction = exact.to_f64().unwrap_or(f64::NAN);
            let entry = match fit_exponent(&probe) {
                Ok(slope) => {
                    let gap = (slope - prediction).abs();
                    max_gap = max_gap.max(gap);
                    json!({"slope": slope, "gap": gap})
                }
                Err(e) => json!({"error": e.to_string()}),
            };
            let mut entry = entry;
            entry["cone"] = json!(a.fan.cones()[i].rays);
            entry["direction"] = int_vector(&lambda);
            entry["prediction"] = json!(fmt_rational(&exact));
            slopes.push(entry);
            if k == 0 {
                let res = match residual_check(&probe, cone) {
                    Ok(v) => json!({"scaled_residual": v}),
                    Err(e) => json!({"error": e.to_string()}),
                };
                let mut res = res;
                res["cone"] = json!(a.fan.cones()[i].rays);
                residuals.push(res);
            }
        }
    }
    let t0 = vec![0.7; r];
    let poisson = poisson_identity_check(&action, &ProbeFunction::Gaussian, &t0)
        .map(|v| json!(v))
        .unwrap_or_else(|e| json!(e.to_string()));
    Ok(json!({
        "model": {"coordinates": action.dim(), "rank": action.rank(), "weights": action.weights()},
        "grid": {"t_min": grid.t_min, "t_max": grid.t_max, "points": grid.points},
        "slopes": slopes,
        "max_slope_gap": max_gap,
        "residuals": residuals,
        "poisson_residual": poisson,
    }))
}
