//! Canonical JSON reports.

use critfan_core::arrangement::{DerivativeArrangement, ExponentArrangement, Exponents};
use critfan_core::criticality::{AnalysisBundle, CriticalityReport};
use critfan_core::exactgeom::{fmt_rational, Fan, Functional, RationalVector};
use critfan_core::repspec::{KernelVerdict, WeightMultiset};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Integer vectors as JSON integers where they fit, exact strings otherwise.
pub fn int_vector(v: &RationalVector) -> Value {
    Value::Array(
        v.coords()
            .iter()
            .map(|q| {
                let s = fmt_rational(q);
                match s.parse::<i64>() {
                    Ok(n) => json!(n),
                    Err(_) => json!(s),
                }
            })
            .collect(),
    )
}

pub fn coeffs(f: &Functional) -> Value {
    json!(f.to_strings())
}

pub fn fan_json(f: &Fan) -> Value {
    json!({
        "ambient": f.ambient(),
        "rays": f.rays().iter().map(int_vector).collect::<Vec<_>>(),
        "cones": f.cones().iter().map(|c| c.rays.clone()).collect::<Vec<_>>(),
        "maximal": f.maximal_cones(),
    })
}

fn exponent_list(e: &Exponents) -> Value {
    Value::Array(e.iter().map(|(chi, m)| json!({"coeffs": coeffs(chi), "mult": m})).collect())
}

pub fn exponents_json(fan: &Fan, exps: &[Exponents]) -> Value {
    Value::Array(
        fan.cones()
            .iter()
            .zip(exps)
            .map(|(c, e)| json!({"cone": c.rays, "exponents": exponent_list(e)}))
            .collect(),
    )
}

pub fn weights_json(w: &WeightMultiset) -> Value {
    Value::Array(w.iter().map(|(f, m)| json!({"coeffs": coeffs(f), "mult": m})).collect())
}

pub fn criticality_json(r: &CriticalityReport) -> Value {
    json!({
        "global_verdict": r.global_verdict.to_string(),
        "shift_mode": r.shift_mode.name(),
        "shift": r.shift.as_ref().map(coeffs),
        "rays": r.rays.iter().map(|v| json!({
            "ray": int_vector(&v.ray),
            "chi_value": fmt_rational(&v.chi_value),
            "rho_value": fmt_rational(&v.rho_value),
            "critical": v.critical,
        })).collect::<Vec<_>>(),
        "witnesses": r.witnesses.iter().map(int_vector).collect::<Vec<_>>(),
    })
}

pub fn arrangement_json(a: &ExponentArrangement) -> Value {
    json!({
        "fan": fan_json(&a.fan),
        "exponents": exponents_json(&a.fan, &a.exponents),
    })
}

pub fn derivative_json(d: &DerivativeArrangement) -> Value {
    json!({
        "base_cone": d.base_cone.rays().iter().map(int_vector).collect::<Vec<_>>(),
        "quotient": d.star.quotient.iter().map(coeffs).collect::<Vec<_>>(),
        "fan": fan_json(&d.star.fan),
        "sources": d.star.sources,
        "exponents": exponents_json(&d.star.fan, &d.exponents),
    })
}

pub fn bundle_json(b: &AnalysisBundle) -> Value {
    let verdict = match &b.kernel.verdict {
        KernelVerdict::CentralTrivial => "central_trivial",
        KernelVerdict::Clean(_) => "clean",
        KernelVerdict::Irregular => "irregular",
    };
    let mut out = json!({
        "group": b.group.factors.iter().map(|f| json!({"family": f.family.name(), "rank": f.rank})).collect::<Vec<_>>(),
        "weights": weights_json(&b.weights),
        "two_rho": coeffs(&b.root_datum.two_rho),
        "kernel": {
            "a0": b.kernel.a0.iter().map(int_vector).collect::<Vec<_>>(),
            "verdict": verdict,
        },
        "criticality": criticality_json(&b.report),
    });
    if let Some(a) = &b.arrangement {
        out["fan"] = fan_json(&a.fan);
        out["exponents"] = exponents_json(&a.fan, &a.exponents);
    }
    out
}

pub fn provenance(raw: &[u8]) -> Value {
    json!({
        "input_sha256": sha256_hex(raw),
        "tool": "critfan",
        "version": TOOL_VERSION,
    })
}

/// Canonical serialization: sorted keys, two-space indent, trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
