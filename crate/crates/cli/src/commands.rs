//! Subcommand pipelines producing a report and an exit code.

use critfan_core::arrangement::derivative_arrangement;
use critfan_core::asymlab::{invariance_check, mellin_regularize, AsymError, AsymFun1D};
use critfan_core::criticality::{
    analyze, criticality_report, refine_arrangement, AnalysisBundle, AnalysisError, CriticalityReport, GlobalVerdict,
};
use critfan_core::exactgeom::{fmt_rational, Cone};
use serde_json::{json, Value};

use crate::report::{arrangement_json, bundle_json, criticality_json, derivative_json, provenance};
use crate::simulate::{simulate, SimError};
use crate::spec::{LoadedSpec, SpecError};

pub const EXIT_NONCRITICAL: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_SELFTEST: u8 = 2;
pub const EXIT_CRITICAL: u8 = 3;
pub const EXIT_CENTRAL: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Simulation(#[from] SimError),
    #[error("{0}")]
    Input(String),
}

/// A finished command: JSON report, text rendering and exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub text: String,
    pub exit: u8,
}

pub fn verdict_exit(v: GlobalVerdict) -> u8 {
    match v {
        GlobalVerdict::NonCritical => EXIT_NONCRITICAL,
        GlobalVerdict::Critical => EXIT_CRITICAL,
        GlobalVerdict::CentralTorusActsTrivially => EXIT_CENTRAL,
    }
}

fn report_text(r: &CriticalityReport) -> String {
    let mut s = format!("verdict: {}\nshift: {}", r.global_verdict, r.shift_mode.name());
    if let Some(f) = &r.shift {
        s.push_str(&format!(" {f}"));
    }
    s.push('\n');
    for v in &r.rays {
        s.push_str(&format!(
            "  ray {:<24} chi {:>8}  2rho {:>8}{}\n",
            v.ray.to_string(),
            fmt_rational(&v.chi_value),
            fmt_rational(&v.rho_value),
            if v.critical { "  CRITICAL" } else { "" }
        ));
    }
    if !r.witnesses.is_empty() {
        let w: Vec<String> = r.witnesses.iter().map(|v| v.to_string()).collect();
        s.push_str(&format!("witnesses: {}\n", w.join(" ")));
    }
    s
}

fn run_analysis(spec: &LoadedSpec) -> Result<AnalysisBundle, CliError> {
    Ok(analyze(&spec.group, &spec.rep, spec.shift.clone())?)
}

fn finish(spec: &LoadedSpec, mut report: Value, mut text: String, verdict: GlobalVerdict) -> Outcome {
    let prov = provenance(&spec.raw);
    text.push_str(&format!("input sha256: {}\n", prov["input_sha256"].as_str().unwrap_or("")));
    report["provenance"] = prov;
    Outcome {
        report,
        text,
        exit: verdict_exit(verdict),
    }
}

fn add_simulation(spec: &LoadedSpec, b: &AnalysisBundle, report: &mut Value, text: &mut String) -> Result<(), CliError> {
    let numeric = simulate(&b.weights, &spec.grid())?;
    if let Some(gap) = numeric["max_slope_gap"].as_f64() {
        text.push_str(&format!("numeric: max slope gap {gap:.4}\n"));
    }
    report["numeric"] = numeric;
    Ok(())
}

pub fn cmd_analyze(spec: &LoadedSpec) -> Result<Outcome, CliError> {
    let b = run_analysis(spec)?;
    let mut report = bundle_json(&b);
    let mut text = report_text(&b.report);
    if let Some(a) = &b.arrangement {
        text.push_str(&format!(
            "fan: {} rays, {} cones, {} maximal\n",
            a.fan.rays().len(),
            a.fan.cones().len(),
            a.fan.maximal_cones().len()
        ));
    }
    if spec.file.options.simulate {
        add_simulation(spec, &b, &mut report, &mut text)?;
    }
    if spec.file.options.refine {
        if let Some(a) = &b.arrangement {
            let r = refine_arrangement(a, &spec.shift).map_err(AnalysisError::from)?;
            let rep = criticality_report(&r, &b.root_datum, spec.shift.clone());
            let mut v = arrangement_json(&r);
            v["criticality"] = criticality_json(&rep);
            report["refined"] = v;
        }
    }
    if spec.file.options.derivative_of.is_some() {
        derivative_section(spec, &b, &mut report, &mut text)?;
    }
    Ok(finish(spec, report, text, b.report.global_verdict))
}

pub fn cmd_simulate(spec: &LoadedSpec) -> Result<Outcome, CliError> {
    let b = run_analysis(spec)?;
    let mut report = bundle_json(&b);
    let mut text = report_text(&b.report);
    add_simulation(spec, &b, &mut report, &mut text)?;
    for s in report["numeric"]["slopes"].as_array().cloned().unwrap_or_default() {
        text.push_str(&format!(
            "  direction {} slope {} prediction {}\n",
            s["direction"],
            s["slope"].as_f64().map(|x| format!("{x:.4}")).unwrap_or_else(|| s["error"].to_string()),
            s["prediction"].as_str().unwrap_or("")
        ));
    }
    Ok(finish(spec, report, text, b.report.global_verdict))
}

pub fn cmd_refine(spec: &LoadedSpec) -> Result<Outcome, CliError> {
    let b = run_analysis(spec)?;
    let Some(a) = &b.arrangement else {
        return Ok(finish(spec, bundle_json(&b), report_text(&b.report), b.report.global_verdict));
    };
    let r = refine_arrangement(a, &spec.shift).map_err(AnalysisError::from)?;
    let rep = criticality_report(&r, &b.root_datum, spec.shift.clone());
    let mut report = bundle_json(&b);
    let mut v = arrangement_json(&r);
    v["criticality"] = criticality_json(&rep);
    report["refined"] = v;
    let mut text = report_text(&rep);
    text.push_str(&format!(
        "refined fan: {} rays, {} cones, simplicial {}\n",
        r.fan.rays().len(),
        r.fan.cones().len(),
        r.fan.is_simplicial()
    ));
    Ok(finish(spec, report, text, rep.global_verdict))
}

fn derivative_section(spec: &LoadedSpec, b: &AnalysisBundle, report: &mut Value, text: &mut String) -> Result<(), CliError> {
    let rays = spec
        .derivative_rays()?
        .ok_or_else(|| CliError::Input("field `options.derivative_of`: required by `derivative`".into()))?;
    let Some(a) = &b.arrangement else {
        return Err(CliError::Input("no arrangement: a central torus acts trivially".into()));
    };
    let d = Cone::from_rays(spec.group.dim_a(), &rays)
        .map_err(|e| CliError::Input(format!("field `options.derivative_of`: {e}")))?;
    let der = derivative_arrangement(a, &d)
        .map_err(|e| CliError::Input(format!("field `options.derivative_of`: {e}")))?;
    text.push_str(&format!(
        "derivative: {} cones, {} maximal\n",
        der.star.fan.cones().len(),
        der.star.fan.maximal_cones().len()
    ));
    report["derivative"] = derivative_json(&der);
    Ok(())
}

pub fn cmd_derivative(spec: &LoadedSpec) -> Result<Outcome, CliError> {
    let b = run_analysis(spec)?;
    let mut report = bundle_json(&b);
    let mut text = report_text(&b.report);
    derivative_section(spec, &b, &mut report, &mut text)?;
    Ok(finish(spec, report, text, b.report.global_verdict))
}

pub fn cmd_regularize(function: &str) -> Result<Outcome, CliError> {
    let g = AsymFun1D::builtin(function).map_err(|e| CliError::Input(e.to_string()))?;
    match mellin_regularize(&g) {
        Ok(value) => {
            let defect = invariance_check(&g, 2.0).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(Outcome {
                report: json!({
                    "function": g.name,
                    "value": value,
                    "invariance_defect_u2": defect,
                    "critical": false,
                    "provenance": provenance(function.as_bytes()),
                }),
                text: format!("{value:.9}\ninvariance defect (u = 2): {defect:.3e}\n"),
                exit: EXIT_NONCRITICAL,
            })
        }
        Err(e @ AsymError::CriticalExponent(_)) => Ok(Outcome {
            report: json!({
                "function": g.name,
                "critical": true,
                "error": e.to_string(),
                "provenance": provenance(function.as_bytes()),
            }),
            text: format!("{e}\n"),
            exit: EXIT_CRITICAL,
        }),
        Err(e) => Err(CliError::Input(e.to_string())),
    }
}
