//! Analysis spec files (JSON or TOML).

use std::path::Path;

use critfan_core::criticality::ShiftMode;
use critfan_core::exactgeom::{parse_rational, Functional, Rational, RationalVector};
use critfan_core::repspec::RepExpr;
use critfan_core::rootdata::{FactorSpec, Family, GroupSpec};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid spec: {0}")]
    Schema(String),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> SpecError {
    SpecError::Field {
        field: field.into(),
        message: message.into(),
    }
}

/// An exact coefficient: an integer or a `"p/q"` string.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Coef {
    Int(i64),
    Text(String),
}

impl Coef {
    fn to_rational(&self, field: &str) -> Result<Rational, SpecError> {
        match self {
            Coef::Int(n) => Ok(Rational::from_integer((*n).into())),
            Coef::Text(s) => parse_rational(s).ok_or_else(|| field_err(field, format!("not a rational number: {s:?}"))),
        }
    }
}

fn coef_vector(coefs: &[Coef], field: &str) -> Result<Vec<Rational>, SpecError> {
    coefs
        .iter()
        .enumerate()
        .map(|(i, c)| c.to_rational(&format!("{field}[{i}]")))
        .collect()
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FactorEntry {
    pub family: String,
    pub rank: usize,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub coeffs: Vec<Coef>,
    #[serde(default = "one")]
    pub mult: u64,
}

fn one() -> u64 {
    1
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RepNode {
    Std {
        #[serde(default)]
        factor: usize,
    },
    Adjoint {
        #[serde(default)]
        factor: usize,
    },
    Dual {
        of: Box<RepNode>,
    },
    Sum {
        terms: Vec<RepNode>,
    },
    Mult {
        of: Box<RepNode>,
        times: u64,
    },
    Weights {
        weights: Vec<WeightEntry>,
    },
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ShiftSpec {
    Named(String),
    Explicit(Vec<Coef>),
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            t_min: 1e-3,
            t_max: 1e-1,
            points: 12,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub refine: bool,
    /// Rays generating the cone whose derivative arrangement is requested.
    #[serde(default)]
    pub derivative_of: Option<Vec<Vec<Coef>>>,
    #[serde(default)]
    pub simulate: bool,
    #[serde(default)]
    pub grid: Option<GridSpec>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSpecFile {
    pub group: Vec<FactorEntry>,
    pub representation: RepNode,
    #[serde(default)]
    pub shift: Option<ShiftSpec>,
    #[serde(default)]
    pub options: Options,
}

/// A validated spec together with the raw input bytes.
#[derive(Clone, Debug)]
pub struct LoadedSpec {
    pub file: AnalysisSpecFile,
    pub group: GroupSpec,
    pub rep: RepExpr,
    pub shift: ShiftMode,
    pub raw: Vec<u8>,
}

impl LoadedSpec {
    pub fn derivative_rays(&self) -> Result<Option<Vec<RationalVector>>, SpecError> {
        let Some(rays) = &self.file.options.derivative_of else {
            return Ok(None);
        };
        let n = self.group.dim_a();
        rays.iter()
            .enumerate()
            .map(|(i, r)| {
                let field = format!("options.derivative_of[{i}]");
                let v = coef_vector(r, &field)?;
                if v.len() != n {
                    return Err(field_err(field, format!("expected {n} coefficients, found {}", v.len())));
                }
                Ok(RationalVector::new(v))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    pub fn grid(&self) -> GridSpec {
        self.file.options.grid.clone().unwrap_or_default()
    }
}

pub fn parse_spec_text(text: &str, toml_hint: bool) -> Result<AnalysisSpecFile, SpecError> {
    let looks_json = text.trim_start().starts_with('{');
    if toml_hint || !looks_json {
        toml::from_str(text).map_err(|e| SpecError::Schema(e.message().to_string()))
    } else {
        serde_json::from_str(text).map_err(|e| SpecError::Schema(e.to_string()))
    }
}

fn rep_expr(node: &RepNode, field: &str, dim: usize) -> Result<RepExpr, SpecError> {
    Ok(match node {
        RepNode::Std { factor } => RepExpr::Std(*factor),
        RepNode::Adjoint { factor } => RepExpr::Adjoint(*factor),
        RepNode::Dual { of } => RepExpr::dual(rep_expr(of, &format!("{field}.of"), dim)?),
        RepNode::Sum { terms } => RepExpr::Sum(
            terms
                .iter()
                .enumerate()
                .map(|(i, t)| rep_expr(t, &format!("{field}.terms[{i}]"), dim))
                .collect::<Result<_, _>>()?,
        ),
        RepNode::Mult { of, times } => {
            if *times == 0 {
                return Err(field_err(format!("{field}.times"), "must be positive"));
            }
            RepExpr::mult(rep_expr(of, &format!("{field}.of"), dim)?, *times)
        }
        RepNode::Weights { weights } => RepExpr::DirectWeights(
            weights
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    let f = format!("{field}.weights[{i}]");
                    let c = coef_vector(&w.coeffs, &format!("{f}.coeffs"))?;
                    if c.len() != dim {
                        return Err(field_err(format!("{f}.coeffs"), format!("expected {dim} coefficients, found {}", c.len())));
                    }
                    if w.mult == 0 {
                        return Err(field_err(format!("{f}.mult"), "must be positive"));
                    }
                    Ok((Functional::new(c), w.mult))
                })
                .collect::<Result<_, _>>()?,
        ),
    })
}

/// Validates the parsed file into core types.
pub fn validate(file: AnalysisSpecFile, raw: Vec<u8>, shift_override: Option<&str>) -> Result<LoadedSpec, SpecError> {
    if file.group.is_empty() {
        return Err(field_err("group", "at least one factor required"));
    }
    let mut factors = Vec::new();
    for (i, f) in file.group.iter().enumerate() {
        let family: Family = f
            .family
            .parse()
            .map_err(|_| field_err(format!("group[{i}].family"), format!("unsupported family {:?}", f.family)))?;
        if f.rank == 0 {
            return Err(field_err(format!("group[{i}].rank"), "rank must be positive"));
        }
        factors.push(FactorSpec::new(family, f.rank));
    }
    let group = GroupSpec::new(factors);
    let dim = group.dim_a();
    let rep = rep_expr(&file.representation, "representation", dim)?;
    let named = |s: &str, field: &str| match s.trim().to_ascii_lowercase().as_str() {
        "none" => Ok(ShiftMode::None),
        "haar" => Ok(ShiftMode::Haar),
        other => Err(field_err(field, format!("expected none, haar or a coefficient list, found {other:?}"))),
    };
    let shift = match (shift_override, &file.shift) {
        (Some(s), _) => named(s, "--shift")?,
        (None, None) => ShiftMode::None,
        (None, Some(ShiftSpec::Named(s))) => named(s, "shift")?,
        (None, Some(ShiftSpec::Explicit(c))) => {
            let v = coef_vector(c, "shift")?;
            if v.len() != dim {
                return Err(field_err("shift", format!("expected {dim} coefficients, found {}", v.len())));
            }
            ShiftMode::Custom(Functional::new(v))
        }
    };
    Ok(LoadedSpec {
        file,
        group,
        rep,
        shift,
        raw,
    })
}

pub fn load_spec(path: &Path, shift_override: Option<&str>) -> Result<LoadedSpec, SpecError> {
    let raw = std::fs::read(path).map_err(|source| SpecError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let text = String::from_utf8(raw.clone()).map_err(|_| SpecError::Schema("spec is not UTF-8".into()))?;
    let toml_hint = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"));
    let file = parse_spec_text(&text, toml_hint)?;
    validate(file, raw, shift_override)
}

#[cfg(test)]
mod tests {
    use super::*;

    const KR: &str = r#"{"group":[{"family":"so_even","rank":4}],
        "representation":{"kind":"mult","of":{"kind":"std"},"times":7}}"#;

    #[test]
    fn parses_json_and_toml() {
        let j = parse_spec_text(KR, false).unwrap();
        let t = parse_spec_text(
            "group = [{family = \"so_even\", rank = 4}]\n[representation]\nkind = \"mult\"\ntimes = 7\nof = {kind = \"std\"}\n",
            true,
        )
        .unwrap();
        assert_eq!(j, t);
        let s = validate(j, vec![], None).unwrap();
        assert_eq!(s.rep, RepExpr::mult(RepExpr::Std(0), 7));
    }

    #[test]
    fn rejects_unknown_keys() {
        let bad = KR.replace("\"times\":7", "\"times\":7,\"extra\":1");
        assert!(matches!(parse_spec_text(&bad, false), Err(SpecError::Schema(_))));
        let bad_top = KR.replace("{\"group\"", "{\"colour\":1,\"group\"");
        assert!(parse_spec_text(&bad_top, false).is_err());
    }

    #[test]
    fn names_failing_field() {
        let zero = KR.replace("\"rank\":4", "\"rank\":0");
        let err = validate(parse_spec_text(&zero, false).unwrap(), vec![], None).unwrap_err();
        assert!(err.to_string().contains("group[0].rank"), "{err}");
        let w = r#"{"group":[{"family":"torus","rank":2}],
            "representation":{"kind":"weights","weights":[{"coeffs":[1,"x"]}]}}"#;
        let err = validate(parse_spec_text(w, false).unwrap(), vec![], None).unwrap_err();
        assert!(err.to_string().contains("representation.weights[0].coeffs[1]"), "{err}");
    }

    #[test]
    fn explicit_shift() {
        let s = KR.replace("\"group\"", "\"shift\":[1,\"-1/2\",0,0],\"group\"");
        let l = validate(parse_spec_text(&s, false).unwrap(), vec![], None).unwrap();
        assert!(matches!(l.shift, ShiftMode::Custom(_)));
    }
}
