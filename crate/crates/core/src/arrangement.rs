//! Exponent arrangements: the weight fan with one exponent multiset per cone.

use std::collections::BTreeMap;

use crate::exactgeom::linalg::nullspace;
use crate::exactgeom::{
    fan_from_hyperplanes, star_fan, Cone, Fan, Functional, GeomError, Rational, RationalVector, StarFan,
};
use crate::repspec::{action_kernel, weight_partition, KernelSplit, KernelVerdict, RepError, WeightMultiset};
use crate::rootdata::RootDatum;

/// Multiset of exponents, sorted by functional.
pub type Exponents = BTreeMap<Functional, u64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArrangementError {
    #[error("a nontrivial central torus acts trivially")]
    CentralTorusActsTrivially,
    #[error("action kernel is not a sum of simple-factor spans")]
    IrregularKernel,
    #[error("point {0} is outside the support of the fan")]
    OutsideSupport(String),
    #[error("cone {0} does not carry a single exponent")]
    NotSingleton(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentArrangement {
    pub fan: Fan,
    /// Exponent multiset of each cone, indexed like `fan.cones()`.
    pub exponents: Vec<Exponents>,
    pub weights: WeightMultiset,
    pub root_datum: RootDatum,
    pub kernel: KernelSplit,
}

impl ExponentArrangement {
    /// The exponent of cone `i` when it is a single functional.
    pub fn chi(&self, i: usize) -> Option<&Functional> {
        let e = &self.exponents[i];
        match e.iter().next() {
            Some((f, 1)) if e.len() == 1 => Some(f),
            _ => None,
        }
    }

    pub fn is_singleton(&self) -> bool {
        (0..self.exponents.len()).all(|i| self.chi(i).is_some())
    }
}

/// Minus the sum (with multiplicity) of the weights positive on `c`.
pub fn chi_of_cone(w: &WeightMultiset, c: &Cone) -> Result<Functional, RepError> {
    Ok(-&weight_partition(w, c)?.pos.sum())
}

pub fn build_arrangement(rd: &RootDatum, w: &WeightMultiset) -> Result<ExponentArrangement, ArrangementError> {
    let n = rd.dim_a;
    let kernel = action_kernel(w, rd);
    let a_prime = match &kernel.verdict {
        KernelVerdict::CentralTrivial => return Err(ArrangementError::CentralTorusActsTrivially),
        KernelVerdict::Irregular => return Err(ArrangementError::IrregularKernel),
        KernelVerdict::Clean(b) => b.clone(),
    };
    let rows: Vec<Vec<Rational>> = a_prime.iter().map(|v| v.coords().to_vec()).collect();
    let eqs: Vec<Functional> = nullspace(&rows, n).into_iter().map(Functional::new).collect();
    let ineqs: Vec<Functional> = rd.simple_roots.iter().map(|a| -a).collect();
    let base = Cone::from_h(n, &ineqs, &eqs)?;

    let mut hyps = w.nonzero_weights();
    hyps.extend(rd.simple_roots.iter().cloned());
    hyps.sort();
    hyps.dedup();
    let fan = fan_from_hyperplanes(&base, &hyps)?;

    let exponents = fan
        .cones()
        .iter()
        .map(|fc| chi_of_cone(w, &fc.cone).map(|chi| Exponents::from([(chi, 1)])))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExponentArrangement {
        fan,
        exponents,
        weights: w.clone(),
        root_datum: rd.clone(),
        kernel,
    })
}

fn restriction(f: &Functional, rays: &[RationalVector]) -> Vec<Rational> {
    rays.iter().map(|r| f.pair(r)).collect()
}

/// Face-pair compatibility: every exponent of a cone restricts to an exponent
/// of each face with at least the same multiplicity (distinct exponents with
/// equal restrictions require the maximum of their multiplicities).
pub fn check_compatibility(a: &ExponentArrangement) -> Vec<String> {
    let mut diags = Vec::new();
    let cones = a.fan.cones();
    for j in 0..cones.len() {
        for i in 0..cones.len() {
            if i == j || !a.fan.is_face(i, j) {
                continue;
            }
            let rays = cones[i].cone.rays();
            let mut need: BTreeMap<Vec<Rational>, (u64, &Functional)> = BTreeMap::new();
            for (chi, m) in &a.exponents[j] {
                let e = need.entry(restriction(chi, rays)).or_insert((0, chi));
                if *m > e.0 {
                    *e = (*m, chi);
                }
            }
            let mut have: BTreeMap<Vec<Rational>, u64> = BTreeMap::new();
            for (chi, m) in &a.exponents[i] {
                let e = have.entry(restriction(chi, rays)).or_insert(0);
                *e = (*e).max(*m);
            }
            for (res, (m, chi)) in need {
                if have.get(&res).copied().unwrap_or(0) < m {
                    diags.push(format!(
                        "face {:?} of cone {:?}: exponent {} has no restriction partner",
                        cones[i].rays, cones[j].rays, chi
                    ));
                }
            }
        }
    }
    diags
}

/// Adds `d` to every exponent.
pub fn shift(a: &ExponentArrangement, d: &Functional) -> ExponentArrangement {
    let mut out = a.clone();
    out.exponents = a
        .exponents
        .iter()
        .map(|e| {
            let mut shifted = Exponents::new();
            for (chi, m) in e {
                *shifted.entry(chi + d).or_insert(0) += m;
            }
            shifted
        })
        .collect();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeArrangement {
    pub base_cone: Cone,
    pub star: StarFan,
    /// Exponents inherited from the source cones, indexed like `star.fan.cones()`.
    pub exponents: Vec<Exponents>,
}

pub fn derivative_arrangement(a: &ExponentArrangement, d: &Cone) -> Result<DerivativeArrangement, ArrangementError> {
    let star = star_fan(&a.fan, d)?;
    let exponents = star.sources.iter().map(|&s| a.exponents[s].clone()).collect();
    Ok(DerivativeArrangement {
        base_cone: d.clone(),
        star,
        exponents,
    })
}

/// `<chi_C, lambda>` for the cone `C` with `lambda` in its relative interior.
pub fn eval_exponent(a: &ExponentArrangement, lambda: &RationalVector) -> Result<Rational, ArrangementError> {
    let i = a
        .fan
        .locate_relint(lambda)
        .ok_or_else(|| ArrangementError::OutsideSupport(lambda.to_string()))?;
    let chi = a.chi(i).ok_or(ArrangementError::NotSingleton(i))?;
    Ok(chi.pair(lambda))
}

/// Face-restriction identity `<chi_C, v_R> = <chi_R, v_R>` for every ray R of
/// every cone C; returns the violations.
pub fn face_restriction_violations(a: &ExponentArrangement) -> Vec<String> {
    let mut out = Vec::new();
    for r in a.fan.ray_cones() {
        let v = &a.fan.cone(r).rays()[0];
        let Some(chi_r) = a.chi(r) else { continue };
        for c in a.fan.cones_containing(r) {
            if let Some(chi_c) = a.chi(c) {
                if chi_c.pair(v) != chi_r.pair(v) {
                    out.push(format!("cone {c} ray {v}: {} != {}", chi_c.pair(v), chi_r.pair(v)));
                }
            }
        }
    }
    out
}
