//! Criticality of exponent arrangements against the modular character.

use std::fmt;

use num_traits::Zero;

use crate::arrangement::{build_arrangement, ArrangementError, ExponentArrangement, Exponents};
use crate::exactgeom::{stellar_refine_to_simplicial, Cone, Functional, GeomError, Rational, RationalVector};
use crate::repspec::{action_kernel, haar_character, weights_of, KernelSplit, RepError, RepExpr, WeightMultiset};
use crate::rootdata::{build_root_datum, GroupSpec, RootDataError, RootDatum};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ShiftMode {
    None,
    Haar,
    Custom(Functional),
}

impl ShiftMode {
    pub fn functional(&self, w: &WeightMultiset) -> Functional {
        match self {
            ShiftMode::None => Functional::zeros(w.ambient()),
            ShiftMode::Haar => haar_character(w),
            ShiftMode::Custom(f) => f.clone(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ShiftMode::None => "none",
            ShiftMode::Haar => "haar",
            ShiftMode::Custom(_) => "custom",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GlobalVerdict {
    Critical,
    NonCritical,
    CentralTorusActsTrivially,
}

impl fmt::Display for GlobalVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GlobalVerdict::Critical => "Critical",
            GlobalVerdict::NonCritical => "NonCritical",
            GlobalVerdict::CentralTorusActsTrivially => "CentralTorusActsTrivially",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayVerdict {
    pub ray: RationalVector,
    /// `<chi_R + shift, v>`
    pub chi_value: Rational,
    /// `<2 rho, v>`
    pub rho_value: Rational,
    pub critical: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalityReport {
    pub rays: Vec<RayVerdict>,
    pub global_verdict: GlobalVerdict,
    pub witnesses: Vec<RationalVector>,
    pub shift_mode: ShiftMode,
    pub shift: Option<Functional>,
}

impl CriticalityReport {
    pub fn central_trivial(mode: ShiftMode) -> Self {
        Self {
            rays: Vec::new(),
            global_verdict: GlobalVerdict::CentralTorusActsTrivially,
            witnesses: Vec::new(),
            shift_mode: mode,
            shift: None,
        }
    }

    pub fn is_critical(&self) -> bool {
        self.global_verdict != GlobalVerdict::NonCritical
    }
}

/// Checks every ray of the fan: critical iff `<chi_R + shift, v> = <2 rho, v>`.
pub fn criticality_report(a: &ExponentArrangement, rd: &RootDatum, mode: ShiftMode) -> CriticalityReport {
    let shift = mode.functional(&a.weights);
    let mut rays = Vec::new();
    for r in a.fan.ray_cones() {
        let v = a.fan.cone(r).rays()[0].clone();
        let rho_value = rd.two_rho.pair(&v);
        for chi in a.exponents[r].keys() {
            let chi_value = chi.pair(&v) + shift.pair(&v);
            rays.push(RayVerdict {
                critical: chi_value == rho_value,
                ray: v.clone(),
                chi_value,
                rho_value: rho_value.clone(),
            });
        }
    }
    rays.sort_by(|a, b| a.ray.cmp(&b.ray).then_with(|| a.chi_value.cmp(&b.chi_value)));
    let witnesses: Vec<RationalVector> = rays.iter().filter(|r| r.critical).map(|r| r.ray.clone()).collect();
    CriticalityReport {
        global_verdict: if witnesses.is_empty() {
            GlobalVerdict::NonCritical
        } else {
            GlobalVerdict::Critical
        },
        rays,
        witnesses,
        shift_mode: mode,
        shift: Some(shift),
    }
}

/// `chi_C + shift - 2 rho` for a singleton cone exponent.
pub fn criticality_defect(chi: &Functional, shift: &Functional, rd: &RootDatum) -> Functional {
    &(chi + shift) - &rd.two_rho
}

/// Cones where the defect vanishes on the whole span disagree with "all rays
/// critical"; returns the disagreements.
pub fn ray_sufficiency_violations(a: &ExponentArrangement, rd: &RootDatum, mode: &ShiftMode) -> Vec<String> {
    let shift = mode.functional(&a.weights);
    let mut out = Vec::new();
    for (i, fc) in a.fan.cones().iter().enumerate() {
        if fc.cone.dim() == 0 {
            continue;
        }
        let Some(chi) = a.chi(i) else { continue };
        let defect = criticality_defect(chi, &shift, rd);
        let span_zero = fc.cone.rays().iter().all(|v| defect.pair(v).is_zero());
        let rays_critical = fc.rays.iter().all(|&k| {
            let ray = &a.fan.rays()[k];
            let ri = a
                .fan
                .index_of(&Cone::from_rays(a.fan.ambient(), std::slice::from_ref(ray)).expect("same ambient"))
                .expect("fan is face-closed");
            a.chi(ri)
                .map(|chi_r| criticality_defect(chi_r, &shift, rd).pair(ray).is_zero())
                .unwrap_or(false)
        });
        if span_zero != rays_critical {
            out.push(format!("cone {:?}: span test {span_zero}, ray test {rays_critical}", fc.rays));
        }
    }
    out
}

/// Simplicial refinement whose new rays avoid the criticality defect of the
/// host cone; exponents are inherited from the cone containing each new
/// cone's relative interior.
pub fn refine_arrangement(a: &ExponentArrangement, mode: &ShiftMode) -> Result<ExponentArrangement, ArrangementError> {
    let rd = &a.root_datum;
    let shift = mode.functional(&a.weights);
    let avoid = |c: &Cone| -> Functional {
        match a.fan.index_of(c).and_then(|i| a.chi(i)) {
            Some(chi) => criticality_defect(chi, &shift, rd),
            None => Functional::zeros(a.fan.ambient()),
        }
    };
    let fan = stellar_refine_to_simplicial(&a.fan, Some(&avoid))?;
    let exponents: Vec<Exponents> = fan
        .cones()
        .iter()
        .map(|fc| {
            let p = fc.cone.relint_point();
            a.fan
                .locate_relint(&p)
                .map(|i| a.exponents[i].clone())
                .ok_or(ArrangementError::Geom(GeomError::NotInFan))
        })
        .collect::<Result<_, _>>()?;
    Ok(ExponentArrangement {
        fan,
        exponents,
        weights: a.weights.clone(),
        root_datum: a.root_datum.clone(),
        kernel: a.kernel.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("group: {0}")]
    RootData(#[from] RootDataError),
    #[error("representation: {0}")]
    Rep(#[from] RepError),
    #[error("arrangement: {0}")]
    Arrangement(#[from] ArrangementError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisBundle {
    pub group: GroupSpec,
    pub rep: RepExpr,
    pub root_datum: RootDatum,
    pub weights: WeightMultiset,
    pub kernel: KernelSplit,
    /// Absent when a central torus acts trivially.
    pub arrangement: Option<ExponentArrangement>,
    pub report: CriticalityReport,
}

/// Root datum, weights, kernel, arrangement and criticality report in one pass.
pub fn analyze(g: &GroupSpec, e: &RepExpr, mode: ShiftMode) -> Result<AnalysisBundle, AnalysisError> {
    let rd = build_root_datum(g)?;
    let weights = weights_of(e, &rd)?;
    let kernel = action_kernel(&weights, &rd);
    let (arrangement, report) = match build_arrangement(&rd, &weights) {
        Ok(a) => {
            let report = criticality_report(&a, &rd, mode);
            (Some(a), report)
        }
        Err(ArrangementError::CentralTorusActsTrivially) => (None, CriticalityReport::central_trivial(mode)),
        Err(err) => return Err(err.into()),
    };
    Ok(AnalysisBundle {
        group: g.clone(),
        rep: e.clone(),
        root_datum: rd,
        weights,
        kernel,
        arrangement,
        report,
    })
}
