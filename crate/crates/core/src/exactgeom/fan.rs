use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::Zero;

use super::cone::{relint_sign, Cone, Sign};
use super::linalg::nullspace;
use super::vector::{dot, Functional, Rational, RationalVector};
use super::GeomError;

/// A cone of a fan together with the indices of its rays in the fan's
/// global ray list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FanCone {
    pub rays: Vec<usize>,
    pub cone: Cone,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    ambient: usize,
    rays: Vec<RationalVector>,
    cones: Vec<FanCone>,
    support: Cone,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

impl Fan {
    /// Collects the given cones verbatim (no face closure), assigning global
    /// ray indices and sorting by dimension and ray set.
    pub fn from_cones(ambient: usize, cones: Vec<Cone>, support: Cone) -> Fan {
        let rays: Vec<RationalVector> = cones
            .iter()
            .flat_map(|c| c.rays().iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut out: Vec<FanCone> = cones
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|cone| {
                let mut ids: Vec<usize> = cone
                    .rays()
                    .iter()
                    .map(|r| rays.binary_search(r).expect("ray collected above"))
                    .collect();
                ids.sort_unstable();
                FanCone { rays: ids, cone }
            })
            .collect();
        out.sort_by(|a, b| {
            a.cone
                .dim()
                .cmp(&b.cone.dim())
                .then_with(|| a.rays.cmp(&b.rays))
                .then_with(|| a.cone.cmp(&b.cone))
        });
        Fan {
            ambient,
            rays,
            cones: out,
            support,
        }
    }

    /// Fan generated by the given pointed cones and all their faces.
    pub fn from_maximal(ambient: usize, maximal: &[Cone], support: Cone) -> Result<Fan, GeomError> {
        let rays: Vec<RationalVector> = maximal
            .iter()
            .flat_map(|c| c.rays().iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut all: BTreeMap<Vec<usize>, Cone> = BTreeMap::new();
        for c in maximal {
            let global: Vec<usize> = c
                .rays()
                .iter()
                .map(|r| rays.binary_search(r).expect("ray collected above"))
                .collect();
            for s in c.face_ray_sets()? {
                let mut key: Vec<usize> = s.iter().map(|&k| global[k]).collect();
                key.sort_unstable();
                all.entry(key).or_insert_with(|| c.subcone(&s));
            }
        }
        if maximal.is_empty() {
            all.insert(Vec::new(), Cone::zero(ambient));
        }
        Ok(Fan::from_cones(ambient, all.into_values().collect(), support))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rays(&self) -> &[RationalVector] {
        &self.rays
    }

    pub fn cones(&self) -> &[FanCone] {
        &self.cones
    }

    pub fn support(&self) -> &Cone {
        &self.support
    }

    pub fn cone(&self, i: usize) -> &Cone {
        &self.cones[i].cone
    }

    pub fn index_of(&self, c: &Cone) -> Option<usize> {
        self.cones.iter().position(|fc| fc.cone == *c)
    }

    /// True if cone `i` is a face of cone `j`.
    pub fn is_face(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.cones[i], &self.cones[j]);
        is_subset(&a.rays, &b.rays) && b.cone.has_face(&a.cone)
    }

    /// Indices of cones that are not proper faces of another cone.
    pub fn maximal_cones(&self) -> Vec<usize> {
        (0..self.cones.len())
            .filter(|&i| {
                !(0..self.cones.len()).any(|j| {
                    j != i && self.cones[j].cone.dim() > self.cones[i].cone.dim() && self.is_face(i, j)
                })
            })
            .collect()
    }

    /// Indices of the one-dimensional cones.
    pub fn ray_cones(&self) -> Vec<usize> {
        (0..self.cones.len())
            .filter(|&i| self.cones[i].cone.dim() == 1 && self.cones[i].cone.is_pointed())
            .collect()
    }

    /// Indices of cones having cone `d` as a face.
    pub fn cones_containing(&self, d: usize) -> Vec<usize> {
        (0..self.cones.len()).filter(|&j| self.is_face(d, j)).collect()
    }

    /// The cone whose relative interior contains `v`.
    pub fn locate_relint(&self, v: &RationalVector) -> Option<usize> {
        self.cones.iter().position(|fc| fc.cone.in_relint(v))
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|fc| fc.cone.is_simplicial())
    }
}

/// Splits `base` by every hyperplane in `hyps` and closes under faces.
///
/// The base may carry a lineality space as long as the hyperplanes cut it
/// into pointed pieces.
pub fn fan_from_hyperplanes(base: &Cone, hyps: &[Functional]) -> Result<Fan, GeomError> {
    let n = base.ambient();
    for h in hyps {
        if h.len() != n {
            return Err(GeomError::DimensionMismatch {
                expected: n,
                found: h.len(),
            });
        }
    }
    let mut pieces = vec![base.clone()];
    for h in hyps.iter().filter(|h| !h.is_zero()) {
        let mut next = Vec::with_capacity(pieces.len() * 2);
        for p in pieces {
            if relint_sign(h, &p) != Sign::Mixed {
                next.push(p);
                continue;
            }
            for side in [h.clone(), -h] {
                let mut ineqs = p.ineqs().to_vec();
                ineqs.push(side);
                let q = Cone::from_h(n, &ineqs, p.eqs())?;
                if q.dim() == p.dim() {
                    next.push(q);
                }
            }
        }
        pieces = next;
    }
    for p in &pieces {
        p.require_pointed()?;
    }
    Fan::from_maximal(n, &pieces, base.clone())
}

/// Sign table of candidate separating functionals against the global rays.
struct Separators {
    signs: Vec<Vec<i8>>,
}

impl Separators {
    fn new(f: &Fan, cones: &[usize]) -> Self {
        let cands: BTreeSet<Functional> = cones
            .iter()
            .flat_map(|&i| f.cones[i].cone.ineqs().iter().flat_map(|h| [h.clone(), -h]))
            .collect();
        let signs = cands
            .iter()
            .map(|h| f.rays.iter().map(|r| h.sign_at(r)).collect())
            .collect();
        Separators { signs }
    }

    /// Cheap sufficient test that two cones meet in a common face: peel both
    /// ray sets down with functionals that are nonnegative on the first and
    /// nonpositive on the second until they coincide.
    fn common_face(&self, a: &[usize], b: &[usize]) -> bool {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        'outer: loop {
            if a == b {
                return true;
            }
            for row in &self.signs {
                if a.iter().all(|&k| row[k] >= 0) && b.iter().all(|&k| row[k] <= 0) {
                    let ta: Vec<usize> = a.iter().copied().filter(|&k| row[k] == 0).collect();
                    let tb: Vec<usize> = b.iter().copied().filter(|&k| row[k] == 0).collect();
                    if ta.len() < a.len() || tb.len() < b.len() {
                        a = ta;
                        b = tb;
                        continue 'outer;
                    }
                }
            }
            return false;
        }
    }
}

fn fmt_ids(ids: &[usize]) -> String {
    let parts: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Checks every fan invariant and returns one message per violation.
pub fn is_valid_fan(f: &Fan) -> Vec<String> {
    let mut diags = Vec::new();
    let by_rays: HashSet<&Vec<usize>> = f.cones.iter().map(|fc| &fc.rays).collect();

    for (i, fc) in f.cones.iter().enumerate() {
        let c = &fc.cone;
        if c.ambient() != f.ambient {
            diags.push(format!("cone {i}: wrong ambient dimension"));
            continue;
        }
        if !c.is_consistent() {
            diags.push(format!("cone {i}: inconsistent descriptions"));
        }
        if !c.is_pointed() {
            diags.push(format!("cone {i}: not pointed"));
            continue;
        }
        if !f.support.contains_cone(c) {
            diags.push(format!("cone {i}: outside support"));
        }
        if let Ok(sets) = c.face_ray_sets() {
            for s in sets {
                let mut ids: Vec<usize> = s.iter().map(|&k| fc.rays[k]).collect();
                ids.sort_unstable();
                if !by_rays.contains(&ids) {
                    diags.push(format!("cone {i}: not face-closed (missing face with rays {})", fmt_ids(&ids)));
                }
            }
        }
    }
    if diags.iter().any(|d| d.contains("not pointed") || d.contains("ambient")) {
        return diags;
    }

    let maximal = f.maximal_cones();
    let seps = Separators::new(f, &maximal);
    for (a, &i) in maximal.iter().enumerate() {
        for &j in &maximal[a + 1..] {
            if seps.common_face(&f.cones[i].rays, &f.cones[j].rays) {
                continue;
            }
            let (ci, cj) = (f.cone(i), f.cone(j));
            let common = match ci.intersect(cj) {
                Ok(c) => c,
                Err(_) => {
                    diags.push(format!("cones {i} and {j}: intersection not a common face"));
                    continue;
                }
            };
            if !(ci.has_face(&common) && cj.has_face(&common)) {
                diags.push(format!("cones {i} and {j}: intersection not a common face"));
            }
        }
    }

    let d = f.support.dim();
    let top: Vec<usize> = maximal.iter().copied().filter(|&i| f.cone(i).dim() == d).collect();
    if top.is_empty() {
        if d > 0 {
            diags.push("support not covered: no cone of full support dimension".to_string());
        }
        return diags;
    }
    // Each facet of a top cone lies on the support boundary or is shared
    // with exactly one other top cone.
    let mut facet_owners: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for &i in &top {
        let fc = &f.cones[i];
        for h in fc.cone.ineqs() {
            let ids: Vec<usize> = fc
                .rays
                .iter()
                .copied()
                .filter(|&k| h.pair(&f.rays[k]).is_zero())
                .collect();
            facet_owners.entry(ids).or_default().push(i);
        }
    }
    for (ids, owners) in facet_owners {
        let rays: Vec<&RationalVector> = ids.iter().filter_map(|&k| f.rays.get(k)).collect();
        let on_boundary = f.support.ineqs().iter().any(|h| rays.iter().all(|r| h.pair(r).is_zero()));
        let ok = if on_boundary { owners.len() == 1 } else { owners.len() == 2 };
        if !ok {
            diags.push(format!(
                "support not covered: facet with rays {} lies in {} top cones",
                fmt_ids(&ids),
                owners.len()
            ));
        }
    }
    diags
}

/// Star of a cone `d` of a fan, as a fan on the quotient by span(d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarFan {
    pub fan: Fan,
    /// Rows of the quotient map (a basis of the annihilator of span(d)).
    pub quotient: Vec<Functional>,
    /// For each cone of `fan`, the index of its source cone in the input fan.
    pub sources: Vec<usize>,
}

pub fn star_fan(f: &Fan, d: &Cone) -> Result<StarFan, GeomError> {
    let di = f.index_of(d).ok_or(GeomError::NotInFan)?;
    let span: Vec<Vec<Rational>> = d
        .span_basis()
        .into_iter()
        .map(|v| v.into_coords())
        .collect();
    let quotient: Vec<Functional> = nullspace(&span, f.ambient)
        .into_iter()
        .map(Functional::new)
        .collect();
    let k = quotient.len();
    let project = |v: &RationalVector| -> RationalVector {
        RationalVector::new(quotient.iter().map(|q| dot(q.coords(), v.coords())).collect())
    };
    let image = |c: &Cone| -> Result<Cone, GeomError> {
        let rays: Vec<RationalVector> = c.rays().iter().map(project).collect();
        let lin: Vec<RationalVector> = c.lineality().iter().map(project).collect();
        Cone::from_generators(k, &rays, &lin)
    };

    let mut by_image: BTreeMap<Cone, usize> = BTreeMap::new();
    for j in f.cones_containing(di) {
        let img = image(f.cone(j))?;
        img.require_pointed()?;
        by_image.entry(img).or_insert(j);
    }
    let support = image(&f.support)?;
    let fan = Fan::from_cones(k, by_image.keys().cloned().collect(), support);
    let sources = fan.cones.iter().map(|fc| by_image[&fc.cone]).collect();
    Ok(StarFan {
        fan,
        quotient,
        sources,
    })
}
