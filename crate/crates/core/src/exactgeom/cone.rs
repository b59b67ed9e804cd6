use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::linalg::{canonical_basis, orthogonal_basis, rank, reject};
use super::vector::{dot, primitive, Functional, Rational, RationalVector};
use super::{GeomError, MAX_AMBIENT_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Zero,
    Negative,
    Mixed,
}

struct DdRay {
    v: Vec<Rational>,
    zeros: Vec<bool>,
}

fn axpy(v: &mut [Rational], c: &Rational, x: &[Rational]) {
    for (vi, xi) in v.iter_mut().zip(x) {
        *vi = &*vi - c * xi;
    }
}

fn adjacent(i: usize, j: usize, rays: &[DdRay]) -> bool {
    let common: Vec<bool> = rays[i]
        .zeros
        .iter()
        .zip(&rays[j].zeros)
        .map(|(a, b)| *a && *b)
        .collect();
    !rays.iter().enumerate().any(|(k, r)| {
        k != i
            && k != j
            && common
                .iter()
                .zip(&r.zeros)
                .all(|(&need, &has)| !need || has)
    })
}

/// Incremental double description (Motzkin) for `{x : a . x >= 0 for all a}`.
///
/// Returns a lineality basis and the extreme rays of the pointed part; rays
/// are only determined modulo the lineality space.
pub(crate) fn double_description(
    n: usize,
    constraints: &[Vec<Rational>],
) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    let mut lin: Vec<Vec<Rational>> = (0..n)
        .map(|i| RationalVector::unit(n, i).into_coords())
        .collect();
    let mut rays: Vec<DdRay> = Vec::new();
    let mut processed = 0usize;

    for a in constraints {
        if a.iter().all(Zero::is_zero) {
            for r in rays.iter_mut() {
                r.zeros.push(true);
            }
            processed += 1;
            continue;
        }
        if let Some(idx) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lin.remove(idx);
            let mut s0 = dot(a, &l0);
            if s0.is_negative() {
                l0.iter_mut().for_each(|x| *x = -x.clone());
                s0 = -s0;
            }
            for l in lin.iter_mut() {
                let c = dot(a, l) / &s0;
                if !c.is_zero() {
                    axpy(l, &c, &l0);
                }
            }
            for r in rays.iter_mut() {
                let c = dot(a, &r.v) / &s0;
                if !c.is_zero() {
                    axpy(&mut r.v, &c, &l0);
                    r.v = primitive(&r.v);
                }
                r.zeros.push(true);
            }
            let mut zeros = vec![true; processed];
            zeros.push(false);
            rays.push(DdRay {
                v: primitive(&l0),
                zeros,
            });
        } else {
            let vals: Vec<Rational> = rays.iter().map(|r| dot(a, &r.v)).collect();
            let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
            let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
            let mut next: Vec<DdRay> = Vec::new();
            for &i in &pos {
                for &j in &neg {
                    if adjacent(i, j, &rays) {
                        let mut v: Vec<Rational> = rays[j].v.iter().map(|x| &vals[i] * x).collect();
                        axpy(&mut v, &vals[j], &rays[i].v);
                        let mut zeros: Vec<bool> = rays[i]
                            .zeros
                            .iter()
                            .zip(&rays[j].zeros)
                            .map(|(a, b)| *a && *b)
                            .collect();
                        zeros.push(true);
                        next.push(DdRay {
                            v: primitive(&v),
                            zeros,
                        });
                    }
                }
            }
            let mut kept: Vec<DdRay> = Vec::new();
            for (r, v) in rays.into_iter().zip(&vals) {
                if !v.is_negative() {
                    let mut r = r;
                    r.zeros.push(v.is_zero());
                    kept.push(r);
                }
            }
            kept.extend(next);
            rays = kept;
        }
        processed += 1;
    }
    (lin, rays.into_iter().map(|r| r.v).collect())
}

/// Rational polyhedral cone holding both descriptions in canonical form.
///
/// Canonical V-form: lineality basis in RREF (rows scaled primitive) and
/// primitive rays orthogonal to the lineality space, sorted lexicographically.
/// Canonical H-form: equations as the RREF basis of the annihilator of the
/// span, facet functionals orthogonal to that annihilator, primitive, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    ambient: usize,
    rays: Vec<RationalVector>,
    lineality: Vec<RationalVector>,
    ineqs: Vec<Functional>,
    eqs: Vec<Functional>,
}

fn check_ambient(ambient: usize) -> Result<(), GeomError> {
    if ambient > MAX_AMBIENT_DIM {
        return Err(GeomError::DimensionTooLarge {
            dim: ambient,
            max: MAX_AMBIENT_DIM,
        });
    }
    Ok(())
}

fn check_len(ambient: usize, len: usize) -> Result<(), GeomError> {
    if len != ambient {
        return Err(GeomError::DimensionMismatch {
            expected: ambient,
            found: len,
        });
    }
    Ok(())
}

impl Cone {
    /// H-description to canonical cone (double description conversion).
    pub fn from_h(ambient: usize, ineqs: &[Functional], eqs: &[Functional]) -> Result<Cone, GeomError> {
        check_ambient(ambient)?;
        let mut constraints = Vec::with_capacity(ineqs.len() + 2 * eqs.len());
        for f in ineqs {
            check_len(ambient, f.len())?;
            constraints.push(f.coords().to_vec());
        }
        for f in eqs {
            check_len(ambient, f.len())?;
            constraints.push(f.coords().to_vec());
            constraints.push((-f).into_coords());
        }
        let (lin, rays) = double_description(ambient, &constraints);
        Ok(Self::canonical_from_generators(ambient, rays, lin))
    }

    /// Cone generated by `rays` plus the linear span of `lineality`.
    /// Redundant generators are dropped.
    pub fn from_generators(
        ambient: usize,
        rays: &[RationalVector],
        lineality: &[RationalVector],
    ) -> Result<Cone, GeomError> {
        check_ambient(ambient)?;
        for v in rays.iter().chain(lineality) {
            check_len(ambient, v.len())?;
        }
        Ok(Self::canonical_from_generators(
            ambient,
            rays.iter().map(|r| r.coords().to_vec()).collect(),
            lineality.iter().map(|r| r.coords().to_vec()).collect(),
        ))
    }

    pub fn from_rays(ambient: usize, rays: &[RationalVector]) -> Result<Cone, GeomError> {
        Self::from_generators(ambient, rays, &[])
    }

    pub fn zero(ambient: usize) -> Cone {
        Self::canonical_from_generators(ambient, vec![], vec![])
    }

    /// The whole ambient space.
    pub fn full(ambient: usize) -> Cone {
        let lin = (0..ambient)
            .map(|i| RationalVector::unit(ambient, i).into_coords())
            .collect();
        Self::canonical_from_generators(ambient, vec![], lin)
    }

    fn canonical_from_generators(
        ambient: usize,
        gens: Vec<Vec<Rational>>,
        lin: Vec<Vec<Rational>>,
    ) -> Cone {
        let lin = canonical_basis(&lin, ambient);
        let orth_lin = orthogonal_basis(&lin);
        let mut g: Vec<Vec<Rational>> = gens
            .iter()
            .map(|r| primitive(&reject(r, &orth_lin)))
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        g.sort();
        g.dedup();

        // Dual cone: facet normals are its rays, equations its lineality.
        let mut dual_constraints = g.clone();
        for l in &lin {
            dual_constraints.push(l.clone());
            dual_constraints.push(l.iter().map(|x| -x.clone()).collect());
        }
        let (dual_lin, dual_rays) = double_description(ambient, &dual_constraints);
        let eqs = canonical_basis(&dual_lin, ambient);
        let orth_eqs = orthogonal_basis(&eqs);
        let mut facets: Vec<Vec<Rational>> = dual_rays
            .iter()
            .map(|f| primitive(&reject(f, &orth_eqs)))
            .filter(|f| f.iter().any(|x| !x.is_zero()))
            .collect();
        facets.sort();
        facets.dedup();

        let dim = ambient - eqs.len();
        let pointed_dim = dim - lin.len();
        let extreme: Vec<Vec<Rational>> = g
            .into_iter()
            .filter(|r| {
                let tight: Vec<Vec<Rational>> = facets
                    .iter()
                    .filter(|f| dot(f, r).is_zero())
                    .cloned()
                    .collect();
                rank(&tight, ambient) + 1 == pointed_dim
            })
            .collect();

        Cone {
            ambient,
            rays: extreme.into_iter().map(RationalVector::new).collect(),
            lineality: lin.into_iter().map(RationalVector::new).collect(),
            ineqs: facets.into_iter().map(Functional::new).collect(),
            eqs: eqs.into_iter().map(Functional::new).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rays(&self) -> &[RationalVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[RationalVector] {
        &self.lineality
    }

    /// Facet functionals (each `>= 0` on the cone).
    pub fn ineqs(&self) -> &[Functional] {
        &self.ineqs
    }

    /// Equations (each `= 0` on the cone).
    pub fn eqs(&self) -> &[Functional] {
        &self.eqs
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.eqs.len()
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality.len()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn require_pointed(&self) -> Result<(), GeomError> {
        if self.is_pointed() {
            Ok(())
        } else {
            Err(GeomError::PointednessViolation {
                lineality_dim: self.lineality_dim(),
            })
        }
    }

    pub fn is_zero_cone(&self) -> bool {
        self.dim() == 0
    }

    /// Pointed with linearly independent rays.
    pub fn is_simplicial(&self) -> bool {
        self.is_pointed() && self.rays.len() == self.dim()
    }

    pub fn span_basis(&self) -> Vec<RationalVector> {
        let gens: Vec<Vec<Rational>> = self
            .rays
            .iter()
            .chain(&self.lineality)
            .map(|r| r.coords().to_vec())
            .collect();
        canonical_basis(&gens, self.ambient)
            .into_iter()
            .map(RationalVector::new)
            .collect()
    }

    pub fn contains(&self, v: &RationalVector) -> bool {
        self.eqs.iter().all(|e| e.pair(v).is_zero())
            && self.ineqs.iter().all(|f| !f.pair(v).is_negative())
    }

    pub fn in_relint(&self, v: &RationalVector) -> bool {
        self.eqs.iter().all(|e| e.pair(v).is_zero())
            && self.ineqs.iter().all(|f| f.pair(v).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains(r))
            && other
                .lineality
                .iter()
                .all(|l| self.contains(l) && self.contains(&-l))
    }

    /// Sum of the rays; lies in the relative interior of a pointed cone.
    pub fn relint_point(&self) -> RationalVector {
        self.rays
            .iter()
            .fold(RationalVector::zeros(self.ambient), |acc, r| &acc + r)
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone, GeomError> {
        let ineqs: Vec<Functional> = self.ineqs.iter().chain(&other.ineqs).cloned().collect();
        let eqs: Vec<Functional> = self.eqs.iter().chain(&other.eqs).cloned().collect();
        Cone::from_h(self.ambient, &ineqs, &eqs)
    }

    /// Indices of rays on which every facet in `facet_ids` vanishes.
    fn rays_tight_on(&self, facet_ids: &[usize]) -> Vec<usize> {
        (0..self.rays.len())
            .filter(|&i| facet_ids.iter().all(|&f| self.ineqs[f].pair(&self.rays[i]).is_zero()))
            .collect()
    }

    /// Indices of facets vanishing on every ray in `ray_ids`.
    pub fn facets_containing(&self, ray_ids: &[usize]) -> Vec<usize> {
        (0..self.ineqs.len())
            .filter(|&f| ray_ids.iter().all(|&i| self.ineqs[f].pair(&self.rays[i]).is_zero()))
            .collect()
    }

    /// Ray indices of the smallest face containing the given rays.
    pub fn minimal_face_rays(&self, ray_ids: &[usize]) -> Vec<usize> {
        self.rays_tight_on(&self.facets_containing(ray_ids))
    }

    /// True if `other` is a face of this (pointed) cone.
    pub fn has_face(&self, other: &Cone) -> bool {
        if !self.contains_cone(other) || !other.is_pointed() {
            return false;
        }
        let ids: Option<Vec<usize>> = other
            .rays
            .iter()
            .map(|r| self.rays.iter().position(|s| s == r))
            .collect();
        match ids {
            Some(mut ids) => {
                ids.sort_unstable();
                self.minimal_face_rays(&ids) == ids
            }
            None => false,
        }
    }

    /// All faces as ray-index subsets, including the empty set (zero face)
    /// and the full set.
    pub fn face_ray_sets(&self) -> Result<BTreeSet<Vec<usize>>, GeomError> {
        self.require_pointed()?;
        let full: Vec<usize> = (0..self.rays.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = vec![full.clone()];
        seen.insert(full);
        while let Some(s) = queue.pop() {
            for f in &self.ineqs {
                let t: Vec<usize> = s
                    .iter()
                    .copied()
                    .filter(|&i| f.pair(&self.rays[i]).is_zero())
                    .collect();
                if t.len() < s.len() && seen.insert(t.clone()) {
                    queue.push(t);
                }
            }
        }
        seen.insert(Vec::new());
        Ok(seen)
    }

    /// Cone generated by a subset of this cone's rays.
    pub fn subcone(&self, ray_ids: &[usize]) -> Cone {
        let rays: Vec<RationalVector> = ray_ids.iter().map(|&i| self.rays[i].clone()).collect();
        Cone::from_rays(self.ambient, &rays).expect("rays share the ambient dimension")
    }

    /// Rays satisfy the inequalities and re-deriving the H-description from
    /// the rays reproduces the stored one.
    pub fn is_consistent(&self) -> bool {
        let rays_ok = self.rays.iter().all(|r| self.contains(r))
            && self.lineality.iter().all(|l| self.contains(l) && self.contains(&-l));
        rays_ok
            && Cone::from_generators(self.ambient, &self.rays, &self.lineality)
                .map(|c| c == *self)
                .unwrap_or(false)
            && Cone::from_h(self.ambient, &self.ineqs, &self.eqs)
                .map(|c| c == *self)
                .unwrap_or(false)
    }
}

/// Sign of `f` on the relative interior of `c`.
pub fn relint_sign(f: &Functional, c: &Cone) -> Sign {
    if c.lineality().iter().any(|l| !f.pair(l).is_zero()) {
        return Sign::Mixed;
    }
    let mut pos = false;
    let mut neg = false;
    for r in c.rays() {
        match f.sign_at(r) {
            1 => pos = true,
            -1 => neg = true,
            _ => {}
        }
    }
    match (pos, neg) {
        (true, true) => Sign::Mixed,
        (true, false) => Sign::Positive,
        (false, true) => Sign::Negative,
        (false, false) => Sign::Zero,
    }
}

/// Converts an H-description into a cone with both descriptions.
pub fn dd_convert(ambient: usize, ineqs: &[Functional], eqs: &[Functional]) -> Result<Cone, GeomError> {
    Cone::from_h(ambient, ineqs, eqs)
}

/// All faces of a pointed cone, including `{0}` and the cone itself,
/// ordered by dimension and then by rays.
pub fn faces(c: &Cone) -> Result<Vec<Cone>, GeomError> {
    let sets = c.face_ray_sets()?;
    let mut out: Vec<Cone> = sets.iter().map(|s| c.subcone(s)).collect();
    out.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.rays().cmp(b.rays())));
    out.dedup();
    Ok(out)
}
