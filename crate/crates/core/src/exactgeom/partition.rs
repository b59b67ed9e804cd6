use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::cone::{double_description, Cone};
use super::vector::{fmt_rational, Functional, Rational, RationalVector};
use super::GeomError;

/// Cell of the cross-section `{v in c : sum_i h_i(v) = 1}` where exactly the
/// facet functionals in `face_index` are at most `delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledRegion {
    /// Facet indices `I_D` (into `c.ineqs()`) of the face `D`.
    pub face_index: Vec<usize>,
    /// Ray indices (into `c.rays()`) spanning the face `D`.
    pub face_rays: Vec<usize>,
    pub delta: Rational,
    cone: Cone,
}

impl LabeledRegion {
    /// Membership of a nonzero point of the cone, after rescaling it onto
    /// the cross-section.
    pub fn contains(&self, v: &RationalVector) -> bool {
        if v.is_zero() || !self.cone.contains(v) {
            return false;
        }
        let vals: Vec<Rational> = self.cone.ineqs().iter().map(|h| h.pair(v)).collect();
        let total: Rational = vals.iter().cloned().sum();
        let cut = &self.delta * &total;
        vals.iter().enumerate().all(|(i, x)| (*x <= cut) == self.face_index.contains(&i))
    }

    /// Constraint list `h_i <= delta` for `i` in `face_index`, `h_j > delta`
    /// otherwise, over the normalized cross-section.
    pub fn constraints(&self) -> Vec<(Functional, bool)> {
        self.cone
            .ineqs()
            .iter()
            .enumerate()
            .map(|(i, h)| (h.clone(), self.face_index.contains(&i)))
            .collect()
    }
}

struct CrossSection {
    /// Facet functionals in coordinates of a basis of span(c).
    g: Vec<Vec<Rational>>,
    d: usize,
}

impl CrossSection {
    fn new(c: &Cone) -> CrossSection {
        let basis = c.span_basis();
        let g = c
            .ineqs()
            .iter()
            .map(|h| basis.iter().map(|b| h.pair(b)).collect())
            .collect();
        CrossSection { g, d: basis.len() }
    }

    /// Exact test whether some cross-section point has pattern exactly `pattern`.
    fn realized(&self, pattern: &[bool], delta: &Rational) -> bool {
        let n = self.d + 1;
        let lift = |coeffs: &[Rational], s: Rational| -> Vec<Rational> {
            let mut v = coeffs.to_vec();
            v.push(s);
            v
        };
        let mut cons: Vec<Vec<Rational>> = Vec::new();
        let mut sum = vec![Rational::zero(); self.d];
        for (gi, &inside) in self.g.iter().zip(pattern) {
            cons.push(lift(gi, Rational::zero()));
            let neg: Vec<Rational> = gi.iter().map(|x| -x).collect();
            if inside {
                cons.push(lift(&neg, delta.clone()));
            } else {
                cons.push(lift(gi, -delta.clone()));
            }
            for (a, b) in sum.iter_mut().zip(gi) {
                *a += b;
            }
        }
        cons.push(lift(&sum, -Rational::one()));
        cons.push(lift(&sum.iter().map(|x| -x).collect::<Vec<_>>(), Rational::one()));
        let mut s_pos = vec![Rational::zero(); n];
        s_pos[self.d] = Rational::one();
        cons.push(s_pos);

        let (_, rays) = double_description(n, &cons);
        let vertices: Vec<Vec<Rational>> = rays
            .into_iter()
            .filter(|r| r[self.d].is_positive())
            .map(|r| {
                let s = r[self.d].clone();
                r[..self.d].iter().map(|x| x / &s).collect()
            })
            .collect();
        if vertices.is_empty() {
            return false;
        }
        self.g.iter().zip(pattern).all(|(gi, &inside)| {
            inside
                || vertices.iter().any(|y| {
                    let val: Rational = gi.iter().zip(y).map(|(a, b)| a * b).sum();
                    val > *delta
                })
        })
    }
}

fn face_patterns(c: &Cone) -> Result<Vec<(Vec<usize>, Vec<usize>)>, GeomError> {
    let mut out = Vec::new();
    for rays in c.face_ray_sets()? {
        if rays.is_empty() {
            continue;
        }
        out.push((c.facets_containing(&rays), rays));
    }
    out.sort();
    Ok(out)
}

fn delta_ok(cs: &CrossSection, faces: &BTreeSet<Vec<usize>>, k: usize, delta: &Rational) -> bool {
    for mask in 0u64..(1u64 << k) {
        let pattern: Vec<bool> = (0..k).map(|i| mask & (1 << i) != 0).collect();
        let ids: Vec<usize> = (0..k).filter(|&i| pattern[i]).collect();
        if cs.realized(&pattern, delta) != faces.contains(&ids) {
            return false;
        }
    }
    true
}

/// Largest `1/2^k` (`k <= 20`) for which the realized patterns are exactly
/// the facet sets of the nonzero faces.
pub fn delta_max(c: &Cone) -> Result<Rational, GeomError> {
    let faces: BTreeSet<Vec<usize>> = face_patterns(c)?.into_iter().map(|(f, _)| f).collect();
    let cs = CrossSection::new(c);
    let k = c.ineqs().len();
    let mut delta = Rational::one();
    for _ in 0..=20 {
        if delta_ok(&cs, &faces, k, &delta) {
            return Ok(delta);
        }
        delta /= Rational::from_integer(2.into());
    }
    Ok(delta * Rational::from_integer(2.into()))
}

/// Partition of the cross-section of `c` into one region per nonzero face.
pub fn cone_partition(c: &Cone, delta: &Rational) -> Result<Vec<LabeledRegion>, GeomError> {
    c.require_pointed()?;
    if !delta.is_positive() {
        return Err(GeomError::NonPositiveDelta);
    }
    let dmax = delta_max(c)?;
    if *delta > dmax {
        return Err(GeomError::DeltaTooLarge {
            delta: fmt_rational(delta),
            delta_max: fmt_rational(&dmax),
        });
    }
    Ok(face_patterns(c)?
        .into_iter()
        .map(|(face_index, face_rays)| LabeledRegion {
            face_index,
            face_rays,
            delta: delta.clone(),
            cone: c.clone(),
        })
        .collect())
}
