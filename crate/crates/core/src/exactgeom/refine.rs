use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::cone::Cone;
use super::fan::Fan;
use super::vector::{Functional, RationalVector};
use super::GeomError;

/// Pulling triangulation of the cone spanned by the global rays `ids`:
/// star subdivision at the smallest ray, recursing into the facets that
/// avoid it. The apex depends only on the face and the global ray order, so
/// shared faces get identical triangulations.
fn triangulate(
    ids: &[usize],
    rays: &[RationalVector],
    memo: &mut BTreeMap<Vec<usize>, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if let Some(t) = memo.get(ids) {
        return t.clone();
    }
    let gens: Vec<RationalVector> = ids.iter().map(|&i| rays[i].clone()).collect();
    let cone = Cone::from_rays(rays[0].len(), &gens).expect("rays share the ambient dimension");
    let out = if cone.rays().len() == cone.dim() {
        vec![ids.to_vec()]
    } else {
        let apex = ids[0];
        let mut simplices = Vec::new();
        for h in cone.ineqs() {
            if !h.pair(&rays[apex]).is_zero() {
                let facet: Vec<usize> = ids.iter().copied().filter(|&i| h.pair(&rays[i]).is_zero()).collect();
                for mut s in triangulate(&facet, rays, memo) {
                    s.push(apex);
                    s.sort_unstable();
                    simplices.push(s);
                }
            }
        }
        simplices
    };
    memo.insert(ids.to_vec(), out.clone());
    out
}

/// Refines a valid pointed fan into a simplicial one with the same support.
///
/// Every non-simplicial cone is subdivided by pulling at an existing ray, so
/// the output has exactly the rays of the input. `avoid`, when given, maps an
/// input cone to a functional that must not vanish on any new ray placed in
/// its relative interior; each new ray is checked against it.
pub fn stellar_refine_to_simplicial(
    f: &Fan,
    avoid: Option<&dyn Fn(&Cone) -> Functional>,
) -> Result<Fan, GeomError> {
    for fc in f.cones() {
        fc.cone.require_pointed()?;
    }
    if f.is_simplicial() {
        return Ok(f.clone());
    }
    let mut memo = BTreeMap::new();
    let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
    for i in f.maximal_cones() {
        for s in triangulate(&f.cones()[i].rays, f.rays(), &mut memo) {
            simplices.insert(s);
        }
    }
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in &simplices {
        for mask in 0u32..(1 << s.len()) {
            let sub: Vec<usize> = (0..s.len()).filter(|k| mask & (1 << k) != 0).map(|k| s[k]).collect();
            all.insert(sub);
        }
    }
    let n = f.ambient();
    let cones: Vec<Cone> = all
        .iter()
        .map(|ids| {
            let gens: Vec<RationalVector> = ids.iter().map(|&i| f.rays()[i].clone()).collect();
            Cone::from_rays(n, &gens)
        })
        .collect::<Result<_, _>>()?;
    let out = Fan::from_cones(n, cones, f.support().clone());

    if let Some(avoid) = avoid {
        for r in out.rays() {
            if f.rays().binary_search(r).is_ok() {
                continue;
            }
            let host = f.locate_relint(r).ok_or(GeomError::NotInFan)?;
            if avoid(f.cone(host)).pair(r).is_zero() {
                return Err(GeomError::RefinementObstruction {
                    rays: format!("{:?}", f.cone(host).rays()),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::{fan_from_hyperplanes, is_valid_fan};

    fn v(c: &[i64]) -> RationalVector {
        RationalVector::from_ints(c)
    }

    #[test]
    fn simplicial_fan_is_a_fixpoint() {
        let fan = fan_from_hyperplanes(
            &Cone::full(2),
            &[Functional::from_ints(&[1, 0]), Functional::from_ints(&[0, 1])],
        )
        .unwrap();
        assert_eq!(stellar_refine_to_simplicial(&fan, None).unwrap(), fan);
    }

    #[test]
    fn cone_over_square_splits_into_two() {
        let square = Cone::from_rays(
            3,
            &[v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[-1, 0, 1]), v(&[0, -1, 1])],
        )
        .unwrap();
        let fan = Fan::from_maximal(3, &[square.clone()], square.clone()).unwrap();
        let refined = stellar_refine_to_simplicial(&fan, None).unwrap();
        let top: Vec<usize> = refined.maximal_cones();
        assert_eq!(top.len(), 2);
        assert!(refined.is_simplicial());
        assert_eq!(refined.rays(), fan.rays());
        for &i in &top {
            assert!(square.contains_cone(refined.cone(i)));
        }
        assert!(is_valid_fan(&refined).is_empty(), "{:?}", is_valid_fan(&refined));
    }
}
