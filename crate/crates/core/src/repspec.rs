//! Representation expressions, weight multisets and the action kernel.

use std::collections::BTreeMap;

use crate::exactgeom::linalg::nullspace;
use crate::exactgeom::{relint_sign, Cone, Functional, Rational, RationalVector, Sign};
use crate::rootdata::{simple_factor_split, Family, RootDatum, SplitVerdict};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RepExpr {
    /// Standard representation of the given factor.
    Std(usize),
    /// Adjoint representation of the given factor.
    Adjoint(usize),
    Dual(Box<RepExpr>),
    Sum(Vec<RepExpr>),
    Mult(Box<RepExpr>, u64),
    DirectWeights(Vec<(Functional, u64)>),
}

impl RepExpr {
    pub fn dual(e: RepExpr) -> Self {
        RepExpr::Dual(Box::new(e))
    }

    pub fn mult(e: RepExpr, n: u64) -> Self {
        RepExpr::Mult(Box::new(e), n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepError {
    #[error("factor index {index} out of range (group has {count} factors)")]
    BadFactor { index: usize, count: usize },
    #[error("multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("weight has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("weight {weight} changes sign on the cone")]
    MixedSign { weight: String },
}

/// Multiset of weights (functionals on the coweight space) with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct WeightMultiset {
    ambient: usize,
    entries: BTreeMap<Functional, u64>,
}

impl WeightMultiset {
    pub fn new(ambient: usize) -> Self {
        Self {
            ambient,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(ambient: usize, entries: impl IntoIterator<Item = (Functional, u64)>) -> Self {
        let mut w = Self::new(ambient);
        for (f, m) in entries {
            w.insert(f, m);
        }
        w
    }

    pub fn insert(&mut self, f: Functional, mult: u64) {
        assert_eq!(f.len(), self.ambient, "weight length mismatch");
        if mult > 0 {
            *self.entries.entry(f).or_insert(0) += mult;
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn entries(&self) -> &BTreeMap<Functional, u64> {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Functional, u64)> {
        self.entries.iter().map(|(f, m)| (f, *m))
    }

    pub fn multiplicity(&self, f: &Functional) -> u64 {
        self.entries.get(f).copied().unwrap_or(0)
    }

    /// Total multiplicity (dimension of the representation).
    pub fn dim(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct nonzero weights.
    pub fn nonzero_weights(&self) -> Vec<Functional> {
        self.entries.keys().filter(|f| !f.is_zero()).cloned().collect()
    }

    pub fn negated(&self) -> Self {
        Self::from_entries(self.ambient, self.iter().map(|(f, m)| (-f, m)))
    }

    pub fn merge(&mut self, other: &WeightMultiset) {
        for (f, m) in other.iter() {
            self.insert(f.clone(), m);
        }
    }

    pub fn scaled(&self, n: u64) -> Self {
        Self::from_entries(self.ambient, self.iter().map(|(f, m)| (f.clone(), m * n)))
    }

    /// Sum of the weights counted with multiplicity.
    pub fn sum(&self) -> Functional {
        self.iter().fold(Functional::zeros(self.ambient), |acc, (f, m)| {
            &acc + &f.scale(&Rational::from_integer(m.into()))
        })
    }
}

fn eps(n: usize, i: usize, c: i64) -> Functional {
    let mut v = vec![0i64; n];
    v[i] = c;
    Functional::from_ints(&v)
}

fn std_weights(rd: &RootDatum, factor: usize) -> WeightMultiset {
    let n = rd.dim_a;
    let range = rd.factor_range(factor);
    let mut w = WeightMultiset::new(n);
    match rd.spec.factors[factor].family {
        Family::GL | Family::Torus => range.for_each(|i| w.insert(eps(n, i, 1), 1)),
        Family::SoOdd => {
            range.for_each(|i| {
                w.insert(eps(n, i, 1), 1);
                w.insert(eps(n, i, -1), 1);
            });
            w.insert(Functional::zeros(n), 1);
        }
        Family::Sp | Family::SoEven => range.for_each(|i| {
            w.insert(eps(n, i, 1), 1);
            w.insert(eps(n, i, -1), 1);
        }),
    }
    w
}

fn adjoint_weights(rd: &RootDatum, factor: usize) -> WeightMultiset {
    let n = rd.dim_a;
    let range = rd.factor_range(factor);
    let mut w = WeightMultiset::new(n);
    for a in rd.roots() {
        let inside = a
            .coords()
            .iter()
            .enumerate()
            .all(|(i, c)| range.contains(&i) || *c == Rational::from_integer(0.into()));
        if inside {
            w.insert(a, 1);
        }
    }
    w.insert(Functional::zeros(n), range.len() as u64);
    w
}

/// Weight multiset of a representation expression.
pub fn weights_of(e: &RepExpr, rd: &RootDatum) -> Result<WeightMultiset, RepError> {
    let count = rd.spec.factors.len();
    let check = |index: usize| {
        if index < count {
            Ok(())
        } else {
            Err(RepError::BadFactor { index, count })
        }
    };
    match e {
        RepExpr::Std(i) => check(*i).map(|_| std_weights(rd, *i)),
        RepExpr::Adjoint(i) => check(*i).map(|_| adjoint_weights(rd, *i)),
        RepExpr::Dual(inner) => Ok(weights_of(inner, rd)?.negated()),
        RepExpr::Sum(parts) => {
            let mut w = WeightMultiset::new(rd.dim_a);
            for p in parts {
                w.merge(&weights_of(p, rd)?);
            }
            Ok(w)
        }
        RepExpr::Mult(inner, n) => {
            if *n == 0 {
                return Err(RepError::ZeroMultiplicity);
            }
            Ok(weights_of(inner, rd)?.scaled(*n))
        }
        RepExpr::DirectWeights(list) => {
            let mut w = WeightMultiset::new(rd.dim_a);
            for (f, m) in list {
                if f.len() != rd.dim_a {
                    return Err(RepError::DimensionMismatch {
                        expected: rd.dim_a,
                        found: f.len(),
                    });
                }
                if *m == 0 {
                    return Err(RepError::ZeroMultiplicity);
                }
                w.insert(f.clone(), *m);
            }
            Ok(w)
        }
    }
}

/// Determinant character of the action: the sum of all weights.
pub fn haar_character(w: &WeightMultiset) -> Functional {
    w.sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelVerdict {
    /// The kernel contains a nontrivial central direction.
    CentralTrivial,
    /// The kernel is a sum of simple-factor spans; carries a basis of the
    /// canonical complement (center plus the remaining factors).
    Clean(Vec<RationalVector>),
    Irregular,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelSplit {
    /// Basis of `{v : <w, v> = 0 for every weight w}`.
    pub a0: Vec<RationalVector>,
    pub verdict: KernelVerdict,
}

impl KernelSplit {
    /// Complement of the kernel inside the coweight space, when clean.
    pub fn a_prime(&self) -> Option<&[RationalVector]> {
        match &self.verdict {
            KernelVerdict::Clean(b) => Some(b),
            _ => None,
        }
    }
}

pub fn action_kernel(w: &WeightMultiset, rd: &RootDatum) -> KernelSplit {
    let n = rd.dim_a;
    let rows: Vec<Vec<Rational>> = w.nonzero_weights().iter().map(|f| f.coords().to_vec()).collect();
    let a0: Vec<RationalVector> = nullspace(&rows, n).into_iter().map(RationalVector::new).collect();
    let verdict = if a0.is_empty() {
        KernelVerdict::Clean((0..n).map(|i| RationalVector::unit(n, i)).collect())
    } else {
        match simple_factor_split(rd, &a0) {
            SplitVerdict::MeetsCenter => KernelVerdict::CentralTrivial,
            SplitVerdict::Neither => KernelVerdict::Irregular,
            SplitVerdict::FactorSum(s) => {
                let mut basis = rd.center.clone();
                for (i, span) in rd.simple_factor_spans.iter().enumerate() {
                    if !s.contains(&i) {
                        basis.extend(span.iter().cloned());
                    }
                }
                KernelVerdict::Clean(basis)
            }
        }
    };
    KernelSplit { a0, verdict }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightPartition {
    pub neg: WeightMultiset,
    pub zero: WeightMultiset,
    pub pos: WeightMultiset,
}

/// Splits the weights by their sign on the relative interior of `c`.
pub fn weight_partition(w: &WeightMultiset, c: &Cone) -> Result<WeightPartition, RepError> {
    let n = w.ambient();
    let mut out = WeightPartition {
        neg: WeightMultiset::new(n),
        zero: WeightMultiset::new(n),
        pos: WeightMultiset::new(n),
    };
    for (f, m) in w.iter() {
        let target = match relint_sign(f, c) {
            Sign::Positive => &mut out.pos,
            Sign::Negative => &mut out.neg,
            Sign::Zero => &mut out.zero,
            Sign::Mixed => return Err(RepError::MixedSign { weight: f.to_string() }),
        };
        target.insert(f.clone(), m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{build_root_datum, FactorSpec, GroupSpec};

    fn rd(f: Family, m: usize) -> RootDatum {
        build_root_datum(&GroupSpec::single(f, m)).unwrap()
    }

    #[test]
    fn mult_std_on_so8() {
        let d = rd(Family::SoEven, 4);
        let w = weights_of(&RepExpr::mult(RepExpr::Std(0), 3), &d).unwrap();
        assert_eq!(w.entries().len(), 8);
        assert!(w.iter().all(|(_, m)| m == 3));
        assert_eq!(w.dim(), 24);
        assert!(haar_character(&w).is_zero());
    }

    #[test]
    fn adjoint_plus_std_on_so7() {
        let d = rd(Family::SoOdd, 3);
        let w = weights_of(&RepExpr::Sum(vec![RepExpr::Adjoint(0), RepExpr::Std(0)]), &d).unwrap();
        // dim so(7) = 21, std = 7
        assert_eq!(w.dim(), 28);
        assert_eq!(w.multiplicity(&Functional::zeros(3)), 4);
        assert_eq!(w.multiplicity(&Functional::from_ints(&[1, 0, 0])), 2);
        assert!(haar_character(&weights_of(&RepExpr::Adjoint(0), &d).unwrap()).is_zero());
    }

    #[test]
    fn gl2_dual_and_haar() {
        let d = rd(Family::GL, 2);
        let dual = weights_of(&RepExpr::dual(RepExpr::Std(0)), &d).unwrap();
        assert_eq!(
            dual.nonzero_weights(),
            vec![Functional::from_ints(&[-1, 0]), Functional::from_ints(&[0, -1])]
        );
        let std = weights_of(&RepExpr::Std(0), &d).unwrap();
        let oracle = Functional::from_ints(&[1, 0]);
        let oracle = &oracle + &Functional::from_ints(&[0, 1]);
        assert_eq!(haar_character(&std), oracle);
    }

    #[test]
    fn kernel_verdicts() {
        let gl1 = rd(Family::GL, 1);
        let w = weights_of(&RepExpr::DirectWeights(vec![(Functional::zeros(1), 1)]), &gl1).unwrap();
        assert_eq!(action_kernel(&w, &gl1).verdict, KernelVerdict::CentralTrivial);

        let gl2gl1 = build_root_datum(&GroupSpec::new(vec![
            FactorSpec::new(Family::GL, 2),
            FactorSpec::new(Family::GL, 1),
        ]))
        .unwrap();
        let w = weights_of(&RepExpr::Std(0), &gl2gl1).unwrap();
        assert_eq!(action_kernel(&w, &gl2gl1).verdict, KernelVerdict::CentralTrivial);

        let t2 = rd(Family::Torus, 2);
        let w = weights_of(&RepExpr::DirectWeights(vec![(Functional::from_ints(&[1, 0]), 1)]), &t2).unwrap();
        let k = action_kernel(&w, &t2);
        assert_eq!(k.a0, vec![RationalVector::from_ints(&[0, 1])]);
        assert_eq!(k.verdict, KernelVerdict::CentralTrivial);

        let so8 = rd(Family::SoEven, 4);
        let w = weights_of(&RepExpr::Std(0), &so8).unwrap();
        assert!(matches!(action_kernel(&w, &so8).verdict, KernelVerdict::Clean(_)));

        let so5 = rd(Family::SoOdd, 2);
        let w = weights_of(&RepExpr::DirectWeights(vec![(Functional::from_ints(&[1, 0]), 1)]), &so5).unwrap();
        assert_eq!(action_kernel(&w, &so5).verdict, KernelVerdict::Irregular);
    }

    #[test]
    fn partition_on_a_ray() {
        let d = rd(Family::SoEven, 4);
        let w = weights_of(&RepExpr::mult(RepExpr::Std(0), 2), &d).unwrap();
        let ray = Cone::from_rays(4, &[RationalVector::from_ints(&[-1, -1, 0, 0])]).unwrap();
        let p = weight_partition(&w, &ray).unwrap();
        assert_eq!(p.pos.dim(), 4);
        assert_eq!(p.zero.dim(), 8);
        assert_eq!(p.neg, p.pos.negated());
        assert_eq!(p.pos.multiplicity(&Functional::from_ints(&[-1, 0, 0, 0])), 2);

        let z = weight_partition(&w, &Cone::zero(4)).unwrap();
        assert_eq!(z.zero, w);

        let quadrant = Cone::from_rays(4, &[RationalVector::from_ints(&[1, 0, 0, 0]), RationalVector::from_ints(&[0, 1, 0, 0])]).unwrap();
        let mixed = WeightMultiset::from_entries(4, [(Functional::from_ints(&[1, -1, 0, 0]), 1)]);
        assert!(matches!(weight_partition(&mixed, &quadrant), Err(RepError::MixedSign { .. })));
    }

    #[test]
    fn tate_setup() {
        let t1 = rd(Family::Torus, 1);
        let w = weights_of(&RepExpr::Std(0), &t1).unwrap();
        let c = Cone::from_rays(1, &[RationalVector::from_ints(&[1])]).unwrap();
        assert_eq!(weight_partition(&w, &c).unwrap().pos, w);
    }
}
