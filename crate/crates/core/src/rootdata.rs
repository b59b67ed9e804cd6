//! Root data of split classical groups and tori in epsilon coordinates.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::exactgeom::linalg::{canonical_basis, in_span, intersection_dim, rank};
use crate::exactgeom::{Cone, Functional, GeomError, Rational, RationalVector, MAX_AMBIENT_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    GL,
    SoOdd,
    SoEven,
    Sp,
    Torus,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::GL => "GL",
            Family::SoOdd => "SO_odd",
            Family::SoEven => "SO_even",
            Family::Sp => "Sp",
            Family::Torus => "Torus",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = RootDataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "gl" => Ok(Family::GL),
            "so_odd" | "b" => Ok(Family::SoOdd),
            "so_even" | "d" => Ok(Family::SoEven),
            "sp" | "c" => Ok(Family::Sp),
            "torus" | "t" => Ok(Family::Torus),
            _ => Err(RootDataError::UnsupportedGroup(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FactorSpec {
    pub family: Family,
    pub rank: usize,
}

impl FactorSpec {
    pub fn new(family: Family, rank: usize) -> Self {
        Self { family, rank }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub factors: Vec<FactorSpec>,
}

impl GroupSpec {
    pub fn new(factors: Vec<FactorSpec>) -> Self {
        Self { factors }
    }

    pub fn single(family: Family, rank: usize) -> Self {
        Self::new(vec![FactorSpec::new(family, rank)])
    }

    pub fn dim_a(&self) -> usize {
        self.factors.iter().map(|f| f.rank).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootDataError {
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("factor {factor}: rank must be positive")]
    ZeroRank { factor: usize },
    #[error("factor {factor}: SO_even needs rank at least 2, got {rank}")]
    SoEvenRankTooSmall { factor: usize, rank: usize },
    #[error("group has no factors")]
    Empty,
    #[error("ambient dimension {dim} exceeds the cap of {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Ambient dimension cap: 12, lowered by `CRITFAN_MAX_RANK` when set.
pub fn max_rank() -> usize {
    std::env::var("CRITFAN_MAX_RANK")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .map_or(MAX_AMBIENT_DIM, |n| n.min(MAX_AMBIENT_DIM))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    pub spec: GroupSpec,
    pub dim_a: usize,
    pub simple_roots: Vec<Functional>,
    pub positive_roots: Vec<Functional>,
    pub two_rho: Functional,
    /// `{v : <alpha, v> <= 0 for all simple alpha}`; its lineality is the center.
    pub antidominant: Cone,
    pub center: Vec<RationalVector>,
    /// One subspace basis per connected Dynkin component.
    pub simple_factor_spans: Vec<Vec<RationalVector>>,
    offsets: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitVerdict {
    MeetsCenter,
    FactorSum(Vec<usize>),
    Neither,
}

fn eps(n: usize, coeffs: &[(usize, i64)]) -> Functional {
    let mut v = vec![0i64; n];
    for &(i, c) in coeffs {
        v[i] += c;
    }
    Functional::from_ints(&v)
}

/// (simple roots, positive roots) of one factor, embedded at `o` in dimension `n`.
fn factor_roots(f: FactorSpec, o: usize, n: usize) -> (Vec<Functional>, Vec<Functional>) {
    let m = f.rank;
    let mut simple: Vec<Functional> = Vec::new();
    let mut positive: Vec<Functional> = Vec::new();
    if f.family == Family::Torus {
        return (simple, positive);
    }
    for i in 0..m.saturating_sub(1) {
        simple.push(eps(n, &[(o + i, 1), (o + i + 1, -1)]));
    }
    for i in 0..m {
        for j in i + 1..m {
            positive.push(eps(n, &[(o + i, 1), (o + j, -1)]));
            if f.family != Family::GL {
                positive.push(eps(n, &[(o + i, 1), (o + j, 1)]));
            }
        }
    }
    match f.family {
        Family::SoOdd => {
            simple.push(eps(n, &[(o + m - 1, 1)]));
            positive.extend((0..m).map(|i| eps(n, &[(o + i, 1)])));
        }
        Family::Sp => {
            simple.push(eps(n, &[(o + m - 1, 2)]));
            positive.extend((0..m).map(|i| eps(n, &[(o + i, 2)])));
        }
        Family::SoEven => simple.push(eps(n, &[(o + m - 2, 1), (o + m - 1, 1)])),
        Family::GL | Family::Torus => {}
    }
    (simple, positive)
}

/// Groups simple roots into connected Dynkin components (non-orthogonal pairs).
fn dynkin_components(simple: &[Functional]) -> Vec<Vec<usize>> {
    let k = simple.len();
    let mut comp: Vec<usize> = (0..k).collect();
    fn find(c: &mut [usize], i: usize) -> usize {
        if c[i] != i {
            let r = find(c, c[i]);
            c[i] = r;
        }
        c[i]
    }
    for a in 0..k {
        for b in a + 1..k {
            let ip: Rational = simple[a].coords().iter().zip(simple[b].coords()).map(|(x, y)| x * y).sum();
            if ip != Rational::from_integer(0.into()) {
                let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
                comp[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..k {
        let r = find(&mut comp, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

pub fn build_root_datum(g: &GroupSpec) -> Result<RootDatum, RootDataError> {
    if g.factors.is_empty() {
        return Err(RootDataError::Empty);
    }
    for (i, f) in g.factors.iter().enumerate() {
        if f.rank == 0 {
            return Err(RootDataError::ZeroRank { factor: i });
        }
        if f.family == Family::SoEven && f.rank < 2 {
            return Err(RootDataError::SoEvenRankTooSmall { factor: i, rank: f.rank });
        }
    }
    let n = g.dim_a();
    let cap = max_rank();
    if n > cap {
        return Err(RootDataError::DimensionTooLarge { dim: n, max: cap });
    }

    let mut offsets = Vec::with_capacity(g.factors.len());
    let mut simple_roots = Vec::new();
    let mut positive_roots = Vec::new();
    let mut center = Vec::new();
    let mut o = 0;
    for f in &g.factors {
        offsets.push(o);
        let (s, p) = factor_roots(*f, o, n);
        simple_roots.extend(s);
        positive_roots.extend(p);
        match f.family {
            Family::GL => {
                let mut v = vec![0i64; n];
                v[o..o + f.rank].iter_mut().for_each(|x| *x = 1);
                center.push(RationalVector::from_ints(&v));
            }
            Family::Torus => center.extend((o..o + f.rank).map(|i| RationalVector::unit(n, i))),
            _ => {}
        }
        o += f.rank;
    }

    let two_rho = positive_roots
        .iter()
        .fold(Functional::zeros(n), |acc, a| &acc + a);
    let ineqs: Vec<Functional> = simple_roots.iter().map(|a| -a).collect();
    let antidominant = Cone::from_h(n, &ineqs, &[])?;
    let simple_factor_spans = dynkin_components(&simple_roots)
        .into_iter()
        .map(|ids| {
            let rows: Vec<Vec<Rational>> = ids.iter().map(|&i| simple_roots[i].coords().to_vec()).collect();
            canonical_basis(&rows, n).into_iter().map(RationalVector::new).collect()
        })
        .collect();

    Ok(RootDatum {
        spec: g.clone(),
        dim_a: n,
        simple_roots,
        positive_roots,
        two_rho,
        antidominant,
        center,
        simple_factor_spans,
        offsets,
    })
}

/// The modular character 2 rho (sum of the positive roots).
pub fn modular_character(rd: &RootDatum) -> Functional {
    rd.two_rho.clone()
}

fn rows(vs: &[RationalVector]) -> Vec<Vec<Rational>> {
    vs.iter().map(|v| v.coords().to_vec()).collect()
}

/// Classifies a subspace of the coweight space against the center and the
/// simple-factor spans.
pub fn simple_factor_split(rd: &RootDatum, subspace: &[RationalVector]) -> SplitVerdict {
    let n = rd.dim_a;
    let sub = rows(subspace);
    if intersection_dim(&sub, &rows(&rd.center), n) > 0 {
        return SplitVerdict::MeetsCenter;
    }
    let inside: Vec<usize> = rd
        .simple_factor_spans
        .iter()
        .enumerate()
        .filter(|(_, span)| span.iter().all(|b| in_span(b.coords(), &sub, n)))
        .map(|(i, _)| i)
        .collect();
    let covered: usize = inside.iter().map(|&i| rd.simple_factor_spans[i].len()).sum();
    if covered == rank(&sub, n) {
        SplitVerdict::FactorSum(inside)
    } else {
        SplitVerdict::Neither
    }
}

impl RootDatum {
    /// Coordinate range of factor `i`.
    pub fn factor_range(&self, i: usize) -> Range<usize> {
        let o = self.offsets[i];
        o..o + self.spec.factors[i].rank
    }

    pub fn center_is_trivial(&self) -> bool {
        self.center.is_empty()
    }

    /// All roots (positive and negative).
    pub fn roots(&self) -> Vec<Functional> {
        self.positive_roots
            .iter()
            .cloned()
            .chain(self.positive_roots.iter().map(|a| -a))
            .collect()
    }
}
