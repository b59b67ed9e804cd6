#![allow(dead_code)]

use critfan_core::exactgeom::{rat, Functional, Rational, RationalVector};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn v(c: &[i64]) -> RationalVector {
    RationalVector::from_ints(c)
}

pub fn f(c: &[i64]) -> Functional {
    Functional::from_ints(c)
}

pub fn random_ints(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..n).map(|_| rng.random_range(lo..=hi)).collect()
}

/// Plain Gaussian elimination: dimension of the solution space of `rows x = 0`
/// and one basis vector when that dimension is 1.
pub fn kernel_line(rows: &[Vec<Rational>], n: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) {
            m.swap(r, p);
            let lead = m[r][c].clone();
            for x in m[r].iter_mut() {
                *x = &*x / &lead;
            }
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let k = m[i][c].clone();
                    for j in 0..n {
                        let d = &k * &m[r][j];
                        m[i][j] -= d;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
    }
    if n - pivot_cols.len() != 1 {
        return None;
    }
    let free = (0..n).find(|c| !pivot_cols.contains(c)).unwrap();
    let mut x = vec![Rational::zero(); n];
    x[free] = Rational::one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        x[pc] = -m[row][free].clone();
    }
    Some(x)
}

/// Scales to a primitive integer vector by brute force over small factors.
pub fn normalize(x: &[Rational]) -> RationalVector {
    use num_integer::Integer;
    let den = x.iter().fold(num_bigint::BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<num_bigint::BigInt> = x.iter().map(|q| (q * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, z| acc.gcd(z));
    RationalVector::new(ints.into_iter().map(|z| Rational::from_integer(z / &g)).collect())
}

/// Extreme rays of a full-dimensional pointed cone `{x : a_i . x >= 0}` by
/// brute force over all (n-1)-subsets of tight constraints.
pub fn brute_force_rays(ineqs: &[Functional], n: usize) -> Vec<RationalVector> {
    let mut out = std::collections::BTreeSet::new();
    let k = ineqs.len();
    let mut idx: Vec<usize> = (0..n.saturating_sub(1)).collect();
    if n == 1 {
        for cand in [v(&[1]), v(&[-1])] {
            if ineqs.iter().all(|a| a.pair(&cand) >= rat(0)) {
                out.insert(cand);
            }
        }
        return out.into_iter().collect();
    }
    if k < n - 1 {
        return Vec::new();
    }
    loop {
        let rows: Vec<Vec<Rational>> = idx.iter().map(|&i| ineqs[i].coords().to_vec()).collect();
        if let Some(x) = kernel_line(&rows, n) {
            let pos = normalize(&x);
            for cand in [pos.clone(), -&pos] {
                if ineqs.iter().all(|a| a.pair(&cand) >= rat(0)) {
                    out.insert(cand);
                }
            }
        }
        // next combination
        let mut i = idx.len();
        loop {
            if i == 0 {
                return out.into_iter().collect();
            }
            i -= 1;
            if idx[i] < k - (idx.len() - i) {
                idx[i] += 1;
                for j in i + 1..idx.len() {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

use critfan_core::arrangement::{build_arrangement, ExponentArrangement};
use critfan_core::repspec::{weights_of, RepExpr};
use critfan_core::rootdata::{build_root_datum, Family, GroupSpec};

/// Random arrangement with ambient rank at most 4 and at most 10 weights;
/// resamples until the arrangement exists.
pub fn random_arrangement(rng: &mut ChaCha8Rng) -> (GroupSpec, ExponentArrangement) {
    loop {
        let rank = rng.random_range(1..=4usize);
        let family = match rng.random_range(0..5) {
            0 => Family::Torus,
            1 => Family::GL,
            2 => Family::SoOdd,
            3 => Family::Sp,
            _ if rank >= 2 => Family::SoEven,
            _ => Family::Torus,
        };
        let g = GroupSpec::single(family, rank);
        let rd = build_root_datum(&g).unwrap();
        let k = rng.random_range(1..=10usize);
        let list: Vec<(Functional, u64)> = (0..k)
            .map(|_| (f(&random_ints(rng, rank, -2, 2)), rng.random_range(1..=2u64)))
            .collect();
        let w = weights_of(&RepExpr::DirectWeights(list), &rd).unwrap();
        if let Ok(a) = build_arrangement(&rd, &w) {
            return (g, a);
        }
    }
}

/// Random positive integer combination of the rays of a cone.
pub fn random_relint_point(rng: &mut ChaCha8Rng, rays: &[RationalVector], n: usize) -> RationalVector {
    let mut acc = RationalVector::zeros(n);
    for r in rays {
        let c = rng.random_range(1..=9i64);
        acc = &acc + &r.scale(&rat(c));
    }
    acc
}
