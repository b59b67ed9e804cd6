use std::f64::consts::PI;

use num_traits::{Signed, ToPrimitive, Zero};

use super::sum::NeumaierSum;
use super::AsymError;
use crate::exactgeom::{Cone, Functional, Rational, RationalVector};

const MAX_SCALE: f64 = 1e12;
const DIRECT_MIN_SCALE: f64 = 1e-2;
/// Per-coordinate truncation target for the theta tails.
const TAIL_TOL: f64 = 1e-16;

/// Split torus of rank `r` acting diagonally on `R^d` with integer weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusAction {
    weights: Vec<Vec<i64>>,
    rank: usize,
}

impl TorusAction {
    pub const MAX_D: usize = 8;
    pub const MAX_R: usize = 4;
    pub const MAX_WEIGHT: i64 = 20;

    /// `weights[j]` is the weight of coordinate `j`.
    pub fn new(weights: Vec<Vec<i64>>) -> Result<Self, AsymError> {
        let d = weights.len();
        if d == 0 || d > Self::MAX_D {
            return Err(AsymError::InvalidAction(format!("need 1..={} coordinates, got {d}", Self::MAX_D)));
        }
        let r = weights[0].len();
        if r == 0 || r > Self::MAX_R {
            return Err(AsymError::InvalidAction(format!("need rank 1..={}, got {r}", Self::MAX_R)));
        }
        if weights.iter().any(|w| w.len() != r) {
            return Err(AsymError::InvalidAction("weights have unequal lengths".into()));
        }
        if weights.iter().flatten().any(|x| x.abs() > Self::MAX_WEIGHT) {
            return Err(AsymError::InvalidAction(format!("weight entries must satisfy |w| <= {}", Self::MAX_WEIGHT)));
        }
        Ok(Self { weights, rank: r })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn weight_functional(&self, j: usize) -> Functional {
        Functional::from_ints(&self.weights[j])
    }

    /// Coordinate scale factors `s_j = prod_i t_i^{w_ji}`.
    pub fn scales(&self, t: &[f64]) -> Result<Vec<f64>, AsymError> {
        if t.len() != self.rank || t.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
            return Err(AsymError::InvalidProbe("t must be a positive vector of the torus rank".into()));
        }
        let logs: Vec<f64> = t.iter().map(|x| x.ln()).collect();
        Ok(self
            .weights
            .iter()
            .map(|w| w.iter().zip(&logs).map(|(a, l)| *a as f64 * l).sum::<f64>().exp())
            .collect())
    }
}

/// Product Gaussians with closed-form Fourier transforms.
#[derive(Clone, Debug, PartialEq)]
pub enum ProbeFunction {
    /// `exp(-pi |v|^2)`, its own Fourier transform.
    Gaussian,
    /// `exp(-pi sum (c_j v_j)^2)` with Fourier transform
    /// `prod (1/c_j) exp(-pi xi_j^2 / c_j^2)`.
    ScaledGaussian(Vec<f64>),
}

impl ProbeFunction {
    fn coefficient(&self, j: usize) -> Result<f64, AsymError> {
        match self {
            ProbeFunction::Gaussian => Ok(1.0),
            ProbeFunction::ScaledGaussian(c) => match c.get(j) {
                Some(&x) if x > 0.0 && x.is_finite() => Ok(x),
                _ => Err(AsymError::InvalidProbe(format!("missing or non-positive scale for coordinate {j}"))),
            },
        }
    }

    fn effective_scales(&self, s: &[f64]) -> Result<Vec<f64>, AsymError> {
        s.iter()
            .enumerate()
            .map(|(j, x)| {
                let a = x * self.coefficient(j)?;
                if !(1.0 / MAX_SCALE..=MAX_SCALE).contains(&a) {
                    return Err(AsymError::Overflow(a));
                }
                Ok(a)
            })
            .collect()
    }
}

/// Certified bound on `sum_{|n| > radius} exp(-pi n^2 a^2)`.
pub fn theta_tail_bound(a: f64, radius: u64) -> f64 {
    let n1 = radius as f64 + 1.0;
    let q = (-PI * a * a * (2.0 * n1 + 1.0)).exp();
    2.0 * (-PI * n1 * n1 * a * a).exp() / (1.0 - q)
}

fn radius_for(a: f64) -> u64 {
    let mut n = ((TAIL_TOL.recip().ln() / PI).sqrt() / a).ceil() as u64;
    while n > 0 && theta_tail_bound(a, n - 1) <= TAIL_TOL {
        n -= 1;
    }
    while theta_tail_bound(a, n) > TAIL_TOL {
        n += 1;
    }
    n
}

/// `sum_{|n| <= radius} exp(-pi n^2 a^2)`, smallest terms first.
fn theta_box(a: f64, radius: u64) -> f64 {
    let mut s = NeumaierSum::new();
    for n in (1..=radius).rev() {
        let x = n as f64 * a;
        s.add(2.0 * (-PI * x * x).exp());
    }
    s.add(1.0);
    s.value()
}

/// `theta(a) = sum_n exp(-pi n^2 a^2)` truncated at the certified radius.
/// Returns (value, tail bound, radius).
fn theta_direct(a: f64) -> (f64, f64, u64) {
    let r = radius_for(a);
    (theta_box(a, r), theta_tail_bound(a, r), r)
}

/// Jacobi theta sum; small scales are evaluated through `theta(a) = theta(1/a)/a`.
pub fn theta(a: f64) -> f64 {
    if a >= DIRECT_MIN_SCALE {
        theta_direct(a).0
    } else {
        theta_direct(1.0 / a).0 / a
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSum {
    pub value: f64,
    /// Bound on the neglected terms of the product sum.
    pub tail_bound: f64,
    /// Coordinate scale factors (including probe coefficients).
    pub scales: Vec<f64>,
}

pub fn lattice_sum_detailed(action: &TorusAction, f: &ProbeFunction, t: &[f64]) -> Result<LatticeSum, AsymError> {
    let scales = f.effective_scales(&action.scales(t)?)?;
    let mut value = 1.0;
    let mut rel_tail = 0.0;
    for &a in &scales {
        let (v, tail) = if a >= DIRECT_MIN_SCALE {
            let (v, tail, _) = theta_direct(a);
            (v, tail)
        } else {
            let (v, tail, _) = theta_direct(1.0 / a);
            (v / a, tail / a)
        };
        value *= v;
        rel_tail += tail / v;
    }
    Ok(LatticeSum {
        value,
        tail_bound: value * rel_tail,
        scales,
    })
}

/// `sum_{gamma in Z^d} f(gamma . t)`.
pub fn lattice_sum(action: &TorusAction, f: &ProbeFunction, t: &[f64]) -> Result<f64, AsymError> {
    lattice_sum_detailed(action, f, t).map(|s| s.value)
}

/// Direct sum over the box `|gamma_j| <= radii[j]`.
pub fn box_sum(action: &TorusAction, f: &ProbeFunction, t: &[f64], radii: &[u64]) -> Result<f64, AsymError> {
    let scales = f.effective_scales(&action.scales(t)?)?;
    if radii.len() != scales.len() {
        return Err(AsymError::InvalidProbe("one radius per coordinate required".into()));
    }
    Ok(scales.iter().zip(radii).map(|(&a, &r)| theta_box(a, r)).product())
}

/// `|sum f(gamma . t) - (prod s_j)^{-1} sum fhat(kappa / s)|`, both sides by
/// direct summation (scales restricted to `[1e-6, 1e6]`).
pub fn poisson_identity_check(action: &TorusAction, f: &ProbeFunction, t: &[f64]) -> Result<f64, AsymError> {
    let scales = f.effective_scales(&action.scales(t)?)?;
    let mut lhs = 1.0;
    let mut rhs = 1.0;
    for &a in &scales {
        if !(1e-6..=1e6).contains(&a) {
            return Err(AsymError::Overflow(a));
        }
        lhs *= theta_direct(a).0;
        rhs *= theta_direct(1.0 / a).0 / a;
    }
    Ok((lhs - rhs).abs())
}

/// Sums along the cocharacter `t -> t^lambda` over a geometric grid.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSumProbe {
    pub action: TorusAction,
    pub f: ProbeFunction,
    pub lambda: RationalVector,
    pub t_grid: Vec<f64>,
}

impl LatticeSumProbe {
    /// Geometric grid of `points` values from `t_min` to `t_max`.
    pub fn geometric_grid(t_min: f64, t_max: f64, points: usize) -> Vec<f64> {
        let (l0, l1) = (t_min.ln(), t_max.ln());
        (0..points)
            .map(|k| (l0 + (l1 - l0) * k as f64 / (points.max(2) - 1) as f64).exp())
            .collect()
    }

    fn pairings(&self) -> Result<Vec<Rational>, AsymError> {
        if self.lambda.len() != self.action.rank() {
            return Err(AsymError::InvalidProbe("direction length differs from the torus rank".into()));
        }
        Ok((0..self.action.dim())
            .map(|j| self.action.weight_functional(j).pair(&self.lambda))
            .collect())
    }

    fn check_grid(&self) -> Result<(), AsymError> {
        let n = self.t_grid.len();
        let (lo, hi) = self
            .t_grid
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &t| (lo.min(t), hi.max(t)));
        let decades = if n > 0 && lo > 0.0 { (hi / lo).log10() } else { 0.0 };
        if n < 8 || decades < 2.0 - 1e-9 || hi > 1.0 {
            return Err(AsymError::GridTooShort { decades, points: n });
        }
        Ok(())
    }

    /// Sum at `t^lambda`, with the scale of coordinate `j` equal to
    /// `t^{<w_j, lambda>}`.
    fn sum_at(&self, t: f64) -> Result<f64, AsymError> {
        let lt = t.ln();
        let tv: Vec<f64> = self
            .lambda
            .coords()
            .iter()
            .map(|l| (l.to_f64().unwrap_or(f64::NAN) * lt).exp())
            .collect();
        lattice_sum(&self.action, &self.f, &tv)
    }
}

/// Least-squares slope of `log S(t^lambda)` against `log t`.
pub fn fit_exponent(probe: &LatticeSumProbe) -> Result<f64, AsymError> {
    probe.check_grid()?;
    let mut xs = Vec::with_capacity(probe.t_grid.len());
    let mut ys = Vec::with_capacity(probe.t_grid.len());
    for &t in &probe.t_grid {
        xs.push(t.ln());
        ys.push(probe.sum_at(t)?.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: NeumaierSum = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    let sxx: NeumaierSum = xs.iter().map(|x| (x - mx) * (x - mx)).collect();
    Ok(sxy.value() / sxx.value())
}

/// `2 sum_{n >= 1} exp(-pi n^2 a^2)`, accurate for tiny values.
fn theta_excess(a: f64) -> f64 {
    let mut s = NeumaierSum::new();
    for n in (1..=radius_for(a).max(1)).rev() {
        let x = n as f64 * a;
        s.add(2.0 * (-PI * x * x).exp());
    }
    s.value()
}

/// Maximal scaled residual `|S(t^lambda) - f_C(t^lambda)| t^{-(<chi_C, lambda> + 10)}`
/// over the probe grid, where `f_C` sums the zero-weight coordinates, integrates
/// the positive-weight ones and freezes the negative-weight ones at 0.
///
/// The difference is formed as `f_C (prod_j (1 + E_j) - 1)` with `E_j` the
/// excess of each non-zero-weight theta factor, which keeps its relative
/// precision where direct subtraction would return rounding noise.
pub fn residual_check(probe: &LatticeSumProbe, cone: &Cone) -> Result<f64, AsymError> {
    if probe.lambda.is_zero() || cone.ambient() != probe.lambda.len() || !cone.in_relint(&probe.lambda) {
        return Err(AsymError::OutsideRelint);
    }
    let pairings = probe.pairings()?;
    for j in 0..probe.action.dim() {
        let w = probe.action.weight_functional(j);
        let s = crate::exactgeom::relint_sign(&w, cone);
        if s == crate::exactgeom::Sign::Mixed {
            return Err(AsymError::OutsideRelint);
        }
    }
    // <chi_C, lambda> = -(sum of positive pairings)
    let chi: f64 = -pairings
        .iter()
        .filter(|p| p.is_positive())
        .map(|p| p.to_f64().unwrap_or(f64::NAN))
        .sum::<f64>();

    let mut worst: f64 = 0.0;
    for &t in &probe.t_grid {
        let lt = t.ln();
        let mut f_c = 1.0;
        let mut log1p_sum = 0.0;
        for (j, p) in pairings.iter().enumerate() {
            let c = probe.f.coefficient(j)?;
            let a = c * (p.to_f64().unwrap_or(f64::NAN) * lt).exp();
            if !(1.0 / MAX_SCALE..=MAX_SCALE).contains(&a) {
                return Err(AsymError::Overflow(a));
            }
            if p.is_zero() {
                f_c *= theta(a);
            } else if p.is_positive() {
                f_c /= a;
                log1p_sum += theta_excess(1.0 / a).ln_1p();
            } else {
                log1p_sum += theta_excess(a).ln_1p();
            }
        }
        let residual = (f_c * log1p_sum.exp_m1()).abs();
        worst = worst.max(residual * t.powf(-(chi + 10.0)));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl1() -> TorusAction {
        TorusAction::new(vec![vec![1]]).unwrap()
    }

    #[test]
    fn theta_at_one_matches_reference() {
        // Reference value of sum_n exp(-pi n^2).
        let s = lattice_sum(&gl1(), &ProbeFunction::Gaussian, &[1.0]).unwrap();
        assert!((s - 1.086_434_811_213_308).abs() < 1e-14);
    }

    #[test]
    fn large_scale_keeps_only_origin() {
        let s = lattice_sum(&gl1(), &ProbeFunction::Gaussian, &[100.0]).unwrap();
        assert!((s - 1.0).abs() < 1e-14);
        assert!(matches!(
            lattice_sum(&gl1(), &ProbeFunction::Gaussian, &[1e13]),
            Err(AsymError::Overflow(_))
        ));
    }

    #[test]
    fn small_scale_asymptotics() {
        for t in [1e-1, 1e-2, 1e-3] {
            let s = lattice_sum(&gl1(), &ProbeFunction::Gaussian, &[t]).unwrap();
            assert!((t * s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn poisson_cases() {
        let g = ProbeFunction::Gaussian;
        assert!(poisson_identity_check(&gl1(), &g, &[0.5]).unwrap() < 1e-12);
        let two = TorusAction::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(poisson_identity_check(&two, &g, &[1.0 / 3.0, 3.0]).unwrap() < 1e-12);
        let sg = ProbeFunction::ScaledGaussian(vec![2.0]);
        assert!(poisson_identity_check(&gl1(), &sg, &[0.2]).unwrap() < 1e-10);
    }

    #[test]
    fn action_limits() {
        assert!(TorusAction::new(vec![vec![21]]).is_err());
        assert!(TorusAction::new(vec![vec![1]; 9]).is_err());
        assert!(TorusAction::new(vec![vec![1, 0, 0, 0, 0]]).is_err());
    }

    #[test]
    fn short_grid_rejected() {
        let probe = LatticeSumProbe {
            action: gl1(),
            f: ProbeFunction::Gaussian,
            lambda: RationalVector::from_ints(&[1]),
            t_grid: LatticeSumProbe::geometric_grid(1e-2, 1e-1, 10),
        };
        assert!(matches!(fit_exponent(&probe), Err(AsymError::GridTooShort { .. })));
    }
}
