//! Regularized integral `int_0^inf g(t) dt/t` for functions with power
//! asymptotics `g ~ c0 t^a0` at 0 and `g ~ c_inf t^a_inf` at infinity.
//!
//! For `g = c t^a` near 0, `int_0^1 c t^(a+s) dt/t = c/(a+s)`, whose value at
//! `s = 0` is `c/a`; likewise `int_1^inf c t^(a+s) dt/t` continues to `-c/a`.
//! Subtracting the model terms on each half line and adding these values
//! back gives the continuation at `s = 0`:
//!
//! `int_0^1 (g - c0 t^a0) dt/t + int_1^inf (g - c_inf t^a_inf) dt/t + c0/a0 - c_inf/a_inf`.

use std::sync::Arc;

use super::quad::integrate_gk21;
use super::AsymError;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

const QUAD_TOL: f64 = 1e-12;

#[derive(Clone)]
pub struct AsymFun1D {
    pub name: String,
    core: RealFn,
    rem0: Option<RealFn>,
    rem_inf: Option<RealFn>,
    pub a0: f64,
    pub c0: f64,
    pub a_inf: f64,
    pub c_inf: f64,
}

impl std::fmt::Debug for AsymFun1D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AsymFun1D")
            .field("name", &self.name)
            .field("a0", &self.a0)
            .field("c0", &self.c0)
            .field("a_inf", &self.a_inf)
            .field("c_inf", &self.c_inf)
            .finish()
    }
}

impl AsymFun1D {
    pub fn new(
        name: impl Into<String>,
        core: impl Fn(f64) -> f64 + Send + Sync + 'static,
        (a0, c0): (f64, f64),
        (a_inf, c_inf): (f64, f64),
    ) -> Self {
        Self {
            name: name.into(),
            core: Arc::new(core),
            rem0: None,
            rem_inf: None,
            a0,
            c0,
            a_inf,
            c_inf,
        }
    }

    /// Supplies `g(t) - c0 t^a0` in a form free of cancellation.
    pub fn with_rem0(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.rem0 = Some(Arc::new(f));
        self
    }

    /// Supplies `g(t) - c_inf t^a_inf` in a form free of cancellation.
    pub fn with_rem_inf(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.rem_inf = Some(Arc::new(f));
        self
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.core)(t)
    }

    fn remainder0(&self, t: f64) -> f64 {
        match &self.rem0 {
            Some(r) => r(t),
            None if self.c0 == 0.0 => self.eval(t),
            None => self.eval(t) - self.c0 * t.powf(self.a0),
        }
    }

    fn remainder_inf(&self, t: f64) -> f64 {
        match &self.rem_inf {
            Some(r) => r(t),
            None if self.c_inf == 0.0 => self.eval(t),
            None => self.eval(t) - self.c_inf * t.powf(self.a_inf),
        }
    }

    pub fn is_critical(&self) -> bool {
        (self.c0 != 0.0 && self.a0 == 0.0) || (self.c_inf != 0.0 && self.a_inf == 0.0)
    }

    /// `t -> g(u t)` with the transformed asymptotic coefficients.
    pub fn dilate(&self, u: f64) -> AsymFun1D {
        let wrap = |f: &RealFn| -> RealFn {
            let f = f.clone();
            Arc::new(move |t| f(u * t))
        };
        AsymFun1D {
            name: format!("{}(u={u})", self.name),
            core: wrap(&self.core),
            rem0: self.rem0.as_ref().map(wrap),
            rem_inf: self.rem_inf.as_ref().map(wrap),
            a0: self.a0,
            c0: self.c0 * u.powf(self.a0),
            a_inf: self.a_inf,
            c_inf: self.c_inf * u.powf(self.a_inf),
        }
    }

    /// Built-in family: `t_exp`, `bessel`, `exp`, `sqrt_exp`, `inv_sqrt_exp`,
    /// `sqrt_exp_inv`, and `tpow_exp=<s>` for `s > -1`.
    pub fn builtin(spec: &str) -> Result<AsymFun1D, AsymError> {
        let unknown = || AsymError::UnknownFunction(spec.to_string());
        let f = match spec.trim() {
            "t_exp" => AsymFun1D::new("t_exp", |t| t * (-t).exp(), (1.0, 1.0), (0.0, 0.0))
                .with_rem0(|t| t * (-t).exp_m1()),
            "bessel" => AsymFun1D::new("bessel", |t| (-t - 1.0 / t).exp(), (0.0, 0.0), (0.0, 0.0)),
            "exp" => AsymFun1D::new("exp", |t| (-t).exp(), (0.0, 1.0), (0.0, 0.0)).with_rem0(|t| (-t).exp_m1()),
            "sqrt_exp" => AsymFun1D::new("sqrt_exp", |t| t.sqrt() * (-t).exp(), (0.5, 1.0), (0.0, 0.0))
                .with_rem0(|t| t.sqrt() * (-t).exp_m1()),
            "inv_sqrt_exp" => AsymFun1D::new("inv_sqrt_exp", |t| (-t).exp() / t.sqrt(), (-0.5, 1.0), (0.0, 0.0))
                .with_rem0(|t| (-t).exp_m1() / t.sqrt()),
            "sqrt_exp_inv" => AsymFun1D::new("sqrt_exp_inv", |t| t.sqrt() * (-1.0 / t).exp(), (0.0, 0.0), (0.5, 1.0))
                .with_rem_inf(|t| t.sqrt() * (-1.0 / t).exp_m1()),
            other => {
                let s: f64 = other
                    .strip_prefix("tpow_exp=")
                    .and_then(|x| x.trim().parse().ok())
                    .ok_or_else(unknown)?;
                if !(s > -1.0) || !s.is_finite() {
                    return Err(unknown());
                }
                AsymFun1D::new(other, move |t| t.powf(s) * (-t).exp(), (s, 1.0), (0.0, 0.0))
                    .with_rem0(move |t| t.powf(s) * (-t).exp_m1())
            }
        };
        Ok(f)
    }
}

/// Integrand in `u = log t`; the tails beyond the floating-point range of
/// `exp` are zero under the decay contract.
fn in_log_variable(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> f64 {
    move |u: f64| {
        let t = u.exp();
        if t == 0.0 || !t.is_finite() {
            return 0.0;
        }
        let v = f(t);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    }
}

/// Regularized value of `int_0^inf g(t) dt/t` (see module docs).
pub fn mellin_regularize(g: &AsymFun1D) -> Result<f64, AsymError> {
    if g.c0 != 0.0 && g.a0 == 0.0 {
        return Err(AsymError::CriticalExponent("0"));
    }
    if g.c_inf != 0.0 && g.a_inf == 0.0 {
        return Err(AsymError::CriticalExponent("infinity"));
    }
    let left = integrate_gk21(in_log_variable(|t| g.remainder0(t)), f64::NEG_INFINITY, 0.0, QUAD_TOL, QUAD_TOL)?;
    let right = integrate_gk21(in_log_variable(|t| g.remainder_inf(t)), 0.0, f64::INFINITY, QUAD_TOL, QUAD_TOL)?;
    let mut value = left.value + right.value;
    if g.c0 != 0.0 {
        value += g.c0 / g.a0;
    }
    if g.c_inf != 0.0 {
        value -= g.c_inf / g.a_inf;
    }
    Ok(value)
}

/// Unregularized `int_0^inf g(t) dt/t` in the variable `t`, split at 1 with
/// `t = 1/x` on the upper half.
pub fn plain_integral(g: &AsymFun1D) -> Result<f64, AsymError> {
    let lower = integrate_gk21(|t| if t > 0.0 { g.eval(t) / t } else { 0.0 }, 0.0, 1.0, QUAD_TOL, QUAD_TOL)?;
    let upper = integrate_gk21(|x| if x > 0.0 { g.eval(1.0 / x) / x } else { 0.0 }, 0.0, 1.0, QUAD_TOL, QUAD_TOL)?;
    Ok(lower.value + upper.value)
}

/// `|R(g(u .)) - R(g)|` for the regularized integral `R`.
pub fn invariance_check(g: &AsymFun1D, u: f64) -> Result<f64, AsymError> {
    Ok((mellin_regularize(&g.dilate(u))? - mellin_regularize(g)?).abs())
}
