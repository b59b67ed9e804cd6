use super::sum::NeumaierSum;
use super::AsymError;

// Gauss-Kronrod 21-point nodes and weights (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn qk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[10];
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Panel { a, b, value, error }
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, epsabs: f64, epsrel: f64, limit: usize) -> Result<Integral, AsymError> {
    let mut panels = vec![qk21(f, a, b)];
    loop {
        let value: f64 = panels.iter().map(|p| p.value).collect::<NeumaierSum>().value();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(AsymError::QuadratureFailure {
                estimate: f64::INFINITY,
                tolerance: epsabs.max(epsrel * value.abs()),
            });
        }
        let tol = epsabs.max(epsrel * value.abs());
        if error <= tol {
            return Ok(Integral {
                value,
                error,
                intervals: panels.len(),
            });
        }
        if panels.len() >= limit {
            return Err(AsymError::QuadratureFailure { estimate: error, tolerance: tol });
        }
        let (k, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| if p.error > acc.1 { (i, p.error) } else { acc });
        let p = panels.swap_remove(k);
        let mid = 0.5 * (p.a + p.b);
        panels.push(qk21(f, p.a, mid));
        panels.push(qk21(f, mid, p.b));
        panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    }
}

/// Adaptive Gauss-Kronrod integration on `[a, b]`; either end may be infinite.
pub fn integrate_gk21<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, epsabs: f64, epsrel: f64) -> Result<Integral, AsymError> {
    const LIMIT: usize = 2000;
    // Infinite ends are mapped to (0, 1] by u = end -/+ (1 - x)/x.
    let upper = |start: f64, eps: f64| {
        let g = |x: f64| f(start + (1.0 - x) / x) / (x * x);
        adaptive(&g, 0.0, 1.0, eps, epsrel, LIMIT)
    };
    let lower = |end: f64, eps: f64| {
        let g = |x: f64| f(end - (1.0 - x) / x) / (x * x);
        adaptive(&g, 0.0, 1.0, eps, epsrel, LIMIT)
    };
    match (a.is_finite(), b.is_finite()) {
        (true, true) => adaptive(&f, a, b, epsabs, epsrel, LIMIT),
        (true, false) => upper(a, epsabs),
        (false, true) => lower(b, epsabs),
        (false, false) => {
            let l = lower(0.0, epsabs / 2.0)?;
            let r = upper(0.0, epsabs / 2.0)?;
            Ok(Integral {
                value: l.value + r.value,
                error: l.error + r.error,
                intervals: l.intervals + r.intervals,
            })
        }
    }
}
