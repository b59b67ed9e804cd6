use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number used throughout the exact modules.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p`, `p/q` or a plain decimal integer string.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim().replace('\u{2212}', "-");
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Positive rescaling of `v` to a primitive integer vector (content 1).
/// The zero vector is returned unchanged.
pub(crate) fn primitive(v: &[Rational]) -> Vec<Rational> {
    if v.iter().all(Zero::is_zero) {
        return v.to_vec();
    }
    let mut lcm = BigInt::one();
    for q in v {
        lcm = lcm.lcm(q.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|q| (q * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

macro_rules! coord_newtype {
    ($name:ident) => {
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Vec<Rational>);

        impl $name {
            pub fn new(coords: Vec<Rational>) -> Self {
                Self(coords)
            }

            pub fn from_ints(coords: &[i64]) -> Self {
                Self(coords.iter().map(|&c| rat(c)).collect())
            }

            pub fn zeros(n: usize) -> Self {
                Self(vec![Rational::zero(); n])
            }

            /// The `i`-th standard basis vector of length `n`.
            pub fn unit(n: usize, i: usize) -> Self {
                let mut v = vec![Rational::zero(); n];
                v[i] = Rational::one();
                Self(v)
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn coords(&self) -> &[Rational] {
                &self.0
            }

            pub fn into_coords(self) -> Vec<Rational> {
                self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            pub fn scale(&self, c: &Rational) -> Self {
                Self(self.0.iter().map(|x| x * c).collect())
            }

            pub fn primitive(&self) -> Self {
                Self(primitive(&self.0))
            }

            pub fn is_integral(&self) -> bool {
                self.0.iter().all(|q| q.is_integer())
            }

            pub fn to_f64(&self) -> Vec<f64> {
                use num_traits::ToPrimitive;
                self.0.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect()
            }

            /// Coefficients as exact strings (`"-3/2"`).
            pub fn to_strings(&self) -> Vec<String> {
                self.0.iter().map(fmt_rational).collect()
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, q) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", fmt_rational(q))?;
                }
                write!(f, ")")
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                assert_eq!(self.len(), rhs.len(), "length mismatch");
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                assert_eq!(self.len(), rhs.len(), "length mismatch");
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(self.0.iter().map(|a| -a).collect())
            }
        }
    };
}

coord_newtype!(RationalVector);
coord_newtype!(Functional);

impl Functional {
    /// Exact pairing `<self, v>`.
    pub fn pair(&self, v: &RationalVector) -> Rational {
        assert_eq!(self.len(), v.len(), "pairing length mismatch");
        dot(&self.0, &v.0)
    }

    /// Sign of the pairing: -1, 0 or 1.
    pub fn sign_at(&self, v: &RationalVector) -> i8 {
        let p = self.pair(v);
        if p.is_positive() {
            1
        } else if p.is_negative() {
            -1
        } else {
            0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_scales_to_content_one() {
        let v = vec![rat_frac(2, 3), rat_frac(-4, 9), rat(0)];
        assert_eq!(primitive(&v), vec![rat(3), rat(-2), rat(0)]);
    }

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "-3/2", "7", "5/4"] {
            assert_eq!(fmt_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("\u{2212}1/2"), Some(rat_frac(-1, 2)));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn pairing_is_exact() {
        let f = Functional::new(vec![rat_frac(1, 3), rat(-1)]);
        let v = RationalVector::from_ints(&[3, 1]);
        assert!(f.pair(&v).is_zero());
        assert_eq!(f.sign_at(&RationalVector::from_ints(&[3, 0])), 1);
    }
}
