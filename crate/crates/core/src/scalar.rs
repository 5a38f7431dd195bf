//! Exact scalars: rational coefficients and exponent scalars in ℚ(√2).
//!
//! Coefficients of series live in ℚ. Exponents live in ℚ(√2) so that a
//! single archimedean class can hold two ℚ-linearly independent values;
//! points whose exponent field is plain ℚ just keep the `√2` part zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Rational coefficient; `num-rational` keeps it reduced with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn sign_of(x: &Rat) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::BadScalar(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
    }
}

/// `a + b·√2` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QuadExt {
    pub a: Rat,
    pub b: Rat,
}

impl QuadExt {
    pub fn new(a: Rat, b: Rat) -> Self {
        QuadExt { a, b }
    }

    pub fn rational(a: Rat) -> Self {
        QuadExt { a, b: Rat::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(rat_int(n))
    }

    pub fn sqrt2() -> Self {
        QuadExt {
            a: Rat::zero(),
            b: Rat::one(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }

    /// Exact sign of `a + b√2` as a real number.
    pub fn sign(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: the larger of a² and 2b² wins
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b * rat_int(2);
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0, // unreachable for rational a, b since √2 is irrational
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// `a² − 2b²`, the field norm.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.b * &self.b * rat_int(2)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(QuadExt {
            a: &self.a / &n,
            b: -&self.b / &n,
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 2f64.sqrt()
    }

    /// Largest integer `k` with `k ≤ self`.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        let approx = self.to_f64();
        let mut k = if approx.is_finite() {
            BigInt::from(approx.floor() as i64)
        } else {
            self.a.floor().to_integer()
        };
        let le = |k: &BigInt| (self - &QuadExt::rational(Rat::from_integer(k.clone()))).sign() >= 0;
        while !le(&k) {
            k -= 1;
        }
        while le(&(&k + 1)) {
            k += 1;
        }
        k
    }

    pub fn scale(&self, r: &Rat) -> Self {
        QuadExt {
            a: &self.a * r,
            b: &self.b * r,
        }
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt::default()
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadExt {
    fn one() -> Self {
        QuadExt::int(1)
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign().cmp(&0)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl<'a> $tr<&'a QuadExt> for &'a QuadExt {
            type Output = QuadExt;
            fn $f(self, rhs: &'a QuadExt) -> QuadExt {
                let g: fn(&QuadExt, &QuadExt) -> QuadExt = $body;
                g(self, rhs)
            }
        }
        impl $tr for QuadExt {
            type Output = QuadExt;
            fn $f(self, rhs: QuadExt) -> QuadExt {
                (&self).$f(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| QuadExt {
    a: &x.a + &y.a,
    b: &x.b + &y.b
});
forward_binop!(Sub, sub, |x, y| QuadExt {
    a: &x.a - &y.a,
    b: &x.b - &y.b
});
forward_binop!(Mul, mul, |x, y| QuadExt {
    a: &x.a * &y.a + &x.b * &y.b * rat_int(2),
    b: &x.a * &y.b + &x.b * &y.a
});
forward_binop!(Div, div, |x, y| x * &y.inv().expect("division by zero in ℚ(√2)"));

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

impl From<i64> for QuadExt {
    fn from(n: i64) -> Self {
        QuadExt::int(n)
    }
}

impl From<Rat> for QuadExt {
    fn from(r: Rat) -> Self {
        QuadExt::rational(r)
    }
}

/// `p/q` when rational, otherwise `p/q+r/s*sqrt2` (or `-` before the surd part).
impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.b.is_negative() {
            write!(f, "{}-{}*sqrt2", self.a, -&self.b)
        } else {
            write!(f, "{}+{}*sqrt2", self.a, self.b)
        }
    }
}

impl FromStr for QuadExt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::BadScalar(s.to_string());
        let Some(body) = t.strip_suffix("sqrt2") else {
            return Ok(QuadExt::rational(parse_rat(&t)?));
        };
        // body is "<a>+<b>*", "<a>-<b>*", "<b>*", "" or "-"
        let body = body.strip_suffix('*').unwrap_or(body);
        // find the sign separating a and b, skipping a leading sign
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (a, b) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let b = match b {
            "" | "+" => Rat::one(),
            "-" => -Rat::one(),
            other => parse_rat(other.strip_prefix('+').unwrap_or(other)).map_err(|_| bad())?,
        };
        let a = parse_rat(a).map_err(|_| bad())?;
        Ok(QuadExt { a, b })
    }
}
