//! Exact arithmetic in `Q(√5)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{self, format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// The number `a + b·√5` with rational `a`, `b`.
///
/// Since `√5` is irrational the pair `(a, b)` is unique for each value, so
/// structural equality is numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuadraticNumber {
    a: Rational,
    b: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A float approximation together with a rigorous absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FloatApprox {
    pub value: f64,
    pub error_bound: f64,
}

impl QuadraticNumber {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        Self { a, b: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rational::int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rational::rat(num, den))
    }

    pub fn sqrt5() -> Self {
        Self { a: Rational::zero(), b: Rational::one() }
    }

    /// The golden ratio `β = (1+√5)/2`.
    pub fn beta() -> Self {
        let h = rational::rat(1, 2);
        Self { a: h.clone(), b: h }
    }

    /// `1/β = β − 1`.
    pub fn inv_beta() -> Self {
        Self { a: rational::rat(-1, 2), b: rational::rat(1, 2) }
    }

    /// `β^e` for any integer exponent.
    pub fn beta_pow(e: i64) -> Self {
        let base = if e >= 0 { Self::beta() } else { Self::inv_beta() };
        base.pow(e.unsigned_abs())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt5_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }

    pub fn conjugate(&self) -> Self {
        Self { a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a² − 5b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - rational::int(5) * &self.b * &self.b
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut result = Self::from_int(1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { a: &self.a / &n, b: -(&self.b / &n) })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        Self { a: &self.a * r, b: &self.b * r }
    }

    pub fn arith(&self, rhs: &Self, op: ArithOp) -> Result<Self> {
        Ok(match op {
            ArithOp::Add => self + rhs,
            ArithOp::Sub => self - rhs,
            ArithOp::Mul => self * rhs,
            ArithOp::Div => self.checked_div(rhs)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign of `a + b√5`, decided by comparing `a²` with `5b²`.
    pub fn sign(&self) -> i32 {
        let sa = rational::sign(&self.a);
        let sb = rational::sign(&self.b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        // opposite signs: the larger of |a| and |b|√5 wins
        let a2 = &self.a * &self.a;
        let b2 = rational::int(5) * &self.b * &self.b;
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Greatest integer `≤ self`, by integer bracketing of `b√5` and exact
    /// sign tests.
    pub fn floor(&self) -> BigInt {
        // √(5b²) ∈ [s/d, (s+1)/d] with 5b² = n/d and s = isqrt(n·d)
        let t = rational::int(5) * &self.b * &self.b;
        let d = t.denom().clone();
        let s = (t.numer() * &d).sqrt();
        let root_lo = Rational::new(s.clone(), d.clone());
        let root_hi = Rational::new(s + 1, d);
        let lower = if self.b.is_negative() { &self.a - root_hi } else { &self.a + root_lo };
        let mut k = lower.floor().to_integer();
        while (self - &Self::from_rational(Rational::from_integer(k.clone()))).sign() < 0 {
            k -= 1;
        }
        while (self - &Self::from_rational(Rational::from_integer(&k + 1))).sign() >= 0 {
            k += 1;
        }
        k
    }

    /// Rounded to `precision_bits` significant bits (capped at 53), with the
    /// rounding error bound `≤ 2^(-precision_bits)·|x|`.
    pub fn to_float(&self, precision_bits: u32) -> Result<FloatApprox> {
        if precision_bits == 0 {
            return crate::error::domain("precision_bits must be at least 1");
        }
        if self.is_zero() {
            return Ok(FloatApprox { value: 0.0, error_bound: 0.0 });
        }
        let p = precision_bits.min(53) as i64;
        let mag = self.abs();
        let two = rational::int(2);
        let mut e = self.log2_estimate().floor() as i64;
        // 2^e ≤ |x| < 2^(e+1)
        loop {
            let lo = Self::from_rational(rational::pow_i(&two, e));
            if (&mag - &lo).sign() < 0 {
                e -= 1;
                continue;
            }
            let hi = Self::from_rational(rational::pow_i(&two, e + 1));
            if (&mag - &hi).sign() >= 0 {
                e += 1;
                continue;
            }
            break;
        }
        let scaled = mag.mul_rational(&rational::pow_i(&two, p - 1 - e));
        let n = (&scaled + &Self::ratio(1, 2)).floor();
        let unit = rational::pow_i(&two, e - p + 1);
        let value = rational::to_f64(&(Rational::from_integer(n) * &unit));
        let error_bound = rational::to_f64(&unit) / 2.0;
        Ok(FloatApprox { value: if self.sign() < 0 { -value } else { value }, error_bound })
    }

    /// Shorthand for the 53-bit rounding.
    pub fn to_f64(&self) -> f64 {
        self.to_float(53).map(|f| f.value).unwrap_or(0.0)
    }

    fn log2_estimate(&self) -> f64 {
        let l2 = |r: &Rational| rational::ln_rational(&r.abs()) / std::f64::consts::LN_2;
        let half_log5 = 0.5 * 5f64.log2();
        let sum_log = |x: &Rational, y: &Rational| {
            // log2(|x| + |y|√5) up to one bit
            match (x.is_zero(), y.is_zero()) {
                (true, true) => f64::NEG_INFINITY,
                (true, false) => l2(y) + half_log5,
                (false, true) => l2(x),
                (false, false) => l2(x).max(l2(y) + half_log5),
            }
        };
        if self.a.is_zero() || self.b.is_zero() || rational::sign(&self.a) == rational::sign(&self.b) {
            sum_log(&self.a, &self.b)
        } else {
            // cancellation: use |x| = |N(x)| / |conjugate|
            l2(&self.norm()) - sum_log(&self.a, &self.b)
        }
    }
}

impl From<Rational> for QuadraticNumber {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign().cmp(&0)
    }
}

impl<'a> Add<&'a QuadraticNumber> for &'a QuadraticNumber {
    type Output = QuadraticNumber;
    fn add(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        QuadraticNumber { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl<'a> Sub<&'a QuadraticNumber> for &'a QuadraticNumber {
    type Output = QuadraticNumber;
    fn sub(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        QuadraticNumber { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl<'a> Mul<&'a QuadraticNumber> for &'a QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        if self.b.is_zero() && rhs.b.is_zero() {
            return QuadraticNumber::from_rational(&self.a * &rhs.a);
        }
        let five = rational::int(5);
        QuadraticNumber { a: &self.a * &rhs.a + five * &self.b * &rhs.b, b: &self.a * &rhs.b + &self.b * &rhs.a }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, rhs: QuadraticNumber) -> QuadraticNumber { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, rhs: &QuadraticNumber) -> QuadraticNumber { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber { a: -self.a, b: -self.b }
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        -self.clone()
    }
}

/// Textual form `a`, `c*sqrt5` or `a + c*sqrt5` with rational `a`, `c`.
impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return f.write_str(&format_rational(&self.a));
        }
        let coeff = |c: &Rational| {
            if c.is_one() {
                "sqrt5".to_string()
            } else {
                format!("{}*sqrt5", format_rational(c))
            }
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                return write!(f, "-{}", coeff(&-self.b.clone()));
            }
            return f.write_str(&coeff(&self.b));
        }
        let op = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "{} {} {}", format_rational(&self.a), op, coeff(&self.b.abs()))
    }
}

impl FromStr for QuadraticNumber {
    type Err = Error;

    /// Accepts sums of rational terms and `[c*]sqrt5` terms, e.g.
    /// `"1/2 + 1/2*sqrt5"`, `"-sqrt5"`, `"0.6"`, `"2 - 3/4*sqrt5"`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty quadratic literal".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'*' && bytes[i - 1] != b'/' {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut value = QuadraticNumber::default();
        for term in terms {
            let (negative, body) = match term.as_bytes()[0] {
                b'-' => (true, &term[1..]),
                b'+' => (false, &term[1..]),
                _ => (false, term),
            };
            let t = if let Some(c) = body.strip_suffix("sqrt5") {
                let c = c.strip_suffix('*').unwrap_or(c);
                let c = if c.is_empty() { Rational::one() } else { parse_rational(c)? };
                QuadraticNumber::new(Rational::zero(), c)
            } else {
                QuadraticNumber::from_rational(parse_rational(body)?)
            };
            value = if negative { &value - &t } else { &value + &t };
        }
        Ok(value)
    }
}

impl Serialize for QuadraticNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QuadraticNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
