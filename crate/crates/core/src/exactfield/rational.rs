//! Helpers around [`Rational`]: parsing, formatting, powers, exact roots and
//! logarithms that stay accurate when numerator and denominator overflow `f64`.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-7/4"` or a decimal literal such as `"0.6"` (read exactly as 3/5).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !whole.chars().all(|c| c.is_ascii_digit())
            || (whole.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{whole}{frac}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Formats as `"n"` or `"n/d"`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Integer power with negative exponents allowed (`x ≠ 0` required then).
pub fn pow_i(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), e.unsigned_abs() as usize)
    }
}

/// Exact `n`-th root of a nonnegative rational, if it is rational.
pub fn exact_root(x: &Rational, n: u32) -> Option<Rational> {
    if x.is_negative() || n == 0 {
        return None;
    }
    let rn = x.numer().nth_root(n);
    let rd = x.denom().nth_root(n);
    let candidate = Rational::new(rn, rd);
    (num_traits::pow(candidate.clone(), n as usize) == *x).then_some(candidate)
}

fn ln_bigint(n: &BigInt) -> f64 {
    debug_assert!(n.sign() == Sign::Plus);
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a rational; `-inf` at zero, `NaN` for negatives.
pub fn ln_rational(x: &Rational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    if x.is_negative() {
        return f64::NAN;
    }
    if let Some(f) = x.to_f64() {
        if (0.5..2.0).contains(&f) {
            // exact x − 1 keeps full relative accuracy near 1
            let t = x - Rational::one();
            return t.to_f64().expect("bounded").ln_1p();
        }
        if f.is_normal() {
            return f.ln();
        }
    }
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// Nearest `f64`, saturating to infinities for out-of-range magnitudes.
pub fn to_f64(x: &Rational) -> f64 {
    match x.to_f64() {
        Some(f) => f,
        None => {
            let l = ln_rational(&x.abs());
            let v = l.exp();
            if x.is_negative() {
                -v
            } else {
                v
            }
        }
    }
}

/// Best rational reading of an `f64` (exact binary value).
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn sign(x: &Rational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational(" -7/4 ").unwrap(), rat(-7, 4));
        assert_eq!(parse_rational("0.6").unwrap(), rat(3, 5));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rational("4/8").unwrap(), rat(1, 2));
        assert!(matches!(parse_rational("1/0"), Err(Error::DivisionByZero)));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format_rational(&rat(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn exact_roots() {
        assert_eq!(exact_root(&rat(1, 4), 2), Some(rat(1, 2)));
        assert_eq!(exact_root(&rat(8, 27), 3), Some(rat(2, 3)));
        assert_eq!(exact_root(&rat(1, 2), 2), None);
    }

    #[test]
    fn logs_of_huge_rationals() {
        let big = pow_i(&rat(3, 1), 2000);
        let l = ln_rational(&big);
        assert!((l - 2000.0 * 3f64.ln()).abs() < 1e-9);
        let ratio = pow_i(&rat(3, 4), 3000);
        assert!((ln_rational(&ratio) - 3000.0 * (0.75f64).ln()).abs() < 1e-9);
        assert_eq!(ln_rational(&int(0)), f64::NEG_INFINITY);
    }
}
