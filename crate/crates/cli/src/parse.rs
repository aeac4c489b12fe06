use anyhow::{Context, Result};
use gibbsnum::exactfield::parse_rational;
use gibbsnum::numeration::parse_digits;
use gibbsnum::{Matrix, QuadraticNumber, Rational};

pub fn rational(s: &str) -> Result<Rational> {
    parse_rational(s.trim()).with_context(|| format!("bad rational {s:?}"))
}

/// `"1/3,1/3,1/3"`.
pub fn rationals(s: &str) -> Result<Vec<Rational>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(rational).collect()
}

/// Rows separated by `;`, entries by `,`.
pub fn matrix(s: &str) -> Result<Matrix> {
    let rows = s.split(';').map(rationals).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows)?)
}

/// A literal of `Q(√5)`; `golden` stands for `(1+√5)/2`.
pub fn quadratic(s: &str) -> Result<QuadraticNumber> {
    if s.trim() == "golden" {
        return Ok(QuadraticNumber::beta());
    }
    s.parse().with_context(|| format!("bad number {s:?}"))
}

pub fn digits(s: &str) -> Result<Vec<u8>> {
    Ok(parse_digits(s)?)
}

pub fn naturals(s: &str) -> Result<Vec<u32>> {
    s.split(',').map(|t| t.trim().parse::<u32>().with_context(|| format!("bad integer {t:?}"))).collect()
}
