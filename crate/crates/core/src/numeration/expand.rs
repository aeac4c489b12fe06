//! Digit expansions in base `r`, base `β` (Parry) and base `-β`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::interval::{Interval, QInterval};
use super::words::{first_double_one, AdmissibleBinaryWord, DigitWord, PeriodicWord};
use crate::error::{domain, Result};
use crate::exactfield::rational::{self, Rational};
use crate::exactfield::QuadraticNumber;

type Q = QuadraticNumber;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailMode {
    /// All later digits are 0.
    Zero,
    /// All later digits are maximal.
    Max,
}

/// Exact range of `X_{q,r}(ω) = Σ ωₙ/rⁿ` over all infinite extensions of
/// `word`, where `q` is the word's alphabet size.
pub fn base_r_interval(word: &DigitWord, r: u32) -> Result<Interval<Rational>> {
    if r < 2 {
        return domain("base r must be at least 2");
    }
    let r_big = Rational::from_integer(BigInt::from(r));
    let mut sum = Rational::zero();
    let mut scale = Rational::one();
    for &d in word.digits() {
        scale /= &r_big;
        sum += &scale * rational::int(d as i64);
    }
    let q = word.alphabet_size() as i64;
    let tail = rational::int(q - 1) / rational::int(r as i64 - 1) * &scale;
    Ok(Interval::closed(sum.clone(), sum + tail))
}

pub fn base_r_value(word: &DigitWord, r: u32, tail: TailMode) -> Result<Rational> {
    let iv = base_r_interval(word, r)?;
    Ok(match tail {
        TailMode::Zero => iv.lo,
        TailMode::Max => iv.hi,
    })
}

/// Greedy base-`r` digits of `x ∈ [0, 1)`.
pub fn base_r_expand(x: &Q, r: u32, n: usize) -> Result<DigitWord> {
    if r < 2 {
        return domain("base r must be at least 2");
    }
    check_unit_interval(x)?;
    let rq = Q::from_int(r as i64);
    let mut y = x.clone();
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let t = &rq * &y;
        let d = t.floor();
        y = &t - &Q::from_rational(Rational::from_integer(d.clone()));
        digits.push(d.to_u8().expect("digit below r"));
    }
    DigitWord::new(r, digits)
}

fn check_unit_interval(x: &Q) -> Result<()> {
    if x.sign() < 0 || (x - &Q::from_int(1)).sign() >= 0 {
        return domain(format!("x = {x} is outside [0, 1)"));
    }
    Ok(())
}

/// First `n` digits of the greedy expansion `x = Σ εₙ/βⁿ` of `x ∈ [0, 1)`.
pub fn parry_expand(x: &Q, n: usize) -> Result<AdmissibleBinaryWord> {
    Ok(parry_expand_with_remainder(x, n)?.0)
}

/// Digits together with the remainder `Tⁿx ∈ [0, 1)`, where `T(y) = βy mod 1`.
pub fn parry_expand_with_remainder(x: &Q, n: usize) -> Result<(AdmissibleBinaryWord, Q)> {
    check_unit_interval(x)?;
    let beta = Q::beta();
    let mut y = x.clone();
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let t = &beta * &y;
        let d = t.floor();
        y = &t - &Q::from_rational(Rational::from_integer(d.clone()));
        digits.push(d.to_u8().expect("digit is 0 or 1"));
    }
    let word = AdmissibleBinaryWord::new(digits).expect("greedy expansion never contains 11");
    Ok((word, y))
}

/// `Σ εₘ/β^m` for the given digits.
pub fn parry_value(digits: &[u8]) -> Q {
    let mut sum = Q::default();
    let mut scale = Q::from_int(1);
    let ib = Q::inv_beta();
    for &d in digits {
        scale = &scale * &ib;
        if d != 0 {
            sum = &sum + &scale.mul_rational(&rational::int(d as i64));
        }
    }
    sum
}

/// `{x ∈ [0,1) : ε(x) starts with w}`, a half-open interval of length `β^{-n}`
/// (or `β^{-n-1}` when `w` ends in 1, since the next digit is then forced).
pub fn parry_cylinder(w: &AdmissibleBinaryWord) -> QInterval {
    let lo = parry_value(w.digits());
    let mut len = Q::beta_pow(-(w.len() as i64));
    if w.digits().last() == Some(&1) {
        len = &len * &Q::inv_beta();
    }
    let hi = &lo + &len;
    Interval::half_open(lo, hi)
}

/// Parity of the position reached in a `(-β)` expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

// Writing x(α) for the value 1/β − Σ αₙ/(−β)^{n+1} of a digit sequence, one
// has x(α) = 1 − α₁/β² − x(σα)/β. Tails starting at an even position range
// over [0, 1); tails at an odd position over (0, 1], because the forbidden
// pattern 1010… is excluded only at odd shifts.
fn tail_range(p: Parity) -> QInterval {
    match p {
        Parity::Even => Interval::half_open(Q::default(), Q::from_int(1)),
        Parity::Odd => Interval { lo: Q::default(), hi: Q::from_int(1), lo_closed: false, hi_closed: true },
    }
}

fn neg_beta_step(d: u8) -> (Q, Q) {
    // t ↦ 1 − d/β² − t/β
    let offset = &Q::from_int(1) - &Q::beta_pow(-2).mul_rational(&rational::int(d as i64));
    (offset, -Q::inv_beta())
}

/// Exact set of values reachable from a tail at parity `p` whose first digit
/// is `d`, over all admissible continuations.
fn neg_beta_bracket(p: Parity, d: u8) -> QInterval {
    let (offset, slope) = neg_beta_step(d);
    let next = if d == 1 {
        // a 1 must be followed by 0
        neg_beta_bracket(p.flip(), 0)
    } else {
        tail_range(p.flip())
    };
    next.affine(&offset, &slope)
}

/// First `n` digits of the `(-β)` expansion `x = 1/β − Σ αₙ/(−β)^{n+1}` of
/// `x ∈ [0, 1)`, extracted by exact bracketing.
pub fn neg_beta_expand(x: &Q, n: usize) -> Result<AdmissibleBinaryWord> {
    Ok(neg_beta_expand_with_state(x, n)?.0)
}

/// Digits and the value `x(σⁿα)` of the remaining tail.
pub fn neg_beta_expand_with_state(x: &Q, n: usize) -> Result<(AdmissibleBinaryWord, Q)> {
    check_unit_interval(x)?;
    let mut y = x.clone();
    let mut parity = Parity::Even;
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let d = if neg_beta_bracket(parity, 1).contains(&y) {
            1
        } else {
            debug_assert!(neg_beta_bracket(parity, 0).contains(&y));
            0
        };
        let (offset, slope) = neg_beta_step(d);
        // invert y = offset + slope·t
        y = (&y - &offset).checked_div(&slope).expect("slope is nonzero");
        digits.push(d);
        parity = parity.flip();
    }
    let word = AdmissibleBinaryWord::new(digits).expect("bracketing never emits 11");
    Ok((word, y))
}

/// `1/β − Σ_{m≤n} αₘ/(−β)^{m+1}` for the given digits.
pub fn neg_beta_value(digits: &[u8]) -> Q {
    let mut sum = Q::inv_beta();
    let m_ib = -Q::inv_beta();
    let mut scale = m_ib.clone();
    for &d in digits {
        // scale = 1/(−β)^{m+1}
        scale = &scale * &m_ib;
        if d != 0 {
            sum = &sum - &scale.mul_rational(&rational::int(d as i64));
        }
    }
    sum
}

/// `{x ∈ [0,1) : α(x) starts with w}`.
pub fn neg_beta_cylinder(w: &AdmissibleBinaryWord) -> QInterval {
    let n = w.len();
    let end = Parity::of(n);
    let mut iv = match w.digits().last() {
        // the next digit is forced to 0
        Some(&1) => neg_beta_bracket(end, 0),
        _ => tail_range(end),
    };
    for &d in w.digits().iter().rev() {
        let (offset, slope) = neg_beta_step(d);
        iv = iv.affine(&offset, &slope);
    }
    iv
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NumerationSystem {
    Parry,
    NegBeta,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// Index of the second `1` of the first `11`, when that is the violation.
    pub violation: Option<usize>,
    /// Shift at which the forbidden periodic tail starts, for infinite words.
    pub forbidden_tail_shift: Option<usize>,
}

/// Finite words: admissible iff there is no factor `11`.
pub fn is_admissible(word: &[u8], _system: NumerationSystem) -> AdmissibilityReport {
    let violation = first_double_one(word).or_else(|| word.iter().position(|&d| d > 1));
    AdmissibilityReport { admissible: violation.is_none(), violation, forbidden_tail_shift: None }
}

/// Infinite eventually periodic words: no `11` anywhere, and the tail rule of
/// the system (`σⁿε ≠ (10)^∞` for all `n` for Parry, `σ^{2n+1}α ≠ (10)^∞`
/// for `-β`).
pub fn is_admissible_periodic(word: &PeriodicWord, system: NumerationSystem) -> AdmissibilityReport {
    let horizon = word.prefix.len() + 2 * word.cycle.len() + 2;
    let unrolled = word.take(horizon);
    let finite = is_admissible(&unrolled, system);
    if !finite.admissible {
        return finite;
    }
    let is_alternating_from = |k: usize| (k..horizon + 2).all(|j| word.digit(j) == u8::from((j - k).is_multiple_of(2)));
    let shift = (0..=word.prefix.len() + 1).find(|&k| is_alternating_from(k));
    let forbidden = match (shift, system) {
        (None, _) => None,
        (Some(k), NumerationSystem::Parry) => Some(k),
        // shifts with the pattern are k, k+2, …; an odd one exists iff k is odd
        (Some(k), NumerationSystem::NegBeta) => (k % 2 == 1).then_some(k),
    };
    AdmissibilityReport { admissible: forbidden.is_none(), violation: None, forbidden_tail_shift: forbidden }
}

/// Output of [`expand`].
#[derive(Clone, Debug, Serialize)]
pub struct Expansion {
    pub digits: Vec<u8>,
    /// Value of the truncated expansion.
    pub partial_value: QuadraticNumber,
    /// Exact bound on `|x − partial_value|`.
    pub reconstruction_error_bound: QuadraticNumber,
    pub admissible: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionSystem {
    BaseR(u32),
    Parry,
    NegBeta,
}

pub fn expand(x: &Q, system: ExpansionSystem, n: usize) -> Result<Expansion> {
    match system {
        ExpansionSystem::BaseR(r) => {
            let w = base_r_expand(x, r, n)?;
            let iv = base_r_interval(&w, r)?;
            let bound = rational::pow_i(&rational::int(r as i64), -(n as i64));
            Ok(Expansion {
                digits: w.digits().to_vec(),
                partial_value: Q::from_rational(iv.lo),
                reconstruction_error_bound: Q::from_rational(bound),
                admissible: true,
            })
        }
        ExpansionSystem::Parry => {
            let w = parry_expand(x, n)?;
            let admissible = is_admissible(w.digits(), NumerationSystem::Parry).admissible;
            Ok(Expansion {
                partial_value: parry_value(w.digits()),
                digits: w.into_inner(),
                reconstruction_error_bound: Q::beta_pow(-(n as i64)),
                admissible,
            })
        }
        ExpansionSystem::NegBeta => {
            let w = neg_beta_expand(x, n)?;
            let admissible = is_admissible(w.digits(), NumerationSystem::NegBeta).admissible;
            Ok(Expansion {
                partial_value: neg_beta_value(w.digits()),
                digits: w.into_inner(),
                // |x − partial| = β^{-n}·|x(σⁿα) − 1/β| ≤ β^{-n-1}
                reconstruction_error_bound: Q::beta_pow(-(n as i64) - 1),
                admissible,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    #[test]
    fn base_r_intervals() {
        let w = DigitWord::new(3, vec![]).unwrap();
        let iv = base_r_interval(&w, 2).unwrap();
        assert_eq!((iv.lo, iv.hi), (rational::int(0), rational::int(2)));
        let w = DigitWord::new(2, vec![1]).unwrap();
        let iv = base_r_interval(&w, 2).unwrap();
        assert_eq!((iv.lo, iv.hi), (rational::rat(1, 2), rational::int(1)));
        let w = DigitWord::new(3, vec![2, 0]).unwrap();
        let iv = base_r_interval(&w, 2).unwrap();
        assert_eq!((iv.lo, iv.hi), (rational::int(1), rational::rat(3, 2)));
        assert_eq!(base_r_value(&w, 2, TailMode::Max).unwrap(), rational::rat(3, 2));
        assert!(base_r_interval(&w, 1).is_err());
    }

    #[test]
    fn base_r_expansion_of_thirds() {
        let w = base_r_expand(&Q::ratio(1, 3), 2, 6).unwrap();
        assert_eq!(w.digits(), &[0, 1, 0, 1, 0, 1]);
        let w = base_r_expand(&Q::ratio(1, 3), 3, 3).unwrap();
        assert_eq!(w.digits(), &[1, 0, 0]);
    }

    #[test]
    fn parry_examples() {
        assert_eq!(parry_expand(&Q::default(), 5).unwrap().digits(), &[0; 5]);
        assert_eq!(parry_expand(&Q::inv_beta(), 4).unwrap().digits(), &[1, 0, 0, 0]);
        assert_eq!(parry_expand(&Q::ratio(1, 2), 9).unwrap().digits(), &[0, 1, 0, 0, 1, 0, 0, 1, 0]);
        assert!(parry_expand(&Q::from_int(1), 3).is_err());
        assert!(parry_expand(&Q::ratio(-1, 5), 3).is_err());
    }

    #[test]
    fn parry_orbit_of_one_half_is_periodic() {
        let beta = Q::beta();
        let (_, r1) = parry_expand_with_remainder(&Q::ratio(1, 2), 1).unwrap();
        assert_eq!(r1, beta.mul_rational(&rational::rat(1, 2)));
        let (_, r2) = parry_expand_with_remainder(&Q::ratio(1, 2), 2).unwrap();
        assert_eq!(r2, Q::inv_beta().mul_rational(&rational::rat(1, 2)));
        let (_, r3) = parry_expand_with_remainder(&Q::ratio(1, 2), 3).unwrap();
        assert_eq!(r3, Q::ratio(1, 2));
    }

    #[test]
    fn neg_beta_examples() {
        assert_eq!(neg_beta_expand(&Q::inv_beta(), 6).unwrap().digits(), &[0; 6]);
        assert_eq!(neg_beta_expand(&Q::default(), 6).unwrap().digits(), &[1, 0, 1, 0, 1, 0]);
        // 1/β² = 1/β − 1/β³: digits 0 0 1 0 1 0 …
        let w = neg_beta_expand(&Q::beta_pow(-2), 6).unwrap();
        assert_eq!(w.digits(), &[0, 0, 1, 0, 1, 0]);
        assert!(neg_beta_expand(&Q::from_int(1), 2).is_err());
        assert_eq!(neg_beta_value(&[1, 0, 1, 0]), &(&Q::inv_beta() - &Q::beta_pow(-2)) - &Q::beta_pow(-4));
    }

    #[test]
    fn neg_beta_brackets_partition_each_tail_range() {
        let thr = Q::beta_pow(-2);
        let one = neg_beta_bracket(Parity::Even, 1);
        let zero = neg_beta_bracket(Parity::Even, 0);
        assert_eq!(
            (one.lo.clone(), one.hi.clone(), one.lo_closed, one.hi_closed),
            (Q::default(), thr.clone(), true, false)
        );
        assert_eq!(
            (zero.lo.clone(), zero.hi.clone(), zero.lo_closed, zero.hi_closed),
            (thr.clone(), Q::from_int(1), true, false)
        );
        let one = neg_beta_bracket(Parity::Odd, 1);
        let zero = neg_beta_bracket(Parity::Odd, 0);
        assert_eq!(
            (one.lo.clone(), one.hi.clone(), one.lo_closed, one.hi_closed),
            (Q::default(), thr.clone(), false, true)
        );
        assert_eq!((zero.lo, zero.hi, zero.lo_closed, zero.hi_closed), (thr, Q::from_int(1), false, true));
    }

    #[test]
    fn admissibility_examples() {
        let r = is_admissible(&[0, 1, 1, 0], NumerationSystem::Parry);
        assert!(!r.admissible);
        assert_eq!(r.violation, Some(2));
        assert!(is_admissible(&[0, 1, 0, 1, 0], NumerationSystem::NegBeta).admissible);

        let alt01 = PeriodicWord::new(vec![], vec![0, 1]).unwrap();
        let r = is_admissible_periodic(&alt01, NumerationSystem::NegBeta);
        assert!(!r.admissible);
        assert_eq!(r.forbidden_tail_shift, Some(1));
        let alt10 = PeriodicWord::new(vec![], vec![1, 0]).unwrap();
        assert!(is_admissible_periodic(&alt10, NumerationSystem::NegBeta).admissible);
        assert!(!is_admissible_periodic(&alt10, NumerationSystem::Parry).admissible);
        let p = PeriodicWord::new(vec![0, 0], vec![1, 0, 0]).unwrap();
        assert!(is_admissible_periodic(&p, NumerationSystem::Parry).admissible);
        let wrap = PeriodicWord::new(vec![], vec![1, 0, 1]).unwrap();
        assert!(!is_admissible_periodic(&wrap, NumerationSystem::Parry).admissible);
    }

    #[test]
    fn expand_reports_bounds() {
        let e = expand(&q("1/2"), ExpansionSystem::Parry, 9).unwrap();
        assert_eq!(e.digits, vec![0, 1, 0, 0, 1, 0, 0, 1, 0]);
        assert!(e.admissible);
        let err = &q("1/2") - &e.partial_value;
        assert!(err.sign() >= 0 && (&e.reconstruction_error_bound - &err).sign() > 0);
        let e = expand(&q("1/3"), ExpansionSystem::BaseR(2), 4).unwrap();
        assert_eq!(e.digits, vec![0, 1, 0, 1]);
        assert_eq!(e.partial_value, Q::ratio(5, 16));
    }
}
