//! Generalized continued fractions built from `u_n(x) = x^{-1} + … + x^{n−2}`
//! and `v_n(x) = xⁿ`, and the gap bounds for their convergents.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::exactfield::rational::{self, Rational};

/// `x^{-1} + x⁰ + … + x^{n−2}`; the empty sum `0` for `n = 0`.
pub fn u(n: u32, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut term = x.recip();
    for _ in 0..n {
        acc += &term;
        term *= x;
    }
    acc
}

/// `xⁿ`.
pub fn v(n: u32, x: &Rational) -> Rational {
    num_traits::pow(x.clone(), n as usize)
}

/// One step of the recursion, `k ≥ −1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CfState {
    pub k: i64,
    #[serde(with = "crate::exactfield::serde_rational")]
    pub p: Rational,
    #[serde(with = "crate::exactfield::serde_rational")]
    pub q: Rational,
    /// `u_k`, `v_k` (zero and one at `k = −1`).
    #[serde(with = "crate::exactfield::serde_rational")]
    pub u: Rational,
    #[serde(with = "crate::exactfield::serde_rational")]
    pub v: Rational,
    /// `|p_k/q_k − p_{k−1}/q_{k−1}|` for `k ≥ 1`.
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub delta: Option<Rational>,
}

mod opt_rational {
    use super::Rational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&crate::exactfield::format_rational(r)),
            None => s.serialize_none(),
        }
    }
}

/// `u_i, v_i` with argument `α` for even `i` and `1/α` for odd `i`.
pub fn uv(i: usize, a_i: u32, alpha: &Rational) -> (Rational, Rational) {
    let x = if i.is_multiple_of(2) { alpha.clone() } else { alpha.recip() };
    (u(a_i, &x), v(a_i, &x))
}

/// Convergents for `a₀ ≥ 0, a₁, …, aₙ > 0`, starting from
/// `(p_{−1}, q_{−1}) = (1, 0)` and `(p₀, q₀) = (u₀, 1)`.
pub fn cf_convergents(a: &[u32], alpha: &Rational) -> Result<Vec<CfState>> {
    if !alpha.is_positive() {
        return domain("alpha must be positive");
    }
    if a.is_empty() {
        return domain("need at least a_0");
    }
    if a[1..].contains(&0) {
        return domain("a_1, a_2, … must be positive");
    }
    let mut states = vec![CfState {
        k: -1,
        p: Rational::one(),
        q: Rational::zero(),
        u: Rational::zero(),
        v: Rational::one(),
        delta: None,
    }];
    let (u0, v0) = uv(0, a[0], alpha);
    states.push(CfState { k: 0, p: u0.clone(), q: Rational::one(), u: u0, v: v0, delta: None });
    for (i, &ai) in a.iter().enumerate().skip(1) {
        let (uk, vk) = uv(i, ai, alpha);
        let prev = &states[i];
        let prev2 = &states[i - 1];
        let p = &uk * &prev.p + &prev.v * &prev2.p;
        let q = &uk * &prev.q + &prev.v * &prev2.q;
        assert!(q.is_positive(), "q_k must be positive");
        let delta = (&p / &q - &prev.p / &prev.q).abs();
        states.push(CfState { k: i as i64, p, q, u: uk, v: vk, delta: Some(delta) });
    }
    Ok(states)
}

/// One checked inequality, decided exactly; `margin` is `bound − value` as
/// a float for reporting.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub k: usize,
    pub which: &'static str,
    pub holds: bool,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub checks: Vec<BoundCheck>,
    pub all_hold: bool,
    /// `δ_k ≤ δ_{k−1}` for every `k ≥ 2`.
    pub non_increasing: bool,
}

/// Checks, for `α > 1`,
/// (i) `δ_k ≤ v_{k−1}/(u_k u_{k−1} + v_{k−1})·δ_{k−1}` for `k ≥ 2`,
/// (ii) `δ_k ≤ α^{1−(a_{k−1}+a_k)}·δ_{k−1}` for even `k`,
/// (iii) `δ_k ≤ α^{a₀−(a₁+…+a_k)/2}` for even `k`, and
/// the corollary `δ_k ≤ α^{a₀−(k−1)/2}` for `k ≥ 1`.
///
/// Half-integer powers are compared after squaring both sides.
pub fn delta_bounds_check(a: &[u32], alpha: &Rational) -> Result<LemmaReport> {
    if alpha <= &Rational::one() {
        return domain("the bounds need alpha > 1");
    }
    let states = cf_convergents(a, alpha)?;
    // states[i + 1] holds index i
    let st = |k: usize| &states[k + 1];
    let delta = |k: usize| st(k).delta.clone().expect("k >= 1");
    let mut checks = Vec::new();
    let mut push = |k: usize, which: &'static str, value: Rational, bound: Rational| {
        let margin = rational::to_f64(&(&bound - &value));
        checks.push(BoundCheck { k, which, holds: value <= bound, margin });
    };
    let pow = |e: i64| rational::pow_i(alpha, e);
    let n = a.len() - 1;
    for k in 1..=n {
        let dk = delta(k);
        if k >= 2 {
            let (uk, uk1, vk1) = (&st(k).u, &st(k - 1).u, &st(k - 1).v);
            let factor = vk1 / (uk * uk1 + vk1);
            push(k, "i", dk.clone(), factor * delta(k - 1));
        }
        if k % 2 == 0 {
            let e = 1 - (a[k - 1] as i64 + a[k] as i64);
            push(k, "ii", dk.clone(), pow(e) * delta(k - 1));
            let sum: i64 = a[1..=k].iter().map(|&x| x as i64).sum();
            push(k, "iii", &dk * &dk, pow(2 * a[0] as i64 - sum));
        }
        push(k, "corollary", &dk * &dk, pow(2 * a[0] as i64 - (k as i64 - 1)));
    }
    let non_increasing = (2..=n).all(|k| delta(k) <= delta(k - 1));
    let all_hold = checks.iter().all(|c| c.holds);
    Ok(LemmaReport { checks, all_hold, non_increasing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::{int, rat};

    #[test]
    fn u_and_v() {
        let two = int(2);
        assert_eq!(u(0, &two), int(0));
        assert_eq!(u(1, &two), rat(1, 2));
        assert_eq!(u(3, &two), rat(7, 2));
        assert_eq!(v(3, &two), int(8));
    }

    #[test]
    fn fibonacci_at_alpha_one() {
        let s = cf_convergents(&[1, 1, 1, 1, 1], &int(1)).unwrap();
        let p: Vec<_> = s.iter().map(|x| x.p.clone()).collect();
        let q: Vec<_> = s.iter().map(|x| x.q.clone()).collect();
        assert_eq!(p, vec![int(1), int(1), int(2), int(3), int(5), int(8)]);
        assert_eq!(q, vec![int(0), int(1), int(1), int(2), int(3), int(5)]);
        assert_eq!(s[3].delta, Some(rat(1, 2)));
    }

    #[test]
    fn lemma_examples() {
        for alpha in [int(2), rat(101, 100)] {
            let r = delta_bounds_check(&[1, 1, 2, 1, 2], &alpha).unwrap();
            assert!(r.all_hold && r.non_increasing, "{r:?}");
        }
        assert!(delta_bounds_check(&[1, 1], &int(1)).is_err());
        assert!(cf_convergents(&[1, 0], &int(2)).is_err());
    }
}
