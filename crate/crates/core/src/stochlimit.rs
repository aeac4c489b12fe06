//! Backward products `P_n = M_{ωₙ}⋯M_{ω₁}` of i.i.d. row-stochastic 2×2
//! matrices `M_k = [[x_k, 1−x_k], [y_k, 1−y_k]]` and the law `λ` of their
//! common limit row `(x^ω, 1−x^ω)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::exactfield::rational::{self, exact_root, Rational};
use crate::exactfield::{FloatApprox, QuadraticNumber};
use crate::montecarlo::{self, count_in, quantile, DigitLaw};

type Q = QuadraticNumber;

/// Matrices given by their first column `(x_k, y_k)`, drawn with
/// probabilities `p_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowStochasticFamily {
    rows: Vec<(Q, Q)>,
    #[serde(with = "crate::exactfield::serde_rational::vec")]
    weights: Vec<Rational>,
}

impl RowStochasticFamily {
    pub fn new(rows: Vec<(Q, Q)>, weights: Vec<Rational>) -> Result<Self> {
        if rows.is_empty() || rows.len() != weights.len() {
            return domain("need one weight per matrix");
        }
        let zero = Q::default();
        let one = Q::from_int(1);
        for (k, (x, y)) in rows.iter().enumerate() {
            if x < &zero || x > &one || y < &zero || y > &one {
                return domain(format!("x_{k}, y_{k} must lie in [0, 1]"));
            }
            if (x == &one && y == &zero) || (x == &zero && y == &one) {
                return domain(format!("M_{k} is the identity or the swap"));
            }
        }
        if weights.iter().any(|p| !p.is_positive()) || !weights.iter().sum::<Rational>().is_one() {
            return domain("weights must be positive and sum to 1");
        }
        Ok(Self { rows, weights })
    }

    /// Family with uniform weights.
    pub fn uniform(rows: Vec<(Q, Q)>) -> Result<Self> {
        let r = rows.len() as i64;
        Self::new(rows, vec![rational::rat(1, r.max(1)); r as usize])
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[(Q, Q)] {
        &self.rows
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn det(&self, k: u8) -> Q {
        let (x, y) = &self.rows[k as usize];
        x - y
    }

    fn check_word(&self, word: &[u8]) -> Result<()> {
        match word.iter().find(|&&d| d as usize >= self.rows.len()) {
            Some(d) => domain(format!("digit {d} outside alphabet of size {}", self.rows.len())),
            None => Ok(()),
        }
    }

    fn float_rows(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|(x, y)| (x.to_f64(), y.to_f64())).collect()
    }
}

/// `P_n = [[x, 1−x], [y, 1−y]]` with `det = x − y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BackwardProduct {
    pub x: Q,
    pub y: Q,
    pub det: Q,
}

/// `P_n` through `y_n = Σ_{i≤n} y_{ωᵢ} det P_{i−1}` and `x_n = y_n + det P_n`.
pub fn backward_product(family: &RowStochasticFamily, word: &[u8]) -> Result<BackwardProduct> {
    family.check_word(word)?;
    let mut y = Q::default();
    let mut det = Q::from_int(1);
    for &d in word {
        let (_, yk) = &family.rows[d as usize];
        y = &y + &(yk * &det);
        det = &det * &family.det(d);
    }
    Ok(BackwardProduct { x: &y + &det, y, det })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XLimit {
    pub lo: Q,
    pub hi: Q,
    pub digits_used: usize,
}

/// An interval of width at most `tol` containing `x^ω`.
///
/// Every later product `P_m` has rows that are convex combinations of the
/// rows of `P_n`, so `x^ω` lies between `x_n` and `y_n`; reading stops as soon
/// as `|det P_n| ≤ tol`.
pub fn x_limit(
    family: &RowStochasticFamily,
    stream: impl IntoIterator<Item = u8>,
    tol: &Rational,
    max_digits: usize,
) -> Result<XLimit> {
    if !tol.is_positive() {
        return domain("tol must be positive");
    }
    let tol = Q::from_rational(tol.clone());
    let mut y = Q::default();
    let mut det = Q::from_int(1);
    let mut used = 0;
    let mut stream = stream.into_iter();
    while det.abs() > tol {
        if used == max_digits {
            return domain(format!("no {tol}-accurate value after {max_digits} digits"));
        }
        let Some(d) = stream.next() else {
            return domain("digit stream ended before reaching the tolerance");
        };
        family.check_word(&[d])?;
        y = &y + &(&family.rows[d as usize].1 * &det);
        det = &det * &family.det(d);
        used += 1;
    }
    let x = &y + &det;
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    Ok(XLimit { lo, hi, digits_used: used })
}

/// Sorted samples of `x^ω` for i.i.d. digits with the family's weights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaSample {
    pub values: Vec<f64>,
    /// Bound on `|value − x^ω|` valid for every sample.
    pub truncation_bound: f64,
}

/// Each sample is the midpoint of `x_n, y_n` after `depth` digits (fewer if
/// `|det P_n|` vanishes), accurate to `|det P_depth|/2` plus rounding.
pub fn sample_lambda(family: &RowStochasticFamily, n_samples: usize, depth: usize, seed: u64) -> Result<LambdaSample> {
    if n_samples == 0 {
        return domain("n_samples must be positive");
    }
    let rows = family.float_rows();
    let law = DigitLaw::new(&family.weights.iter().map(rational::to_f64).collect::<Vec<_>>());
    let max_det = rows.iter().map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let mut values = montecarlo::sample(n_samples, seed, |rng| {
        let mut y = 0.0;
        let mut det = 1.0;
        for _ in 0..depth {
            let (xk, yk) = rows[law.draw(rng) as usize];
            y += yk * det;
            det *= xk - yk;
            if det == 0.0 {
                break;
            }
        }
        (y + det / 2.0).clamp(0.0, 1.0)
    });
    montecarlo::sort_floats(&mut values);
    let truncation_bound = max_det.powi(depth as i32) / 2.0 + (depth as f64 + 2.0) * f64::EPSILON;
    Ok(LambdaSample { values, truncation_bound })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawClass {
    Discrete,
    SingularContinuous,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub class: LawClass,
    /// `|det M_k| / p_k`, exactly.
    pub factors: Vec<Q>,
    /// `Π (|det M_k| / p_k)^{p_k}`; absent when some matrix is singular.
    pub product: Option<FloatApprox>,
    /// The product itself when it is an exact rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product_exact: Option<String>,
    /// Whether the product is at most 1, decided exactly.
    pub product_at_most_one: Option<bool>,
}

/// `λ` is discrete if some `M_k` is singular, and singular continuous if
/// `Π (|det M_k|/p_k)^{p_k} ≤ 1` with some factor different from 1.
/// Everywhere else the answer is [`LawClass::Unknown`].
pub fn classify(family: &RowStochasticFamily) -> Classification {
    let dets: Vec<Q> = (0..family.len()).map(|k| family.det(k as u8).abs()).collect();
    let factors: Vec<Q> = dets.iter().zip(&family.weights).map(|(d, p)| d.mul_rational(&p.recip())).collect();
    if dets.iter().any(Q::is_zero) {
        return Classification {
            class: LawClass::Discrete,
            factors,
            product: None,
            product_exact: None,
            product_at_most_one: None,
        };
    }
    // p_k = n_k / D, so the product is (Π f_k^{n_k})^{1/D}
    let common = family.weights.iter().fold(BigInt::one(), |acc, p| num_integer::lcm(acc, p.denom().clone()));
    let exponents: Vec<u64> = family
        .weights
        .iter()
        .map(|p| (p.numer() * (&common / p.denom())).to_u64().expect("weight exponent fits in u64"))
        .collect();
    let power = factors.iter().zip(&exponents).fold(Q::from_int(1), |acc, (f, &e)| &acc * &f.pow(e));
    let at_most_one = power <= Q::from_int(1);
    let log_product: f64 =
        factors.iter().zip(&family.weights).map(|(f, p)| rational::to_f64(p) * f.to_f64().ln()).sum();
    let value = log_product.exp();
    let d = common.to_u32();
    let product_exact = power.to_rational().zip(d).and_then(|(r, d)| exact_root(&r, d));
    let product = FloatApprox {
        value: product_exact.as_ref().map_or(value, rational::to_f64),
        error_bound: if product_exact.is_some() { 0.0 } else { 8.0 * f64::EPSILON * factors.len() as f64 * value },
    };
    let one = Q::from_int(1);
    let class =
        if at_most_one && factors.iter().any(|f| f != &one) { LawClass::SingularContinuous } else { LawClass::Unknown };
    Classification {
        class,
        factors,
        product: Some(product),
        product_exact: product_exact.map(|r| rational::format_rational(&r)),
        product_at_most_one: Some(at_most_one),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfSimilarityResidual {
    /// `max_B |λ̂(B) − Σ p_k λ̂((B − y_k)/(x_k − y_k))|`.
    pub residual: f64,
    /// `1/√n`, the sampling-error scale of a single bin.
    pub scale: f64,
    pub edges: Vec<f64>,
}

/// Empirical residual of `λ(B) = Σ p_k λ((B − y_k)/(x_k − y_k))` over bins
/// whose edges are empirical quantiles of `sorted`.
pub fn selfsim_residual(family: &RowStochasticFamily, sorted: &[f64], bins: usize) -> Result<SelfSimilarityResidual> {
    if (0..family.len()).any(|k| family.det(k as u8).is_zero()) {
        return domain("self-similarity needs every matrix to be invertible");
    }
    if sorted.is_empty() || bins == 0 {
        return domain("need samples and at least one bin");
    }
    let rows = family.float_rows();
    let weights: Vec<f64> = family.weights.iter().map(rational::to_f64).collect();
    let edges = quantile_edges(sorted, bins);
    let n = sorted.len() as f64;
    let mass = |lo: f64, hi: f64| count_in(sorted, lo, hi) as f64 / n;
    let residual = edges
        .windows(2)
        .map(|e| {
            let direct = mass(e[0], e[1]);
            let mapped: f64 = rows
                .iter()
                .zip(&weights)
                .map(|(&(x, y), &p)| {
                    let (a, b) = ((e[0] - y) / (x - y), (e[1] - y) / (x - y));
                    p * if a <= b { mass(a, b) } else { mass_open_closed(sorted, b, a) }
                })
                .sum();
            (direct - mapped).abs()
        })
        .fold(0.0, f64::max);
    Ok(SelfSimilarityResidual { residual, scale: 1.0 / n.sqrt(), edges })
}

/// Bin edges at empirical quantiles, widened at the ends so every sample
/// falls in some half-open bin.
pub fn quantile_edges(sorted: &[f64], bins: usize) -> Vec<f64> {
    let mut edges: Vec<f64> = (0..=bins).map(|j| quantile(sorted, j as f64 / bins as f64)).collect();
    edges[0] = f64::NEG_INFINITY;
    edges[bins] = f64::INFINITY;
    edges
}

// samples in (lo, hi]: the image of [a, b) under a decreasing map
fn mass_open_closed(sorted: &[f64], lo: f64, hi: f64) -> f64 {
    let k = sorted.partition_point(|&x| x <= hi) - sorted.partition_point(|&x| x <= lo);
    k as f64 / sorted.len() as f64
}

/// `y_k = (k/(r−1))(1 − 1/β)`, `x_k = y_k + 1/β`; then
/// `x^ω = ((β−1)/(r−1))·Σ ωₙ/βⁿ`, so `λ` is a rescaled Bernoulli convolution.
pub fn convolution_family(beta: &Q, r: u32) -> Result<Vec<(Q, Q)>> {
    if beta <= &Q::from_int(1) {
        return domain("beta must exceed 1");
    }
    if r < 2 {
        return domain("r must be at least 2");
    }
    let inv = beta.inv()?;
    let step = &Q::from_int(1) - &inv;
    Ok((0..r as i64)
        .map(|k| {
            let y = step.mul_rational(&rational::rat(k, r as i64 - 1));
            (&y + &inv, y)
        })
        .collect())
}
