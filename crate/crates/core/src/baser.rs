//! Bernoulli convolutions read in integral base `r`: the matrices attached
//! to the law `ν_p` of the fractional part of `X = Σ ωₙ/rⁿ`, with digits
//! `ωₙ ∈ {0, …, 2r−2}` drawn i.i.d. from `p`, and Monte Carlo oracles for
//! `ν_p`, `μ_p` (the law of `X`) and `ν*_p(B) = μ_p(B) + μ_p(B+1)`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::exactfield::rational::{self, Rational};
use crate::exactfield::Matrix;
use crate::matmeasure::{validate, MatrixMeasureSpec};
use crate::montecarlo::{self, DigitLaw, McEstimate};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseRParams {
    r: u32,
    #[serde(with = "crate::exactfield::serde_rational::vec")]
    p: Vec<Rational>,
}

impl BaseRParams {
    pub fn new(r: u32, p: Vec<Rational>) -> Result<Self> {
        if r < 2 {
            return domain("r must be at least 2");
        }
        if p.len() != 2 * r as usize - 1 {
            return domain(format!("need 2r-1 = {} weights, got {}", 2 * r - 1, p.len()));
        }
        if p.iter().any(Signed::is_negative) || p.iter().sum::<Rational>() != rational::int(1) {
            return domain("weights must be nonnegative and sum to 1");
        }
        Ok(Self { r, p })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn p(&self) -> &[Rational] {
        &self.p
    }

    /// `p_k`, zero outside `0..=2r−2`.
    fn pk(&self, k: i64) -> Rational {
        usize::try_from(k).ok().and_then(|k| self.p.get(k)).cloned().unwrap_or_else(Rational::zero)
    }

    fn law(&self) -> DigitLaw {
        DigitLaw::new(&self.p.iter().map(rational::to_f64).collect::<Vec<_>>())
    }
}

/// `M_k = [[p_k, p_{k−1}], [p_{k+r}, p_{k+r−1}]]` (with `p_j = 0` outside
/// `0..=2r−2`), which is the unique family with `a_k = p_k`,
/// `c_k = p_{r+k}`, `b₀ = 0` and columns chained by
/// `(a_k, c_k) = (b_{k+1}, d_{k+1})`, `(a_{r−1}, c_{r−1}) = (d₀, b₀)`.
///
/// `(1, 1)` is a left eigenvector of `Σ M_k` for the eigenvalue 1; `V` is the
/// right one, and `L = (1, 1)/(v₁ + v₂)`.
pub fn matrices_from_p(params: &BaseRParams) -> Result<MatrixMeasureSpec> {
    let r = params.r as i64;
    let matrices: Vec<Matrix> = (0..r)
        .map(|k| {
            Matrix::from_rows(vec![vec![params.pk(k), params.pk(k - 1)], vec![params.pk(k + r), params.pk(k + r - 1)]])
                .expect("2x2")
        })
        .collect();
    let sum = matrices.iter().fold(Matrix::zeros(2, 2), |acc, m| acc.add(m));
    let one = rational::int(1);
    let from_first = [sum.get(0, 1).clone(), &one - sum.get(0, 0)];
    let from_second = [&one - sum.get(1, 1), sum.get(1, 0).clone()];
    let v = if from_first.iter().any(|x| !x.is_zero()) { from_first } else { from_second };
    if v.iter().any(|x| !x.is_positive()) {
        return domain(format!(
            "degenerate weights: the eigenvector ({}, {}) is not strictly positive",
            rational::format_rational(&v[0]),
            rational::format_rational(&v[1])
        ));
    }
    let norm = (&v[0] + &v[1]).recip();
    let spec = MatrixMeasureSpec::new(vec![norm.clone(), norm], matrices, v.to_vec())?;
    let report = validate(&spec);
    if !report.valid {
        return domain(format!("degenerate weights: {}", report.failures.join("; ")));
    }
    Ok(spec)
}

/// Samples of `X` truncated after `depth` digits, stored as the integers
/// `S = Σ_{n≤depth} ωₙ r^{depth−n}`; then `X ∈ [S, S+2)·r^{−depth}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XSample {
    pub r: u32,
    pub depth: u32,
    pub units: Vec<u128>,
}

/// Largest depth for which `2·r^depth` fits the integer representation.
pub fn max_depth(r: u32) -> u32 {
    let mut d = 0;
    let mut acc: u128 = 2;
    while let Some(next) = acc.checked_mul(r as u128) {
        if next > (1u128 << 126) {
            break;
        }
        acc = next;
        d += 1;
    }
    d
}

pub fn sample_x(params: &BaseRParams, n_samples: usize, depth: u32, seed: u64) -> Result<XSample> {
    if depth == 0 || depth > max_depth(params.r) {
        return domain(format!("depth must lie in 1..={}", max_depth(params.r)));
    }
    let law = params.law();
    let r = params.r as u128;
    let units = montecarlo::sample(n_samples, seed, |rng| (0..depth).fold(0u128, |s, _| s * r + law.draw(rng) as u128));
    Ok(XSample { r: params.r, depth, units })
}

impl XSample {
    fn scale(&self) -> u128 {
        (self.r as u128).pow(self.depth)
    }

    /// Midpoints `(S + 1)·r^{−depth}`, sorted.
    pub fn sorted_values(&self) -> Vec<f64> {
        let scale = self.scale() as f64;
        let mut v: Vec<f64> = self.units.iter().map(|&s| (s as f64 + 1.0) / scale).collect();
        montecarlo::sort_floats(&mut v);
        v
    }

    /// Estimate of `P(frac X ∈ [word])` for a base-`r` cylinder.
    pub fn frac_cylinder(&self, word: &[u8]) -> Result<McEstimate> {
        let m = word.len() as u32;
        if m > self.depth {
            return domain("word longer than the sampling depth");
        }
        if word.iter().any(|&d| d as u32 >= self.r) {
            return domain("word digits must be below r");
        }
        let r = self.r as u128;
        let cell = r.pow(self.depth - m);
        let cells = r.pow(m);
        let target = word.iter().fold(0u128, |acc, &d| acc * r + d as u128);
        let (mut inside, mut band) = (0, 0);
        for &s in &self.units {
            // X·r^depth ranges over [s, s+2), i.e. integer parts s..=s+1
            let lo = s / cell;
            let hi = (s + 1) / cell;
            if lo == hi {
                inside += usize::from(lo % cells == target);
            } else if lo % cells == target || hi % cells == target {
                band += 1;
            }
        }
        Ok(McEstimate::from_counts(inside, band, self.units.len()))
    }

    /// Estimates for every base-`r` word of length `len`, in lexicographic
    /// order, from one pass over the samples.
    pub fn frac_cylinders(&self, len: u32) -> Result<Vec<McEstimate>> {
        if len > self.depth {
            return domain("word length exceeds the sampling depth");
        }
        let r = self.r as u128;
        let cell = r.pow(self.depth - len);
        let cells = r.pow(len);
        let mut inside = vec![0usize; cells as usize];
        let mut band = vec![0usize; cells as usize];
        for &s in &self.units {
            let (lo, hi) = (s / cell, (s + 1) / cell);
            let (a, b) = ((lo % cells) as usize, (hi % cells) as usize);
            if lo == hi {
                inside[a] += 1;
            } else {
                band[a] += 1;
                if b != a {
                    band[b] += 1;
                }
            }
        }
        let n = self.units.len();
        Ok(inside.into_iter().zip(band).map(|(i, b)| McEstimate::from_counts(i, b, n)).collect())
    }

    /// Classifies each sample against the closed interval `[lo, hi]`:
    /// `Some(true)` inside, `Some(false)` outside, `None` undecided.
    fn closed_membership(&self, lo: &Rational, hi: &Rational) -> impl Fn(u128) -> Option<bool> {
        let scale = Rational::from_integer(BigInt::from(self.scale()));
        let to_i = |x: Rational| x.floor().to_integer().to_i128().expect("threshold fits i128");
        let lo_scaled = lo * &scale;
        let lo_ceil = lo_scaled.ceil().to_integer().to_i128().expect("threshold fits i128");
        let lo_floor = to_i(lo_scaled);
        let hi_floor = to_i(hi * &scale);
        move |s: u128| {
            let s = s as i128;
            if s >= lo_ceil && s + 2 <= hi_floor {
                Some(true)
            } else if s + 2 <= lo_floor || s > hi_floor {
                Some(false)
            } else {
                None
            }
        }
    }

    /// Estimate of `μ_p([lo, hi])`.
    pub fn mu_interval(&self, lo: &Rational, hi: &Rational) -> McEstimate {
        let member = self.closed_membership(lo, hi);
        let (mut inside, mut band) = (0, 0);
        for &s in &self.units {
            match member(s) {
                Some(true) => inside += 1,
                Some(false) => {}
                None => band += 1,
            }
        }
        McEstimate::from_counts(inside, band, self.units.len())
    }
}

/// `P(frac X ∈ [word])` from `n_samples` fresh samples.
pub fn mc_frac_distribution(params: &BaseRParams, word: &[u8], n_samples: usize, seed: u64) -> Result<McEstimate> {
    sample_x(params, n_samples, max_depth(params.r).min(60), seed)?.frac_cylinder(word)
}

/// `ν*_p(B) = μ_p(B) + μ_p(B+1)` for `B = [lo, hi] ⊂ [−1, 2]`.
///
/// The estimate is the mean of `1_B(X) + 1_{B+1}(X)`, so `σ` uses the sample
/// variance of that sum.
pub fn nu_star_eval(sample: &XSample, lo: &Rational, hi: &Rational) -> Result<McEstimate> {
    if lo > hi || lo < &rational::int(-1) || hi > &rational::int(2) {
        return domain("B must be an interval inside [-1, 2]");
    }
    let one = rational::int(1);
    let in_b = sample.closed_membership(lo, hi);
    let in_b1 = sample.closed_membership(&(lo + &one), &(hi + &one));
    let (mut sum, mut sum_sq, mut band) = (0u64, 0u64, 0usize);
    for &s in &sample.units {
        match (in_b(s), in_b1(s)) {
            (Some(a), Some(b)) => {
                let k = u64::from(a) + u64::from(b);
                sum += k;
                sum_sq += k * k;
            }
            _ => band += 1,
        }
    }
    let n = sample.units.len() as f64;
    let mean = sum as f64 / n;
    let var = (sum_sq as f64 / n - mean * mean).max(0.0);
    Ok(McEstimate {
        estimate: mean,
        sigma: (var / n).sqrt(),
        band_mass: band as f64 / n,
        n_samples: sample.units.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfSimReport {
    pub residual: f64,
    /// `1/√n`, the sampling-error scale of a single bin.
    pub scale: f64,
    pub bins: usize,
}

/// `max_B |μ̂(B) − Σ_k p_k μ̂(rB − k)|` over `bins` equal half-open bins
/// partitioning `[0, 2)`.
pub fn selfsim_residual_mu(params: &BaseRParams, sorted: &[f64], bins: usize) -> Result<SelfSimReport> {
    if sorted.is_empty() || bins == 0 {
        return domain("need samples and at least one bin");
    }
    let weights: Vec<f64> = params.p.iter().map(rational::to_f64).collect();
    let r = params.r as f64;
    let n = sorted.len() as f64;
    let mass = |a: f64, b: f64| montecarlo::count_in(sorted, a, b) as f64 / n;
    let width = 2.0 / bins as f64;
    let residual = (0..bins)
        .map(|j| {
            let (a, b) = (j as f64 * width, (j + 1) as f64 * width);
            let mapped: f64 =
                weights.iter().enumerate().map(|(k, &p)| p * mass(r * a - k as f64, r * b - k as f64)).sum();
            (mass(a, b) - mapped).abs()
        })
        .fold(0.0, f64::max);
    Ok(SelfSimReport { residual, scale: 1.0 / n.sqrt(), bins })
}

/// Residual of `ν*(B) = Σ_k p*_k ν*(rB − k)` for user-supplied weights
/// `p*_k`, `k = −(r−1), …, 2(r−1)`, over equal bins partitioning `[−1, 2)`.
pub fn selfsim_residual_nu_star(
    params: &BaseRParams,
    pstar: &[f64],
    sorted: &[f64],
    bins: usize,
) -> Result<SelfSimReport> {
    let r = params.r as i64;
    if pstar.len() != 3 * (r as usize - 1) + 1 {
        return domain(format!("need {} weights p*_k for k = -(r-1)..=2(r-1)", 3 * (r - 1) + 1));
    }
    if sorted.is_empty() || bins == 0 {
        return domain("need samples and at least one bin");
    }
    let n = sorted.len() as f64;
    let nu = |a: f64, b: f64| {
        (montecarlo::count_in(sorted, a, b) + montecarlo::count_in(sorted, a + 1.0, b + 1.0)) as f64 / n
    };
    let width = 3.0 / bins as f64;
    let rf = r as f64;
    let residual = (0..bins)
        .map(|j| {
            let (a, b) = (-1.0 + j as f64 * width, -1.0 + (j + 1) as f64 * width);
            let mapped: f64 = pstar
                .iter()
                .enumerate()
                .map(|(i, &w)| {
                    let k = (i as i64 - (r - 1)) as f64;
                    w * nu(rf * a - k, rf * b - k)
                })
                .sum();
            (nu(a, b) - mapped).abs()
        })
        .fold(0.0, f64::max);
    Ok(SelfSimReport { residual, scale: 1.0 / n.sqrt(), bins })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::rat;

    fn uniform(r: u32) -> BaseRParams {
        let k = 2 * r as i64 - 1;
        BaseRParams::new(r, vec![rat(1, k); k as usize]).unwrap()
    }

    #[test]
    fn cylinder_table_matches_single_words() {
        let params = BaseRParams::new(3, vec![rat(1, 10), rat(2, 10), rat(3, 10), rat(1, 10), rat(3, 10)]).unwrap();
        let sample = sample_x(&params, 5000, 20, 3).unwrap();
        let table = sample.frac_cylinders(2).unwrap();
        for (i, est) in table.iter().enumerate() {
            let w = [(i / 3) as u8, (i % 3) as u8];
            assert_eq!(*est, sample.frac_cylinder(&w).unwrap());
        }
    }

    #[test]
    fn r2_matrices() {
        let params = BaseRParams::new(2, vec![rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap();
        let spec = matrices_from_p(&params).unwrap();
        assert_eq!(*spec.matrix(0), Matrix::from_ratios(&[[(1, 2), (0, 1)], [(1, 6), (1, 3)]]));
        assert_eq!(*spec.matrix(1), Matrix::from_ratios(&[[(1, 3), (1, 2)], [(0, 1), (1, 6)]]));
        // V ∝ (p₀, p₂)
        assert_eq!(spec.v(), &[rat(1, 2), rat(1, 6)]);
        assert_eq!(spec.l(), &[rat(3, 2), rat(3, 2)]);
    }

    #[test]
    fn uniform_r2_is_symmetric() {
        let spec = matrices_from_p(&uniform(2)).unwrap();
        assert_eq!(spec.cylinder_measure(&[0]).unwrap(), rat(1, 2));
        assert!(validate(&spec).valid);
    }

    #[test]
    fn degenerate_weights_are_reported() {
        let params = BaseRParams::new(2, vec![rat(1, 1), rat(0, 1), rat(0, 1)]).unwrap();
        assert!(matrices_from_p(&params).is_err());
        assert!(BaseRParams::new(2, vec![rat(1, 2), rat(1, 2)]).is_err());
    }

    #[test]
    fn frac_estimates() {
        let s = sample_x(&uniform(2), 40_000, 40, 3).unwrap();
        let all = s.frac_cylinder(&[]).unwrap();
        assert_eq!((all.estimate, all.band_mass), (1.0, 0.0));
        let zero = s.frac_cylinder(&[0]).unwrap();
        assert!(zero.agrees_with(0.5, 4.0));
    }

    #[test]
    fn point_mass_selfsim() {
        let params = BaseRParams::new(2, vec![rat(1, 1), rat(0, 1), rat(0, 1)]).unwrap();
        let s = sample_x(&params, 1000, 30, 1).unwrap();
        assert!(s.units.iter().all(|&u| u == 0));
        let report = selfsim_residual_mu(&params, &s.sorted_values(), 16).unwrap();
        assert_eq!(report.residual, 0.0);
    }

    #[test]
    fn nu_star_on_unit_interval() {
        let s = sample_x(&uniform(2), 20_000, 40, 5).unwrap();
        let full = nu_star_eval(&s, &rat(0, 1), &rat(1, 1)).unwrap();
        assert!((full.estimate - 1.0).abs() < 1e-3);
        assert!(nu_star_eval(&s, &rat(-2, 1), &rat(0, 1)).is_err());
    }

    #[test]
    fn depth_limits() {
        assert!(max_depth(2) >= 120);
        assert!(max_depth(3) >= 75);
        assert!(sample_x(&uniform(3), 10, 200, 1).is_err());
    }
}
