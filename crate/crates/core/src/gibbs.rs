//! Weak-Gibbs diagnostics: n-step potentials, the product-ratio test, the
//! quasi-Bernoulli ratio and convergence reports over probe sequences.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::exactfield::dot;
use crate::exactfield::rational::{self, Rational};
use crate::matmeasure::MatrixMeasureSpec;
use crate::montecarlo::chunk_rng;
use crate::numeration::{digits_to_string, PeriodicWord};
use num_traits::{One, Zero};

/// A potential value; `-∞` arises when a cylinder is null but its shift is not.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhiValue {
    Finite(f64),
    NegInfinity,
}

impl PhiValue {
    pub fn to_f64(self) -> f64 {
        match self {
            PhiValue::Finite(v) => v,
            PhiValue::NegInfinity => f64::NEG_INFINITY,
        }
    }

    /// `|self − other|`, zero when both are `-∞`.
    pub fn distance(self, other: PhiValue) -> f64 {
        match (self, other) {
            (PhiValue::Finite(a), PhiValue::Finite(b)) => (a - b).abs(),
            (PhiValue::NegInfinity, PhiValue::NegInfinity) => 0.0,
            _ => f64::INFINITY,
        }
    }

    /// Fixed-precision text form; `-inf` for `-∞`.
    pub fn format(self, digits: usize) -> String {
        match self {
            PhiValue::Finite(v) => format!("{v:.digits$e}"),
            PhiValue::NegInfinity => "-inf".into(),
        }
    }
}

impl fmt::Display for PhiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(15))
    }
}

impl Serialize for PhiValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PhiValue::Finite(v) => s.serialize_f64(*v),
            PhiValue::NegInfinity => s.serialize_str("-inf"),
        }
    }
}

fn log_ratio(num: &Rational, den: &Rational) -> Result<PhiValue> {
    if den.is_zero() {
        return Err(Error::ZeroCylinder("the shifted cylinder is null".into()));
    }
    if num.is_zero() {
        return Ok(PhiValue::NegInfinity);
    }
    Ok(PhiValue::Finite(rational::ln_rational(&(num / den))))
}

/// `φₙ(ω) = log η[ω₁…ωₙ] − log η[ω₂…ωₙ]`.
pub fn phi_n(spec: &MatrixMeasureSpec, word: &[u8]) -> Result<PhiValue> {
    if word.is_empty() {
        return domain("phi_n needs a nonempty word");
    }
    log_ratio(&spec.cylinder_measure(word)?, &spec.cylinder_measure(&word[1..])?)
}

/// `φₙ(ω)` for `n = 1, …, word.len()`, sharing the matrix products.
pub fn phi_sequence(spec: &MatrixMeasureSpec, word: &[u8]) -> Result<Vec<PhiValue>> {
    if word.is_empty() {
        return Ok(Vec::new());
    }
    let mut full = spec.row_state(&word[..1])?;
    let mut shifted = spec.l().to_vec();
    let mut out = Vec::with_capacity(word.len());
    out.push(log_ratio(&dot(&full, spec.v()), &dot(&shifted, spec.v()))?);
    for &d in &word[1..] {
        spec.row_state(&[d])?;
        full = spec.matrix(d).vec_mul(&full);
        shifted = spec.matrix(d).vec_mul(&shifted);
        out.push(log_ratio(&dot(&full, spec.v()), &dot(&shifted, spec.v()))?);
    }
    Ok(out)
}

/// The potential `ω ↦ log c_{ω₁}` depending on the first symbol only.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstSymbolPotential {
    logs: Vec<f64>,
}

impl FirstSymbolPotential {
    pub fn new(c: &[Rational]) -> Self {
        Self { logs: c.iter().map(rational::ln_rational).collect() }
    }

    /// `log(ω′₁/(2r))` with `ω′ = 1 + 2ω/(r−1)`.
    pub fn mu3(r: u32) -> Self {
        let c: Vec<Rational> =
            (0..r as u8).map(|d| crate::matmeasure::mu3_weight(r, d) * rational::rat(1, 2 * r as i64)).collect();
        Self::new(&c)
    }

    pub fn eval(&self, word: &[u8]) -> f64 {
        self.logs[word[0] as usize]
    }
}

/// `(η[w] / Π_{k<n} e^{φ(σᵏw)})^{1/n}`, evaluated in log space.
pub fn weak_gibbs_ratio(spec: &MatrixMeasureSpec, potential: impl Fn(&[u8]) -> f64, word: &[u8]) -> Result<f64> {
    if word.is_empty() {
        return domain("weak_gibbs_ratio needs a nonempty word");
    }
    let mass = spec.cylinder_measure(word)?;
    if mass.is_zero() {
        return Err(Error::ZeroCylinder(digits_to_string(word)));
    }
    let birkhoff: f64 = (0..word.len()).map(|k| potential(&word[k..])).sum();
    Ok(((rational::ln_rational(&mass) - birkhoff) / word.len() as f64).exp())
}

/// `(η[w] / (η[w₁…wᵢ]·η[wᵢ₊₁…wₙ]))^{1/root}`.
///
/// The definition of weak quasi-Bernoulli takes `root = |w|`; for words
/// `1ᵐ0ᵐ` the classical statement of the `μ₄` counterexample uses `root = m`.
pub fn quasi_bernoulli_ratio_with_root(
    spec: &MatrixMeasureSpec,
    word: &[u8],
    split: usize,
    root: usize,
) -> Result<f64> {
    if split == 0 || split >= word.len() {
        return domain(format!("split {split} must lie in 1..{}", word.len()));
    }
    if root == 0 {
        return domain("root must be positive");
    }
    let whole = spec.cylinder_measure(word)?;
    let left = spec.cylinder_measure(&word[..split])?;
    let right = spec.cylinder_measure(&word[split..])?;
    if left.is_zero() || right.is_zero() {
        return Err(Error::ZeroCylinder("a factor of the split is null".into()));
    }
    let ratio = whole / (left * right);
    Ok((rational::ln_rational(&ratio) / root as f64).exp())
}

/// The ratio with the `1/|w|` root of the definition.
pub fn quasi_bernoulli_ratio(spec: &MatrixMeasureSpec, word: &[u8], split: usize) -> Result<f64> {
    quasi_bernoulli_ratio_with_root(spec, word, split, word.len())
}

/// A test sequence, given as a finite prefix long enough for the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Probe {
    pub name: String,
    #[serde(serialize_with = "as_digit_string")]
    pub digits: Vec<u8>,
}

fn as_digit_string<S: Serializer>(d: &[u8], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&digits_to_string(d))
}

impl Probe {
    pub fn periodic(name: impl Into<String>, word: &PeriodicWord, len: usize) -> Self {
        Self { name: name.into(), digits: word.take(len) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeStrategy {
    /// Constant, alternating and block sequences plus `random` seeded words.
    Default {
        random: usize,
        seed: u64,
    },
    Explicit(Vec<Probe>),
}

/// The probe sequences, each of length `len + 1` so that `φ_{len}` and the
/// normalization at depth `len` are defined.
pub fn probes(strategy: &ProbeStrategy, alphabet: usize, len: usize) -> Vec<Probe> {
    match strategy {
        ProbeStrategy::Explicit(list) => list.clone(),
        ProbeStrategy::Default { random, seed } => {
            let top = (alphabet - 1) as u8;
            let n = len + 1;
            let periodic = |prefix: Vec<u8>, cycle: Vec<u8>| PeriodicWord { prefix, cycle }.take(n);
            let mut list = vec![
                Probe { name: "0^inf".into(), digits: periodic(vec![], vec![0]) },
                Probe { name: format!("{top}^inf"), digits: periodic(vec![], vec![top]) },
                Probe { name: format!("({top}0)^inf"), digits: periodic(vec![], vec![top, 0]) },
                Probe { name: format!("(0{top})^inf"), digits: periodic(vec![], vec![0, top]) },
                Probe { name: format!("{top}0^inf"), digits: periodic(vec![top], vec![0]) },
                Probe { name: format!("0{top}^inf"), digits: periodic(vec![0], vec![top]) },
            ];
            // 1 0 11 00 111 000 …: blocks of growing length
            let mut blocks = Vec::with_capacity(n);
            let mut k = 1;
            while blocks.len() < n {
                blocks.extend(std::iter::repeat_n(top, k));
                blocks.extend(std::iter::repeat_n(0, k));
                k += 1;
            }
            blocks.truncate(n);
            list.push(Probe { name: "growing-blocks".into(), digits: blocks });
            for i in 0..*random {
                let mut rng = chunk_rng(*seed, i);
                let digits = (0..n).map(|_| rng.random_range(0..alphabet) as u8).collect();
                list.push(Probe { name: format!("random-{i}"), digits });
            }
            list
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeTrace {
    pub probe: Probe,
    /// `φₙ` for `n = 1, …, n_max`.
    pub values: Vec<PhiValue>,
    /// `sup_n |φ_{n+1} − φₙ|`.
    pub sup_increment: f64,
    /// `|Σ_a e^{φ_n(a·σω)} − 1|` at `n = n_max`, i.e. `|Σ_a η[a·w]/η[w] − 1|`.
    pub normalization_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PotentialTrace {
    pub n_max: usize,
    pub traces: Vec<ProbeTrace>,
    /// `sup over probes |φ_{n+1} − φₙ|` for `n = 1, …, n_max − 1`.
    pub increments: Vec<f64>,
    pub sup_increment: f64,
}

impl PotentialTrace {
    /// Rows `probe,n,phi_n` with a header.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from("probe,n,phi_n\n");
        for t in &self.traces {
            for (i, v) in t.values.iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", t.probe.name, i + 1, v.format(digits)));
            }
        }
        out
    }
}

fn increments(values: &[PhiValue]) -> Vec<f64> {
    values.windows(2).map(|w| w[1].distance(w[0])).collect()
}

/// Evaluates `φₙ` on every probe for `n ≤ n_max`.
pub fn convergence_report(spec: &MatrixMeasureSpec, probes: &[Probe], n_max: usize) -> Result<PotentialTrace> {
    if n_max < 2 {
        return domain("n_max must be at least 2");
    }
    if let Some(p) = probes.iter().find(|p| p.digits.len() < n_max) {
        return domain(format!("probe {} is shorter than n_max", p.name));
    }
    let traces = probes
        .par_iter()
        .map(|probe| {
            let values = phi_sequence(spec, &probe.digits[..n_max])?;
            let sup_increment = increments(&values).into_iter().fold(0.0, f64::max);
            let normalization_residual = normalization_residual(spec, &probe.digits[..n_max - 1]);
            Ok(ProbeTrace { probe: probe.clone(), values, sup_increment, normalization_residual })
        })
        .collect::<Result<Vec<_>>>()?;
    let increments: Vec<f64> = (0..n_max - 1)
        .map(|i| traces.iter().map(|t| t.values[i + 1].distance(t.values[i])).fold(0.0, f64::max))
        .collect();
    let sup_increment = increments.iter().copied().fold(0.0, f64::max);
    Ok(PotentialTrace { n_max, traces, increments, sup_increment })
}

/// `|Σ_a η[a·w]/η[w] − 1|`, or `None` when `η[w] = 0`.
pub fn normalization_residual(spec: &MatrixMeasureSpec, w: &[u8]) -> Option<f64> {
    let col = spec.column_state(w).ok()?;
    let mass = dot(spec.l(), &col);
    if mass.is_zero() {
        return None;
    }
    let total: Rational = spec.matrices().iter().map(|m| dot(&m.vec_mul(spec.l()), &col)).sum();
    Some(rational::to_f64(&(total / mass - Rational::one())).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::rat;
    use crate::matmeasure::{bernoulli, markov, mu3, mu4};

    #[test]
    fn bernoulli_potential_is_first_symbol_log() {
        let spec = bernoulli(&[rat(1, 3), rat(2, 3)]).unwrap();
        for w in [vec![0u8, 1, 1], vec![1, 0], vec![1]] {
            let v = phi_n(&spec, &w).unwrap().to_f64();
            let expected = if w[0] == 0 { (1.0f64 / 3.0).ln() } else { (2.0f64 / 3.0).ln() };
            assert!((v - expected).abs() < 1e-15);
        }
        let pot = FirstSymbolPotential::new(&[rat(1, 3), rat(2, 3)]);
        let r = weak_gibbs_ratio(&spec, |w| pot.eval(w), &[0, 1, 1, 0, 1]).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        assert!((quasi_bernoulli_ratio(&spec, &[0, 1, 1, 0], 2).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn null_cylinders() {
        // the chain never stays at 0
        let p = crate::exactfield::Matrix::from_ratios(&[[(0, 1), (1, 1)], [(1, 2), (1, 2)]]);
        let spec = markov(&p, &[rat(1, 3), rat(2, 3)]).unwrap();
        assert_eq!(phi_n(&spec, &[0, 0]).unwrap(), PhiValue::NegInfinity);
        assert!(matches!(phi_n(&spec, &[1, 0, 0]), Err(Error::ZeroCylinder(_))));
        let markov_phi = phi_n(&spec, &[1, 0, 1]).unwrap().to_f64();
        // log(μ[10]/μ[0]) = log((2/3 · 1/2) / (1/3)) = 0
        assert!(markov_phi.abs() < 1e-15);
        assert!(phi_n(&spec, &[]).is_err());
    }

    #[test]
    fn sequence_matches_pointwise() {
        let spec = mu3(3).unwrap();
        let word = [2u8, 0, 1, 1, 2, 0, 0];
        let seq = phi_sequence(&spec, &word).unwrap();
        for n in 1..=word.len() {
            assert_eq!(seq[n - 1], phi_n(&spec, &word[..n]).unwrap());
        }
    }

    #[test]
    fn mu4_split_ratio() {
        let spec = mu4();
        let n = 20;
        let mut w = vec![1u8; n];
        w.extend(vec![0u8; n]);
        let r = quasi_bernoulli_ratio_with_root(&spec, &w, n, n).unwrap();
        assert!((r - 0.25).abs() < 0.02);
        assert!(quasi_bernoulli_ratio(&spec, &w, 0).is_err());
    }

    #[test]
    fn default_probes() {
        let p = probes(&ProbeStrategy::Default { random: 2, seed: 9 }, 2, 10);
        assert_eq!(p.len(), 9);
        assert!(p.iter().all(|p| p.digits.len() == 11));
        assert_eq!(p[2].digits[..4], [1, 0, 1, 0]);
        assert_eq!(p[6].digits[..6], [1, 0, 1, 1, 0, 0]);
        assert_eq!(p, probes(&ProbeStrategy::Default { random: 2, seed: 9 }, 2, 10));
    }

    #[test]
    fn report_and_csv() {
        let spec = bernoulli(&[rat(1, 2), rat(1, 2)]).unwrap();
        let p = probes(&ProbeStrategy::Default { random: 1, seed: 1 }, 2, 5);
        let report = convergence_report(&spec, &p, 5).unwrap();
        assert_eq!(report.sup_increment, 0.0);
        assert_eq!(report.traces[0].normalization_residual, Some(0.0));
        let csv = report.to_csv(6);
        assert!(csv.starts_with("probe,n,phi_n\n0^inf,1,-6.931472e-1\n"));
        assert_eq!(csv.lines().count(), 1 + 8 * 5);
    }
}
