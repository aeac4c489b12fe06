//! The Bernoulli convolutions `μ` and `μ⋆`, laws of
//! `X = Σ ωₙ/β^{n+1}` and `Y = 1/β − Σ ωₙ/(−β)^{n+1}` for i.i.d. digits with
//! `P(ωₙ = 0) = p`, `P(ωₙ = 1) = q`, and `β = (1+√5)/2`.

mod cf;
mod zerodeux;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use cf::{cf_convergents, delta_bounds_check, u, uv, v, BoundCheck, CfState, LemmaReport};
pub use zerodeux::{find_case3, find_case3_from, zerodeux_classify, ZeroDeux, ZeroDeuxCase};

use crate::error::{domain, Error, Result};
use crate::exactfield::rational::{self, Rational};
use crate::exactfield::{dot, Matrix, QuadraticNumber};
use crate::gibbs::{self, PhiValue};
use crate::matmeasure::MatrixMeasureSpec;
use crate::montecarlo::{self, count_in, McEstimate};
use crate::numeration::{neg_beta_cylinder, parry_cylinder, AdmissibleBinaryWord, Interval, QInterval};

type Q = QuadraticNumber;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoldenParams {
    #[serde(with = "crate::exactfield::serde_rational")]
    p: Rational,
    #[serde(with = "crate::exactfield::serde_rational")]
    q: Rational,
}

impl GoldenParams {
    pub fn new(p: Rational, q: Rational) -> Result<Self> {
        if !p.is_positive() || !q.is_positive() || !(&p + &q).is_one() {
            return domain("need p, q > 0 with p + q = 1");
        }
        Ok(Self { p, q })
    }

    pub fn from_p(p: Rational) -> Result<Self> {
        let q = Rational::one() - &p;
        Self::new(p, q)
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    /// `α = p/q`.
    pub fn alpha(&self) -> Rational {
        &self.p / &self.q
    }

    /// The parameters with `p` and `q` exchanged.
    pub fn swapped(&self) -> Self {
        Self { p: self.q.clone(), q: self.p.clone() }
    }

    fn mat(&self, rows: [[u8; 3]; 3]) -> Matrix {
        let zero = Rational::zero();
        let pick = |c: u8| match c {
            b'p' => self.p.clone(),
            b'q' => self.q.clone(),
            _ => zero.clone(),
        };
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&c| pick(c)).collect()).collect()).expect("3x3")
    }

    /// `M₀`, `M₁` of the base-`β` formula.
    pub fn m(&self, digit: u8) -> Matrix {
        match digit {
            0 => self.mat([*b"p00", *b"00q", *b"qp0"]),
            _ => self.mat([*b"qp0", *b"000", *b"0q0"]),
        }
    }

    /// `A₀`, `A₁` of the base-`(−β)` formula.
    pub fn a(&self, digit: u8) -> Matrix {
        match digit {
            0 => self.mat([*b"pq0", *b"00q", *b"0p0"]),
            _ => self.mat([*b"q00", *b"000", *b"pq0"]),
        }
    }

    /// `(p, q², q)/(p + q²)`.
    pub fn mu_initial(&self) -> Vec<Rational> {
        let q2 = &self.q * &self.q;
        let s = &self.p + &q2;
        vec![&self.p / &s, &q2 / &s, &self.q / &s]
    }

    /// `(1, q/(1+q), 1/(1+q))`.
    pub fn mustar_initial(&self) -> Vec<Rational> {
        let s = Rational::one() + &self.q;
        vec![Rational::one(), &self.q / &s, s.recip()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// Law of `X`, cylinders of the Parry expansion.
    Mu,
    /// Law of `Y`, cylinders of the `(−β)` expansion.
    Mustar,
}

/// The three masses attached to a word, and whether they were obtained by
/// additivity (words ending in 1) rather than the matrix product directly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CylinderVector {
    #[serde(with = "crate::exactfield::serde_rational::vec")]
    pub values: Vec<Rational>,
    pub derived: bool,
}

fn product_vector(params: &GoldenParams, target: Target, word: &[u8]) -> Vec<Rational> {
    let init = match target {
        Target::Mu => params.mu_initial(),
        Target::Mustar => params.mustar_initial(),
    };
    word.iter().rev().fold(init, |acc, &d| {
        let m = match target {
            Target::Mu => params.m(d),
            Target::Mustar => params.a(d),
        };
        m.mul_vec(&acc)
    })
}

/// For `μ`: `(μ((1/β)⟦w⟧), μ(1/β + (1/β)⟦w⟧), μ(1/β² + (1/β)⟦w⟧))`; for `μ⋆`:
/// `(μ⋆(⟦w⟧⋆), μ⋆(−1/β + ⟦w⟧⋆), μ⋆(1/β² + ⟦w⟧⋆))`.
///
/// Words ending in 1 use `v(u1) = v(u) − v(u0)`.
pub fn cylinder_vector(params: &GoldenParams, target: Target, w: &AdmissibleBinaryWord) -> CylinderVector {
    let d = w.digits();
    match d.last() {
        Some(&1) => {
            let u = &d[..d.len() - 1];
            let mut u0 = u.to_vec();
            u0.push(0);
            let whole = product_vector(params, target, u);
            let zero = product_vector(params, target, &u0);
            CylinderVector { values: whole.iter().zip(&zero).map(|(a, b)| a - b).collect(), derived: true }
        }
        _ => CylinderVector { values: product_vector(params, target, d), derived: false },
    }
}

/// The product formula for a word ending in 0 (or empty); an error for words
/// ending in 1.
pub fn mu_cylinder_vector(params: &GoldenParams, w: &AdmissibleBinaryWord) -> Result<Vec<Rational>> {
    strict_vector(params, Target::Mu, w)
}

pub fn mustar_cylinder_vector(params: &GoldenParams, w: &AdmissibleBinaryWord) -> Result<Vec<Rational>> {
    strict_vector(params, Target::Mustar, w)
}

fn strict_vector(params: &GoldenParams, target: Target, w: &AdmissibleBinaryWord) -> Result<Vec<Rational>> {
    if w.digits().last() == Some(&1) {
        return domain("the product formula needs a word ending in 0; use cylinder_vector for derived values");
    }
    Ok(product_vector(params, target, w.digits()))
}

/// The set whose mass is entry `component` of [`cylinder_vector`].
pub fn target_set(target: Target, w: &AdmissibleBinaryWord, component: usize) -> QInterval {
    let ib = Q::inv_beta();
    match target {
        Target::Mu => {
            let base = parry_cylinder(w).affine(&Q::default(), &ib);
            let shift = match component {
                0 => Q::default(),
                1 => ib,
                _ => Q::beta_pow(-2),
            };
            base.affine(&shift, &Q::from_int(1))
        }
        Target::Mustar => {
            let shift = match component {
                0 => Q::default(),
                1 => -ib,
                _ => Q::beta_pow(-2),
            };
            neg_beta_cylinder(w).affine(&shift, &Q::from_int(1))
        }
    }
}

/// `A*₀ = A₀²`, `A*₁ = A₀A₁A₀`, `A*₂ = A₁A₀`: the products along the words
/// `00`, `010`, `10`.
pub fn astar(params: &GoldenParams) -> [Matrix; 3] {
    let (a0, a1) = (params.a(0), params.a(1));
    [&a0 * &a0, &(&a0 * &a1) * &a0, &a1 * &a0]
}

/// Closed forms of `(A*₀)ⁿ` and `(A*₂)ⁿ` for `n ≥ 1`; the identity for `n = 0`.
pub fn astar_power(i: u8, n: u32, params: &GoldenParams) -> Result<Matrix> {
    if n == 0 && (i == 0 || i == 2) {
        return Ok(Matrix::identity(3));
    }
    let alpha = params.alpha();
    let scale = num_traits::pow(&params.p * &params.q, n as usize);
    let zero = Rational::zero;
    let one = Rational::one;
    let rows = match i {
        0 => {
            let (un, vn) = (u(n, &alpha), v(n, &alpha));
            vec![vec![vn, &alpha * &un, un], vec![zero(), one(), zero()], vec![zero(), zero(), one()]]
        }
        2 => {
            let inv = alpha.recip();
            let (un, vn) = (u(n, &inv), v(n, &inv));
            vec![vec![one(), inv.clone(), zero()], vec![zero(), zero(), zero()], vec![un.clone(), &un * &inv, vn]]
        }
        _ => return domain("closed-form powers exist for A*_0 and A*_2 only"),
    };
    Ok(Matrix::from_rows(rows)?.scale(&scale))
}

/// `(pq)^{Σaᵢ}·[[p_n, p_n/α, v_n p_{n−1}], [0, 0, 0], [q_n, q_n/α, v_n q_{n−1}]]`,
/// the value of `(A*₀)^{a₀}(A*₂)^{a₁}⋯(A*₂)^{a_n}` for odd `n`.
pub fn convergent_product(a: &[u32], params: &GoldenParams) -> Result<Matrix> {
    if !a.len().is_multiple_of(2) {
        return domain("need a_0, …, a_n with n odd");
    }
    let alpha = params.alpha();
    let states = cf_convergents(a, &alpha)?;
    let last = &states[states.len() - 1];
    let prev = &states[states.len() - 2];
    let total: u32 = a.iter().sum();
    let scale = num_traits::pow(&params.p * &params.q, total as usize);
    let zero = Rational::zero;
    let rows = vec![
        vec![last.p.clone(), &last.p / &alpha, &last.v * &prev.p],
        vec![zero(), zero(), zero()],
        vec![last.q.clone(), &last.q / &alpha, &last.v * &prev.q],
    ];
    Ok(Matrix::from_rows(rows)?.scale(&scale))
}

/// The code measure `μ⋆∘ξ⋆⁻¹` as a matrix spec: `L = (1, 0, 0)`, the
/// matrices `A*_k` and `V` the initial vector of `μ⋆`.
pub fn code_spec(params: &GoldenParams) -> MatrixMeasureSpec {
    let [a0, a1, a2] = astar(params);
    let l = vec![Rational::one(), Rational::zero(), Rational::zero()];
    MatrixMeasureSpec::new(l, vec![a0, a1, a2], params.mustar_initial()).expect("3x3")
}

/// `φₙ(ω) = log (e₁A*_{ω₁}⋯A*_{ωₙ}V) / (e₁A*_{ω₂}⋯A*_{ωₙ}V)`.
pub fn phi_n_golden(params: &GoldenParams, code: &[u8]) -> Result<PhiValue> {
    check_code(code)?;
    gibbs::phi_n(&code_spec(params), code)
}

fn check_code(code: &[u8]) -> Result<()> {
    if code.iter().any(|&c| c > 2) {
        return domain("codes are words over {0, 1, 2}");
    }
    Ok(())
}

/// Exact tail-independence check at a `{1,2}0^{n−2}1` pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankOneCheck {
    /// `(N, n)` of the pattern, with `N ≥ 1`.
    pub pattern: (usize, usize),
    pub rank: usize,
    /// `h` values for which both tails gave the same ratio.
    pub checked: Vec<usize>,
    pub tail_independent: bool,
}

/// With `P = A*_{ω_{N+1}}⋯A*_{ω_{N+n}}` of rank 1, the ratio defining `φ_h`
/// for `h ≥ N + n` does not depend on the vector the product is applied to.
/// Compares the ratios for two tail vectors exactly.
pub fn rank_one_tail_check(params: &GoldenParams, code: &[u8], x: &[Rational], y: &[Rational]) -> Result<RankOneCheck> {
    check_code(code)?;
    let Some((start, len)) = find_case3_from(code, 1) else {
        return domain("no {1,2}0^k1 pattern after the first symbol");
    };
    let spec = code_spec(params);
    let block = Matrix::product(3, code[start..start + len].iter().map(|&c| spec.matrix(c)));
    let rank = block.rank();
    let ratio = |h: usize, tail: &[Rational]| -> Result<Rational> {
        let col = code[..h].iter().rev().fold(tail.to_vec(), |acc, &c| spec.matrix(c).mul_vec(&acc));
        let shifted = code[1..h].iter().rev().fold(tail.to_vec(), |acc, &c| spec.matrix(c).mul_vec(&acc));
        let num = dot(spec.l(), &col);
        let den = dot(spec.l(), &shifted);
        if den.is_zero() {
            return Err(Error::ZeroCylinder("shifted code cylinder is null".into()));
        }
        Ok(num / den)
    };
    let mut checked = Vec::new();
    let mut independent = true;
    for h in start + len..=code.len() {
        independent &= ratio(h, x)? == ratio(h, y)?;
        checked.push(h);
    }
    Ok(RankOneCheck { pattern: (start, len), rank, checked, tail_independent: independent && rank == 1 })
}

/// Sorted Monte Carlo samples of `X` or `Y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoldenSample {
    pub target: Target,
    pub depth: u32,
    /// Half-width of the window around a sample that may contain the true
    /// value: `β^{−(depth−2)}`, above the truncated tail and float error.
    pub band: f64,
    #[serde(skip)]
    pub values: Vec<f64>,
}

pub fn sample_golden(
    params: &GoldenParams,
    target: Target,
    n_samples: usize,
    depth: u32,
    seed: u64,
) -> Result<GoldenSample> {
    if n_samples == 0 || depth < 8 {
        return domain("need samples and depth >= 8");
    }
    let p = rational::to_f64(&params.p);
    let ib = 1.0 / Q::beta().to_f64();
    let mut values = montecarlo::sample(n_samples, seed, |rng| {
        let mut acc = 0.0;
        // 1/β^{n+1} for X; −1/(−β)^{n+1} for Y
        let mut scale = match target {
            Target::Mu => ib,
            Target::Mustar => -ib,
        };
        for _ in 0..depth {
            scale *= match target {
                Target::Mu => ib,
                Target::Mustar => -ib,
            };
            let one: bool = rand::Rng::random::<f64>(rng) >= p;
            if one {
                acc += scale;
            }
        }
        match target {
            Target::Mu => acc,
            Target::Mustar => ib - acc,
        }
    });
    montecarlo::sort_floats(&mut values);
    let band = Q::beta_pow(-(depth as i64 - 2)).to_f64();
    Ok(GoldenSample { target, depth, band, values })
}

impl GoldenSample {
    /// Estimate of the mass of `iv`; samples within `band` of an endpoint
    /// are undecided.
    pub fn estimate(&self, iv: &Interval<f64>) -> McEstimate {
        let (lo, hi, b) = (iv.lo, iv.hi, self.band);
        let v = &self.values;
        let inside = count_in(v, lo + b, hi - b);
        let uncertain = if hi - lo > 2.0 * b {
            count_in(v, lo - b, lo + b) + count_in(v, hi - b, hi + b)
        } else {
            count_in(v, lo - b, hi + b)
        };
        McEstimate::from_counts(inside, uncertain, v.len())
    }

    pub fn estimate_set(&self, w: &AdmissibleBinaryWord, component: usize) -> McEstimate {
        self.estimate(&target_set(self.target, w, component).to_f64())
    }
}

/// Monte Carlo estimate of one entry of [`cylinder_vector`].
pub fn mc_oracle(
    params: &GoldenParams,
    target: Target,
    w: &AdmissibleBinaryWord,
    component: usize,
    n_samples: usize,
    depth: u32,
    seed: u64,
) -> Result<McEstimate> {
    if component > 2 {
        return domain("component must be 0, 1 or 2");
    }
    Ok(sample_golden(params, target, n_samples, depth, seed)?.estimate_set(w, component))
}

/// Two-sample KS distance between `1 − Y` under `(p, q)` and `Y` under `(q, p)`.
pub fn reflection_ks(params: &GoldenParams, n_samples: usize, depth: u32, seed: u64) -> Result<f64> {
    let direct = sample_golden(params, Target::Mustar, n_samples, depth, seed)?;
    let swapped = sample_golden(&params.swapped(), Target::Mustar, n_samples, depth, seed.wrapping_add(1))?;
    let reflected: Vec<f64> = direct.values.iter().rev().map(|y| 1.0 - y).collect();
    Ok(montecarlo::ks_two_sample(&reflected, &swapped.values))
}
