use num_traits::{One, Signed, Zero};

use super::MatrixMeasureSpec;
use crate::error::{domain, Result};
use crate::exactfield::rational::{int, rat};
use crate::exactfield::{Matrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Bernoulli(Vec<Rational>),
    Markov { transition: Matrix, stationary: Vec<Rational> },
    Mu3(u32),
    Mu4,
}

pub fn builtin(which: &Builtin) -> Result<MatrixMeasureSpec> {
    match which {
        Builtin::Bernoulli(p) => bernoulli(p),
        Builtin::Markov { transition, stationary } => markov(transition, stationary),
        Builtin::Mu3(r) => mu3(*r),
        Builtin::Mu4 => Ok(mu4()),
    }
}

fn check_probability_vector(p: &[Rational]) -> Result<()> {
    if p.is_empty() || p.iter().any(|x| !x.is_positive()) {
        return domain("probabilities must be positive");
    }
    if !p.iter().sum::<Rational>().is_one() {
        return domain("probabilities must sum to 1");
    }
    Ok(())
}

/// Product measure with digit law `p`, as a one-dimensional spec.
pub fn bernoulli(p: &[Rational]) -> Result<MatrixMeasureSpec> {
    check_probability_vector(p)?;
    let matrices = p.iter().map(|x| Matrix::new(1, 1, vec![x.clone()]).expect("1x1")).collect();
    MatrixMeasureSpec::new(vec![Rational::one()], matrices, vec![Rational::one()])
}

/// The same product measure with `M_k = p_k·I₂`, `L = (1/2, 1/2)`, `V = (1, 1)ᵀ`.
pub fn bernoulli_embedded(p: &[Rational]) -> Result<MatrixMeasureSpec> {
    check_probability_vector(p)?;
    let matrices = p.iter().map(|x| Matrix::identity(2).scale(x)).collect();
    MatrixMeasureSpec::new(vec![rat(1, 2), rat(1, 2)], matrices, vec![int(1), int(1)])
}

/// Stationary Markov measure `μ[ω₁…ωₙ] = π_{ω₁} P_{ω₁ω₂}⋯P_{ωₙ₋₁ωₙ}`, written
/// with `L = π`, `(M_k)_{ij} = δ_{ik} P_{kj}` and `V = (1, …, 1)ᵀ`.
pub fn markov(transition: &Matrix, stationary: &[Rational]) -> Result<MatrixMeasureSpec> {
    let r = transition.rows();
    if !transition.is_square() || stationary.len() != r {
        return domain("transition matrix and stationary vector disagree in size");
    }
    if !transition.is_nonnegative() || (0..r).any(|i| !transition.row(i).iter().sum::<Rational>().is_one()) {
        return domain("transition matrix is not row-stochastic");
    }
    check_probability_vector(stationary)?;
    if transition.vec_mul(stationary) != stationary {
        return domain("π is not stationary for P");
    }
    let matrices = (0..r)
        .map(|k| {
            let mut m = Matrix::zeros(r, r);
            for j in 0..r {
                m.set(k, j, transition.get(k, j).clone());
            }
            m
        })
        .collect();
    MatrixMeasureSpec::new(stationary.to_vec(), matrices, vec![Rational::one(); r])
}

/// `μ₃` on `r` symbols: `M_ω = (1/(2r))·[[ω′, 0], [1, 1]]` with
/// `ω′ = 1 + 2ω/(r−1)`, `L = (1/2)(1, 1)`, `V = (1, 1)ᵀ`.
pub fn mu3(r: u32) -> Result<MatrixMeasureSpec> {
    if r < 2 {
        return domain("mu3 needs r >= 2");
    }
    let scale = rat(1, 2 * r as i64);
    let matrices = (0..r as i64)
        .map(|w| {
            let w_prime = int(1) + rat(2 * w, r as i64 - 1);
            Matrix::from_rows(vec![vec![w_prime, Rational::zero()], vec![int(1), int(1)]]).expect("2x2").scale(&scale)
        })
        .collect();
    MatrixMeasureSpec::new(vec![rat(1, 2), rat(1, 2)], matrices, vec![int(1), int(1)])
}

/// `ω′ = 1 + 2ω/(r−1)` for the digit `ω` of `μ₃` on `r` symbols.
pub fn mu3_weight(r: u32, digit: u8) -> Rational {
    int(1) + rat(2 * digit as i64, r as i64 - 1)
}

/// `μ₄`: `M₀ = (1/4)[[0, 0], [1, 1]]`, `M₁ = (1/4)[[4, 0], [1, 1]]`.
pub fn mu4() -> MatrixMeasureSpec {
    let m0 = Matrix::from_ratios(&[[(0, 1), (0, 1)], [(1, 4), (1, 4)]]);
    let m1 = Matrix::from_ratios(&[[(1, 1), (0, 1)], [(1, 4), (1, 4)]]);
    MatrixMeasureSpec::new(vec![rat(1, 2), rat(1, 2)], vec![m0, m1], vec![int(1), int(1)]).expect("2x2")
}
