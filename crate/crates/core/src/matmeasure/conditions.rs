//! Decidable conditions on a finite set of nonnegative 2×2 matrices for the
//! uniform convergence of `M_{ω₁}⋯M_{ωₙ}V` in direction, and for the
//! existence and continuity of the potential of `η = L M V`.

use num_traits::Zero;
use serde::Serialize;

use super::{validate, MatrixMeasureSpec};
use crate::error::{domain, Result};
use crate::exactfield::{proportional, Matrix, Rational};

// Entries of [[a, b], [c, d]].
fn a(m: &Matrix) -> &Rational {
    m.get(0, 0)
}
fn b(m: &Matrix) -> &Rational {
    m.get(0, 1)
}
fn c(m: &Matrix) -> &Rational {
    m.get(1, 0)
}
fn d(m: &Matrix) -> &Rational {
    m.get(1, 1)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConditionFlags {
    pub i: bool,
    pub ii: bool,
    pub iii: bool,
    pub iv: bool,
    pub v: bool,
}

impl ConditionFlags {
    pub fn any(&self) -> bool {
        self.i || self.ii || self.iii || self.iv || self.v
    }

    pub fn holding(&self) -> Vec<&'static str> {
        [("i", self.i), ("ii", self.ii), ("iii", self.iii), ("iv", self.iv), ("v", self.v)]
            .into_iter()
            .filter_map(|(name, holds)| holds.then_some(name))
            .collect()
    }
}

/// The sets `M₁` (`a = 0`), `M₂` (products with `b = 0`), `M₃` (products
/// with `c = 0`) and `M₄` (`d = 0`), given by matrix indices, and the
/// conditions they decide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub m1: Vec<usize>,
    /// Pairs `(i, j)` with `M_i M_j` in the set.
    pub m2: Vec<(usize, usize)>,
    pub m3: Vec<(usize, usize)>,
    pub m4: Vec<usize>,
    pub conditions: ConditionFlags,
}

pub fn direction_conditions(matrices: &[Matrix], v: &[Rational]) -> Result<ConditionReport> {
    if v.len() != 2 || v.iter().any(|x| x <= &Rational::zero()) {
        return domain("V must be a positive 2-vector");
    }
    for (k, m) in matrices.iter().enumerate() {
        if m.rows() != 2 || m.cols() != 2 {
            return domain(format!("M_{k} is not 2x2"));
        }
        if !m.is_nonnegative() {
            return domain(format!("M_{k} has a negative entry"));
        }
        if (0..2).any(|j| m.column(j).iter().all(Zero::is_zero)) {
            return domain(format!("M_{k} has a zero column"));
        }
    }

    let m1: Vec<usize> = (0..matrices.len()).filter(|&k| a(&matrices[k]).is_zero()).collect();
    let m4: Vec<usize> = (0..matrices.len()).filter(|&k| d(&matrices[k]).is_zero()).collect();
    let mut m2 = Vec::new();
    let mut m3 = Vec::new();
    let mut m2_prods = Vec::new();
    let mut m3_prods = Vec::new();
    for (i, mi) in matrices.iter().enumerate() {
        for (j, mj) in matrices.iter().enumerate() {
            let p = mi * mj;
            if b(&p).is_zero() {
                m2.push((i, j));
                m2_prods.push(p.clone());
            }
            if c(&p).is_zero() {
                m3.push((i, j));
                m3_prods.push(p);
            }
        }
    }

    let m2_has = |pred: fn(&Rational, &Rational) -> bool| m2_prods.iter().any(|m| pred(a(m), d(m)));
    let m3_has = |pred: fn(&Rational, &Rational) -> bool| m3_prods.iter().any(|m| pred(a(m), d(m)));
    let gt = |x: &Rational, y: &Rational| x > y;
    let lt = |x: &Rational, y: &Rational| x < y;
    let le = |x: &Rational, y: &Rational| x <= y;
    let ge = |x: &Rational, y: &Rational| x >= y;
    // a product lies in M₂ ∩ M₃ iff it is diagonal
    let m2_meets_m3 = m2_prods.iter().any(|m| c(m).is_zero());

    let conditions = ConditionFlags {
        i: !m2_has(gt) && !m3_has(lt) && !m2_meets_m3,
        ii: !m2_has(le) && !m3_has(ge),
        iii: !m2_has(le) && !m3_has(lt) && m1.is_empty(),
        iv: !m2_has(gt) && !m3_has(ge) && m4.is_empty(),
        v: matrices.iter().all(|m| proportional(&m.mul_vec(v), v)),
    };
    Ok(ConditionReport { m1, m2, m3, m4, conditions })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuityReport {
    pub continuous: bool,
    /// Names of the conditions that hold, among `i`…`vi`.
    pub holding: Vec<&'static str>,
    pub direction: ConditionReport,
    /// `L` is a common left eigenvector.
    pub vi: bool,
}

/// Whether the potential of `η = L M V` exists and is continuous, decided by
/// conditions (i)–(v) on `(M, V)` and (vi) on `L`.
pub fn potential_continuity(spec: &MatrixMeasureSpec) -> Result<ContinuityReport> {
    if spec.dim() != 2 {
        return domain("potential continuity is decided for 2x2 specs only");
    }
    let report = validate(spec);
    if !report.valid {
        return domain(format!("invalid spec: {}", report.failures.join("; ")));
    }
    let direction = direction_conditions(spec.matrices(), spec.v())?;
    let vi = spec.matrices().iter().all(|m| proportional(&m.vec_mul(spec.l()), spec.l()));
    let mut holding = direction.conditions.holding();
    if vi {
        holding.push("vi");
    }
    Ok(ContinuityReport { continuous: !holding.is_empty(), holding, direction, vi })
}
