//! The cylinder-measure engine `η[ω₁…ωₙ] = L·M_{ω₁}⋯M_{ωₙ}·V`.

mod builtins;
mod conditions;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use builtins::{bernoulli, bernoulli_embedded, builtin, markov, mu3, mu3_weight, mu4, Builtin};
pub use conditions::{direction_conditions, potential_continuity, ConditionReport, ContinuityReport};

use crate::error::{Error, Result};
use crate::exactfield::{dot, format_rational, parse_rational, Matrix, Rational};

/// A triple `(L, {M_k}, V)` of a nonnegative row vector, nonnegative square
/// matrices and a positive column vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixMeasureSpec {
    l: Vec<Rational>,
    matrices: Vec<Matrix>,
    v: Vec<Rational>,
}

impl MatrixMeasureSpec {
    /// Checks shapes only; use [`validate`] for the measure axioms.
    pub fn new(l: Vec<Rational>, matrices: Vec<Matrix>, v: Vec<Rational>) -> Result<Self> {
        let d = l.len();
        if d == 0 {
            return Err(Error::Dimension("empty row vector L".into()));
        }
        if v.len() != d {
            return Err(Error::Dimension(format!("L has {d} entries, V has {}", v.len())));
        }
        if matrices.is_empty() {
            return Err(Error::Dimension("no matrices".into()));
        }
        if let Some(k) = matrices.iter().position(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::Dimension(format!("matrix {k} is not {d}x{d}")));
        }
        Ok(Self { l, matrices, v })
    }

    pub fn dim(&self) -> usize {
        self.l.len()
    }

    /// Alphabet size `r`.
    pub fn alphabet_size(&self) -> usize {
        self.matrices.len()
    }

    pub fn l(&self) -> &[Rational] {
        &self.l
    }

    pub fn v(&self) -> &[Rational] {
        &self.v
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn matrix(&self, k: u8) -> &Matrix {
        &self.matrices[k as usize]
    }

    fn check_word(&self, word: &[u8]) -> Result<()> {
        match word.iter().find(|&&d| d as usize >= self.matrices.len()) {
            Some(d) => Err(Error::Domain(format!("digit {d} outside alphabet of size {}", self.matrices.len()))),
            None => Ok(()),
        }
    }

    /// `L·M_{ω₁}⋯M_{ωₙ}` as a row vector.
    pub fn row_state(&self, word: &[u8]) -> Result<Vec<Rational>> {
        self.check_word(word)?;
        Ok(word.iter().fold(self.l.clone(), |acc, &d| self.matrix(d).vec_mul(&acc)))
    }

    /// `M_{ω₁}⋯M_{ωₙ}·V` as a column vector.
    pub fn column_state(&self, word: &[u8]) -> Result<Vec<Rational>> {
        self.check_word(word)?;
        Ok(word.iter().rev().fold(self.v.clone(), |acc, &d| self.matrix(d).mul_vec(&acc)))
    }

    /// `η[word]`; the empty word has mass `L·V`.
    pub fn cylinder_measure(&self, word: &[u8]) -> Result<Rational> {
        Ok(dot(&self.row_state(word)?, &self.v))
    }

    /// Every word of length `depth` with its mass, in lexicographic order.
    pub fn all_cylinders(&self, depth: usize) -> Vec<(Vec<u8>, Rational)> {
        let mut out = Vec::with_capacity(self.alphabet_size().pow(depth as u32));
        let mut word = Vec::with_capacity(depth);
        self.descend(&self.l, depth, &mut word, &mut out);
        out
    }

    fn descend(&self, row: &[Rational], left: usize, word: &mut Vec<u8>, out: &mut Vec<(Vec<u8>, Rational)>) {
        if left == 0 {
            out.push((word.clone(), dot(row, &self.v)));
            return;
        }
        for (k, m) in self.matrices.iter().enumerate() {
            word.push(k as u8);
            self.descend(&m.vec_mul(row), left - 1, word, out);
            word.pop();
        }
    }

    pub fn to_file(&self) -> SpecFile {
        let strs = |v: &[Rational]| v.iter().map(format_rational).collect();
        SpecFile {
            l: strs(&self.l),
            matrices: self.matrices.iter().map(|m| (0..m.rows()).map(|i| strs(m.row(i))).collect()).collect(),
            v: strs(&self.v),
        }
    }

    pub fn from_file(file: &SpecFile) -> Result<Self> {
        let parse = |v: &[String]| v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>();
        let matrices = file
            .matrices
            .iter()
            .map(|rows| Matrix::from_rows(rows.iter().map(|r| parse(r)).collect::<Result<Vec<_>>>()?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parse(&file.l)?, matrices, parse(&file.v)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }
}

/// JSON form of a spec, with exact rationals written as `"num/den"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFile {
    #[serde(rename = "L")]
    pub l: Vec<String>,
    pub matrices: Vec<Vec<Vec<String>>>,
    #[serde(rename = "V")]
    pub v: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub failures: Vec<String>,
}

/// Checks `L·V = 1`, `Σ M_k V = V`, nonnegativity, positivity of `V` and,
/// for `d = 2`, that no matrix has a zero column.
pub fn validate(spec: &MatrixMeasureSpec) -> ValidationReport {
    let mut failures = Vec::new();
    let lv = dot(&spec.l, &spec.v);
    if !lv.is_one() {
        failures.push(format!("L·V = {} instead of 1", format_rational(&lv)));
    }
    if spec.l.iter().any(Signed::is_negative) {
        failures.push("L has a negative entry".into());
    }
    if !spec.v.iter().all(Signed::is_positive) {
        failures.push("V is not strictly positive".into());
    }
    for (k, m) in spec.matrices.iter().enumerate() {
        if !m.is_nonnegative() {
            failures.push(format!("M_{k} has a negative entry"));
        }
        if spec.dim() == 2 {
            for j in 0..2 {
                if m.column(j).iter().all(Zero::is_zero) {
                    failures.push(format!("column {j} of M_{k} is zero"));
                }
            }
        }
    }
    let d = spec.dim();
    let sum = spec.matrices.iter().fold(Matrix::zeros(d, d), |acc, m| acc.add(m));
    if sum.mul_vec(&spec.v) != spec.v {
        failures.push("Σ M_k V differs from V".into());
    }
    ValidationReport { valid: failures.is_empty(), failures }
}
