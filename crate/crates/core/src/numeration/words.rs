use std::fmt;

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// A finite word over `{0, …, alphabet_size − 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DigitWord {
    alphabet_size: u32,
    digits: Vec<u8>,
}

impl DigitWord {
    pub fn new(alphabet_size: u32, digits: Vec<u8>) -> Result<Self> {
        if alphabet_size < 2 {
            return domain("alphabet size must be at least 2");
        }
        if let Some(d) = digits.iter().find(|&&d| d as u32 >= alphabet_size) {
            return domain(format!("digit {d} outside alphabet of size {alphabet_size}"));
        }
        Ok(Self { alphabet_size, digits })
    }

    pub fn empty(alphabet_size: u32) -> Self {
        Self { alphabet_size: alphabet_size.max(2), digits: Vec::new() }
    }

    /// Parses a compact digit string such as `"0120"`.
    pub fn parse(alphabet_size: u32, s: &str) -> Result<Self> {
        Self::new(alphabet_size, parse_digits(s)?)
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&digits_to_string(&self.digits))
    }
}

/// A binary word without the factor `11`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct AdmissibleBinaryWord(Vec<u8>);

impl AdmissibleBinaryWord {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if let Some(d) = digits.iter().find(|&&d| d > 1) {
            return domain(format!("digit {d} is not binary"));
        }
        if let Some(position) = first_double_one(&digits) {
            return Err(Error::NotAdmissible { position });
        }
        Ok(Self(digits))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_digits(s)?)
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    /// Appends `d`, failing if that creates `11`.
    pub fn push(&mut self, d: u8) -> Result<()> {
        if d > 1 {
            return domain(format!("digit {d} is not binary"));
        }
        if d == 1 && self.0.last() == Some(&1) {
            return Err(Error::NotAdmissible { position: self.0.len() });
        }
        self.0.push(d);
        Ok(())
    }

    /// All admissible words of length exactly `n`, in lexicographic order.
    pub fn all_of_length(n: usize) -> Vec<AdmissibleBinaryWord> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w: Vec<u8>| {
                    let mut next = Vec::with_capacity(2);
                    let mut z = w.clone();
                    z.push(0);
                    next.push(z);
                    if w.last() != Some(&1) {
                        let mut o = w;
                        o.push(1);
                        next.push(o);
                    }
                    next
                })
                .collect();
        }
        out.into_iter().map(AdmissibleBinaryWord).collect()
    }
}

impl fmt::Display for AdmissibleBinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&digits_to_string(&self.0))
    }
}

/// A word over `{0, 1, 2}`; a prefix of the ternary coding of an expansion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct TernaryCode(Vec<u8>);

impl TernaryCode {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if let Some(d) = digits.iter().find(|&&d| d > 2) {
            return domain(format!("digit {d} is not ternary"));
        }
        Ok(Self(digits))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_digits(s)?)
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All codes of length `n` in lexicographic order.
    pub fn all_of_length(n: usize) -> Vec<TernaryCode> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w: Vec<u8>| {
                    (0..3).map(move |d| {
                        let mut v = w.clone();
                        v.push(d);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(TernaryCode).collect()
    }
}

impl fmt::Display for TernaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&digits_to_string(&self.0))
    }
}

/// An infinite, eventually periodic sequence `prefix · cycle^∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicWord {
    pub prefix: Vec<u8>,
    pub cycle: Vec<u8>,
}

impl PeriodicWord {
    pub fn new(prefix: Vec<u8>, cycle: Vec<u8>) -> Result<Self> {
        if cycle.is_empty() {
            return domain("periodic word needs a nonempty cycle");
        }
        Ok(Self { prefix, cycle })
    }

    pub fn digit(&self, i: usize) -> u8 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn take(&self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.digit(i)).collect()
    }
}

pub fn parse_digits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .filter(|c| !matches!(c, ' ' | ',' | '_'))
        .map(|c| c.to_digit(36).map(|d| d as u8).ok_or_else(|| Error::Parse(format!("bad digit {c:?} in {s:?}"))))
        .collect()
}

pub fn digits_to_string(d: &[u8]) -> String {
    d.iter().map(|&x| std::char::from_digit(x as u32, 36).unwrap_or('?')).collect()
}

/// Index of the second `1` of the first `11` factor.
pub(crate) fn first_double_one(d: &[u8]) -> Option<usize> {
    d.windows(2).position(|w| w == [1, 1]).map(|i| i + 1)
}
