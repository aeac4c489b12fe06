use serde::Serialize;

use crate::exactfield::QuadraticNumber;

/// An interval of the real line with explicit open/closed ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl<T> Interval<T> {
    pub fn closed(lo: T, hi: T) -> Self {
        Self { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn half_open(lo: T, hi: T) -> Self {
        Self { lo, hi, lo_closed: true, hi_closed: false }
    }
}

pub type QInterval = Interval<QuadraticNumber>;

impl QInterval {
    pub fn contains(&self, x: &QuadraticNumber) -> bool {
        let above = match x.cmp(&self.lo) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => self.lo_closed,
            std::cmp::Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => self.hi_closed,
            std::cmp::Ordering::Greater => false,
        };
        above && below
    }

    pub fn length(&self) -> QuadraticNumber {
        &self.hi - &self.lo
    }

    /// Image under `t ↦ offset + slope·t`; ends swap when `slope < 0`.
    pub fn affine(&self, offset: &QuadraticNumber, slope: &QuadraticNumber) -> QInterval {
        let a = offset + &(slope * &self.lo);
        let b = offset + &(slope * &self.hi);
        if slope.sign() >= 0 {
            Interval { lo: a, hi: b, lo_closed: self.lo_closed, hi_closed: self.hi_closed }
        } else {
            Interval { lo: b, hi: a, lo_closed: self.hi_closed, hi_closed: self.lo_closed }
        }
    }

    pub fn to_f64(&self) -> Interval<f64> {
        Interval { lo: self.lo.to_f64(), hi: self.hi.to_f64(), lo_closed: self.lo_closed, hi_closed: self.hi_closed }
    }
}
