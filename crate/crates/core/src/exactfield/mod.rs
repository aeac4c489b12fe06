//! Exact arithmetic in `Q` and `Q(√5)`.
//!
//! [`QuadraticNumber::sign`] and [`QuadraticNumber::floor`] are the only
//! primitives other modules use for decisions; [`QuadraticNumber::to_float`]
//! is the single bridge to floating point.

pub mod matrix;
pub mod quadratic;
pub mod rational;

pub use matrix::{dot, proportional, Matrix};
pub use quadratic::{ArithOp, FloatApprox, QuadraticNumber};
pub use rational::{format_rational, parse_rational, Rational};

/// Serde adapters storing rationals as `"num/den"` strings.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect()
        }
    }
}
