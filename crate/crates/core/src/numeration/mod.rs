//! Digit expansions, cylinders and admissibility for the bases `r`, `β` and
//! `-β`, with `β = (1+√5)/2`.

mod expand;
mod interval;
mod ternary;
mod words;

pub use expand::{
    base_r_expand, base_r_interval, base_r_value, expand, is_admissible, is_admissible_periodic, neg_beta_cylinder,
    neg_beta_expand, neg_beta_expand_with_state, neg_beta_value, parry_cylinder, parry_expand,
    parry_expand_with_remainder, parry_value, AdmissibilityReport, Expansion, ExpansionSystem, NumerationSystem,
    TailMode,
};
pub use interval::{Interval, QInterval};
pub use ternary::{decode3, encode3, BLOCKS};
pub use words::{digits_to_string, parse_digits, AdmissibleBinaryWord, DigitWord, PeriodicWord, TernaryCode};
