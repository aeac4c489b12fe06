//! Measures given by products of nonnegative matrices on sequence spaces,
//! diagnostics for the weak Gibbs property, and numeration in integral base
//! `r`, in base `β = (1+√5)/2` and in base `-β`.
//!
//! All decisions (digit extraction, cylinder masses, matrix identities,
//! classification) are made in exact arithmetic over `Q` or `Q(√5)`; floats
//! appear only in logarithms, Monte Carlo estimates and reports.
//!
//! Module map:
//!
//! * [`exactfield`]: rationals, the field `Q(√5)` and small exact matrices.
//! * [`numeration`]: base-`r`, Parry and `(-β)` expansions, cylinders and the
//!   ternary recoding by the words `00`, `010`, `10`.
//! * [`matmeasure`]: the cylinder-measure engine `L·M_{ω1}⋯M_{ωn}·V`.
//! * [`gibbs`]: n-step potentials, ratio tests and convergence reports.
//! * [`stochlimit`]: backward products of random 2×2 stochastic matrices.
//! * [`baser`]: matrices attached to Bernoulli convolutions read in base `r`.
//! * [`golden`]: the Bernoulli convolutions in base `β` and `-β`.
//! * [`montecarlo`]: seeded parallel sampling and estimate bookkeeping.

pub mod baser;
pub mod error;
pub mod exactfield;
pub mod gibbs;
pub mod golden;
pub mod matmeasure;
pub mod montecarlo;
pub mod numeration;
pub mod stochlimit;

pub use error::{Error, Result};
pub use exactfield::{Matrix, QuadraticNumber, Rational};
