//! Liouville numbers with finite, machine-checkable certificates.
//!
//! * [`real`]: certified real arithmetic by nested rational intervals.
//! * [`liouville`]: series constants, approximation levels, certificates.
//! * [`cfrac`]: continued fractions and the p-th power convergent test.
//! * [`steer`], [`decompose`]: interval-nesting constructions of points whose
//!   images under monotone maps are all certified, and the sum / product /
//!   implicit-curve / orbit decompositions built on it.
//! * [`expindep`]: independence of exponentials of polynomials.
//! * [`certfile`]: the JSON certificate format; [`cli`]: the command line.

pub mod catalog;
pub mod certfile;
pub mod cfrac;
pub mod cli;
pub mod decompose;
pub mod error;
pub mod expindep;
pub mod expr;
pub mod interval;
pub mod linalg;
pub mod liouville;
pub mod poly;
pub mod ratio;
pub mod rational;
pub mod real;
pub mod steer;

pub use error::{Error, Result};
pub use interval::Interval;
pub use rational::Rational;
pub use real::{Budget, ExactReal, Recipe};
