//! Exact power-series order bounds and sum-of-square-roots decision
//! procedures.
//!
//! The crate is organized bottom-up:
//!
//! * [`numerics`]: big integers and rationals, primes, seeded randomness.
//! * [`series`]: truncated power series over the rationals.
//! * [`wronskian`]: Wronskian determinants, distinct-order bases and the
//!   order identities relating them to the maximal order of a span.
//! * [`ode_sum`]: sums of solutions of first-order linear ODEs and of
//!   square roots of polynomials, checked against their order bounds.
//! * [`slp`]: straight-line programs over `{+, -, *}`.
//! * [`sqtest`]: randomized perfect-square testing of SLP values.
//! * [`ssr`]: partition of a sum of square roots into one-dimensional
//!   classes and zero testing.
//! * [`loggap`]: order bounds for sums of logarithms and the gap for
//!   linear forms in logarithms of polynomial integers.
//! * [`interval`]: certified dyadic interval evaluation of square roots and
//!   logarithms.

pub mod error;
pub mod interval;
pub mod loggap;
pub mod numerics;
pub mod ode_sum;
pub mod series;
pub mod slp;
pub mod sqtest;
pub mod ssr;
pub mod wronskian;

pub use error::{Error, Result};
pub use numerics::{ExactInt, ExactRat, RngHandle};
pub use series::{OrderResult, Polynomial, TruncatedSeries};
