//! irratex: an exact-arithmetic toolkit for constructing computable numbers
//! with a prescribed irrationality exponent and for measuring exponents
//! empirically.
//!
//! Everything is rational arithmetic — no floating point in any certified
//! path.  The main entry points:
//!
//! - [`rational`]: canonical fractions and closed intervals.
//! - [`exact`]: integer power floors and certified tail-sum bounds.
//! - [`real`]: enclosure oracles for computable reals.
//! - [`seq`]: the three limsup representations of an exponent target and
//!   conversions among them.
//! - [`bugeaud`]: gap-sequence power sums ξ = Σ b^{−n_j}.
//! - [`jarnik`]: the continued-fraction construction with target growth.
//! - [`estimator`]: CF expansion of oracles, exponent profiles, and the
//!   brute-force best-approximation scan.
//! - [`cantor`]: the Cantor-like interval tree, its mass distribution, and
//!   the interval-selection loop.

pub mod bugeaud;
pub mod cantor;
pub mod cli;
pub mod error;
pub mod estimator;
pub mod exact;
pub mod jarnik;
pub mod logs;
pub mod rational;
pub mod real;
pub mod seq;
pub mod stern;

pub use error::{Error, Result};
pub use rational::{Interval, Rat};
