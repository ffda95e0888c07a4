//! Pairwise concordance statistics for longitudinal cohort data.
//!
//! Students are compared pairwise within (entry year, subject) cells: a
//! pair is concordant when the ordering of their entrance-exam scores
//! matches the ordering of their subject grades, discordant when it
//! reverses. Cell-level U-statistics are combined into weighted quasi-U
//! divergence measures per group pair, tested against permutation nulls
//! with union-intersection one-sided statistics and chi-bar-square
//! references, and validated against bivariate-normal population models
//! with analytic orthant probabilities.

pub mod cohort;
pub mod error;
pub mod inference;
pub mod pipeline;
pub mod quasiu;
pub mod resampling;
pub mod rng;
pub mod sim;
pub mod ustat;

pub use error::{Error, Result};
