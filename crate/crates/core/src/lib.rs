//! Non-asymptotic bounds on the probability that a uniformly random kernel
//! fails the null-space property NSP(s, C), the phase-transition curves they
//! induce in the (ρ, δ) plane, and desk-scale Monte Carlo machinery that
//! checks those bounds against exact LP-based NSP decisions.
//!
//! Module map:
//!
//! - [`specfun`]: log-gamma, log-binomials, Lambert W, log-sum-exp.
//! - [`bounds`]: closed-form failure bounds, all assembled in log domain.
//! - [`phase`]: transition curves over δ grids and Lambert-family fitting.
//! - [`lp`]: a small dense two-phase simplex solver.
//! - [`montecarlo`]: Grassmannian kernel sampling, exact NSP checking and
//!   failure-rate estimation.
//! - [`par`]: the data-parallel execution switch shared by the above.

// `!(x > 0.0)` style guards are deliberate: they reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod lp;
pub mod montecarlo;
pub mod par;
pub mod phase;
pub mod specfun;

pub use error::{Error, Result};
