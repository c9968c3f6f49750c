//! Desk-scale empirical checks of the bounds.
//!
//! Kernels of Gaussian matrices are drawn through m independent standard
//! Gaussian generators in R^p, which span a uniformly distributed
//! m-dimensional subspace. NSP(s, C) is decided exactly by a family of small
//! LPs, and the process X(t) on the unit sphere of R^m is sampled as a cheap
//! one-sided violation finder.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`. Trial `i`
//! of an experiment reads stream `i` of that generator, so trials are
//! independent of each other and of the execution order.

mod estimate;
mod kernel;
mod nsp;

pub use estimate::{
    clopper_pearson, estimate_nsp_failure, estimate_psi_failure, estimate_supx_failure,
    psi_failure_event, McReport, Verdict, CONFIDENCE,
};
pub use kernel::{
    eval_x, sample_kernel, sample_kernel_stream, sample_sup_x, KernelSample, SupSample,
    MAX_CONDITION,
};
pub use nsp::{check_nsp, NspCheck, NspWitness, MAX_P, MAX_S};
