//! Data-parallel execution switch.
//!
//! Every embarrassingly parallel loop in the crate (δ grids, Monte Carlo
//! trials, per-k bound terms) goes through [`map_range`]. With the `parallel`
//! feature enabled, [`Exec::Parallel`] fans out over the rayon pool; without
//! it, or with [`Exec::Sequential`], the same closure runs in a plain loop.
//! Results are always assembled in index order, so output does not depend on
//! the execution mode or thread count.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this mode actually runs on more than one thread in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Evaluates `f` on every index of `range` and returns the results in order.
pub fn map_range<T, F>(exec: Exec, range: Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

/// Sizes the global worker pool. `0` keeps rayon's automatic choice.
///
/// Only the first call in a process has an effect; later calls return an error
/// message from the pool builder.
pub fn init_threads(threads: usize) -> std::result::Result<(), String> {
    #[cfg(feature = "parallel")]
    {
        if threads == 0 {
            return Ok(());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| e.to_string())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(())
    }
}

/// Number of worker threads the parallel mode uses.
pub fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_keep_order() {
        let seq = map_range(Exec::Sequential, 0..1000, |i| i * i);
        let par = map_range(Exec::Parallel, 0..1000, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[31], 961);
    }

    #[test]
    fn empty_range() {
        let v: Vec<u8> = map_range(Exec::Parallel, 5..5, |_| 0);
        assert!(v.is_empty());
    }
}
