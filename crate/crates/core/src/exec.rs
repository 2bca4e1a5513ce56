//! Execution mode for data-parallel loops.
//!
//! Every parallel entry point in the crate has a `*_with(.., Mode)` variant so
//! benchmarks can compare both paths inside one binary. Results are always
//! collected in input order, so the mode never changes an answer.

/// How a batch of independent work items is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Sequential,
    /// Uses the rayon global pool; identical to `Sequential` when the
    /// `parallel` feature is disabled.
    Parallel,
}

impl Mode {
    /// `Parallel` when compiled with the `parallel` feature.
    pub const fn default_mode() -> Mode {
        if cfg!(feature = "parallel") {
            Mode::Parallel
        } else {
            Mode::Sequential
        }
    }

    pub const fn is_parallel(self) -> bool {
        matches!(self, Mode::Parallel) && cfg!(feature = "parallel")
    }
}

impl Default for Mode {
    fn default() -> Self {
        Mode::default_mode()
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, U, F>(mode: Mode, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Maps `f` over the half-open range `lo..hi`, preserving order.
pub fn map_range<U, F>(mode: Mode, lo: u64, hi: u64, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(u64) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (lo..hi).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (lo..hi).map(f).collect()
}

/// True iff `pred` holds for every item. Short-circuits in both modes.
pub fn all_range<F>(mode: Mode, lo: u64, hi: u64, pred: F) -> bool
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (lo..hi).into_par_iter().all(pred);
    }
    let _ = mode;
    (lo..hi).all(pred)
}
