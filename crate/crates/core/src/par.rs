//! Execution mode for the data-parallel kernels.
//!
//! With the `parallel` feature (default) `Exec::Parallel` runs on the rayon
//! pool; without it every kernel takes the sequential path. Results are
//! identical in both modes: parallel sections only ever feed a deterministic
//! reduction (sorted merge or minimum).

/// Selects how a kernel evaluates its independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// `Parallel` when the feature is compiled in, otherwise `Sequential`.
    pub fn effective(self) -> Exec {
        if cfg!(feature = "parallel") {
            self
        } else {
            Exec::Sequential
        }
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map_collect<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec.effective() {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Maps `f` over the index range `0..n`, preserving order.
pub fn map_range<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec.effective() {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Returns true iff `pred` holds for every index in `0..n`.
pub fn all_range<F>(exec: Exec, n: usize, pred: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    match exec.effective() {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().all(pred)
        }
        _ => (0..n).all(pred),
    }
}
