//! Data-parallel helpers. Without the `parallel` feature everything runs on
//! the calling thread.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Schedule {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Schedule {
    fn default() -> Self {
        if is_parallel() {
            Schedule::Parallel
        } else {
            Schedule::Sequential
        }
    }
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// Maps `f` over `items`, keeping input order in the output.
pub fn map_ordered<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    map_ordered_with(Schedule::default(), items, f)
}

pub fn map_ordered_with<T: Sync, R: Send>(schedule: Schedule, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    match schedule {
        #[cfg(feature = "parallel")]
        Schedule::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Runs both closures, possibly at the same time.
pub fn join<A: Send, B: Send>(a: impl FnOnce() -> A + Send, b: impl FnOnce() -> B + Send) -> (A, B) {
    join_with(Schedule::default(), a, b)
}

pub fn join_with<A: Send, B: Send>(
    schedule: Schedule,
    a: impl FnOnce() -> A + Send,
    b: impl FnOnce() -> B + Send,
) -> (A, B) {
    match schedule {
        #[cfg(feature = "parallel")]
        Schedule::Parallel => rayon::join(a, b),
        _ => (a(), b()),
    }
}
