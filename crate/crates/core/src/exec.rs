//! Pluggable task execution.
//!
//! Mass computations fan out over independent `(atom, r)` tasks. Results are
//! always returned in input order so reductions are bit-stable regardless of
//! how the work was scheduled.

use alloc::vec::Vec;

/// Maps a function over a slice, preserving order.
pub trait Executor: Sync {
    /// `items.iter().map(f).collect()`, possibly in parallel.
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send;
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        items.iter().map(f).collect()
    }
}
