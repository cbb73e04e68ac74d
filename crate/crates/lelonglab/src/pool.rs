//! Rayon-backed [`Executor`].

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use lelonglab_core::Executor;

use crate::error::CliError;

/// Environment variable capping the worker count.
pub const THREADS_VAR: &str = "LELONGLAB_THREADS";

/// A dedicated thread pool. Results keep input order, so reductions are
/// identical for any thread count.
pub struct Pool(ThreadPool);

impl Pool {
    /// `threads = 0` lets rayon pick.
    pub fn new(threads: usize) -> Result<Self, CliError> {
        ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map(Pool)
            .map_err(|e| CliError::Input(format!("thread pool: {e}")))
    }

    /// Sized from `LELONGLAB_THREADS`, if set.
    pub fn from_env() -> Result<Self, CliError> {
        let threads = match std::env::var(THREADS_VAR) {
            Ok(s) => s
                .trim()
                .parse::<usize>()
                .map_err(|_| CliError::Input(format!("{THREADS_VAR}={s:?} is not a thread count")))?,
            Err(_) => 0,
        };
        Self::new(threads)
    }

    pub fn threads(&self) -> usize {
        self.0.current_num_threads()
    }
}

impl Executor for Pool {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.0.install(|| items.par_iter().map(f).collect())
    }
}
