use purifier_core::Executor;
use rayon::prelude::*;

use crate::{HarnessError, Result};

/// Environment variable consulted when `--threads` is not given.
pub const THREADS_ENV: &str = "PURIFIER_THREADS";

/// Executes work items on a dedicated rayon pool. Results are collected in
/// index order, so output never depends on the thread count.
pub struct PoolExecutor {
    pool: rayon::ThreadPool,
}

impl PoolExecutor {
    /// `threads == 0` lets rayon pick the number of threads.
    pub fn new(threads: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| HarnessError::InvalidArgument(format!("cannot build thread pool: {e}")))?;
        Ok(Self { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for PoolExecutor {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}

/// Thread count from the CLI flag, falling back to `PURIFIER_THREADS`, then 0.
pub fn resolve_threads(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| HarnessError::InvalidArgument(format!("{THREADS_ENV}={v:?} is not a thread count"))),
        _ => Ok(0),
    }
}
