//! Thread-pool executor.

use std::ops::Range;

use rayon::prelude::*;
use unital_core::exec::{split_ranges, Executor};

/// Runs range pieces on a private rayon pool. Results come back in range
/// order, so output never depends on the thread count.
pub struct Pool {
    pool: rayon::ThreadPool,
    threads: usize,
}

impl Pool {
    pub fn new(threads: usize) -> Result<Pool, rayon::ThreadPoolBuildError> {
        let threads = threads.max(1);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(Pool { pool, threads })
    }
}

impl Executor for Pool {
    fn map_ranges<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Range<usize>) -> T + Sync + Send,
    {
        if self.threads == 1 {
            return vec![f(0..len)];
        }
        let ranges = split_ranges(len, self.threads * 4);
        self.pool.install(|| ranges.into_par_iter().map(&f).collect())
    }

    fn threads(&self) -> usize {
        self.threads
    }
}
