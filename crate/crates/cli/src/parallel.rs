//! A rayon-backed executor for the extremal searches.

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};
use rturan_core::search::{BranchOutcome, Executor};

/// Runs search branches on a dedicated pool of `workers` threads.
pub struct RayonExecutor {
    pool: ThreadPool,
}

impl RayonExecutor {
    pub fn new(workers: usize) -> Result<Self, ThreadPoolBuildError> {
        let pool = ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
        Ok(RayonExecutor { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for RayonExecutor {
    fn run(&self, count: usize, task: &(dyn Fn(usize) -> BranchOutcome + Sync)) -> Vec<BranchOutcome> {
        // `with_max_len(1)` hands out branches one at a time: they vary
        // wildly in cost and there are few of them.
        self.pool
            .install(|| (0..count).into_par_iter().with_max_len(1).map(task).collect())
    }
}
