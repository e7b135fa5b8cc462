use std::num::NonZeroUsize;
use std::thread;

use stochgrav_core::exec::Executor;

/// Runs jobs on scoped OS threads, each worker taking one contiguous run of
/// indices. Results come back in index order.
#[derive(Debug, Clone, Copy)]
pub struct Threaded {
    workers: NonZeroUsize,
}

impl Threaded {
    pub fn new(workers: NonZeroUsize) -> Self {
        Threaded { workers }
    }
}

impl Executor for Threaded {
    fn map_indexed<T, F>(&self, n_jobs: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        let workers = self.workers.get().min(n_jobs);
        if workers <= 1 {
            return (0..n_jobs).map(job).collect();
        }
        let chunk = n_jobs.div_ceil(workers);
        let job = &job;
        thread::scope(|s| {
            let handles: Vec<_> = (0..n_jobs)
                .step_by(chunk)
                .map(|start| {
                    let end = (start + chunk).min(n_jobs);
                    s.spawn(move || (start..end).map(job).collect::<Vec<T>>())
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().unwrap_or_else(|e| std::panic::resume_unwind(e)))
                .collect()
        })
    }
}
