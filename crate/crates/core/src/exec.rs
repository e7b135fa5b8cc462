//! Block-partitioned execution and order-independent reduction.
//!
//! Monte Carlo work is cut into fixed-size blocks whose random streams are
//! derived from `(seed, block index)` alone. An [`Executor`] may evaluate the
//! blocks in any order or on any number of workers; results are always
//! returned in block-index order and folded with [`pairwise_reduce`], so the
//! final numbers do not depend on how the work was scheduled.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

/// Number of samples handled by one Monte Carlo block.
pub const BLOCK_LEN: usize = 1 << 14;

/// Runs independent, index-addressed jobs.
pub trait Executor {
    /// Evaluates `job(i)` for `i in 0..n_jobs` and returns the results
    /// ordered by `i`.
    fn map_indexed<T, F>(&self, n_jobs: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync;
}

/// Evaluates jobs one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<T, F>(&self, n_jobs: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        (0..n_jobs).map(job).collect()
    }
}

/// Splits `n` samples into `(start, len)` blocks of at most [`BLOCK_LEN`].
pub fn blocks(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n.div_ceil(BLOCK_LEN)).map(move |b| {
        let start = b * BLOCK_LEN;
        (start, BLOCK_LEN.min(n - start))
    })
}

/// Folds `items` with `combine` as a balanced binary tree in index order.
pub fn pairwise_reduce<T, F>(mut items: Vec<T>, combine: F) -> Option<T>
where
    F: Fn(T, T) -> T,
{
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(combine(a, b)),
                None => next.push(a),
            }
        }
        items = next;
    }
    items.pop()
}

/// Streaming mean and sum of squared deviations (Welford), mergeable with
/// Chan's update.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        Moments {
            count,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * w,
        }
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }

    pub fn from_slice(xs: &[f64]) -> Moments {
        let mut m = Moments::default();
        for &x in xs {
            m.push(x);
        }
        m
    }
}
