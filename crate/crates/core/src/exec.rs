//! Evaluation strategy for independent grid points.
//!
//! With the `parallel` feature (on by default) [`Exec::Parallel`] fans the
//! work out over a rayon pool. Without it, every strategy runs on the calling
//! thread. Results are always returned in input order, so the output never
//! depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// `jobs = None` uses the global rayon pool.
    #[default]
    Parallel,
    ParallelWith { jobs: usize },
}

impl Exec {
    pub fn with_jobs(jobs: Option<usize>) -> Self {
        match jobs {
            None => Exec::Parallel,
            Some(0) | Some(1) => Exec::Sequential,
            Some(jobs) => Exec::ParallelWith { jobs },
        }
    }

    /// Whether this build can actually run work concurrently.
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match *self {
            Exec::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::ParallelWith { jobs } => match rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
            {
                Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
                Err(_) => items.par_iter().map(f).collect(),
            },
            #[cfg(not(feature = "parallel"))]
            Exec::Parallel | Exec::ParallelWith { .. } => items.iter().map(f).collect(),
        }
    }

    /// Like [`Exec::map`] but for fallible work. Every item is evaluated;
    /// the reported error is the one with the lowest index.
    pub fn try_map<T, R, F>(&self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Result<R> + Sync + Send,
    {
        self.map(items, f).into_iter().collect()
    }
}
