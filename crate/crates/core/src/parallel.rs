//! Replication scheduling.
//!
//! With the `parallel` feature, independent replications are spread over a
//! rayon pool; without it they run in order on the calling thread. Results
//! are always returned in replication order, and every replication draws
//! from its own index-derived stream, so output does not depend on the
//! schedule.

/// How replications are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Falls back to [`Execution::Sequential`] when built without `parallel`.
    #[default]
    Parallel,
}

/// `(0..count).map(f)`, collected in index order.
pub fn map_indices<T, F>(count: u64, execution: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        _ => (0..count).map(f).collect(),
    }
}

/// Runs `f` with at most `threads` workers when given.
///
/// Without the `parallel` feature the thread count is ignored.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(threads) = threads {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("failed to build thread pool");
        return pool.install(f);
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    f()
}
