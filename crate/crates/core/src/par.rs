//! Data-parallel execution of independent indexed tasks.
//!
//! With the `parallel` feature the tasks run on the rayon pool; without it,
//! or when [`Execution::Sequential`] is requested, they run in index order.
//! Output order is always the index order, so callers see identical results.

use crate::config::Execution;

pub fn map_indexed<T, F>(count: usize, execution: Execution, task: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(task).collect()
        }
        _ => (0..count).map(task).collect(),
    }
}

/// Returns the lowest index whose task yields `Some`, evaluating tasks in
/// parallel when allowed. Deterministic: the winner never depends on scheduling.
pub fn find_first<T, F>(count: usize, execution: Execution, task: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Send + Sync,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count)
                .into_par_iter()
                .find_map_first(|i| task(i).map(|t| (i, t)))
        }
        _ => (0..count).find_map(|i| task(i).map(|t| (i, t))),
    }
}
