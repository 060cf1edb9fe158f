//! Sequential/parallel dispatch. Parallel paths need the `parallel` feature;
//! without it every mode runs sequentially and results are identical.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps every item, preserving order.
pub fn map<I, T, F>(exec: Execution, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Runs `f` over items until one succeeds and reports the lowest-index success
/// together with the statistics of every item up to and including it.
///
/// `f` receives a cancellation probe that turns true once some earlier item
/// has succeeded; its statistics are then discarded, so the returned
/// statistics match a sequential run exactly.
pub fn first_success<I, T, S, F>(exec: Execution, items: &[I], f: F) -> (Option<(usize, T)>, Vec<S>)
where
    I: Sync,
    T: Send,
    S: Send,
    F: Fn(&I, &dyn Fn() -> bool) -> (Option<T>, S) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && items.len() > 1 {
        use rayon::prelude::*;
        use std::sync::atomic::{AtomicUsize, Ordering};
        let winner = AtomicUsize::new(usize::MAX);
        let mut results: Vec<(Option<T>, S)> = items
            .par_iter()
            .enumerate()
            .map(|(idx, item)| {
                let cancelled = || winner.load(Ordering::Relaxed) < idx;
                let out = f(item, &cancelled);
                if out.0.is_some() {
                    winner.fetch_min(idx, Ordering::Relaxed);
                }
                out
            })
            .collect();
        let cut = winner.load(Ordering::Relaxed);
        let keep = if cut == usize::MAX { results.len() } else { cut + 1 };
        results.truncate(keep);
        let mut stats = Vec::with_capacity(keep);
        let mut found = None;
        for (idx, (hit, s)) in results.into_iter().enumerate() {
            stats.push(s);
            if idx == cut {
                found = hit.map(|t| (idx, t));
            }
        }
        return (found, stats);
    }
    let _ = exec;
    let never = || false;
    let mut stats = Vec::new();
    for (idx, item) in items.iter().enumerate() {
        let (hit, s) = f(item, &never);
        stats.push(s);
        if let Some(t) = hit {
            return (Some((idx, t)), stats);
        }
    }
    (None, stats)
}
