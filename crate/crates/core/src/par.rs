//! Data-parallel sweeps with a sequential fallback.
//!
//! Bulk operations (sampled model checking, implementation verification,
//! census enumeration) funnel their per-item work through [`map_items`].
//! With the default `parallel` feature this fans out over rayon; without it,
//! or inside [`force_sequential`], it is a plain ordered loop.  Results are
//! collected in input order either way, so the two paths are byte-identical
//! as long as each item's work depends only on that item — which every caller
//! guarantees by seeding per-item generators.

use std::sync::atomic::{AtomicBool, Ordering};

static FORCE_SEQ: AtomicBool = AtomicBool::new(false);

/// Runs `f` with the parallel fan-out disabled, for comparisons and
/// benchmarks.  Not reentrant; intended for single-threaded harnesses.
pub fn force_sequential<R>(f: impl FnOnce() -> R) -> R {
    FORCE_SEQ.store(true, Ordering::SeqCst);
    let out = f();
    FORCE_SEQ.store(false, Ordering::SeqCst);
    out
}

pub fn sequential_forced() -> bool {
    FORCE_SEQ.load(Ordering::SeqCst)
}

#[cfg(feature = "parallel")]
pub fn map_items<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Send + Sync,
{
    use rayon::prelude::*;
    if sequential_forced() {
        items.into_iter().map(f).collect()
    } else {
        items.into_par_iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_items<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Send + Sync,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_input_order() {
        let squares = map_items((0u64..1000).collect(), |n| n * n);
        assert_eq!(squares, (0u64..1000).map(|n| n * n).collect::<Vec<_>>());
        let seq = force_sequential(|| map_items((0u64..1000).collect(), |n| n * n));
        assert_eq!(squares, seq);
    }
}
