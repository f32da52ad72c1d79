//! Thin wrappers that fan work out over rayon when the `parallel` feature is
//! enabled and fall back to plain iterators otherwise. Every helper is
//! deterministic: reductions are order-insensitive or tie-broken explicitly.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n` and return the minimum.
pub(crate) fn min_over<T, F>(n: usize, f: F) -> Option<T>
where
    T: Ord + Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).min()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).min()
    }
}

/// Map `f` over the items and collect, preserving input order.
pub(crate) fn map_collect<I, T, F>(items: Vec<I>, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// First `Some` produced by `f` in input order, or `None`.
pub(crate) fn find_map_first<I, T, F>(items: Vec<I>, f: F) -> Option<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().find_map(f)
    }
}

/// Fold every item with `f` and merge with `merge`; `init` must be neutral.
pub(crate) fn fold_reduce<I, T, F, M>(items: Vec<I>, init: T, f: F, merge: M) -> T
where
    I: Send + Sync,
    T: Send + Sync + Clone,
    F: Fn(T, &I) -> T + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items
            .par_iter()
            .fold(|| init.clone(), &f)
            .reduce(|| init.clone(), merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = merge;
        items.iter().fold(init, f)
    }
}
