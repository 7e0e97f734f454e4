//! Thin data-parallel helpers. With the `parallel` feature (default) the
//! hot loops fan out over rayon; without it the same entry points run the
//! sequential bodies below. Benches compare both paths directly.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        seq_map_collect(items, f)
    }
}

pub fn seq_map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Filter the integer range `0..n` by `keep`, preserving order.
pub fn filter_range<F>(n: u64, keep: F) -> Vec<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().filter(|m| keep(*m)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        seq_filter_range(n, keep)
    }
}

pub fn seq_filter_range<F>(n: u64, keep: F) -> Vec<u64>
where
    F: Fn(u64) -> bool,
{
    (0..n).filter(|m| keep(*m)).collect()
}

/// Run two closures, in parallel when enabled.
pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    {
        rayon::join(a, b)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (a(), b())
    }
}
