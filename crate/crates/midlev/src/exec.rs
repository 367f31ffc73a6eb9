//! Thin facade over the data-parallel loops used by the verifier and the
//! graph builders. With the `parallel` feature (default) the work is spread
//! over rayon; without it the same helpers run sequentially. The explicit
//! `*_seq` variants are always available so benchmarks can compare both.

/// Map over a slice and collect, preserving order.
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if items.len() > 64 {
            return items.par_iter().map(f).collect();
        }
    }
    items.iter().map(f).collect()
}

/// Sequential reference version of [`map_collect`].
pub fn map_collect_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// True iff `pred` holds for every item.
pub fn all<T, F>(items: &[T], pred: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if items.len() > 64 {
            return items.par_iter().all(pred);
        }
    }
    items.iter().all(pred)
}

pub fn all_seq<T, F>(items: &[T], pred: F) -> bool
where
    F: Fn(&T) -> bool,
{
    items.iter().all(pred)
}
