//! Data-parallel helpers with a sequential fallback.
//!
//! The verification suites fan out over many independent exact computations
//! (associativity triples, table rows, curvature tuples).  With the `parallel`
//! feature (default) these run on rayon; without it the sequential versions
//! are used.  `map_seq`/`for_each_seq` are always available so benches can
//! compare both paths under a single build.

/// Map a slice through `f`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_items<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(items: &[T], f: F) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Map a slice through `f`, preserving order.
#[cfg(not(feature = "parallel"))]
pub fn map_items<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(items: &[T], f: F) -> Vec<U> {
    map_seq(items, f)
}

/// Sequential map, always compiled.
pub fn map_seq<T, U, F: Fn(&T) -> U>(items: &[T], f: F) -> Vec<U> {
    items.iter().map(f).collect()
}

/// True when the parallel path is compiled in.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
