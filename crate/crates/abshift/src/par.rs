//! Internal switch between data-parallel and sequential execution.
//!
//! Heavy scans call [`map_vec`] / [`flat_map_vec`] with a runtime `parallel`
//! flag; public `*_seq` entry points pass `false` so both code paths exist in
//! every build, and disabling the `parallel` cargo feature removes the rayon
//! dependency entirely. Both paths produce identical, input-ordered output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn map_vec<T, U, F>(items: Vec<T>, parallel: bool, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.into_par_iter().map(f).collect();
    }
    let _ = parallel;
    items.into_iter().map(f).collect()
}

pub(crate) fn flat_map_vec<T, U, F>(items: Vec<T>, parallel: bool, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> Vec<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.into_par_iter().flat_map_iter(f).collect();
    }
    let _ = parallel;
    items.into_iter().flat_map(f).collect()
}
