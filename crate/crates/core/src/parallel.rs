//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) and `parallel == true`, items are
//! processed on the rayon pool. Output order always matches input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_indexed<T, U, F>(items: &[T], parallel: bool, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(usize, &T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel && items.len() > 1 {
            return items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect();
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = parallel;
    items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
}

/// Whether this build can run anything in parallel at all.
pub const fn available() -> bool {
    cfg!(feature = "parallel")
}
