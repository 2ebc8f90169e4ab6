//! Row- and index-parallel helpers. Without the `parallel` feature these fall back to plain
//! sequential iteration; output order is identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Fills `out` row by row; `f` receives the row index and the row slice.
pub(crate) fn fill_rows<F>(out: &mut [f64], cols: usize, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    out.par_chunks_mut(cols)
        .enumerate()
        .for_each(|(r, row)| f(r, row));
    #[cfg(not(feature = "parallel"))]
    out.chunks_mut(cols)
        .enumerate()
        .for_each(|(r, row)| f(r, row));
}

/// Ordered map over `0..n`.
pub(crate) fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return (0..n).into_par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    return (0..n).map(f).collect();
}

/// Ordered map over a slice.
pub(crate) fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return items.par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    return items.iter().map(f).collect();
}
