//! Data-parallel helpers with a sequential fallback.
//!
//! Work is always split into fixed-size chunks whose results are returned in
//! chunk order, so a reduction performed by the caller over the returned
//! vector is independent of the number of worker threads.

use std::ops::Range;

/// Execution strategy for the heavy loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Uses the ambient rayon pool. Falls back to sequential when the crate is
    /// built without the `parallel` feature.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

fn chunk_ranges(len: usize, chunk: usize) -> Vec<Range<usize>> {
    let chunk = chunk.max(1);
    (0..len.div_ceil(chunk))
        .map(|c| c * chunk..((c + 1) * chunk).min(len))
        .collect()
}

/// Applies `f` to consecutive index ranges of at most `chunk` elements.
pub fn map_chunks<T, F>(exec: Exec, len: usize, chunk: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    let ranges = chunk_ranges(len, chunk);
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            ranges.into_par_iter().map(f).collect()
        }
        _ => ranges.into_iter().map(f).collect(),
    }
}

/// Element-wise map over `0..len`, order preserving.
pub fn map_indexed<T, F>(exec: Exec, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..len).into_par_iter().map(f).collect()
        }
        _ => (0..len).map(f).collect(),
    }
}

/// Runs `f` inside a pool of `workers` threads (0 = library default).
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if workers > 0 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
                return pool.install(f);
            }
        }
        f()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        f()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_range_in_order() {
        let r = map_chunks(Exec::default(), 10, 3, |r| r);
        assert_eq!(r, vec![0..3, 3..6, 6..9, 9..10]);
        assert!(map_chunks(Exec::Sequential, 0, 4, |r| r).is_empty());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let a = map_indexed(Exec::Sequential, 100, |i| (i as f64).sqrt());
        let b = with_workers(3, || map_indexed(Exec::Parallel, 100, |i| (i as f64).sqrt()));
        assert_eq!(a, b);
    }
}
