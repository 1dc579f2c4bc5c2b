//! Data-parallel primitives.
//!
//! With the `parallel` feature the loops run on the rayon pool; without it they
//! run sequentially. Reductions always split the index range into fixed-size
//! chunks and combine the chunk partials in index order, so results are
//! bit-identical for any thread count.

use num_complex::Complex64;

/// Indices per reduction chunk. Part of the reduction tree, so changing it
/// changes low-order bits of every sum.
pub const CHUNK: usize = 1024;

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "GA_HARMONIC_THREADS";

/// Evaluates `f` at `0..len`, preserving order.
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Fills `out[i] = f(i)` in place.
pub fn fill_indexed<T, F>(out: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        out.par_iter_mut().enumerate().for_each(|(i, v)| *v = f(i));
    }
    #[cfg(not(feature = "parallel"))]
    {
        for (i, v) in out.iter_mut().enumerate() {
            *v = f(i);
        }
    }
}

fn chunk_partials<T, F>(len: usize, zero: T, f: F) -> Vec<T>
where
    T: Send + Sync + Copy + std::ops::Add<Output = T>,
    F: Fn(usize) -> T + Sync + Send,
{
    let chunks = len.div_ceil(CHUNK);
    map_indexed(chunks, |c| {
        let start = c * CHUNK;
        let end = (start + CHUNK).min(len);
        (start..end).fold(zero, |acc, i| acc + f(i))
    })
}

fn pairwise<T>(values: &[T], zero: T) -> T
where
    T: Copy + std::ops::Add<Output = T>,
{
    match values.len() {
        0 => zero,
        1 => values[0],
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise(lo, zero) + pairwise(hi, zero)
        }
    }
}

/// Deterministic sum of `f(i)` over `0..len`.
pub fn sum_complex<F>(len: usize, f: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync + Send,
{
    let zero = Complex64::new(0.0, 0.0);
    pairwise(&chunk_partials(len, zero, f), zero)
}

/// Deterministic sum of `f(i)` over `0..len`.
pub fn sum_real<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    pairwise(&chunk_partials(len, 0.0, f), 0.0)
}

/// Sizes the global pool from [`THREADS_ENV`] if it is set. Returns the thread
/// count in effect. Calling it after the pool has started is harmless.
pub fn configure_threads_from_env() -> usize {
    let requested = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = requested {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = requested;
        1
    }
}

/// Runs `op` on a dedicated pool with `threads` workers (sequentially when the
/// `parallel` feature is off).
pub fn with_threads<R: Send>(threads: usize, op: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build() {
            Ok(pool) => pool.install(op),
            Err(_) => op(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        op()
    }
}
