//! Thread-pool plumbing for the data-parallel paths.
//!
//! The `parallel` feature (on by default) backs bulk enumeration and
//! sampling with a rayon pool. `COMPRECO_THREADS` caps the pool size:
//! unset or `0` means automatic, `1` forces the sequential path, any other
//! value fixes the worker count. Without the feature everything runs
//! sequentially and the env var is ignored.

#[cfg(feature = "parallel")]
use std::sync::OnceLock;

pub const THREADS_ENV: &str = "COMPRECO_THREADS";

fn configured_threads() -> Option<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) | Err(_) => None,
            Ok(n) => Some(n),
        },
        Err(_) => None,
    }
}

/// Number of workers bulk operations will use.
#[cfg(feature = "parallel")]
pub fn max_threads() -> usize {
    match pool() {
        Some(p) => p.current_num_threads(),
        None => 1,
    }
}

/// Number of workers bulk operations will use.
#[cfg(not(feature = "parallel"))]
pub fn max_threads() -> usize {
    1
}

#[cfg(feature = "parallel")]
pub(crate) fn pool() -> Option<&'static rayon::ThreadPool> {
    static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = configured_threads() {
            if n == 1 {
                return None;
            }
            builder = builder.num_threads(n);
        }
        Some(builder.build().expect("building the worker pool"))
    })
    .as_ref()
}

/// Runs `f` inside the configured pool, or directly when parallelism is off.
#[cfg(feature = "parallel")]
pub(crate) fn run<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    match pool() {
        Some(p) => p.install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn run<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let _ = configured_threads();
    f()
}
