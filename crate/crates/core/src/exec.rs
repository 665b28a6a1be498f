//! Execution policy for the data-parallel loops (per-mode solves, per-row
//! transforms, per-cylinder integrals).
//!
//! With the `parallel` feature enabled, [`Exec::Parallel`] dispatches to rayon;
//! without it every policy runs sequentially. Results are always collected in
//! index order, so both policies produce bitwise-identical output.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
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

impl Exec {
    /// Evaluates `f(0), .., f(n-1)` and returns the results in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// Applies `f` to consecutive chunks of `data` of length `chunk`.
    pub fn for_each_chunk<T, F>(self, data: &mut [T], chunk: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                data.par_chunks_mut(chunk).enumerate().for_each(|(k, c)| f(k, c));
            }
            _ => data.chunks_mut(chunk).enumerate().for_each(|(k, c)| f(k, c)),
        }
    }
}

/// Caps the global worker pool from `DEGEN_LAB_THREADS` (absent means all
/// cores). Returns the number of worker threads in effect.
pub fn init_from_env() -> usize {
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = std::env::var("DEGEN_LAB_THREADS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
        {
            // A second initialisation (e.g. in tests) keeps the first pool.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
