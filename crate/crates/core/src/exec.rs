//! Data-parallel execution over sample indices.
//!
//! Every sweep in the crate (sphere scans, Monte Carlo batches, random case
//! sweeps) is written as an indexed map whose results are collected in index
//! order. The reduction that follows is always sequential, so outputs are
//! bit-identical whichever strategy runs the map.
//!
//! With the `parallel` feature disabled, [`Execution::Parallel`] silently runs
//! sequentially.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// `(0..len).map(f)` collected in index order.
    pub fn map_indexed<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).collect()
            }
            _ => (0..len).map(f).collect(),
        }
    }

    /// Like [`map_indexed`](Self::map_indexed) for fallible work; the first
    /// error in index order wins.
    pub fn try_map_indexed<T, F>(self, len: usize, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize) -> Result<T> + Sync + Send,
    {
        self.map_indexed(len, f).into_iter().collect()
    }
}

/// Size the global worker pool. Only the first call has an effect.
#[cfg(feature = "parallel")]
pub fn configure_threads(threads: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Config(format!("cannot configure {threads} worker threads: {e}")))
}

#[cfg(not(feature = "parallel"))]
pub fn configure_threads(threads: usize) -> Result<()> {
    if threads == 0 {
        return Err(Error::Config("thread count must be positive".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_and_keep_order() {
        let f = |i: usize| (i as f64).sqrt().sin();
        let a = Execution::Sequential.map_indexed(1000, f);
        let b = Execution::Parallel.map_indexed(1000, f);
        assert_eq!(a, b);
    }

    #[test]
    fn first_error_wins() {
        let r = Execution::Parallel.try_map_indexed(100, |i| {
            if i >= 40 {
                Err(Error::Domain(format!("{i}")))
            } else {
                Ok(i)
            }
        });
        assert_eq!(r, Err(Error::Domain("40".into())));
    }
}
