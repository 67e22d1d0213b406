//! Execution helpers: resource caps and the parallel/sequential switch.
//!
//! Data-parallel inner loops (simplex enumeration, per-degree homology,
//! per-bidegree CDGA ranks, property sweeps) go through the helpers below.
//! With the default `parallel` feature they run on rayon; without it they
//! fall back to plain iterators. Both paths produce identical results:
//! order is preserved and all kernels are pure.

use crate::error::{Error, Result};

/// Resource caps threaded through complex construction and homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of vertices a coset complex may enumerate.
    pub vertex_cap: usize,
    /// Maximum number of nonzero entries in an assembled boundary matrix.
    pub nnz_cap: usize,
    /// Maximum number of monomials per bidegree in CDGA homology.
    pub monomial_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            vertex_cap: 5000,
            nnz_cap: 2_000_000,
            monomial_cap: 200_000,
        }
    }
}

impl Caps {
    /// Caps suitable for in-process verification sweeps, where the caller
    /// accepts long runtimes instead of resource errors.
    pub fn relaxed() -> Self {
        Caps {
            vertex_cap: 200_000,
            nnz_cap: 200_000_000,
            monomial_cap: 10_000_000,
        }
    }

    pub fn check(&self, what: &'static str, needed: usize, cap: usize) -> Result<()> {
        if needed > cap {
            Err(Error::ResourceLimit { what, needed, cap })
        } else {
            Ok(())
        }
    }
}

/// True when this build dispatches work through rayon.
pub const PARALLEL: bool = cfg!(feature = "parallel");

/// Name of the active execution mode, used in benchmark ids and reports.
pub fn mode() -> &'static str {
    if PARALLEL {
        "rayon"
    } else {
        "seq"
    }
}

#[cfg(feature = "parallel")]
pub fn map_vec<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_vec<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Maps `f` over index chunks of `0..n` and concatenates the chunk outputs
/// in index order, so the result is independent of the execution mode.
#[cfg(feature = "parallel")]
pub fn flat_map_chunks<U, F>(n: usize, chunk: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(std::ops::Range<usize>) -> Vec<U> + Sync + Send,
{
    use rayon::prelude::*;
    let chunk = chunk.max(1);
    let ranges: Vec<_> = (0..n)
        .step_by(chunk)
        .map(|s| s..(s + chunk).min(n))
        .collect();
    let mut out = Vec::new();
    for part in ranges.into_par_iter().map(f).collect::<Vec<_>>() {
        out.extend(part);
    }
    out
}

#[cfg(not(feature = "parallel"))]
pub fn flat_map_chunks<U, F>(n: usize, chunk: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(std::ops::Range<usize>) -> Vec<U> + Sync + Send,
{
    let chunk = chunk.max(1);
    let mut out = Vec::new();
    let mut s = 0;
    while s < n {
        out.extend(f(s..(s + chunk).min(n)));
        s += chunk;
    }
    out
}
