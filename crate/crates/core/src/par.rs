//! Deterministic chunked parallelism.
//!
//! Work over an interval is cut into chunks of a fixed length that does not
//! depend on the thread count. Chunk results are collected in order and
//! merged sequentially, so outputs are bit-identical for any pool size.
//! Sums go through [`ExactSum`], which makes them independent of the
//! chunking as well.

use rayon::prelude::*;

use crate::sum::ExactSum;

/// Chunk length used by every interval computation.
pub const CHUNK_LEN: u64 = 1 << 15;

/// Splits `(start, end]` into consecutive half-open chunks `(lo, hi]`.
pub fn chunks(start: u64, end: u64, len: u64) -> Vec<(u64, u64)> {
    assert!(len > 0);
    let mut out = Vec::new();
    let mut lo = start;
    while lo < end {
        let hi = end.min(lo.saturating_add(len));
        out.push((lo, hi));
        lo = hi;
    }
    out
}

/// Maps every chunk of `(start, end]` in parallel and returns results in
/// chunk order.
pub fn map_chunks<T, F>(start: u64, end: u64, len: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    chunks(start, end, len).into_par_iter().map(|(lo, hi)| f(lo, hi)).collect()
}

/// Concatenates per-chunk vectors produced by `f` for `(start, end]`.
pub fn concat_chunks<T, F>(start: u64, end: u64, len: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> Vec<T> + Sync + Send,
{
    let parts = map_chunks(start, end, len, f);
    let mut out = Vec::with_capacity(parts.iter().map(Vec::len).sum());
    for p in parts {
        out.extend(p);
    }
    out
}

/// Σ_{start < n ≤ end} f(n), exactly rounded.
pub fn sum_over<F>(start: u64, end: u64, f: F) -> f64
where
    F: Fn(u64) -> f64 + Sync + Send,
{
    let [s] = sums_over_with(start, end, CHUNK_LEN, |n| [f(n)]);
    s
}

/// Several sums over the same range in one pass.
pub fn sums_over<const K: usize, F>(start: u64, end: u64, f: F) -> [f64; K]
where
    F: Fn(u64) -> [f64; K] + Sync + Send,
{
    sums_over_with(start, end, CHUNK_LEN, f)
}

/// As [`sums_over`] with an explicit chunk length.
pub fn sums_over_with<const K: usize, F>(start: u64, end: u64, len: u64, f: F) -> [f64; K]
where
    F: Fn(u64) -> [f64; K] + Sync + Send,
{
    let parts = map_chunks(start, end, len, |lo, hi| {
        let mut acc: [ExactSum; K] = std::array::from_fn(|_| ExactSum::new());
        for n in lo + 1..=hi {
            for (a, x) in acc.iter_mut().zip(f(n)) {
                a.add(x);
            }
        }
        acc
    });
    let mut total: [ExactSum; K] = std::array::from_fn(|_| ExactSum::new());
    for part in &parts {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    total.map(|t| t.value())
}
