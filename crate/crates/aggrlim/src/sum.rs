//! Compensated summation and deterministic chunked reduction.
//!
//! Panel aggregation adds up to `N * n ~ 1e9` terms; naive accumulation
//! loses several digits and, worse, makes the result depend on the order
//! work-stealing happens to produce. Everything here is fixed-order:
//! the chunk size is a constant, chunks are combined in index order, and
//! the result is bit-identical no matter how many threads computed the
//! chunks.

use rayon::prelude::*;

/// Neumaier variant of Kahan summation: running sum plus a compensation
/// term that also captures the case where the incoming term dominates.
#[derive(Clone, Copy, Debug, Default)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of a slice, left to right.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    let mut acc = Accumulator::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Fixed chunk width for deterministic parallel reductions. Independent
/// of thread count by design; changing it changes reduction order and
/// therefore the low bits of results, so treat it as part of the output
/// contract.
pub const REDUCTION_CHUNK: usize = 4096;

/// Sums `f(0) + f(1) + ... + f(count - 1)` where each `f(i)` is a vector
/// of `width` components, reducing chunks of [`REDUCTION_CHUNK`] indices
/// in parallel and combining chunk totals in index order.
///
/// The reduction tree is a function of `count` and `width` alone, so the
/// result is bit-identical for any thread count, including 1.
pub fn chunked_vector_sum<F>(count: usize, width: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut [Accumulator]) + Sync,
{
    let n_chunks = count.div_ceil(REDUCTION_CHUNK).max(1);
    let partials: Vec<Vec<Accumulator>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * REDUCTION_CHUNK;
            let hi = (lo + REDUCTION_CHUNK).min(count);
            let mut acc = vec![Accumulator::new(); width];
            for i in lo..hi {
                f(i, &mut acc);
            }
            acc
        })
        .collect();

    let mut total = vec![Accumulator::new(); width];
    for chunk in &partials {
        for (t, a) in total.iter_mut().zip(chunk) {
            t.add(a.value());
        }
    }
    total.iter().map(Accumulator::value).collect()
}
