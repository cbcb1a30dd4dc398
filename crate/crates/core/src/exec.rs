//! Sequential / data-parallel execution switch.
//!
//! Batch operations take an [`Exec`] so benches and tests can run both paths
//! in one binary. Without the `parallel` feature every mode runs sequentially.
//! Reductions that involve floats always go through [`pairwise_sum`] over an
//! index-ordered vector, so results do not depend on thread count.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Maps `f` over `range`, preserving index order in the output.
    pub fn map_range<T, F>(self, range: Range<u64>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }

    /// Maps `f` over a slice, preserving order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Splits `range` into fixed chunks, folds each chunk with `fold`, and
    /// combines the chunk results left to right with `merge`.
    ///
    /// Chunk boundaries depend only on `chunk`, never on the thread pool.
    pub fn fold_chunks<A, F, M>(self, range: Range<u64>, chunk: u64, fold: F, merge: M) -> Option<A>
    where
        A: Send,
        F: Fn(Range<u64>) -> A + Sync + Send,
        M: Fn(A, A) -> A,
    {
        let chunk = chunk.max(1);
        let start = range.start;
        let end = range.end;
        if start >= end {
            return None;
        }
        let n_chunks = (end - start).div_ceil(chunk);
        let parts = self.map_range(0..n_chunks, |i| {
            let lo = start + i * chunk;
            fold(lo..(lo + chunk).min(end))
        });
        parts.into_iter().reduce(merge)
    }
}

/// Sizes the global worker pool. Returns the number of workers in use, which
/// is 1 without the `parallel` feature.
pub fn init_threads(n: usize) -> crate::Result<usize> {
    #[cfg(feature = "parallel")]
    {
        if n > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| crate::Error::resource(format!("thread pool of {n}"), e))?;
        }
        Ok(rayon::current_num_threads())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
        Ok(1)
    }
}

/// Pairwise (tree) summation with Neumaier compensation at the leaves.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 64;
    if xs.len() <= LEAF {
        return neumaier_sum(xs.iter().copied());
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Compensated sum of a stream of floats.
pub fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = NeumaierSum::default();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Running Neumaier (improved Kahan) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_chunks_matches_across_modes() {
        let f = |r: Range<u64>| r.map(|x| x * x).sum::<u64>();
        let a = Exec::Sequential.fold_chunks(0..10_001, 97, f, |x, y| x + y);
        let b = Exec::Parallel.fold_chunks(0..10_001, 97, f, |x, y| x + y);
        assert_eq!(a, b);
        assert_eq!(a, Some((0..10_001u64).map(|x| x * x).sum()));
        assert_eq!(Exec::Parallel.fold_chunks(5..5, 3, f, |x, y| x + y), None);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(neumaier_sum(xs), 2.0);
        let many: Vec<f64> = (0..10_000).map(|_| 0.1).collect();
        assert!((pairwise_sum(&many) - 1000.0).abs() < 1e-10);
    }
}
