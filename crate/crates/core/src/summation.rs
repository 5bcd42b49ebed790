//! Compensated accumulation and a deterministic block-parallel reduction.

use crate::scalar::Real;
use rayon::prelude::*;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    compensation: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: T) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another accumulator in, keeping both compensation terms.
    #[inline]
    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.compensation
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Sums `term(i)` for `i` in `first..=last`.
///
/// The index range is cut into fixed blocks of `block` consecutive indices.
/// Blocks are evaluated in parallel, each with its own compensated accumulator,
/// and the partials are combined strictly in increasing block order. The block
/// layout depends only on `block`, never on the thread count, so the result is
/// bit-identical for any pool size.
pub fn ordered_block_sum<T, F>(first: u64, last: u64, block: u64, term: F) -> T
where
    T: Real,
    F: Fn(u64) -> T + Sync,
{
    if last < first {
        return T::zero();
    }
    let block = block.max(1);
    let n_blocks = (last - first) / block + 1;
    let partials: Vec<CompensatedSum<T>> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let lo = first + b * block;
            let hi = (lo + block - 1).min(last);
            (lo..=hi).map(&term).collect()
        })
        .collect();
    let mut total = CompensatedSum::new();
    for p in &partials {
        total.merge(p);
    }
    total.value()
}
