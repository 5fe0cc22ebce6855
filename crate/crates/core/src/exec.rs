//! Range-partitioned execution of exhaustive loops.
//!
//! Every exhaustive scan in this crate is written as a function of an index
//! range. An [`Executor`] decides how `0..len` is cut up and where the pieces
//! run; results always come back in range order, so merged output does not
//! depend on how many workers were used.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

pub trait Executor: Sync {
    /// Evaluates `f` on contiguous ranges covering `0..len` and returns the
    /// results ordered by range start.
    fn map_ranges<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Range<usize>) -> T + Sync + Send;

    fn threads(&self) -> usize {
        1
    }
}

/// Runs everything on the calling thread as a single range.
#[derive(Clone, Copy, Debug, Default)]
pub struct Serial;

impl Executor for Serial {
    fn map_ranges<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Range<usize>) -> T + Sync + Send,
    {
        vec![f(0..len)]
    }
}

/// Cuts `0..len` into at most `parts` nearly equal contiguous ranges.
pub fn split_ranges(len: usize, parts: usize) -> Vec<Range<usize>> {
    let parts = parts.max(1).min(len.max(1));
    let base = len / parts;
    let extra = len % parts;
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for i in 0..parts {
        let size = base + usize::from(i < extra);
        out.push(start..start + size);
        start += size;
    }
    out
}
