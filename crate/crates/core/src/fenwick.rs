//! Fenwick (binary indexed) tree over `u64` weights with cumulative-weight
//! selection, used to draw leave-graph cells proportionally to their
//! codegree.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug)]
pub struct FenwickTree {
    // 1-based; tree[0] unused
    tree: Vec<u64>,
    len: usize,
}

impl FenwickTree {
    pub fn new(len: usize) -> Self {
        FenwickTree {
            tree: vec![0; len + 1],
            len,
        }
    }

    pub fn from_values(values: &[u64]) -> Self {
        let len = values.len();
        let mut tree = vec![0u64; len + 1];
        tree[1..].copy_from_slice(values);
        for i in 1..=len {
            let j = i + (i & i.wrapping_neg());
            if j <= len {
                tree[j] = tree[j].wrapping_add(tree[i]);
            }
        }
        FenwickTree { tree, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Adds a signed delta to index `i` (0-based). The caller keeps every
    /// stored weight nonnegative; internally sums use wrapping two's
    /// complement so negative deltas are fine.
    pub fn add(&mut self, i: usize, delta: i64) {
        let mut i = i + 1;
        while i <= self.len {
            self.tree[i] = self.tree[i].wrapping_add(delta as u64);
            i += i & i.wrapping_neg();
        }
    }

    /// Sum of weights at indices `0..=i`.
    pub fn prefix_sum(&self, i: usize) -> u64 {
        let mut i = i + 1;
        let mut acc = 0u64;
        while i > 0 {
            acc = acc.wrapping_add(self.tree[i]);
            i -= i & i.wrapping_neg();
        }
        acc
    }

    pub fn total(&self) -> u64 {
        if self.len == 0 {
            0
        } else {
            self.prefix_sum(self.len - 1)
        }
    }

    /// Smallest index whose cumulative weight exceeds `target`
    /// (i.e. the cell owning the `target`-th unit of mass).
    /// Requires `target < total()`; the returned cell has positive weight.
    pub fn select(&self, mut target: u64) -> usize {
        debug_assert!(target < self.total());
        let mut pos = 0usize;
        let mut step = self.len.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= self.len && self.tree[next] <= target {
                target -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos // 0-based
    }
}
