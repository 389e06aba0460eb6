//! Row-major bit matrices over `u64` words.
//!
//! Every adjacency structure in this crate is an `n x n` boolean matrix
//! whose rows are scanned with word-parallel AND / popcount, so rows are
//! padded to whole words and bits past column `n` are kept zero.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    /// All-ones matrix (trailing pad bits stay zero).
    pub fn ones(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        if cols == 0 {
            return m;
        }
        let full = cols / 64;
        let tail = cols % 64;
        for r in 0..rows {
            let base = r * m.words_per_row;
            for w in 0..full {
                m.bits[base + w] = !0;
            }
            if tail > 0 {
                m.bits[base + full] = (1u64 << tail) - 1;
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        let w = self.bits[r * self.words_per_row + c / 64];
        (w >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.bits[r * self.words_per_row + c / 64] |= 1u64 << (c % 64);
    }

    #[inline]
    pub fn clear(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.bits[r * self.words_per_row + c / 64] &= !(1u64 << (c % 64));
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        let base = r * self.words_per_row;
        &self.bits[base..base + self.words_per_row]
    }

    pub fn count_row(&self, r: usize) -> u32 {
        self.row(r).iter().map(|w| w.count_ones()).sum()
    }

    pub fn count_all(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// Popcount of the AND of two equal-length word slices.
#[inline]
pub fn and_popcount(a: &[u64], b: &[u64]) -> u32 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// Popcount of the AND of several word slices (empty input counts nothing).
pub fn multi_and_popcount(rows: &[&[u64]]) -> u32 {
    match rows {
        [] => 0,
        [a] => a.iter().map(|w| w.count_ones()).sum(),
        [first, rest @ ..] => {
            let mut acc = 0;
            for (w, word) in first.iter().enumerate() {
                let mut v = *word;
                for r in rest {
                    v &= r[w];
                }
                acc += v.count_ones();
            }
            acc
        }
    }
}

/// Index of the `k`-th set bit (0-based) of `a AND b`, if it exists.
pub fn and_select_nth(a: &[u64], b: &[u64], mut k: u32) -> Option<usize> {
    debug_assert_eq!(a.len(), b.len());
    for (w, (x, y)) in a.iter().zip(b).enumerate() {
        let mut v = x & y;
        let ones = v.count_ones();
        if k < ones {
            for _ in 0..k {
                v &= v - 1; // drop lowest set bit
            }
            return Some(w * 64 + v.trailing_zeros() as usize);
        }
        k -= ones;
    }
    None
}

/// Calls `f` with the index of every set bit of `a AND b`.
pub fn for_each_and_bit(a: &[u64], b: &[u64], mut f: impl FnMut(usize)) {
    debug_assert_eq!(a.len(), b.len());
    for (w, (x, y)) in a.iter().zip(b).enumerate() {
        let mut v = x & y;
        while v != 0 {
            f(w * 64 + v.trailing_zeros() as usize);
            v &= v - 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_has_exact_count() {
        for cols in [1, 5, 63, 64, 65, 130] {
            let m = BitMatrix::ones(3, cols);
            assert_eq!(m.count_all(), 3 * cols as u64);
            assert_eq!(m.count_row(0), cols as u32);
        }
    }

    #[test]
    fn set_clear_get() {
        let mut m = BitMatrix::zeros(4, 100);
        m.set(2, 99);
        m.set(2, 0);
        assert!(m.get(2, 99) && m.get(2, 0) && !m.get(2, 50));
        m.clear(2, 99);
        assert!(!m.get(2, 99));
        assert_eq!(m.count_all(), 1);
    }

    #[test]
    fn select_and_iterate_agree() {
        let mut a = BitMatrix::zeros(1, 130);
        let mut b = BitMatrix::ones(1, 130);
        for c in [0, 3, 64, 77, 129] {
            a.set(0, c);
        }
        b.clear(0, 77);
        let mut seen = alloc::vec::Vec::new();
        for_each_and_bit(a.row(0), b.row(0), |i| seen.push(i));
        assert_eq!(seen, alloc::vec![0, 3, 64, 129]);
        assert_eq!(and_popcount(a.row(0), b.row(0)), 4);
        for (k, want) in seen.iter().enumerate() {
            assert_eq!(and_select_nth(a.row(0), b.row(0), k as u32), Some(*want));
        }
        assert_eq!(and_select_nth(a.row(0), b.row(0), 4), None);
    }

    #[test]
    fn multi_and_counts() {
        let mut a = BitMatrix::ones(1, 70);
        let mut b = BitMatrix::ones(1, 70);
        let c = BitMatrix::ones(1, 70);
        a.clear(0, 5);
        b.clear(0, 69);
        assert_eq!(multi_and_popcount(&[a.row(0), b.row(0), c.row(0)]), 68);
        assert_eq!(multi_and_popcount(&[]), 0);
    }
}
