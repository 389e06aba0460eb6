//! The leave graph of a partial Latin square: the tripartite graph of
//! vertex pairs not yet covered by any triple.
//!
//! Stored as the three pair matrices and their transposes so that every
//! neighbourhood is a word-aligned bit row. On top of that the graph keeps,
//! for every (row, column) cell with its pair still unused, the *codegree*
//! — the number of symbols completing that cell to a triangle — plus a
//! Fenwick tree over the `n²` cells keyed by codegree and the total
//! triangle count `Q`. Sampling a uniformly random triangle is then a
//! cumulative-weight descent (pick the cell with probability
//! `codeg/Q`, then a uniform common symbol), and removing a triangle
//! touches `O(n)` cells.

use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::bits::{and_popcount, and_select_nth, for_each_and_bit, BitMatrix};
use crate::fenwick::FenwickTree;
use crate::model::{Part, PartialLatinSquare, Triple, Vertex};

#[derive(Clone, Debug)]
pub struct LeaveGraph {
    n: usize,
    rc: BitMatrix,
    cr: BitMatrix,
    rs: BitMatrix,
    sr: BitMatrix,
    cs: BitMatrix,
    sc: BitMatrix,
    /// codeg[r * n + c]; zero wherever the (r, c) pair is used
    codeg: Vec<u32>,
    weights: FenwickTree,
    q: u64,
    removed: usize,
}

/// Attempt to remove three pairs that are not all present.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NotATriangle(pub Triple);

impl fmt::Display for NotATriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}) is not a triangle of the leave graph",
            self.0.row, self.0.col, self.0.sym
        )
    }
}

impl core::error::Error for NotATriangle {}

impl LeaveGraph {
    /// Leave graph of the complete `K_{n,n,n}` (empty square).
    pub fn complete(n: usize) -> Self {
        let rc = BitMatrix::ones(n, n);
        let codeg = alloc::vec![n as u32; n * n];
        let weights_src: Vec<u64> = codeg.iter().map(|&c| c as u64).collect();
        LeaveGraph {
            n,
            cr: rc.clone(),
            rs: rc.clone(),
            sr: rc.clone(),
            cs: rc.clone(),
            sc: rc.clone(),
            rc,
            weights: FenwickTree::from_values(&weights_src),
            codeg,
            q: (n as u64).pow(3),
            removed: 0,
        }
    }

    /// Leave graph of `pls`: excludes exactly the pairs its triples cover.
    pub fn from_square(pls: &PartialLatinSquare) -> Self {
        let n = pls.n();
        let mut rc = BitMatrix::ones(n, n);
        let mut cr = BitMatrix::ones(n, n);
        let mut rs = BitMatrix::ones(n, n);
        let mut sr = BitMatrix::ones(n, n);
        let mut cs = BitMatrix::ones(n, n);
        let mut sc = BitMatrix::ones(n, n);
        for t in pls.triples() {
            let (r, c, s) = (t.row as usize, t.col as usize, t.sym as usize);
            rc.clear(r, c);
            cr.clear(c, r);
            rs.clear(r, s);
            sr.clear(s, r);
            cs.clear(c, s);
            sc.clear(s, c);
        }
        let mut codeg = alloc::vec![0u32; n * n];
        let mut q = 0u64;
        for r in 0..n {
            for c in 0..n {
                if rc.get(r, c) {
                    let k = and_popcount(rs.row(r), cs.row(c));
                    codeg[r * n + c] = k;
                    q += k as u64;
                }
            }
        }
        let weights_src: Vec<u64> = codeg.iter().map(|&c| c as u64).collect();
        LeaveGraph {
            n,
            rc,
            cr,
            rs,
            sr,
            cs,
            sc,
            weights: FenwickTree::from_values(&weights_src),
            codeg,
            q,
            removed: pls.len(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Exact number of triangles, maintained incrementally.
    #[inline]
    pub fn triangle_count(&self) -> u64 {
        self.q
    }

    /// Number of triples removed so far (`m`).
    #[inline]
    pub fn removed(&self) -> usize {
        self.removed
    }

    /// Total surviving edges over the three pair classes.
    pub fn edges(&self) -> u64 {
        self.rc.count_all() + self.rs.count_all() + self.cs.count_all()
    }

    /// Density `d(G) = e(G) / (3N)` as an exact fraction.
    pub fn density_rational(&self) -> (u64, u64) {
        let big_n = (self.n * self.n) as u64;
        (self.edges(), 3 * big_n)
    }

    pub fn density(&self) -> f64 {
        let (e, t) = self.density_rational();
        e as f64 / t as f64
    }

    #[inline]
    pub fn codegree(&self, r: usize, c: usize) -> u32 {
        self.codeg[r * self.n + c]
    }

    #[inline]
    pub fn has_rc(&self, r: usize, c: usize) -> bool {
        self.rc.get(r, c)
    }

    #[inline]
    pub fn has_rs(&self, r: usize, s: usize) -> bool {
        self.rs.get(r, s)
    }

    #[inline]
    pub fn has_cs(&self, c: usize, s: usize) -> bool {
        self.cs.get(c, s)
    }

    pub fn is_triangle(&self, t: Triple) -> bool {
        let (r, c, s) = (t.row as usize, t.col as usize, t.sym as usize);
        r < self.n
            && c < self.n
            && s < self.n
            && self.rc.get(r, c)
            && self.rs.get(r, s)
            && self.cs.get(c, s)
    }

    /// Bit row of the neighbours of `v` inside `target` (different part).
    pub fn neighbourhood(&self, v: Vertex, target: Part) -> &[u64] {
        let i = v.local as usize;
        match (v.part, target) {
            (Part::Row, Part::Column) => self.rc.row(i),
            (Part::Column, Part::Row) => self.cr.row(i),
            (Part::Row, Part::Symbol) => self.rs.row(i),
            (Part::Symbol, Part::Row) => self.sr.row(i),
            (Part::Column, Part::Symbol) => self.cs.row(i),
            (Part::Symbol, Part::Column) => self.sc.row(i),
            _ => panic!("neighbourhood requested within part {target}"),
        }
    }

    /// Draws a triangle uniformly at random, or `None` when none is left
    /// (the freeze signal). Cell first with probability `codeg/Q`, then a
    /// uniform common symbol of that cell.
    pub fn sample_triangle(&self, rng: &mut impl Rng) -> Option<Triple> {
        if self.q == 0 {
            return None;
        }
        let target = rng.gen_range(0..self.q);
        let cell = self.weights.select(target);
        let (r, c) = (cell / self.n, cell % self.n);
        let k = self.codeg[cell];
        debug_assert!(k > 0);
        let j = rng.gen_range(0..k);
        let s = and_select_nth(self.rs.row(r), self.cs.row(c), j)
            .expect("codegree and symbol bitsets agree");
        Some(Triple::new(r as u32, c as u32, s as u32))
    }

    /// Removes the triangle `t`: clears its three pairs and updates the
    /// codegrees of every affected cell, the weight index and `Q`.
    pub fn remove_triangle(&mut self, t: Triple) -> Result<(), NotATriangle> {
        if !self.is_triangle(t) {
            return Err(NotATriangle(t));
        }
        let n = self.n;
        let (r, c, s) = (t.row as usize, t.col as usize, t.sym as usize);

        // Cells (r, c') lose symbol s from their common set when the pair
        // (c', s) is present; cells (r', c) when (r', s) is present. The
        // cell (r, c) itself is zeroed wholesale.
        let mut dec_cells: Vec<usize> = Vec::with_capacity(2 * n);
        for_each_and_bit(self.rc.row(r), self.sc.row(s), |c2| {
            if c2 != c {
                dec_cells.push(r * n + c2);
            }
        });
        for_each_and_bit(self.cr.row(c), self.sr.row(s), |r2| {
            if r2 != r {
                dec_cells.push(r2 * n + c);
            }
        });
        for cell in dec_cells {
            debug_assert!(self.codeg[cell] > 0);
            self.codeg[cell] -= 1;
            self.weights.add(cell, -1);
            self.q -= 1;
        }
        let cell = r * n + c;
        let k = self.codeg[cell];
        self.codeg[cell] = 0;
        self.weights.add(cell, -(k as i64));
        self.q -= k as u64;

        self.rc.clear(r, c);
        self.cr.clear(c, r);
        self.rs.clear(r, s);
        self.sr.clear(s, r);
        self.cs.clear(c, s);
        self.sc.clear(s, c);
        self.removed += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{cyclic_square, PartialLatinSquare};

    /// From-scratch triangle enumeration, independent of the bookkeeping.
    fn brute_count(g: &LeaveGraph) -> u64 {
        let n = g.n();
        let mut q = 0;
        for r in 0..n {
            for c in 0..n {
                for s in 0..n {
                    if g.has_rc(r, c) && g.has_rs(r, s) && g.has_cs(c, s) {
                        q += 1;
                    }
                }
            }
        }
        q
    }

    fn brute_codeg(g: &LeaveGraph, r: usize, c: usize) -> u32 {
        if !g.has_rc(r, c) {
            return 0;
        }
        (0..g.n())
            .filter(|&s| g.has_rs(r, s) && g.has_cs(c, s))
            .count() as u32
    }

    #[test]
    fn complete_counts() {
        let g = LeaveGraph::complete(2);
        assert_eq!(g.triangle_count(), 8);
        assert_eq!(brute_count(&g), 8);
        let g3 = LeaveGraph::complete(3);
        assert_eq!(g3.triangle_count(), 27);
        assert_eq!(g3.density_rational(), (27, 27));
    }

    #[test]
    fn from_square_excludes_used_pairs() {
        // pls = {(1,3,5)} at n=2, i.e. local (0,0,0): Q drops 8 -> 4
        let pls = PartialLatinSquare::from_triples(2, [Triple::new(0, 0, 0)]).unwrap();
        let g = LeaveGraph::from_square(&pls);
        assert_eq!(g.triangle_count(), 4);
        assert_eq!(brute_count(&g), 4);
        assert!(!g.has_rc(0, 0) && !g.has_rs(0, 0) && !g.has_cs(0, 0));
        assert_eq!(g.density_rational(), (9, 12));
    }

    #[test]
    fn full_square_leaves_nothing() {
        let sq = cyclic_square(2).unwrap();
        let g = LeaveGraph::from_square(&sq);
        assert_eq!(g.triangle_count(), 0);
        assert_eq!(g.edges(), 0);
        assert_eq!(g.density(), 0.0);
    }

    #[test]
    fn removal_matches_brute_force() {
        let mut g = LeaveGraph::complete(2);
        g.remove_triangle(Triple::new(0, 0, 0)).unwrap();
        assert_eq!(g.triangle_count(), 4);
        assert_eq!(g.triangle_count(), brute_count(&g));
        g.remove_triangle(Triple::new(1, 1, 0)).unwrap();
        assert_eq!(g.triangle_count(), 2);
        // survivors in globals: (1,4,6) and (2,3,6)
        assert!(g.is_triangle(Triple::new(0, 1, 1)));
        assert!(g.is_triangle(Triple::new(1, 0, 1)));
        assert_eq!(brute_count(&g), 2);
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(g.codegree(r, c), brute_codeg(&g, r, c));
            }
        }
        // removing the complement triple of (1,3,5) instead empties the
        // graph outright: (2,4,6) conflicts with all three survivors of
        // the first removal
        let mut g = LeaveGraph::complete(2);
        g.remove_triangle(Triple::new(0, 0, 0)).unwrap();
        g.remove_triangle(Triple::new(1, 1, 1)).unwrap();
        assert_eq!(g.triangle_count(), 0);
        assert_eq!(brute_count(&g), 0);
    }

    #[test]
    fn removing_non_triangle_errors() {
        let mut g = LeaveGraph::complete(2);
        g.remove_triangle(Triple::new(0, 0, 0)).unwrap();
        assert_eq!(
            g.remove_triangle(Triple::new(0, 0, 1)),
            Err(NotATriangle(Triple::new(0, 0, 1)))
        );
        assert_eq!(
            g.remove_triangle(Triple::new(0, 0, 9)),
            Err(NotATriangle(Triple::new(0, 0, 9)))
        );
    }

    #[test]
    fn order_one_run() {
        let mut g = LeaveGraph::complete(1);
        assert_eq!(g.triangle_count(), 1);
        g.remove_triangle(Triple::new(0, 0, 0)).unwrap();
        assert_eq!(g.triangle_count(), 0);
    }

    #[test]
    fn random_runs_stay_consistent() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 3, 4, 5, 6] {
            let mut g = LeaveGraph::complete(n);
            while let Some(t) = g.sample_triangle(&mut rng) {
                g.remove_triangle(t).unwrap();
                assert_eq!(g.triangle_count(), brute_count(&g), "n = {n}");
                for r in 0..n {
                    for c in 0..n {
                        assert_eq!(g.codegree(r, c), brute_codeg(&g, r, c));
                    }
                }
            }
            assert_eq!(g.triangle_count(), 0);
        }
    }

    #[test]
    fn single_triangle_sampled_with_certainty() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut g = LeaveGraph::complete(1);
        for _ in 0..10 {
            assert_eq!(g.sample_triangle(&mut rng), Some(Triple::new(0, 0, 0)));
        }
        g.remove_triangle(Triple::new(0, 0, 0)).unwrap();
        assert_eq!(g.sample_triangle(&mut rng), None);
    }
}
