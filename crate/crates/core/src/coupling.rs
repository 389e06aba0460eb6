//! The binomial hypergraph model and its coupling with the removal
//! process.
//!
//! An equivalent way to run the triangle removal process is to order all
//! `n³` part-respecting triples uniformly at random and greedily accept
//! every triple that is edge-disjoint from the previously accepted ones.
//! Drawing a binomial prefix length `B ~ Bin(n³, α/n)` of the same
//! permutation yields a binomial random hypergraph; deleting (all at
//! once) every hyperedge that shares two vertices with another leaves a
//! partial Latin square that is contained in the greedy output whenever
//! `B <= αN` and the greedy pass accepted `αN` triples. [`coupled_run`]
//! realizes both ends from one permutation.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bits::BitMatrix;
use crate::model::{PartialLatinSquare, Triple};
use crate::process::RunOutcome;

/// A 3-partite 3-uniform hypergraph on `R ∪ C ∪ S`: distinct
/// part-respecting triples, not necessarily pair-disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    pub n: usize,
    pub edges: Vec<Triple>,
}

/// All `n³` triples in lexicographic `(row, col, sym)` order.
pub fn all_triples(n: usize) -> Vec<Triple> {
    let n32 = n as u32;
    let mut v = Vec::with_capacity(n * n * n);
    for r in 0..n32 {
        for c in 0..n32 {
            for s in 0..n32 {
                v.push(Triple::new(r, c, s));
            }
        }
    }
    v
}

/// Includes each of the `n³` triples independently with probability `p`.
pub fn binomial_sample(n: usize, p: f64, rng: &mut impl Rng) -> Hypergraph {
    assert!((0.0..=1.0).contains(&p), "p must lie in [0, 1]");
    let n32 = n as u32;
    let mut edges = Vec::new();
    for r in 0..n32 {
        for c in 0..n32 {
            for s in 0..n32 {
                if rng.gen_bool(p) {
                    edges.push(Triple::new(r, c, s));
                }
            }
        }
    }
    Hypergraph { n, edges }
}

/// Simultaneously deletes every hyperedge sharing at least two vertices
/// with some other hyperedge. Two part-respecting triples share two
/// vertices exactly when they share a pair, so a triple survives iff each
/// of its three pairs is used exactly once in the input.
pub fn conflict_delete(h: &Hypergraph) -> PartialLatinSquare {
    let n = h.n;
    let mut rc = alloc::vec![0u32; n * n];
    let mut rs = alloc::vec![0u32; n * n];
    let mut cs = alloc::vec![0u32; n * n];
    for t in &h.edges {
        rc[t.row as usize * n + t.col as usize] += 1;
        rs[t.row as usize * n + t.sym as usize] += 1;
        cs[t.col as usize * n + t.sym as usize] += 1;
    }
    let survivors = h.edges.iter().copied().filter(|t| {
        rc[t.row as usize * n + t.col as usize] == 1
            && rs[t.row as usize * n + t.sym as usize] == 1
            && cs[t.col as usize * n + t.sym as usize] == 1
    });
    PartialLatinSquare::from_triples(n, survivors)
        .expect("pairwise pair-disjoint triples form a partial Latin square")
}

/// Scans `order` and accepts each triple that is edge-disjoint from the
/// previously accepted ones. With `accept_limit = Some(m)` the output is
/// truncated to the first `m` accepted triples and marked frozen (at the
/// accepted count) when the whole scan accepts fewer than `m`. Equivalent
/// in distribution to the removal process when `order` is a uniform
/// permutation of all triples of `K_{n,n,n}`.
pub fn greedy_from_order(n: usize, order: &[Triple], accept_limit: Option<usize>) -> RunOutcome {
    let mut rc = BitMatrix::zeros(n, n);
    let mut rs = BitMatrix::zeros(n, n);
    let mut cs = BitMatrix::zeros(n, n);
    let mut square = PartialLatinSquare::empty(n).expect("n >= 1");
    for t in order {
        let (r, c, s) = (t.row as usize, t.col as usize, t.sym as usize);
        if rc.get(r, c) || rs.get(r, s) || cs.get(c, s) {
            continue;
        }
        rc.set(r, c);
        rs.set(r, s);
        cs.set(c, s);
        square.push(*t).expect("edge-disjoint triples never collide");
        if accept_limit.is_some_and(|m| square.len() == m) {
            break;
        }
    }
    let frozen_at = match accept_limit {
        Some(m) if square.len() < m => Some(square.len()),
        _ => None,
    };
    RunOutcome {
        square,
        frozen_at,
        q_trace: None,
    }
}

/// One coupled draw: a single uniform permutation of all `n³` triples
/// drives both the binomial-plus-deletion model (via the binomial prefix
/// `B`) and the greedy form of the removal process.
#[derive(Clone, Debug)]
pub struct CoupledRun {
    /// Conflict-deleted prefix hypergraph.
    pub l_star: PartialLatinSquare,
    /// Greedy pass over the full permutation, truncated to `αN` accepted.
    pub run: RunOutcome,
    /// Binomial prefix length `B ~ Bin(n³, α/n)`.
    pub b: usize,
    /// The step budget `αN`.
    pub alpha_n: usize,
}

impl CoupledRun {
    /// The coupling applies when `B <= αN` and the greedy output did not
    /// freeze; then `l_star ⊆ run.square` must hold.
    pub fn applicable(&self) -> bool {
        self.b <= self.alpha_n && !self.run.is_frozen()
    }

    pub fn invariant_holds(&self) -> bool {
        !self.applicable() || self.l_star.subset_of(&self.run.square)
    }
}

pub fn coupled_run(n: usize, alpha: f64, rng: &mut impl Rng) -> CoupledRun {
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    let big_n = n * n;
    let alpha_n = (alpha * big_n as f64) as usize;
    let mut perm = all_triples(n);
    perm.shuffle(rng);
    // B ~ Bin(n³, α/n), drawn as a Bernoulli count so the prefix of the
    // permutation is exactly a binomial random hypergraph
    let p = alpha / n as f64;
    let b = (0..n * n * n).filter(|_| rng.gen_bool(p)).count();
    let g = Hypergraph {
        n,
        edges: perm[..b].to_vec(),
    };
    let l_star = conflict_delete(&g);
    let run = greedy_from_order(n, &perm, Some(alpha_n));
    CoupledRun {
        l_star,
        run,
        b,
        alpha_n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::for_trial;

    fn t(r: u32, c: u32, s: u32) -> Triple {
        Triple::new(r, c, s)
    }

    #[test]
    fn binomial_extremes() {
        let mut rng = for_trial(1, 0);
        assert!(binomial_sample(3, 0.0, &mut rng).edges.is_empty());
        assert_eq!(binomial_sample(3, 1.0, &mut rng).edges.len(), 27);
    }

    #[test]
    fn binomial_mean_matches() {
        let mut rng = for_trial(2, 0);
        let n = 10;
        let p = 0.05;
        let trials = 2000;
        let total: usize = (0..trials)
            .map(|_| binomial_sample(n, p, &mut rng).edges.len())
            .sum();
        let mean = total as f64 / trials as f64;
        let expect = p * (n * n * n) as f64; // 50
        assert!((mean - expect).abs() < 1.0, "mean {mean}");
    }

    #[test]
    fn conflict_delete_examples() {
        // mutual conflict on the (row, column) pair: both go
        let h = Hypergraph { n: 2, edges: alloc::vec![t(0, 0, 0), t(0, 0, 1)] };
        assert!(conflict_delete(&h).is_empty());

        // sharing a single vertex (the symbol) is fine
        let h = Hypergraph { n: 2, edges: alloc::vec![t(0, 0, 0), t(1, 1, 0)] };
        assert_eq!(conflict_delete(&h).len(), 2);

        // {(1,3,5),(1,3,6),(2,4,6)}: the first two kill each other, the
        // third shares at most one vertex with each
        let h = Hypergraph { n: 2, edges: alloc::vec![t(0, 0, 0), t(0, 0, 1), t(1, 1, 1)] };
        let out = conflict_delete(&h);
        assert_eq!(out.triples(), &[t(1, 1, 1)]);
    }

    #[test]
    fn conflict_delete_idempotent() {
        let mut rng = for_trial(3, 0);
        for _ in 0..200 {
            let h = binomial_sample(6, 0.08, &mut rng);
            let once = conflict_delete(&h);
            let again = conflict_delete(&Hypergraph {
                n: 6,
                edges: once.triples().to_vec(),
            });
            assert!(once.same_triples(&again));
        }
    }

    #[test]
    fn greedy_hand_trace() {
        // ((1,3,5),(1,3,6),(2,4,6)): accepts the first, rejects the
        // duplicate cell, accepts the third
        let order = [t(0, 0, 0), t(0, 0, 1), t(1, 1, 1)];
        let out = greedy_from_order(2, &order, None);
        assert_eq!(out.square.triples(), &[t(0, 0, 0), t(1, 1, 1)]);
        assert!(!out.is_frozen());
    }

    #[test]
    fn greedy_output_is_maximal() {
        let mut rng = for_trial(4, 0);
        for _ in 0..50 {
            let mut perm = all_triples(3);
            perm.shuffle(&mut rng);
            let out = greedy_from_order(3, &perm, None);
            // no rejected triple fits the accepted set
            let leave = crate::leave::LeaveGraph::from_square(&out.square);
            for tr in &perm {
                if !out.square.triples().contains(tr) {
                    assert!(!leave.is_triangle(*tr));
                }
            }
        }
    }

    #[test]
    fn greedy_accept_limit_and_freeze() {
        // four pairwise-disjoint triples: limit 4 reached, no freeze
        let order = [t(0, 0, 0), t(0, 1, 1), t(1, 0, 1), t(1, 1, 0)];
        let out = greedy_from_order(2, &order, Some(4));
        assert!(!out.is_frozen());
        assert_eq!(out.square.len(), 4);

        // an order-2 blocked configuration freezes at 2
        let order = [t(0, 0, 0), t(1, 1, 1), t(0, 1, 1), t(1, 0, 1), t(0, 1, 0)];
        let out = greedy_from_order(2, &order, Some(4));
        assert_eq!(out.frozen_at, Some(2));
    }

    #[test]
    fn coupling_invariant_smoke() {
        let mut rng = for_trial(5, 0);
        let mut applicable = 0;
        for _ in 0..300 {
            let cr = coupled_run(8, 0.3, &mut rng);
            if cr.applicable() {
                applicable += 1;
            }
            assert!(cr.invariant_holds());
        }
        assert!(applicable > 50, "coupling rarely applicable: {applicable}");
    }

    #[test]
    fn disjoint_prefix_is_kept_whole() {
        // B covering exactly 4 pairwise-disjoint triples: l_star equals
        // the prefix and the greedy output contains it
        let perm = [t(0, 0, 0), t(0, 1, 1), t(1, 0, 1), t(1, 1, 0)];
        let g = Hypergraph { n: 2, edges: perm.to_vec() };
        let l_star = conflict_delete(&g);
        assert_eq!(l_star.len(), 4);
        let run = greedy_from_order(2, &perm, Some(4));
        assert!(l_star.subset_of(&run.square));
    }
}
