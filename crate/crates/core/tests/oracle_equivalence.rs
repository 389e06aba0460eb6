//! Incremental bookkeeping against from-scratch recounts, and sampler
//! uniformity on fixed leave graphs.

use std::collections::HashMap;

use trp_core::leave::LeaveGraph;
use trp_core::model::{PartialLatinSquare, Triple};
use trp_core::process::{Step, TrpState};
use trp_core::rng::for_trial;

fn brute_triangle_count(g: &LeaveGraph) -> u64 {
    let n = g.n();
    let mut q = 0u64;
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

fn brute_codegree(g: &LeaveGraph, r: usize, c: usize) -> u32 {
    if !g.has_rc(r, c) {
        return 0;
    }
    (0..g.n())
        .filter(|&s| g.has_rs(r, s) && g.has_cs(c, s))
        .count() as u32
}

#[test]
fn bookkeeping_matches_recount_after_every_step() {
    for n in 3..=8usize {
        for seed in 0..4u64 {
            let start = PartialLatinSquare::empty(n).unwrap();
            let mut st = TrpState::from_start_with_rng(start, for_trial(seed, 0));
            loop {
                assert_eq!(
                    st.leave().triangle_count(),
                    brute_triangle_count(st.leave()),
                    "n={n} seed={seed}"
                );
                for r in 0..n {
                    for c in 0..n {
                        assert_eq!(
                            st.leave().codegree(r, c),
                            brute_codegree(st.leave(), r, c),
                            "n={n} seed={seed} cell=({r},{c})"
                        );
                    }
                }
                if matches!(st.step(), Step::Frozen) {
                    break;
                }
            }
        }
    }
}

fn uniformity_deviation(g: &LeaveGraph, draws: usize, seed: u64) -> f64 {
    let q = g.triangle_count();
    assert!(q >= 2);
    let mut rng = for_trial(seed, 0);
    let mut freq: HashMap<Triple, u64> = HashMap::new();
    for _ in 0..draws {
        let t = g.sample_triangle(&mut rng).unwrap();
        *freq.entry(t).or_insert(0) += 1;
    }
    assert_eq!(freq.len() as u64, q, "every triangle must be reachable");
    let want = 1.0 / q as f64;
    freq.values()
        .map(|&c| (c as f64 / draws as f64 - want).abs())
        .fold(0.0, f64::max)
}

#[test]
fn sampler_uniformity_on_fixed_graphs() {
    let draws = 100_000;
    // complete K_{2,2,2}: Q = 8
    let g = LeaveGraph::complete(2);
    let bound = 5.0 * ((8.0f64).ln() / draws as f64).sqrt();
    let dev = uniformity_deviation(&g, draws, 41);
    assert!(dev < bound, "Q=8: dev {dev} vs bound {bound}");

    // minus (1,3,5): Q = 4
    let pls = PartialLatinSquare::from_triples(2, [Triple::new(0, 0, 0)]).unwrap();
    let g = LeaveGraph::from_square(&pls);
    let bound = 5.0 * ((4.0f64).ln() / draws as f64).sqrt();
    let dev = uniformity_deviation(&g, draws, 42);
    assert!(dev < bound, "Q=4: dev {dev} vs bound {bound}");

    // a mid-run graph with 2 <= Q <= 100
    let mut st = TrpState::from_start_with_rng(
        PartialLatinSquare::empty(5).unwrap(),
        for_trial(43, 0),
    );
    while st.leave().triangle_count() > 100 {
        st.step();
    }
    let g = st.leave();
    if g.triangle_count() >= 2 {
        let q = g.triangle_count() as f64;
        let bound = 5.0 * (q.ln() / draws as f64).sqrt();
        let dev = uniformity_deviation(g, draws, 44);
        assert!(dev < bound, "Q={q}: dev {dev} vs bound {bound}");
    }
}
