//! Property tests for the structural invariants.

use proptest::prelude::*;
use trp_core::fenwick::FenwickTree;
use trp_core::model::PartialLatinSquare;
use trp_core::process::run;

fn arb_square() -> impl Strategy<Value = PartialLatinSquare> {
    (1usize..=6, any::<u64>()).prop_flat_map(|(n, seed)| {
        (Just(n), Just(seed), 0usize..=n * n).prop_map(|(n, seed, m)| {
            run(PartialLatinSquare::empty(n).unwrap(), m, seed, false)
                .unwrap()
                .square
        })
    })
}

proptest! {
    /// prefix(L, i) = prefix(prefix(L, j), i) for i <= j.
    #[test]
    fn prefix_tower(sq in arb_square(), a in any::<u16>(), b in any::<u16>()) {
        let len = sq.len();
        let (mut i, mut j) = (a as usize % (len + 1), b as usize % (len + 1));
        if i > j {
            std::mem::swap(&mut i, &mut j);
        }
        let pj = sq.prefix(j).unwrap();
        prop_assert_eq!(sq.prefix(i).unwrap(), pj.prefix(i).unwrap());
    }

    /// Triple-list encoding round-trips ordered squares exactly.
    #[test]
    fn triple_list_round_trip(sq in arb_square()) {
        let text = trp_core::codec::encode_triple_list(&sq);
        prop_assert_eq!(trp_core::codec::decode_triple_list(&text).unwrap(), sq);
    }

    /// Fenwick prefix sums and selection agree with a plain vector.
    #[test]
    fn fenwick_against_reference(values in prop::collection::vec(0u64..6, 1..80)) {
        let t = FenwickTree::from_values(&values);
        let mut acc = 0u64;
        for (i, &v) in values.iter().enumerate() {
            acc += v;
            prop_assert_eq!(t.prefix_sum(i), acc);
        }
        let total: u64 = values.iter().sum();
        prop_assert_eq!(t.total(), total);
        for probe in [0, total / 2, total.saturating_sub(1)] {
            if probe < total {
                let idx = t.select(probe);
                let before: u64 = values[..idx].iter().sum();
                prop_assert!(before <= probe && probe < before + values[idx]);
            }
        }
    }

    /// Leave-graph construction excludes exactly the used pairs.
    #[test]
    fn leave_complements_square(sq in arb_square()) {
        let g = trp_core::leave::LeaveGraph::from_square(&sq);
        let n = sq.n();
        let used = sq.len() as u64;
        prop_assert_eq!(g.edges(), 3 * ((n * n) as u64 - used));
        for t in sq.triples() {
            prop_assert!(!g.has_rc(t.row as usize, t.col as usize));
            prop_assert!(!g.has_rs(t.row as usize, t.sym as usize));
            prop_assert!(!g.has_cs(t.col as usize, t.sym as usize));
        }
    }
}
