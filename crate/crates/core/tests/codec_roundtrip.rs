//! Codec round-trips over randomly generated valid partial squares.

use trp_core::codec;
use trp_core::model::PartialLatinSquare;
use trp_core::process::run;

/// A random valid (ordered) partial square: a seeded process prefix.
fn random_square(n: usize, m: usize, seed: u64) -> PartialLatinSquare {
    run(PartialLatinSquare::empty(n).unwrap(), m, seed, false)
        .unwrap()
        .square
}

#[test]
fn ten_thousand_random_round_trips() {
    use rand::Rng;
    let mut rng = trp_core::rng::for_trial(2024, 0);
    for case in 0..10_000u64 {
        let n = rng.gen_range(1..=8usize);
        let m = rng.gen_range(0..=n * n);
        let sq = random_square(n, m, case);

        let text = codec::encode_triple_list(&sq);
        let back = codec::decode_triple_list(&text).unwrap();
        assert_eq!(back, sq, "triple-list keeps order, case {case}");

        let text = codec::encode_grid(&sq);
        let back = codec::decode_grid(&text).unwrap();
        assert!(back.same_triples(&sq), "grid keeps content, case {case}");
    }
}
