mod common;

use proptest::prelude::*;
use upper_complex::combinatorics::{binomial, rank_lex, unrank_lex, LexSubsets};
use upper_complex::complex::{closure, lower_complex, maximal_simplices, minimal_missing};
use upper_complex::simplex::Simplex;

proptest! {
    #[test]
    fn rank_unrank_round_trip(m in 1u32..40, k in 1usize..6, seed in any::<u64>()) {
        prop_assume!(k as u32 <= m);
        let total = binomial(m as u64, k as u64);
        let rank = seed as u128 % total;
        let mut v = Vec::new();
        unrank_lex(rank, k, m, &mut v);
        prop_assert!(v.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(*v.last().unwrap() < m);
        prop_assert_eq!(rank_lex(&v, m), rank);
    }

    #[test]
    fn closure_is_smallest_complex_above(x in common::hypergraph(6, 3, 0.15)) {
        let y = closure(&x);
        for s in x.iter() {
            prop_assert!(y.contains(s));
        }
        for s in y.iter() {
            for f in s.faces() {
                prop_assert!(y.contains(&f));
            }
        }
        for m in maximal_simplices(&y) {
            prop_assert!(x.contains(&m));
        }
    }

    #[test]
    fn lower_complex_is_largest_below(x in common::hypergraph(6, 3, 0.7)) {
        let y = lower_complex(&x);
        for s in y.iter() {
            prop_assert!(x.contains(s));
            for f in s.faces() {
                prop_assert!(y.contains(&f));
            }
        }
        // anything in X whose faces are all in X belongs to the lower complex
        for s in x.iter() {
            if s.faces().all(|f| x.contains(&f)) {
                prop_assert!(y.contains(s));
            }
        }
    }

    #[test]
    fn minimal_missing_have_boundary_inside(x in common::hypergraph(6, 3, 0.3)) {
        let y = closure(&x);
        for e in minimal_missing(&y, y.r()) {
            prop_assert!(!y.contains(&e));
            for (f, _) in e.boundary() {
                prop_assert!(y.contains(&f));
            }
        }
    }
}

#[test]
fn lex_subsets_enumerate_in_rank_order() {
    let mut it = LexSubsets::new(3, 7);
    let mut rank = 0u128;
    while let Some(s) = it.next_subset() {
        assert_eq!(rank_lex(s, 7), rank);
        rank += 1;
    }
    assert_eq!(rank, binomial(7, 3));
}

#[test]
fn simplex_rejects_repeated_vertices() {
    assert!(Simplex::new([1, 1]).is_err());
    assert_eq!(Simplex::new([2, 0, 1]).unwrap().vertices(), &[0, 1, 2]);
}
