mod common;

use proptest::prelude::*;
use upper_complex::collapse::{
    classify_goodness, collapse_complex_with, collapse_with_deleted_dim_with, Verification,
};
use upper_complex::combinatorics::binomial;
use upper_complex::complex::{closure, Ambient, Hypergraph};
use upper_complex::homology::{homology_profile, HomologyMode};
use upper_complex::laws::{all_laws, deleted_dim_bound};
use upper_complex::simplex;

fn naive_k_good(x: &Hypergraph, tau: &upper_complex::simplex::Simplex, k: usize) -> bool {
    tau.dim() >= k && x.iter().filter(|t| *t != tau && t.dim() >= k).all(|t| tau.intersection_len(t) <= k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn goodness_matches_definition((_p, x) in common::model_sample(10, 3), ell_seed in 0usize..4) {
        let ell = ell_seed.min(x.r());
        let table = classify_goodness(&x, ell);
        for k in ell..=x.r() {
            let mut bad = 0u64;
            for tau in x.at_least_dim(k) {
                let good = naive_k_good(&x, tau, k);
                prop_assert_eq!(table.is_k_good(tau, k), good, "{} k={}", tau, k);
                bad += u64::from(!good);
            }
            prop_assert_eq!(table.bad_count(k), bad);
        }
    }

    #[test]
    fn collapse_preserves_homology_and_laws((_p, x) in common::model_sample(10, 3), ell_seed in 0usize..4) {
        let ell = ell_seed.min(x.r());
        let (collapsed, rep) = collapse_complex_with(&x, ell, Verification::Always).unwrap();
        let y = closure(&x);
        let h = homology_profile(&y, HomologyMode::Exact).unwrap();
        prop_assert_eq!(&homology_profile(&collapsed, HomologyMode::Exact).unwrap(), &h);
        prop_assert!(collapsed.is_subcomplex_of(&y));
        let removed: u64 = rep.f.iter().zip(&rep.f_prime).map(|(a, b)| a - b).sum();
        prop_assert_eq!(removed, 2 * rep.removed_pairs.iter().sum::<u64>());
        for g in &rep.good_inventory {
            prop_assert_eq!(g.survivors, binomial(g.simplex.dim() as u64, g.level as u64) as u64);
        }
        let violations = all_laws(&rep, &y, &h);
        prop_assert!(violations.is_empty(), "{:?}", violations);
    }

    #[test]
    fn deleted_dimension_collapse_bounds_betti((_p, x) in common::model_sample(9, 3), ell_seed in 0usize..4) {
        let ell = ell_seed.min(x.r());
        let y = closure(&x);
        let h = homology_profile(&y, HomologyMode::FieldRank).unwrap();
        for k in ell..=x.r() {
            let (c, ft) = collapse_with_deleted_dim_with(&x, k, ell, Verification::Always).unwrap();
            prop_assert_eq!(&homology_profile(&c, HomologyMode::FieldRank).unwrap(), &h);
            prop_assert!(deleted_dim_bound(k, ft[k], &h).is_empty());
        }
    }
}

#[test]
fn pair_of_triangles_sharing_an_edge() {
    let x = Hypergraph::new(Ambient::new(3, 2).unwrap(), vec![simplex![0, 1, 2], simplex![1, 2, 3]]).unwrap();
    let (c, rep) = collapse_complex_with(&x, 1, Verification::Always).unwrap();
    // overlap 2 puts both triangles at level 2, which is their own dimension
    assert_eq!(rep.good_inventory.len(), 2);
    assert!(rep.good_inventory.iter().all(|g| g.level == 2 && g.survivors == 1));
    assert_eq!(c.f_vector(), rep.f_prime.iter().map(|&v| v as usize).collect::<Vec<_>>());
}
