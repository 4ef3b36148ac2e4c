mod common;

use proptest::prelude::*;
use upper_complex::combinatorics::binomial;
use upper_complex::complex::{closure, full_skeleton, skeleton, Ambient, SimplicialComplex};
use upper_complex::homology::{homology_profile, HomologyMode};
use upper_complex::lm::{modified_complex, required_preimage, FaceChooser};
use upper_complex::measure::canonical_simplices;
use upper_complex::sampler::{sample_hypergraph, ModelParams, SampleSeed};
use upper_complex::Error;

/// Every subcomplex of the ambient, by brute force over subsets.
fn all_complexes(n: u32, r: usize) -> Vec<SimplicialComplex> {
    let ambient = Ambient::new(n, r).unwrap();
    let simplices = canonical_simplices(ambient);
    let mut out = Vec::new();
    for mask in 0u32..(1 << simplices.len()) {
        let members: Vec<_> = (0..simplices.len()).filter(|i| mask & (1 << i) != 0).map(|i| simplices[i].clone()).collect();
        if let Ok(y) = SimplicialComplex::new(ambient, members) {
            out.push(y);
        }
    }
    out
}

// If the (ℓ-1)-homology of K ∪ Y vanishes, Y already contains the full (ℓ-1)-skeleton K.
fn check_skeleton_lemma(n: u32, r: usize, ell: usize) -> usize {
    let k = full_skeleton(n, ell - 1).unwrap();
    let k = SimplicialComplex::new(Ambient::new(n, r).unwrap(), k.iter().cloned().collect::<Vec<_>>()).unwrap();
    let mut vanishing = 0;
    for y in all_complexes(n, r) {
        let h = homology_profile(&k.union(&y), HomologyMode::Exact).unwrap();
        if h.vanishes(ell - 1) {
            vanishing += 1;
            assert!(k.is_subcomplex_of(&y), "ell={ell} Y={:?}", y.iter().collect::<Vec<_>>());
        }
    }
    vanishing
}

#[test]
fn vanishing_forces_full_lower_skeleton() {
    assert!(check_skeleton_lemma(3, 2, 1) > 0);
    assert!(check_skeleton_lemma(3, 2, 2) > 0);
    assert!(check_skeleton_lemma(4, 1, 1) > 0);
}

#[test]
fn infeasible_instance_is_rejected() {
    match FaceChooser::build(3, 1, 2, 0) {
        Err(Error::ChooserBudgetExhausted { required, .. }) => assert_eq!(required, required_preimage(3, 1, 2)),
        other => panic!("expected exhaustion, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chooser_preimages_partition(n in 4u32..=12, ell in 0usize..=2, extra in 0usize..=1, seed in any::<u64>()) {
        let i = ell + extra;
        prop_assume!(i as u32 <= n);
        match FaceChooser::build(n, ell, i, seed) {
            Ok(h) => {
                let counts = h.preimage_counts();
                prop_assert_eq!(counts.len() as u128, binomial(n as u64 + 1, ell as u64 + 1));
                prop_assert_eq!(counts.iter().map(|&c| c as u128).sum::<u128>(), binomial(n as u64 + 1, i as u64 + 1));
                prop_assert_eq!(h.verify().unwrap(), h.preimage_min());
                prop_assert!(h.meets_bound());
                for tau in full_skeleton(n, i).unwrap().of_dim(i) {
                    let sigma = h.choose(tau).unwrap();
                    prop_assert_eq!(sigma.dim(), ell);
                    prop_assert!(sigma.is_face_of(tau));
                }
                prop_assert_eq!(FaceChooser::from_text(&h.to_text()).unwrap(), h);
            }
            Err(e) => prop_assert!(matches!(e, Error::ChooserBudgetExhausted { .. }), "{e}"),
        }
    }

    #[test]
    fn union_homology_is_quotient_of_modified(n in 5u32..=9, a in 0.3f64..1.5, seed in any::<u64>()) {
        let params = ModelParams::new(n, 2, vec![f64::INFINITY, f64::INFINITY, a]).unwrap();
        let x = sample_hypergraph(&params, SampleSeed::new(seed, 0));
        let y = closure(&x);
        let ell = 1;
        let h = FaceChooser::build(n, ell, 2, seed).unwrap();
        let hat = modified_complex(&x, &h, ell).unwrap();
        let k = SimplicialComplex::new(x.ambient(), full_skeleton(n, ell - 1).unwrap().iter().cloned().collect::<Vec<_>>()).unwrap();
        let union = skeleton(&k.union(&y), ell);
        prop_assert_eq!(skeleton(&hat, ell - 1), skeleton(&union, ell - 1));
        prop_assert!(hat.of_dim(ell).iter().all(|s| union.contains(s)));
        let b_union = homology_profile(&union, HomologyMode::Exact).unwrap();
        let b_hat = homology_profile(&hat, HomologyMode::Exact).unwrap();
        prop_assert!(b_union.betti(ell - 1) <= b_hat.betti(ell - 1));
    }
}
