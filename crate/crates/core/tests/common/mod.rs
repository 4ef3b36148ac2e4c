#![allow(dead_code)]

use proptest::prelude::*;
use upper_complex::complex::{Ambient, Hypergraph};
use upper_complex::measure::canonical_simplices;
use upper_complex::sampler::{sample_hypergraph, ModelParams, SampleSeed};

/// Arbitrary hypergraph on `{0, …, n}` with simplices of dimension at most `r`.
pub fn hypergraph(max_n: u32, max_r: usize, density: f64) -> impl Strategy<Value = Hypergraph> {
    (1..=max_n)
        .prop_flat_map(move |n| (Just(n), 0..=max_r.min(n as usize)))
        .prop_flat_map(move |(n, r)| {
            let ambient = Ambient::new(n, r).unwrap();
            let all = canonical_simplices(ambient);
            let len = all.len();
            proptest::collection::vec(proptest::bool::weighted(density), len).prop_map(move |keep| {
                let chosen = all.iter().zip(keep).filter(|(_, k)| *k).map(|(s, _)| s.clone());
                Hypergraph::new(ambient, chosen.collect::<Vec<_>>()).unwrap()
            })
        })
}

/// Draw from the model itself with a random exponent vector.
pub fn model_sample(max_n: u32, max_r: usize) -> impl Strategy<Value = (ModelParams, Hypergraph)> {
    (2..=max_n, 0..=max_r, any::<u64>())
        .prop_flat_map(move |(n, r, seed)| {
            let r = r.min(n as usize);
            let alpha = proptest::collection::vec(0.0f64..(r as f64 + 2.0), r + 1);
            (Just(n), Just(r), alpha, Just(seed))
        })
        .prop_map(|(n, r, alpha, seed)| {
            let params = ModelParams::new(n, r, alpha).unwrap();
            let x = sample_hypergraph(&params, SampleSeed::new(seed, 0));
            (params, x)
        })
}
