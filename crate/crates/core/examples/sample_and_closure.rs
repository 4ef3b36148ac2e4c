//! Draws one hypergraph from the model and prints it next to its closure and lower complex.
//!
//! cargo run --example sample_and_closure -- 12 inf,0.4,1.6 7

use upper_complex::complex::{closure, lower_complex, maximal_simplices};
use upper_complex::sampler::{g_counts, sample_hypergraph, ModelParams, SampleSeed};

fn main() -> upper_complex::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: u32 = args.first().map_or(12, |s| s.parse().expect("n"));
    let alpha = ModelParams::parse_alpha(args.get(1).map_or("inf,0.4,1.6", String::as_str))?;
    let seed: u64 = args.get(2).map_or(7, |s| s.parse().expect("seed"));
    let params = ModelParams::new(n, alpha.len() - 1, alpha)?;

    let x = sample_hypergraph(&params, SampleSeed::new(seed, 0));
    println!("selected per dimension: {:?}", g_counts(&x));
    for i in 0..=params.r {
        println!("  expected g_{i}: {:.2}", params.expected_g(i));
    }

    let y = closure(&x);
    println!("closure f-vector {:?}, facets:", y.f_vector());
    for m in maximal_simplices(&y) {
        println!("  {m}");
    }
    println!("lower complex f-vector {:?}", lower_complex(&x).f_vector());
    Ok(())
}
