//! Classifies the good simplices of a sample, collapses its closure and checks that the
//! homology survived.
//!
//! cargo run --example collapse_walkthrough

use upper_complex::asymptotics::asymptotic_profile;
use upper_complex::collapse::{classify_goodness, collapse_complex_with, collapse_with_deleted_dim, Verification};
use upper_complex::complex::closure;
use upper_complex::homology::{homology_profile, HomologyMode};
use upper_complex::laws::all_laws;
use upper_complex::sampler::{sample_hypergraph, ModelParams, SampleSeed};

fn main() -> upper_complex::Result<()> {
    let params = ModelParams::new(30, 2, vec![0.0, 0.8, 1.5])?;
    let ell = asymptotic_profile(&params).ell.unwrap_or(0);
    let x = sample_hypergraph(&params, SampleSeed::new(1, 0));

    let table = classify_goodness(&x, ell);
    println!("ell = {ell}, B_k = {:?}", table.bad_counts());
    for (tau, level) in table.good().take(5) {
        println!("  {tau} is good from level {level}");
    }

    let (collapsed, report) = collapse_complex_with(&x, ell, Verification::Always)?;
    println!("f  = {:?}", report.f);
    println!("f' = {:?}, pairs removed per dimension {:?}", report.f_prime, report.removed_pairs);

    let y = closure(&x);
    let h = homology_profile(&y, HomologyMode::Exact)?;
    assert_eq!(h, homology_profile(&collapsed, HomologyMode::Exact)?);
    println!("betti {:?} on both; law violations: {:?}", h.betti, all_laws(&report, &y, &h));

    let (_, ft) = collapse_with_deleted_dim(&x, 2, ell)?;
    println!("deleted-dimension collapse at k = 2 leaves {} triangles, b_2 = {}", ft[2], h.betti(2));
    Ok(())
}
