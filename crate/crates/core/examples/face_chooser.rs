//! Builds a face chooser, checks its preimage bound and uses it to form the modified complex.
//!
//! cargo run --example face_chooser

use upper_complex::homology::{homology_profile, HomologyMode};
use upper_complex::lm::{modified_complex, required_preimage, FaceChooser};
use upper_complex::sampler::{sample_hypergraph, ModelParams, SampleSeed};
use upper_complex::simplex;

fn main() -> upper_complex::Result<()> {
    let (n, ell, i) = (20, 1, 2);
    let h = FaceChooser::build(n, ell, i, 0)?;
    println!(
        "min preimage {} against the bound {}; h(0 1 2) = {}",
        h.verify()?,
        required_preimage(n, ell, i),
        h.choose(&simplex![0, 1, 2])?
    );

    let params = ModelParams::new(n, 2, vec![f64::INFINITY, f64::INFINITY, 1.2])?;
    for trial in 0..5 {
        let x = sample_hypergraph(&params, SampleSeed::new(3, trial));
        let hat = modified_complex(&x, &h, ell)?;
        let b = homology_profile(&hat, HomologyMode::FieldRank)?;
        println!("trial {trial}: modified complex f = {:?}, b_0 = {}", hat.f_vector(), b.betti(0));
    }
    Ok(())
}
