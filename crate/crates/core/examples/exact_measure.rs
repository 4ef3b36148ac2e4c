//! Enumerates every hypergraph on three vertices and compares the resulting distribution of
//! complexes with the closed forms of both models.
//!
//! cargo run --example exact_measure

use upper_complex::measure::{lower_probability, total_measure_check, upper_probability, Model, ProbabilityAssignment};

fn main() -> upper_complex::Result<()> {
    let pa = ProbabilityAssignment::parse(2, 2, "1/2,1/3,1/5")?;
    for model in [Model::Upper, Model::Lower] {
        let check = total_measure_check(&pa, model)?;
        println!("{model} model: {} complexes, total mass {}", check.distribution.len(), check.sum);
        for g in &check.distribution {
            let closed = match model {
                Model::Upper => upper_probability(&g.complex, &pa)?,
                Model::Lower => lower_probability(&g.complex, &pa)?,
            };
            let facets: Vec<String> = g.complex.iter().map(ToString::to_string).collect();
            println!("  {:>10}  {}{}", g.mass.to_string(), facets.join(" "), if closed == g.mass { "" } else { "  MISMATCH" });
        }
    }
    Ok(())
}
