//! Integral homology of a few classical triangulations.
//!
//! cargo run --example homology_fixtures

use upper_complex::complex::{closure, Ambient, Hypergraph, SimplicialComplex};
use upper_complex::homology::{homology_profile, HomologyMode};
use upper_complex::simplex::Simplex;

fn complex(n: u32, r: usize, facets: &[Vec<u32>]) -> upper_complex::Result<SimplicialComplex> {
    let simplices = facets.iter().map(|f| Simplex::new(f.iter().copied())).collect::<Result<Vec<_>, _>>()?;
    Ok(closure(&Hypergraph::new(Ambient::new(n, r)?, simplices)?))
}

fn main() -> upper_complex::Result<()> {
    let torus: Vec<Vec<u32>> = (0..7)
        .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
        .collect();
    let rp2 = [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5], [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5]];
    let fixtures = [
        ("circle", complex(2, 1, &[vec![0, 1], vec![1, 2], vec![0, 2]])?),
        ("2-sphere", complex(3, 2, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])?),
        ("torus", complex(6, 2, &torus)?),
        ("projective plane", complex(5, 2, &rp2.map(|f| f.to_vec()))?),
    ];
    for (name, y) in &fixtures {
        let field = homology_profile(y, HomologyMode::FieldRank)?;
        let exact = homology_profile(y, HomologyMode::Exact)?;
        println!("{name:>16}: f = {:?}, betti = {:?}, torsion = {:?}", y.f_vector(), field.betti, exact.torsion);
    }
    Ok(())
}
