//! Exponents, regime and predicted counts for a parameter vector.
//!
//! cargo run --example asymptotic_profile -- inf,inf,1.2 80

use upper_complex::asymptotics::{asymptotic_profile, exponent_law_check, predicted_counts, Omega};
use upper_complex::sampler::ModelParams;

fn main() -> upper_complex::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let alpha = ModelParams::parse_alpha(args.first().map_or("inf,inf,1.2", String::as_str))?;
    let n: u32 = args.get(1).map_or(80, |s| s.parse().expect("n"));
    let params = ModelParams::new(n, alpha.len() - 1, alpha)?;

    let p = asymptotic_profile(&params);
    println!("beta = {}, regime {}, ell' = {:?}, stratum {:?}", p.beta, p.regime, p.ell_prime, p.stratum);
    println!("gamma = {:?}\nnu    = {:?}\nd = {:.4}", p.gamma, p.nu, p.d);
    println!("exponent laws hold: {}", exponent_law_check(&p).passed());

    match predicted_counts(&p, n, Omega::Ln) {
        Ok(pred) => {
            for k in 0..=params.r {
                println!("k = {k}: f ~ {:?}, b ~ {:?}", pred.f[k], pred.b[k]);
            }
        }
        Err(e) => println!("no predictions: {e}"),
    }
    Ok(())
}
