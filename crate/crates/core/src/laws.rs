//! Inequalities every single sample satisfies, whatever the parameters.
//!
//! Each check returns a human-readable description of every violation; an empty list means
//! the sample is consistent.

use crate::collapse::CollapseReport;
use crate::combinatorics::binomial;
use crate::complex::SimplicialComplex;
use crate::homology::{euler_defect, HomologyProfile};

/// `f_k ≤ ĝ_k`, `f′_k ≤ f_k`, `B_k ≤ 2(ĝ_k - f_k)` for `k ≥ ℓ`, and
/// `f′_k ≤ C(r+1, k+1) B_{k-1}` for `k > ℓ`.
pub fn count_laws(rep: &CollapseReport) -> Vec<String> {
    let mut out = Vec::new();
    let r = rep.f.len() - 1;
    for k in 0..=r {
        if rep.f[k] > rep.g_hat[k] {
            out.push(format!("f_{k} = {} exceeds ghat_{k} = {}", rep.f[k], rep.g_hat[k]));
        }
        if rep.f_prime[k] > rep.f[k] {
            out.push(format!("f'_{k} = {} exceeds f_{k} = {}", rep.f_prime[k], rep.f[k]));
        }
    }
    for k in rep.ell..=r {
        let slack = 2 * rep.g_hat[k].saturating_sub(rep.f[k]);
        if rep.bad[k] > slack {
            out.push(format!("B_{k} = {} exceeds 2(ghat_{k} - f_{k}) = {slack}", rep.bad[k]));
        }
        if k > rep.ell {
            let cap = binomial(r as u64 + 1, k as u64 + 1) * rep.bad[k - 1] as u128;
            if rep.f_prime[k] as u128 > cap {
                out.push(format!("f'_{k} = {} exceeds C(r+1, k+1) B_{} = {cap}", rep.f_prime[k], k - 1));
            }
        }
    }
    out
}

/// `f′_ℓ - f′_{ℓ+1} - f′_{ℓ-1} ≤ b̃_ℓ ≤ f′_ℓ`, where `f′_{-1}` is 1 for a nonempty complex
/// (the augmentation) and 0 otherwise.
pub fn sandwich(rep: &CollapseReport, h: &HomologyProfile) -> Vec<String> {
    let l = rep.ell;
    let r = rep.f_prime.len() - 1;
    if l > r {
        return Vec::new();
    }
    let at = |k: usize| rep.f_prime.get(k).copied().unwrap_or(0) as i128;
    let below = if l == 0 { i128::from(!h.empty_flag) } else { at(l - 1) };
    let lower = at(l) - at(l + 1) - below;
    let b = h.betti(l) as i128;
    if lower <= b && b <= at(l) {
        Vec::new()
    } else {
        vec![format!("sandwich {lower} <= b_{l} = {b} <= {} fails", at(l))]
    }
}

pub fn euler_poincare(y: &SimplicialComplex, h: &HomologyProfile) -> Vec<String> {
    if y.is_empty() {
        return Vec::new();
    }
    match euler_defect(y, h) {
        1 => Vec::new(),
        d => vec![format!("Euler characteristic minus reduced Betti sum is {d}, expected 1")],
    }
}

/// `b_k ≤ f̃′_k` for the deleted-dimension collapse at `k`.
pub fn deleted_dim_bound(k: usize, f_tilde_prime_k: u64, h: &HomologyProfile) -> Vec<String> {
    if h.betti(k) > f_tilde_prime_k {
        vec![format!("b_{k} = {} exceeds deleted-dimension count {f_tilde_prime_k}", h.betti(k))]
    } else {
        Vec::new()
    }
}

/// Everything above for one sample whose homology `h` was computed on `y` (either the closure
/// or its collapse; the two have the same homology).
pub fn all_laws(rep: &CollapseReport, y: &SimplicialComplex, h: &HomologyProfile) -> Vec<String> {
    let mut out = count_laws(rep);
    out.extend(sandwich(rep, h));
    out.extend(euler_poincare(y, h));
    out
}
