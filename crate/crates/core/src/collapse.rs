//! Good simplices and the cone collapse.
//!
//! A simplex `τ ∈ X` of dimension at least `k` is `k`-good when every other selected simplex
//! of dimension at least `k` meets it in fewer than `k + 1` vertices. Writing `m(τ)` for the
//! largest such overlap, `τ` is `k`-good exactly for `max(ℓ, m(τ)) ≤ k ≤ dim τ`, so its good
//! level is `G(τ) = max(ℓ, m(τ))` whenever that is at most `dim τ`.
//!
//! A good `τ` with level `k` and apex `v₀ = min τ` is collapsed onto the cone `v₀ * Δ_{k-1}`
//! by removing the pairs `(ρ, ρ ∪ {v₀})` for the faces `ρ` of `τ \ {v₀}` from the top
//! dimension down to `k`. Every pair is free when removed, so the result is a deformation
//! retract of `closure(X)`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::complex::{closure, Hypergraph, SimplicialComplex};
use crate::error::{Error, Result};
use crate::sampler::{g_counts, g_hat, g_prime};
use crate::simplex::Simplex;

/// Free-pair checking is quadratic-ish, so `Auto` only turns it on for debug builds on small
/// vertex sets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Verification {
    #[default]
    Auto,
    Always,
    Never,
}

impl Verification {
    fn enabled(self, n: u32) -> bool {
        match self {
            Verification::Auto => cfg!(debug_assertions) && n <= 30,
            Verification::Always => true,
            Verification::Never => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodnessEntry {
    pub simplex: Simplex,
    /// Largest `|τ ∩ τ′|` over the other members of dimension at least `ℓ`.
    pub overlap: usize,
    /// `G(τ)`, or `None` when `τ` is never good.
    pub level: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodnessTable {
    ell: usize,
    entries: Vec<GoodnessEntry>,
    bad: Vec<u64>,
}

impl GoodnessTable {
    pub fn ell(&self) -> usize {
        self.ell
    }

    /// One entry per member of dimension at least `ℓ`, in canonical order.
    pub fn entries(&self) -> &[GoodnessEntry] {
        &self.entries
    }

    pub fn entry(&self, tau: &Simplex) -> Option<&GoodnessEntry> {
        self.entries.binary_search_by(|e| e.simplex.cmp(tau)).ok().map(|i| &self.entries[i])
    }

    pub fn level(&self, tau: &Simplex) -> Option<usize> {
        self.entry(tau).and_then(|e| e.level)
    }

    /// Whether `tau` is a `k`-good member; `false` outside `ℓ ≤ k ≤ dim τ`.
    pub fn is_k_good(&self, tau: &Simplex, k: usize) -> bool {
        k <= tau.dim() && self.level(tau).is_some_and(|g| g <= k)
    }

    /// `B_k`: members of dimension at least `k` that are not `k`-good. Zero below `ℓ`.
    pub fn bad_count(&self, k: usize) -> u64 {
        self.bad.get(k).copied().unwrap_or(0)
    }

    /// `B_0, …, B_r`.
    pub fn bad_counts(&self) -> &[u64] {
        &self.bad
    }

    pub fn good(&self) -> impl Iterator<Item = (&Simplex, usize)> + '_ {
        self.entries.iter().filter_map(|e| e.level.map(|g| (&e.simplex, g)))
    }
}

pub fn classify_goodness(x: &Hypergraph, ell: usize) -> GoodnessTable {
    let members: Vec<&Simplex> = x.at_least_dim(ell).collect();
    let mut incidence: Vec<Vec<u32>> = vec![Vec::new(); x.n() as usize + 1];
    for (idx, s) in members.iter().enumerate() {
        for &v in s.vertices() {
            incidence[v as usize].push(idx as u32);
        }
    }
    let mut shared = vec![0u8; members.len()];
    let mut touched = Vec::new();
    let mut entries = Vec::with_capacity(members.len());
    for (idx, tau) in members.iter().enumerate() {
        let mut overlap = 0usize;
        for &v in tau.vertices() {
            for &other in &incidence[v as usize] {
                if other as usize == idx {
                    continue;
                }
                let c = &mut shared[other as usize];
                if *c == 0 {
                    touched.push(other);
                }
                *c += 1;
                overlap = overlap.max(*c as usize);
            }
        }
        for t in touched.drain(..) {
            shared[t as usize] = 0;
        }
        let g = ell.max(overlap);
        entries.push(GoodnessEntry { simplex: (*tau).clone(), overlap, level: (g <= tau.dim()).then_some(g) });
    }
    entries.sort_by(|a, b| a.simplex.cmp(&b.simplex));

    let mut bad = vec![0u64; x.r() + 1];
    for e in &entries {
        // not k-good for ℓ ≤ k < G, or for every k when there is no good level
        let upto = e.level.unwrap_or(e.simplex.dim() + 1);
        for b in bad.iter_mut().take(upto.min(e.simplex.dim() + 1)).skip(ell) {
            *b += 1;
        }
    }
    GoodnessTable { ell, entries, bad }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodSimplex {
    pub simplex: Simplex,
    pub level: usize,
    /// Faces of dimension `level` left in `Y′`.
    pub survivors: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseReport {
    pub ell: usize,
    /// `f_k(Y)` for `k = 0..=r`.
    pub f: Vec<u64>,
    /// `f′_k(Y′)`.
    pub f_prime: Vec<u64>,
    pub g: Vec<u64>,
    /// `ĝ_k` for every `k = 0..=r`.
    pub g_hat: Vec<u64>,
    pub g_prime: u64,
    /// `B_k`, zero below `ℓ`.
    #[serde(rename = "B")]
    pub bad: Vec<u64>,
    pub good_inventory: Vec<GoodSimplex>,
    /// Removed pairs indexed by the dimension of the smaller simplex.
    pub removed_pairs: Vec<u64>,
}

fn counts(set: &HashSet<Simplex>, r: usize) -> Vec<u64> {
    let mut f = vec![0u64; r + 1];
    for s in set {
        f[s.dim()] += 1;
    }
    f
}

fn check_free(set: &HashSet<Simplex>, rho: &Simplex, sigma: &Simplex, n: u32) -> Result<()> {
    if !set.contains(rho) || !set.contains(sigma) {
        return Err(Error::LawViolation(format!("pair ({rho}, {sigma}) is not present in the complex")));
    }
    for w in 0..=n {
        if let Some(c) = rho.with_vertex(w) {
            if &c != sigma && set.contains(&c) {
                return Err(Error::LawViolation(format!("{rho} is not free: {c} also contains it")));
            }
        }
    }
    Ok(())
}

/// Removes the cone pairs of every good simplex whose smaller member has dimension at least
/// `min_rho_dim`. Returns the removed pair counts per dimension.
fn apply_collapse(
    set: &mut HashSet<Simplex>,
    table: &GoodnessTable,
    min_rho_dim: usize,
    n: u32,
    r: usize,
    verify: bool,
) -> Result<Vec<u64>> {
    let mut good: Vec<(&Simplex, usize)> = table.good().collect();
    good.sort_by(|a, b| b.0.dim().cmp(&a.0.dim()).then_with(|| a.0.cmp(b.0)));
    let mut removed = vec![0u64; r + 1];
    for (tau, level) in good {
        let apex = tau.min_vertex();
        let Some(base) = tau.without_vertex(apex) else { continue };
        let lowest = level.max(min_rho_dim);
        for j in (lowest..tau.dim()).rev() {
            for rho in base.faces_of_dim(j) {
                let sigma = rho.with_vertex(apex).expect("apex is not in the base");
                if verify {
                    check_free(set, &rho, &sigma, n)?;
                }
                set.remove(&sigma);
                set.remove(&rho);
                removed[j] += 1;
            }
        }
    }
    Ok(removed)
}

pub fn collapse_complex(x: &Hypergraph, ell: usize) -> Result<(SimplicialComplex, CollapseReport)> {
    collapse_complex_with(x, ell, Verification::Auto)
}

/// [`collapse_complex`] with explicit control over free-pair and survivor verification.
/// A failed check is reported as [`Error::LawViolation`].
pub fn collapse_complex_with(
    x: &Hypergraph,
    ell: usize,
    verification: Verification,
) -> Result<(SimplicialComplex, CollapseReport)> {
    let ambient = x.ambient();
    let r = ambient.r;
    let verify = verification.enabled(ambient.n);
    let y = closure(x);
    let f: Vec<u64> = y.f_vector().iter().map(|&c| c as u64).collect();
    let table = classify_goodness(x, ell);
    let mut set: HashSet<Simplex> = y.iter().cloned().collect();
    let removed_pairs = apply_collapse(&mut set, &table, 0, ambient.n, r, verify)?;

    let mut good_inventory = Vec::new();
    for (tau, level) in table.good() {
        let survivors = tau.faces_of_dim(level).iter().filter(|s| set.contains(s)).count() as u64;
        if verify {
            let expected = binomial(tau.dim() as u64, level as u64) as u64;
            if survivors != expected {
                return Err(Error::LawViolation(format!(
                    "{tau} with level {level} kept {survivors} faces, expected {expected}"
                )));
            }
            if let Some(s) = (level + 1..=tau.dim()).flat_map(|j| tau.faces_of_dim(j)).find(|s| set.contains(s)) {
                return Err(Error::LawViolation(format!("{s} above level {level} of {tau} survived")));
            }
        }
        good_inventory.push(GoodSimplex { simplex: tau.clone(), level, survivors });
    }

    let report = CollapseReport {
        ell,
        f_prime: counts(&set, r),
        f,
        g: g_counts(x),
        g_hat: (0..=r).map(|k| g_hat(x, k) as u64).collect(),
        g_prime: if ell <= r { g_prime(x, ell) as u64 } else { 0 },
        bad: table.bad_counts().to_vec(),
        good_inventory,
        removed_pairs,
    };
    Ok((SimplicialComplex::from_closed(ambient, set), report))
}

pub fn collapse_report(x: &Hypergraph, ell: usize) -> Result<CollapseReport> {
    collapse_complex(x, ell).map(|(_, report)| report)
}

/// The collapse used to bound `b_k`: goodness is decided in `X̃ = X` minus its
/// `(k-1)`-simplices, and only the pairs touching dimensions `≥ k` are applied to
/// `closure(X)`. Returns the collapsed complex and its face counts `f̃′`.
pub fn collapse_with_deleted_dim(x: &Hypergraph, k: usize, ell: usize) -> Result<(SimplicialComplex, Vec<u64>)> {
    collapse_with_deleted_dim_with(x, k, ell, Verification::Auto)
}

pub fn collapse_with_deleted_dim_with(
    x: &Hypergraph,
    k: usize,
    ell: usize,
    verification: Verification,
) -> Result<(SimplicialComplex, Vec<u64>)> {
    if ell > k {
        return Err(Error::InvalidParams(format!("deleted-dimension collapse needs ell <= k, got ell={ell} k={k}")));
    }
    let ambient = x.ambient();
    let trimmed = if k >= 1 { x.without_dim(k - 1) } else { x.clone() };
    let table = classify_goodness(&trimmed, ell);
    let mut set: HashSet<Simplex> = closure(x).iter().cloned().collect();
    apply_collapse(&mut set, &table, k.saturating_sub(1), ambient.n, ambient.r, verification.enabled(ambient.n))?;
    let f = counts(&set, ambient.r);
    Ok((SimplicialComplex::from_closed(ambient, set), f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Ambient;
    use crate::homology::{homology_profile, HomologyMode};
    use crate::simplex;

    fn hg(n: u32, r: usize, s: impl IntoIterator<Item = Simplex>) -> Hypergraph {
        Hypergraph::new(Ambient::new(n, r).unwrap(), s).unwrap()
    }

    #[test]
    fn lone_tetrahedron() {
        let x = hg(3, 3, [simplex![0, 1, 2, 3]]);
        let t = classify_goodness(&x, 1);
        assert_eq!(t.level(&simplex![0, 1, 2, 3]), Some(1));
        let (y, rep) = collapse_complex_with(&x, 1, Verification::Always).unwrap();
        assert_eq!(rep.f_prime, vec![4, 3, 0, 0]);
        assert_eq!(y.of_dim(1), &[simplex![0, 1], simplex![0, 2], simplex![0, 3]]);
        assert_eq!(rep.good_inventory[0].survivors, 3);
    }

    #[test]
    fn triangles_sharing_an_edge() {
        let x = hg(3, 2, [simplex![0, 1, 2], simplex![0, 1, 3]]);
        let t = classify_goodness(&x, 1);
        for tau in [simplex![0, 1, 2], simplex![0, 1, 3]] {
            assert!(!t.is_k_good(&tau, 1));
            assert!(t.is_k_good(&tau, 2));
            assert_eq!(t.level(&tau), Some(2));
        }
        assert_eq!(t.bad_count(1), 2);
        let rep = collapse_report(&x, 1).unwrap();
        assert_eq!((rep.g_hat[1], rep.f[1], rep.bad[1]), (6, 5, 2));
    }

    #[test]
    fn disjoint_triangles() {
        let x = hg(5, 2, [simplex![0, 1, 2], simplex![3, 4, 5]]);
        let (y, rep) = collapse_complex_with(&x, 1, Verification::Always).unwrap();
        assert_eq!(rep.bad, vec![0, 0, 0]);
        assert_eq!(rep.f_prime, vec![6, 4, 0]);
        assert_eq!(rep.g_hat, rep.f);
        let before = homology_profile(&closure(&x), HomologyMode::Exact).unwrap();
        let after = homology_profile(&y, HomologyMode::Exact).unwrap();
        assert_eq!(before, after);
        assert_eq!(after.betti[0], 1);
    }

    #[test]
    fn single_vertex_at_level_zero() {
        let x = hg(0, 0, [simplex![0]]);
        let (y, rep) = collapse_complex_with(&x, 0, Verification::Always).unwrap();
        assert_eq!(y.len(), 1);
        assert_eq!(rep.good_inventory[0].level, 0);
    }

    #[test]
    fn isolated_triangle_collapses_to_apex() {
        let x = hg(4, 2, [simplex![1, 2, 4]]);
        let (y, _) = collapse_complex_with(&x, 0, Verification::Always).unwrap();
        assert_eq!(y.iter().cloned().collect::<Vec<_>>(), vec![simplex![1]]);
    }

    #[test]
    fn contained_members_are_never_good() {
        let x = hg(3, 2, [simplex![0, 1], simplex![0, 1, 2]]);
        let t = classify_goodness(&x, 1);
        assert_eq!(t.level(&simplex![0, 1]), None);
        assert_eq!(t.level(&simplex![0, 1, 2]), Some(2));
        assert_eq!(t.bad_count(1), 2);
        assert_eq!(t.bad_count(2), 0);
    }

    #[test]
    fn deleted_dimension_example() {
        let x = hg(2, 2, [simplex![0, 1, 2], simplex![0, 1]]);
        let (_, f) = collapse_with_deleted_dim_with(&x, 2, 1, Verification::Always).unwrap();
        assert_eq!(f[2], 0);
        // without deletion the triangle's level is 2 and nothing moves in dimension 2
        assert_eq!(collapse_report(&x, 1).unwrap().f_prime[2], 1);
    }

    #[test]
    fn deleted_dimension_without_lower_members_matches() {
        let x = hg(6, 2, [simplex![0, 1, 2], simplex![2, 3, 4], simplex![0, 5, 6]]);
        let (_, rep) = collapse_complex(&x, 1).unwrap();
        let (_, f) = collapse_with_deleted_dim(&x, 2, 1).unwrap();
        assert_eq!(f[2], rep.f_prime[2]);
    }

    #[test]
    fn deleted_dimension_rejects_bad_order() {
        let x = hg(2, 2, [simplex![0, 1, 2]]);
        assert!(collapse_with_deleted_dim(&x, 1, 2).is_err());
    }
}
