//! Reduction to a complex with a full `(ℓ-1)`-skeleton.
//!
//! A face chooser `h` maps every `i`-simplex on `{0, …, n}` to one of its `ℓ`-faces so that
//! every `ℓ`-simplex has at least `C(n-ℓ, i-ℓ) / (2 C(i+1, ℓ+1))` preimages. Adding the
//! chosen faces of the selected `i`-simplices to the full `(ℓ-1)`-skeleton gives a complex
//! whose `ℓ`-simplices appear independently, each with a probability governed by the size
//! of its preimage.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asymptotics::AsymptoticProfile;
use crate::combinatorics::{binomial, rank_lex, unrank_lex, LexSubsets};
use crate::complex::{closure, Hypergraph, SimplicialComplex};
use crate::error::{Error, Result};
use crate::simplex::{Simplex, MAX_DIM};

#[derive(Debug, Clone, Copy)]
pub struct ChooserOptions {
    /// Number of fresh random draws before giving up.
    pub retry_budget: usize,
    /// Repair a draw by moving simplices along augmenting paths before judging it.
    pub repair: bool,
    /// Largest number of `i`-simplices the table may hold.
    pub max_table: u128,
}

impl Default for ChooserOptions {
    fn default() -> Self {
        ChooserOptions { retry_budget: 10, repair: true, max_table: 50_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceChooser {
    n: u32,
    ell: usize,
    i: usize,
    seed: u64,
    preimage_min: u64,
    /// Rank of `h(τ)` among the `ℓ`-simplices, indexed by the rank of `τ`.
    table: Vec<u64>,
}

/// Smallest preimage size meeting the bound, `⌈C(n-ℓ, i-ℓ) / (2 C(i+1, ℓ+1))⌉`.
pub fn required_preimage(n: u32, ell: usize, i: usize) -> u64 {
    let num = binomial(n as u64 - ell as u64, (i - ell) as u64);
    let den = 2 * binomial(i as u64 + 1, ell as u64 + 1);
    num.div_ceil(den) as u64
}

fn check_shape(n: u32, ell: usize, i: usize) -> Result<()> {
    if ell > i || i > MAX_DIM || i as u64 > n as u64 {
        return Err(Error::InvalidParams(format!(
            "face chooser needs ell <= i <= min(n, {MAX_DIM}), got n={n} ell={ell} i={i}"
        )));
    }
    Ok(())
}

struct Layout {
    m: u32,
    ell: usize,
    i: usize,
}

impl Layout {
    fn faces_of(&self, tau: &[u32]) -> Vec<u64> {
        let mut out = Vec::with_capacity(binomial(self.i as u64 + 1, self.ell as u64 + 1) as usize);
        let mut it = LexSubsets::new(self.ell + 1, self.i as u32 + 1);
        let mut face = Vec::with_capacity(self.ell + 1);
        while let Some(pos) = it.next_subset() {
            face.clear();
            face.extend(pos.iter().map(|&p| tau[p as usize]));
            out.push(rank_lex(&face, self.m) as u64);
        }
        out
    }

    /// Ranks of the `i`-simplices containing the `ℓ`-simplex of rank `sigma`.
    fn cofaces_of(&self, sigma: u64) -> Vec<u64> {
        let mut s = Vec::new();
        unrank_lex(sigma as u128, self.ell + 1, self.m, &mut s);
        let rest: Vec<u32> = (0..self.m).filter(|v| s.binary_search(v).is_err()).collect();
        let mut out = Vec::new();
        let mut it = LexSubsets::new(self.i - self.ell, rest.len() as u32);
        let mut tau = Vec::with_capacity(self.i + 1);
        while let Some(pos) = it.next_subset() {
            tau.clear();
            tau.extend(s.iter().copied());
            tau.extend(pos.iter().map(|&p| rest[p as usize]));
            tau.sort_unstable();
            out.push(rank_lex(&tau, self.m) as u64);
        }
        out
    }
}

fn counts_of(table: &[u64], sigmas: usize) -> Vec<u64> {
    let mut c = vec![0u64; sigmas];
    for &s in table {
        c[s as usize] += 1;
    }
    c
}

/// Moves simplices along augmenting paths until every count reaches `need`. Returns
/// `false` when some deficit cannot be fixed, which proves no valid chooser exists.
fn repair(layout: &Layout, table: &mut [u64], counts: &mut [u64], need: u64) -> bool {
    let sigmas = counts.len();
    let mut parent = vec![(0u64, 0u64); sigmas];
    let mut stamp = vec![0u32; sigmas];
    let mut search = 0u32;
    for start in 0..sigmas as u64 {
        while counts[start as usize] < need {
            // breadth-first search for an ℓ-simplex that can spare one preimage
            search += 1;
            stamp[start as usize] = search;
            let mut queue = VecDeque::from([start]);
            let mut found = None;
            'search: while let Some(s) = queue.pop_front() {
                for tau in layout.cofaces_of(s) {
                    let owner = table[tau as usize];
                    if stamp[owner as usize] == search {
                        continue;
                    }
                    stamp[owner as usize] = search;
                    parent[owner as usize] = (s, tau);
                    if counts[owner as usize] > need {
                        found = Some(owner);
                        break 'search;
                    }
                    queue.push_back(owner);
                }
            }
            let Some(mut node) = found else { return false };
            counts[node as usize] -= 1;
            while node != start {
                let (prev, tau) = parent[node as usize];
                table[tau as usize] = prev;
                node = prev;
            }
            counts[start as usize] += 1;
        }
    }
    true
}

impl FaceChooser {
    pub fn build(n: u32, ell: usize, i: usize, seed: u64) -> Result<Self> {
        Self::build_with(n, ell, i, seed, ChooserOptions::default())
    }

    pub fn build_with(n: u32, ell: usize, i: usize, seed: u64, opts: ChooserOptions) -> Result<Self> {
        check_shape(n, ell, i)?;
        let m = n + 1;
        let taus = binomial(m as u64, i as u64 + 1);
        if taus > opts.max_table {
            return Err(Error::SimplexCap { simplices: taus, cap: opts.max_table });
        }
        let sigmas = binomial(m as u64, ell as u64 + 1) as usize;
        if i == ell {
            let table = (0..taus as u64).collect();
            return Ok(FaceChooser { n, ell, i, seed, preimage_min: 1, table });
        }
        let layout = Layout { m, ell, i };
        let need = required_preimage(n, ell, i);
        let faces_per = binomial(i as u64 + 1, ell as u64 + 1) as usize;
        let mut worst = (0u64, u64::MAX);
        let budget = opts.retry_budget.max(1);
        for attempt in 0..budget {
            let mut key = [0u8; 32];
            key[..8].copy_from_slice(&seed.to_le_bytes());
            key[8..16].copy_from_slice(&(attempt as u64).to_le_bytes());
            let mut rng = ChaCha8Rng::from_seed(key);
            let mut table = Vec::with_capacity(taus as usize);
            let mut it = LexSubsets::new(i + 1, m);
            while let Some(tau) = it.next_subset() {
                let faces = layout.faces_of(tau);
                table.push(faces[rng.gen_range(0..faces_per)]);
            }
            let mut counts = counts_of(&table, sigmas);
            let feasible = !opts.repair || repair(&layout, &mut table, &mut counts, need);
            let (arg, min) = counts.iter().enumerate().map(|(s, &c)| (s as u64, c)).min_by_key(|e| e.1).unwrap_or((0, 0));
            if min >= need {
                return Ok(FaceChooser { n, ell, i, seed, preimage_min: min, table });
            }
            if min < worst.1 {
                worst = (arg, min);
            }
            if !feasible {
                return Err(chooser_error(n, ell, i, attempt + 1, worst, need, m));
            }
        }
        Err(chooser_error(n, ell, i, budget, worst, need, m))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn preimage_min(&self) -> u64 {
        self.preimage_min
    }

    /// The chosen `ℓ`-face of an `i`-simplex.
    pub fn choose(&self, tau: &Simplex) -> Result<Simplex> {
        if tau.dim() != self.i || tau.max_vertex() > self.n {
            return Err(Error::InvalidParams(format!("{tau} is not an {}-simplex on 0..={}", self.i, self.n)));
        }
        let rank = rank_lex(tau.vertices(), self.n + 1) as usize;
        let mut out = Vec::new();
        unrank_lex(self.table[rank] as u128, self.ell + 1, self.n + 1, &mut out);
        Ok(Simplex::from_sorted(&out))
    }

    /// `|h⁻¹(σ)|` for every `ℓ`-simplex, indexed by rank.
    pub fn preimage_counts(&self) -> Vec<u64> {
        counts_of(&self.table, binomial(self.n as u64 + 1, self.ell as u64 + 1) as usize)
    }

    /// Re-checks `h(τ) ⊆ τ` for every entry and returns the minimum preimage size.
    pub fn verify(&self) -> Result<u64> {
        let m = self.n + 1;
        let mut it = LexSubsets::new(self.i + 1, m);
        let mut face = Vec::new();
        let mut rank = 0usize;
        while let Some(tau) = it.next_subset() {
            unrank_lex(self.table[rank] as u128, self.ell + 1, m, &mut face);
            if !face.iter().all(|v| tau.binary_search(v).is_ok()) {
                return Err(Error::LawViolation(format!(
                    "chosen face {} is not contained in {}",
                    Simplex::from_sorted(&face),
                    Simplex::from_sorted(tau)
                )));
            }
            rank += 1;
        }
        Ok(self.preimage_counts().into_iter().min().unwrap_or(0))
    }

    pub fn meets_bound(&self) -> bool {
        self.preimage_min >= required_preimage(self.n, self.ell, self.i)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# face-chooser n={} ell={} i={} seed={} preimage_min={}\n",
            self.n, self.ell, self.i, self.seed, self.preimage_min
        );
        for r in &self.table {
            writeln!(out, "{r}").expect("writing to a String");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let bad_header = || Error::Parse { line: 1, msg: format!("bad face-chooser header {header:?}") };
        let rest = header.strip_prefix("# face-chooser").ok_or_else(bad_header)?;
        let mut fields = [None::<u64>; 5];
        for tok in rest.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(bad_header)?;
            let slot = ["n", "ell", "i", "seed", "preimage_min"].iter().position(|&f| f == k).ok_or_else(bad_header)?;
            fields[slot] = Some(v.parse().map_err(|_| bad_header())?);
        }
        let [Some(n), Some(ell), Some(i), Some(seed), Some(preimage_min)] = fields else {
            return Err(bad_header());
        };
        let (n, ell, i) = (u32::try_from(n).map_err(|_| bad_header())?, ell as usize, i as usize);
        check_shape(n, ell, i)?;
        let sigmas = binomial(n as u64 + 1, ell as u64 + 1) as u64;
        let mut table = Vec::new();
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: u64 = line.parse().map_err(|e| Error::Parse { line: idx + 1, msg: format!("{e}") })?;
            if v >= sigmas {
                return Err(Error::Parse { line: idx + 1, msg: format!("face rank {v} out of range") });
            }
            table.push(v);
        }
        let expected = binomial(n as u64 + 1, i as u64 + 1);
        if table.len() as u128 != expected {
            return Err(Error::Parse { line: 1, msg: format!("expected {expected} entries, found {}", table.len()) });
        }
        let chooser = FaceChooser { n, ell, i, seed, preimage_min, table };
        let actual = chooser.verify()?;
        if actual != preimage_min {
            return Err(Error::Parse { line: 1, msg: format!("header preimage_min={preimage_min}, table gives {actual}") });
        }
        Ok(chooser)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }
}

fn chooser_error(n: u32, ell: usize, i: usize, attempts: usize, worst: (u64, u64), need: u64, m: u32) -> Error {
    let mut w = Vec::new();
    unrank_lex(worst.0 as u128, ell + 1, m, &mut w);
    Error::ChooserBudgetExhausted {
        n,
        ell,
        i,
        attempts,
        worst: Simplex::from_sorted(&w),
        count: worst.1,
        required: need,
    }
}

/// The index `i` a chooser is built for: the smallest `i` with `β_i = β`.
pub fn stratum_index(profile: &AsymptoticProfile) -> Option<usize> {
    profile.stratum.first().copied()
}

/// `Ŷ`: the full `(ℓ-1)`-skeleton on `{0, …, n}` together with `h(τ)` for every selected
/// `i`-simplex `τ`.
pub fn modified_complex(x: &Hypergraph, chooser: &FaceChooser, ell: usize) -> Result<SimplicialComplex> {
    if chooser.ell() != ell || chooser.n() != x.n() {
        return Err(Error::InvalidParams(format!(
            "chooser built for n={} ell={}, complex needs n={} ell={ell}",
            chooser.n(),
            chooser.ell(),
            x.n()
        )));
    }
    let ambient = x.ambient();
    let mut simplices = Vec::new();
    if ell >= 1 {
        let mut it = LexSubsets::new(ell, x.n() + 1);
        while let Some(s) = it.next_subset() {
            simplices.push(Simplex::from_sorted(s));
        }
    }
    if chooser.i() <= x.r() {
        for tau in x.of_dim(chooser.i()) {
            simplices.push(chooser.choose(tau)?);
        }
    }
    Ok(closure(&Hypergraph::new(ambient, simplices)?))
}
