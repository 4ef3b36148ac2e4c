//! Seeded generation of the random hypergraph `X`, where each `i`-simplex on `{0, …, n}`
//! is selected independently with probability `n^{-α_i}`, and the weighted simplex counts
//! built from it.
//!
//! Inclusion of the simplex with canonical rank `ρ` in dimension `i` is decided by the
//! `ρ`-th 64-bit output of a ChaCha8 stream keyed by the trial seed and `i`, so the sample
//! does not depend on how the simplices are visited. Probabilities are `f64`.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{binomial, binomial_f64, unrank_lex, LexSubsets};
use crate::complex::{Ambient, Hypergraph};
use crate::error::{Error, Result};
use crate::simplex::{Simplex, MAX_DIM};

/// `(n, r, α)` with `α_i ∈ [0, ∞]`; `α_i = ∞` means dimension `i` is never selected.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ModelParams {
    pub n: u32,
    pub r: usize,
    #[serde(with = "crate::ext_real::vec")]
    pub alpha: Vec<f64>,
}

impl ModelParams {
    pub fn new(n: u32, r: usize, alpha: Vec<f64>) -> Result<Self> {
        let params = ModelParams { n, r, alpha };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let ModelParams { n, r, alpha } = self;
        if *n < 1 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if *r as u64 > *n as u64 || *r > MAX_DIM {
            return Err(Error::InvalidParams(format!("need r <= n and r <= {MAX_DIM}, got r={r} n={n}")));
        }
        if alpha.len() != r + 1 {
            return Err(Error::InvalidParams(format!("expected {} alpha values, got {}", r + 1, alpha.len())));
        }
        if let Some(a) = alpha.iter().find(|a| a.is_nan() || **a < 0.0) {
            return Err(Error::InvalidParams(format!("alpha entries must lie in [0, inf], got {a}")));
        }
        Ok(())
    }

    /// Parses `0,0.5,inf` style lists.
    pub fn parse_alpha(text: &str) -> Result<Vec<f64>> {
        text.split(',').map(|t| crate::ext_real::parse(t.trim())).collect()
    }

    pub fn ambient(&self) -> Ambient {
        Ambient { n: self.n, r: self.r }
    }

    /// `n^{-α_i}`, with `n^{-∞} = 0`.
    pub fn p(&self, i: usize) -> f64 {
        let a = self.alpha[i];
        if a.is_infinite() {
            0.0
        } else {
            (self.n as f64).powf(-a)
        }
    }

    /// `E g_i = C(n+1, i+1) n^{-α_i}`.
    pub fn expected_g(&self, i: usize) -> f64 {
        binomial_f64(self.n as u64 + 1, i as u64 + 1) * self.p(i)
    }

    pub fn simplex_count(&self, i: usize) -> u128 {
        binomial(self.n as u64 + 1, i as u64 + 1)
    }
}

/// Master seed plus trial index; identical pairs produce identical hypergraphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct SampleSeed {
    pub master: u64,
    pub trial: u64,
}

impl SampleSeed {
    pub fn new(master: u64, trial: u64) -> Self {
        SampleSeed { master, trial }
    }

    fn key(&self) -> [u8; 32] {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.master.to_le_bytes());
        key[8..16].copy_from_slice(&self.trial.to_le_bytes());
        key
    }

    /// Stream for the per-simplex Bernoulli draws of dimension `dim`.
    fn bernoulli_stream(&self, dim: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key());
        rng.set_stream(dim as u64);
        rng
    }

    fn skip_stream(&self, dim: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key());
        rng.set_stream((1 << 32) | dim as u64);
        rng
    }

    /// The uniform draw deciding inclusion of the simplex with canonical rank `rank` in
    /// dimension `dim`, computed by random access into the stream.
    pub fn inclusion_draw(&self, dim: usize, rank: u128) -> f64 {
        let mut rng = self.bernoulli_stream(dim);
        rng.set_word_pos(2 * rank);
        unit_interval(rng.next_u64())
    }
}

fn unit_interval(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingStrategy {
    /// One draw per simplex; the reference path.
    #[default]
    Bernoulli,
    /// Geometric gaps over the rank order; same distribution, different realisation,
    /// cost proportional to the number of selected simplices.
    Skip,
}

pub fn sample_hypergraph(params: &ModelParams, seed: SampleSeed) -> Hypergraph {
    sample_hypergraph_with(params, seed, SamplingStrategy::Bernoulli)
}

pub fn sample_hypergraph_with(params: &ModelParams, seed: SampleSeed, strategy: SamplingStrategy) -> Hypergraph {
    let mut chosen = Vec::new();
    for i in 0..=params.r {
        let p = params.p(i);
        if p <= 0.0 {
            continue;
        }
        match strategy {
            SamplingStrategy::Bernoulli => bernoulli_dim(params.n, i, p, seed, &mut chosen),
            SamplingStrategy::Skip => skip_dim(params.n, i, p, seed, &mut chosen),
        }
    }
    Hypergraph::new(params.ambient(), chosen).expect("sampled simplices lie in the ambient")
}

fn bernoulli_dim(n: u32, i: usize, p: f64, seed: SampleSeed, out: &mut Vec<Simplex>) {
    let mut rng = seed.bernoulli_stream(i);
    let mut it = LexSubsets::new(i + 1, n + 1);
    while let Some(s) = it.next_subset() {
        if unit_interval(rng.next_u64()) < p {
            out.push(Simplex::from_sorted(s));
        }
    }
}

fn skip_dim(n: u32, i: usize, p: f64, seed: SampleSeed, out: &mut Vec<Simplex>) {
    let total = binomial(n as u64 + 1, i as u64 + 1);
    let mut buf = Vec::with_capacity(i + 1);
    if p >= 1.0 {
        for rank in 0..total {
            unrank_lex(rank, i + 1, n + 1, &mut buf);
            out.push(Simplex::from_sorted(&buf));
        }
        return;
    }
    let mut rng = seed.skip_stream(i);
    let log_q = (-p).ln_1p();
    let mut pos: u128 = 0;
    loop {
        // number of failures before the next success is Geometric(p)
        let u: f64 = 1.0 - rng.gen::<f64>();
        let gap = (u.ln() / log_q).floor();
        if !gap.is_finite() || gap >= (total - pos) as f64 {
            break;
        }
        pos += gap as u128;
        if pos >= total {
            break;
        }
        unrank_lex(pos, i + 1, n + 1, &mut buf);
        out.push(Simplex::from_sorted(&buf));
        pos += 1;
    }
}

/// Number of selected simplices per dimension, `g_0, …, g_r`.
pub fn g_counts(x: &Hypergraph) -> Vec<u64> {
    x.f_vector().into_iter().map(|c| c as u64).collect()
}

/// `Σ_{i=k}^{r} a_i g_i` with `weights = [a_k, …, a_r]`.
pub fn weighted_count(x: &Hypergraph, k: usize, weights: &[u64]) -> u128 {
    assert_eq!(weights.len(), x.r() + 1 - k, "need one weight per dimension k..=r");
    weights
        .iter()
        .enumerate()
        .map(|(off, &a)| a as u128 * x.of_dim(k + off).len() as u128)
        .sum()
}

/// `ĝ_k = Σ_{i≥k} C(i+1, k+1) g_i`, the number of `k`-faces counted with multiplicity.
pub fn g_hat(x: &Hypergraph, k: usize) -> u128 {
    let w: Vec<u64> = (k..=x.r()).map(|i| binomial(i as u64 + 1, k as u64 + 1) as u64).collect();
    weighted_count(x, k, &w)
}

/// `ĝ′ = Σ_{i≥ℓ} C(i, ℓ) g_i`, the number of `ℓ`-faces surviving the cone collapse of every
/// selected simplex.
pub fn g_prime(x: &Hypergraph, ell: usize) -> u128 {
    let w: Vec<u64> = (ell..=x.r()).map(|i| binomial(i as u64, ell as u64) as u64).collect();
    weighted_count(x, ell, &w)
}
