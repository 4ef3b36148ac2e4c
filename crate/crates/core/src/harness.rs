//! Seeded Monte Carlo experiments.
//!
//! Trial `t` of an experiment with master seed `s` samples from `SampleSeed(s, t)`, so the
//! records depend only on the configuration. Trials run on a rayon pool and are collected
//! back in trial order; all aggregation is a sequential fold over that order.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{asymptotic_profile, predicted_counts, AsymptoticProfile, Omega, Prediction, Regime};
use crate::collapse::{classify_goodness, collapse_complex_with, collapse_with_deleted_dim_with, Verification};
use crate::complex::{closure, skeleton, Hypergraph, SimplicialComplex};
use crate::error::{Error, Result};
use crate::ext_real;
use crate::homology::{homology_profile_with, HomologyMode, HomologyOptions};
use crate::laws;
use crate::lm::{modified_complex, stratum_index, FaceChooser};
use crate::sampler::{g_counts, g_hat, g_prime, sample_hypergraph_with, ModelParams, SampleSeed, SamplingStrategy};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HomologyTarget {
    /// Homology of the collapsed complex `Y′` (same homology, fewer cells).
    #[default]
    Collapsed,
    /// Homology of `closure(X)` itself.
    Closure,
}

/// Flat experiment description; every field has a default so a JSON file may set only a
/// few of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: u32,
    pub r: usize,
    #[serde(with = "ext_real::vec")]
    pub alpha: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub homology: bool,
    pub collapse: bool,
    pub goodness: bool,
    pub lm: bool,
    pub homology_mode: HomologyMode,
    pub homology_on: HomologyTarget,
    /// Also compare homology of `Y′` with that of `closure(X)` on every trial.
    pub check_collapse_homology: bool,
    /// Critical dimension used for goodness and collapse; defaults to `⌊β⌋` clamped to `r`,
    /// or 0 when `β` is negative or `-∞`.
    pub ell: Option<usize>,
    pub omega: Omega,
    pub strategy: SamplingStrategy,
    pub max_simplices: u64,
    pub max_nonzeros: usize,
    /// Record wall-clock phase times; off by default so outputs are byte-reproducible.
    pub timings: bool,
    pub threads: Option<usize>,
    pub chooser_seed: u64,
    pub csv: Option<PathBuf>,
    pub jsonl: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 20,
            r: 1,
            alpha: vec![0.0, 0.5],
            trials: 10,
            seed: 0,
            homology: true,
            collapse: true,
            goodness: true,
            lm: false,
            homology_mode: HomologyMode::FieldRank,
            homology_on: HomologyTarget::Collapsed,
            check_collapse_homology: true,
            ell: None,
            omega: Omega::Ln,
            strategy: SamplingStrategy::Bernoulli,
            max_simplices: 10_000_000,
            max_nonzeros: 5_000_000,
            timings: false,
            threads: None,
            chooser_seed: 0,
            csv: None,
            jsonl: None,
            summary: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }

    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.n, self.r, self.alpha.clone())
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be at least 1".into()));
        }
        if self.ell.is_some_and(|l| l > self.r) {
            return Err(Error::InvalidParams(format!("ell must not exceed r = {}", self.r)));
        }
        Ok(())
    }

    pub fn resolved_ell(&self, profile: &AsymptoticProfile) -> usize {
        self.ell.or(profile.ell).unwrap_or(0).min(self.r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub trial: u64,
    pub seed: u64,
    pub n: u32,
    pub r: usize,
    #[serde(with = "ext_real::vec")]
    pub alpha: Vec<f64>,
    pub ell: usize,
    pub g: Vec<u64>,
    /// `f_k(closure(X))`; absent when the trial hit the simplex cap.
    pub f: Option<Vec<u64>>,
    /// `ĝ_k` for `k = ℓ..=r`.
    pub g_hat: Vec<u64>,
    pub g_prime: u64,
    pub f_prime: Option<Vec<u64>>,
    /// `B_k` for `k = ℓ..=r`.
    #[serde(rename = "B")]
    pub bad: Option<Vec<u64>>,
    pub betti: Option<Vec<u64>>,
    /// Largest `k` with a complete `k`-skeleton, `-1` when not even every vertex appears.
    pub full_skeleton_up_to: i64,
    pub phase_ms_sample: u64,
    pub phase_ms_collapse: u64,
    pub phase_ms_homology: u64,
    /// `f̃′_k` of the deleted-dimension collapse at `k`, for `k = ℓ+1..=r`.
    pub ftilde_prime: Option<Vec<u64>>,
    /// Whether `H̃_{ℓ-1}` of the modified complex vanishes.
    pub lm_vanishing: Option<bool>,
    pub capped: bool,
    pub empty: bool,
    pub law_violations: Vec<String>,
}

impl ExperimentRecord {
    /// The record as it reads back from CSV, which drops the JSONL-only fields.
    pub fn csv_view(&self) -> ExperimentRecord {
        ExperimentRecord {
            ftilde_prime: None,
            lm_vanishing: None,
            capped: false,
            empty: false,
            law_violations: Vec::new(),
            ..self.clone()
        }
    }
}

struct Shared {
    params: ModelParams,
    ell: usize,
    chooser: Option<FaceChooser>,
}

fn ms(t: Option<Instant>) -> u64 {
    t.map_or(0, |t| t.elapsed().as_millis() as u64)
}

fn resource_error(e: &Error) -> bool {
    matches!(e, Error::ResourceCap { .. } | Error::SimplexCap { .. })
}

fn run_trial(cfg: &ExperimentConfig, shared: &Shared, trial: u64) -> ExperimentRecord {
    let (params, ell, r) = (&shared.params, shared.ell, cfg.r);
    let clock = || cfg.timings.then(Instant::now);
    let hopts = HomologyOptions { mode: cfg.homology_mode, max_nonzeros: cfg.max_nonzeros };

    let t = clock();
    let x = sample_hypergraph_with(params, SampleSeed::new(cfg.seed, trial), cfg.strategy);
    let phase_ms_sample = ms(t);
    let mut rec = ExperimentRecord {
        trial,
        seed: cfg.seed,
        n: cfg.n,
        r,
        alpha: cfg.alpha.clone(),
        ell,
        g: g_counts(&x),
        f: None,
        g_hat: (ell..=r).map(|k| g_hat(&x, k) as u64).collect(),
        g_prime: g_prime(&x, ell) as u64,
        f_prime: None,
        bad: None,
        betti: None,
        full_skeleton_up_to: -1,
        phase_ms_sample,
        phase_ms_collapse: 0,
        phase_ms_homology: 0,
        ftilde_prime: None,
        lm_vanishing: None,
        capped: false,
        empty: x.is_empty(),
        law_violations: Vec::new(),
    };

    // faces of every selected simplex bound |Y| from above
    let bound: u128 = rec.g.iter().enumerate().map(|(i, &c)| c as u128 * ((1u128 << (i + 1)) - 1)).sum();
    if bound > cfg.max_simplices as u128 {
        rec.capped = true;
        return rec;
    }
    let y = closure(&x);
    rec.f = Some(y.f_vector().iter().map(|&c| c as u64).collect());
    rec.full_skeleton_up_to = y.full_skeleton_up_to().map_or(-1, |k| k as i64);
    let full_g_hat: Vec<u64> = (0..=r).map(|k| g_hat(&x, k) as u64).collect();
    for (k, (&f, &gh)) in rec.f.as_ref().unwrap().iter().zip(&full_g_hat).enumerate() {
        if f > gh {
            rec.law_violations.push(format!("f_{k} = {f} exceeds ghat_{k} = {gh}"));
        }
    }

    let t = clock();
    let mut collapsed = None;
    if cfg.collapse {
        match collapse_complex_with(&x, ell, Verification::Auto) {
            Ok((yp, report)) => {
                rec.law_violations.extend(laws::count_laws(&report));
                rec.f_prime = Some(report.f_prime.clone());
                rec.bad = Some(report.bad[ell..].to_vec());
                collapsed = Some((yp, report));
            }
            Err(e) => rec.law_violations.push(e.to_string()),
        }
        let mut ft = Vec::new();
        for k in ell + 1..=r {
            match collapse_with_deleted_dim_with(&x, k, ell, Verification::Auto) {
                Ok((_, f)) => ft.push(f[k]),
                Err(e) => {
                    rec.law_violations.push(e.to_string());
                    ft.push(u64::MAX);
                }
            }
        }
        rec.ftilde_prime = Some(ft);
    } else if cfg.goodness {
        rec.bad = Some(classify_goodness(&x, ell).bad_counts()[ell..].to_vec());
    }
    rec.phase_ms_collapse = ms(t);

    let t = clock();
    if cfg.homology {
        let target = match (&collapsed, cfg.homology_on) {
            (Some((yp, _)), HomologyTarget::Collapsed) => yp,
            _ => &y,
        };
        match homology_profile_with(target, hopts) {
            Ok(h) => {
                rec.law_violations.extend(laws::euler_poincare(target, &h));
                if let Some((yp, report)) = &collapsed {
                    rec.law_violations.extend(laws::sandwich(report, &h));
                    if cfg.check_collapse_homology {
                        let other = if std::ptr::eq(target, yp) { &y } else { yp };
                        match homology_profile_with(other, hopts) {
                            Ok(h2) if h2 != h => rec
                                .law_violations
                                .push(format!("collapse changed homology: {:?} vs {:?}", h.betti, h2.betti)),
                            Err(e) if !resource_error(&e) => rec.law_violations.push(e.to_string()),
                            _ => {}
                        }
                    }
                }
                if let Some(ft) = &rec.ftilde_prime {
                    for (off, &v) in ft.iter().enumerate() {
                        rec.law_violations.extend(laws::deleted_dim_bound(ell + 1 + off, v, &h));
                    }
                }
                rec.betti = Some(h.betti);
            }
            Err(e) if resource_error(&e) => rec.capped = true,
            Err(e) => rec.law_violations.push(e.to_string()),
        }
    }
    if let Some(chooser) = &shared.chooser {
        match lm_check(&x, &y, chooser, ell, hopts) {
            Ok((vanishing, violation)) => {
                rec.lm_vanishing = Some(vanishing);
                rec.law_violations.extend(violation);
            }
            Err(e) if resource_error(&e) => rec.capped = true,
            Err(e) => rec.law_violations.push(e.to_string()),
        }
    }
    rec.phase_ms_homology = ms(t);
    rec
}

/// Whether `H̃_{ℓ-1}(Ŷ)` vanishes, plus a violation if `H̃_{ℓ-1}(K ∪ Y)` is larger than it
/// (the latter is a quotient of the former).
fn lm_check(
    x: &Hypergraph,
    y: &SimplicialComplex,
    chooser: &FaceChooser,
    ell: usize,
    opts: HomologyOptions,
) -> Result<(bool, Option<String>)> {
    let hat = modified_complex(x, chooser, ell)?;
    let h_hat = homology_profile_with(&hat, opts)?;
    let k = ell - 1;
    let k_union_y = skeleton(&hat.union(&skeleton(y, ell)), ell);
    let h_union = homology_profile_with(&k_union_y, opts)?;
    let violation = (h_union.betti(k) > h_hat.betti(k)).then(|| {
        format!("b_{k}(K u Y) = {} exceeds b_{k}(Y-hat) = {}", h_union.betti(k), h_hat.betti(k))
    });
    Ok((h_hat.vanishes(k), violation))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub profile: AsymptoticProfile,
    pub records: Vec<ExperimentRecord>,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Experiment> {
    cfg.validate()?;
    let params = cfg.params()?;
    let profile = asymptotic_profile(&params);
    let ell = cfg.resolved_ell(&profile);
    let chooser = match (cfg.lm, stratum_index(&profile)) {
        (true, Some(i)) if ell >= 1 && i >= ell => Some(FaceChooser::build(cfg.n, ell, i, cfg.chooser_seed)?),
        _ => None,
    };
    let shared = Shared { params, ell, chooser };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    let records = pool.install(|| (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, &shared, t)).collect());
    Ok(Experiment { config: cfg.clone(), profile, records })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub count: u64,
    pub mean: f64,
    pub stderr: f64,
}

impl Stat {
    /// Mean and standard error from exact integer sums.
    pub fn of(values: impl IntoIterator<Item = u64>) -> Stat {
        let (mut count, mut sum, mut sq) = (0u64, 0u128, 0u128);
        for v in values {
            count += 1;
            sum += v as u128;
            sq += (v as u128) * (v as u128);
        }
        if count == 0 {
            return Stat { count, mean: f64::NAN, stderr: f64::NAN };
        }
        let c = count as f64;
        let mean = sum as f64 / c;
        let var = if count > 1 { (sq as f64 - sum as f64 * mean) / (c - 1.0) } else { 0.0 };
        Stat { count, mean, stderr: (var.max(0.0) / c).sqrt() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub name: String,
    pub observed: f64,
    pub predicted: Option<f64>,
    pub band: (f64, f64),
    /// Observed over predicted for ratio checks, the observed fraction otherwise.
    pub value: f64,
    pub omega: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Bands {
    pub ratio: (f64, f64),
    pub min_fraction: f64,
}

impl Default for Bands {
    fn default() -> Self {
        Bands { ratio: (0.8, 1.2), min_fraction: 0.9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: u64,
    pub capped: u64,
    pub regime: Regime,
    pub ell: usize,
    pub law_violations: u64,
    pub stats: Vec<(String, Stat)>,
    /// Fraction of uncapped trials with `b̃_k = 0`, per `k`.
    pub vanishing_fraction: Vec<f64>,
    pub full_lower_skeleton_fraction: Option<f64>,
    /// Fraction with `f̃′_k = 0` for `ℓ′ < k ≤ r`.
    pub ftilde_zero_fraction: Vec<(usize, f64)>,
    pub empty_fraction: f64,
    pub lm_vanishing_fraction: Option<f64>,
    pub comparisons: Vec<Comparison>,
}

impl Summary {
    pub fn stat(&self, name: &str) -> Option<Stat> {
        self.stats.iter().find(|(n, _)| n == name).map(|(_, s)| *s)
    }

    pub fn passed(&self) -> bool {
        self.law_violations == 0 && self.comparisons.iter().all(|c| c.passed)
    }
}

fn fraction(hits: usize, total: usize) -> f64 {
    if total == 0 {
        f64::NAN
    } else {
        hits as f64 / total as f64
    }
}

pub fn aggregate_and_compare(records: &[ExperimentRecord], profile: &AsymptoticProfile, n: u32, omega: Omega) -> Summary {
    aggregate_with_bands(records, profile, n, omega, Bands::default())
}

pub fn aggregate_with_bands(
    records: &[ExperimentRecord],
    profile: &AsymptoticProfile,
    n: u32,
    omega: Omega,
    bands: Bands,
) -> Summary {
    let r = profile.r;
    let ell = records.first().map_or_else(|| profile.ell.unwrap_or(0).min(r), |rec| rec.ell);
    let live: Vec<&ExperimentRecord> = records.iter().filter(|rec| !rec.capped).collect();
    let mut stats = Vec::new();
    for i in 0..=r {
        stats.push((format!("g_{i}"), Stat::of(live.iter().map(|rec| rec.g[i]))));
    }
    let field = |name: &str, get: &dyn Fn(&ExperimentRecord) -> Option<u64>| {
        let vals: Vec<u64> = live.iter().filter_map(|rec| get(rec)).collect();
        (!vals.is_empty()).then(|| (name.to_string(), Stat::of(vals)))
    };
    for k in 0..=r {
        stats.extend(field(&format!("f_{k}"), &|rec| rec.f.as_ref().map(|f| f[k])));
        stats.extend(field(&format!("fprime_{k}"), &|rec| rec.f_prime.as_ref().map(|f| f[k])));
        stats.extend(field(&format!("b_{k}"), &|rec| rec.betti.as_ref().map(|b| b[k])));
    }
    for k in ell..=r {
        stats.extend(field(&format!("ghat_{k}"), &|rec| rec.g_hat.get(k - ell).copied()));
        stats.extend(field(&format!("B_{k}"), &|rec| rec.bad.as_ref().map(|b| b[k - ell])));
    }
    stats.extend(field("gprime", &|rec| Some(rec.g_prime)));

    let with_betti: Vec<&Vec<u64>> = live.iter().filter_map(|rec| rec.betti.as_ref()).collect();
    let vanishing_fraction =
        (0..=r).map(|k| fraction(with_betti.iter().filter(|b| b[k] == 0).count(), with_betti.len())).collect();
    let full_lower_skeleton_fraction = (ell >= 1).then(|| {
        fraction(live.iter().filter(|rec| rec.full_skeleton_up_to >= ell as i64 - 1).count(), live.len())
    });
    let top = profile.ell_prime.unwrap_or(ell);
    let ft: Vec<&Vec<u64>> = live.iter().filter_map(|rec| rec.ftilde_prime.as_ref()).collect();
    let ftilde_zero_fraction = (top + 1..=r)
        .filter(|&k| k > ell)
        .map(|k| (k, fraction(ft.iter().filter(|f| f[k - ell - 1] == 0).count(), ft.len())))
        .collect();
    let empty_fraction = fraction(records.iter().filter(|rec| rec.empty).count(), records.len());
    let lm: Vec<bool> = live.iter().filter_map(|rec| rec.lm_vanishing).collect();
    let lm_vanishing_fraction = (!lm.is_empty()).then(|| fraction(lm.iter().filter(|&&v| v).count(), lm.len()));

    let mut summary = Summary {
        trials: records.len() as u64,
        capped: (records.len() - live.len()) as u64,
        regime: profile.regime,
        ell,
        law_violations: records.iter().map(|rec| rec.law_violations.len() as u64).sum(),
        stats,
        vanishing_fraction,
        full_lower_skeleton_fraction,
        ftilde_zero_fraction,
        empty_fraction,
        lm_vanishing_fraction,
        comparisons: Vec::new(),
    };
    summary.comparisons = compare(&summary, &live, profile, n, omega, bands);
    summary
}

fn compare(
    s: &Summary,
    live: &[&ExperimentRecord],
    profile: &AsymptoticProfile,
    n: u32,
    omega: Omega,
    bands: Bands,
) -> Vec<Comparison> {
    let mut out = Vec::new();
    let mut ratio = |name: String, observed: Option<Stat>, predicted: f64| {
        let Some(obs) = observed else { return };
        if predicted <= 0.0 || !predicted.is_finite() {
            return;
        }
        let value = obs.mean / predicted;
        out.push(Comparison {
            name,
            observed: obs.mean,
            predicted: Some(predicted),
            band: bands.ratio,
            value,
            omega: None,
            passed: value >= bands.ratio.0 && value <= bands.ratio.1,
        });
    };
    let fraction_check = |name: String, value: f64, omega_value: Option<f64>| Comparison {
        name,
        observed: value,
        predicted: None,
        band: (bands.min_fraction, 1.0),
        value,
        omega: omega_value,
        passed: value.is_nan() || value >= bands.min_fraction,
    };

    match profile.regime {
        Regime::UEll { .. } => {
            let Ok(pred) = predicted_counts(profile, n, omega) else { return out };
            let ell = s.ell;
            for (i, &eg) in pred.expected_g.iter().enumerate() {
                ratio(format!("mean g_{i} / E g_{i}"), s.stat(&format!("g_{i}")), eg);
            }
            for k in ell..=profile.r {
                if let Prediction::Approx { value } = pred.f[k] {
                    ratio(format!("mean f_{k} / D_{k} n^gamma_{k}"), s.stat(&format!("f_{k}")), value);
                }
            }
            ratio(format!("mean b_{ell} / d n^beta"), s.stat(&format!("b_{ell}")), pred.b[ell].value());
            ratio("mean gprime / d n^beta".into(), s.stat("gprime"), pred.g_prime);
            let mut checks = Vec::new();
            for k in 0..=profile.r {
                if s.vanishing_fraction[k].is_nan() {
                    continue;
                }
                match pred.b[k] {
                    Prediction::AtMost { value } => {
                        let with: Vec<u64> =
                            live.iter().filter_map(|rec| rec.betti.as_ref().map(|b| b[k])).collect();
                        let ok = with.iter().filter(|&&b| b as f64 <= value).count();
                        checks.push(fraction_check(
                            format!("fraction with b_{k} <= omega n^nu_{k}"),
                            fraction(ok, with.len()),
                            Some(pred.omega_value),
                        ));
                    }
                    Prediction::Zero => checks.push(fraction_check(
                        format!("fraction with b_{k} = 0"),
                        s.vanishing_fraction[k],
                        None,
                    )),
                    Prediction::Approx { .. } => {}
                }
            }
            if let Some(f) = s.full_lower_skeleton_fraction {
                checks.push(fraction_check(format!("fraction with full {}-skeleton", ell - 1), f, None));
            }
            for &(k, f) in &s.ftilde_zero_fraction {
                checks.push(fraction_check(format!("fraction with ftilde'_{k} = 0"), f, None));
            }
            out.extend(checks);
        }
        Regime::UMinus | Regime::Degenerate => {
            out.push(fraction_check("fraction with X empty".into(), s.empty_fraction, None));
        }
        Regime::Boundary { .. } => {}
    }
    out
}

fn csv_header(r: usize, ell: usize) -> Vec<String> {
    let mut h: Vec<String> = ["trial", "seed", "n", "r", "alpha"].iter().map(|s| s.to_string()).collect();
    h.extend((0..=r).map(|i| format!("g_{i}")));
    h.extend((0..=r).map(|k| format!("f_{k}")));
    h.extend((ell..=r).map(|k| format!("ghat_{k}")));
    h.push("gprime".into());
    h.extend((0..=r).map(|k| format!("fprime_{k}")));
    h.extend((ell..=r).map(|k| format!("B_{k}")));
    h.extend((0..=r).map(|k| format!("b_{k}")));
    h.extend(["full_skeleton_up_to", "phase_ms_sample", "phase_ms_collapse", "phase_ms_homology"].map(String::from));
    h
}

fn opt_cells(v: &Option<Vec<u64>>, len: usize) -> Vec<String> {
    match v {
        Some(v) => v.iter().map(u64::to_string).collect(),
        None => vec![String::new(); len],
    }
}

fn csv_row(rec: &ExperimentRecord) -> Vec<String> {
    let r = rec.r;
    let mut row = vec![
        rec.trial.to_string(),
        rec.seed.to_string(),
        rec.n.to_string(),
        r.to_string(),
        rec.alpha.iter().map(|&a| ext_real::format(a)).collect::<Vec<_>>().join(";"),
    ];
    row.extend(rec.g.iter().map(u64::to_string));
    row.extend(opt_cells(&rec.f, r + 1));
    row.extend(rec.g_hat.iter().map(u64::to_string));
    row.push(rec.g_prime.to_string());
    row.extend(opt_cells(&rec.f_prime, r + 1));
    row.extend(opt_cells(&rec.bad, r + 1 - rec.ell));
    row.extend(opt_cells(&rec.betti, r + 1));
    row.extend([rec.full_skeleton_up_to, rec.phase_ms_sample as i64, rec.phase_ms_collapse as i64, rec.phase_ms_homology as i64].map(|v| v.to_string()));
    row
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            _ => Err(Error::InvalidParams(format!("unknown output format {s:?}"))),
        }
    }
}

/// Renders records as CSV; `r` and `ell` fix the header when there are no records.
pub fn to_csv(records: &[ExperimentRecord], r: usize, ell: usize) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let wrap = |e: csv::Error| Error::Csv { path: PathBuf::from("<memory>"), source: e };
    w.write_record(csv_header(r, ell)).map_err(wrap)?;
    for rec in records {
        w.write_record(csv_row(rec)).map_err(wrap)?;
    }
    w.into_inner().map_err(|e| Error::InvalidParams(e.to_string()))
}

pub fn to_jsonl(records: &[ExperimentRecord]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for rec in records {
        serde_json::to_writer(&mut out, rec)?;
        out.push(b'\n');
    }
    Ok(out)
}

pub fn emit(records: &[ExperimentRecord], r: usize, ell: usize, format: Format, path: &Path) -> Result<()> {
    let bytes = match format {
        Format::Csv => to_csv(records, r, ell)?,
        Format::Jsonl => to_jsonl(records)?,
    };
    let mut f = BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?);
    f.write_all(&bytes).and_then(|_| f.flush()).map_err(|e| Error::io(path, e))
}

fn parse_cells<T: std::str::FromStr>(cells: &[&str], line: usize) -> Result<Option<Vec<T>>> {
    if cells.iter().all(|c| c.is_empty()) {
        return Ok(None);
    }
    cells
        .iter()
        .map(|c| c.parse::<T>().map_err(|_| Error::Parse { line, msg: format!("bad cell {c:?}") }))
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

/// Reads records written by [`emit`] in CSV form. JSONL-only fields come back empty.
pub fn parse_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let wrap = |e: csv::Error| Error::Csv { path: PathBuf::from("<memory>"), source: e };
    let header: Vec<String> = rd.headers().map_err(wrap)?.iter().map(String::from).collect();
    let r = header.iter().filter(|h| h.starts_with("g_")).count() - 1;
    let ell = header
        .iter()
        .find_map(|h| h.strip_prefix("ghat_"))
        .and_then(|k| k.parse().ok())
        .ok_or(Error::Parse { line: 1, msg: "missing ghat columns".into() })?;
    if header != csv_header(r, ell) {
        return Err(Error::Parse { line: 1, msg: "unexpected CSV header".into() });
    }
    let mut out = Vec::new();
    for (idx, row) in rd.records().enumerate() {
        let line = idx + 2;
        let row = row.map_err(wrap)?;
        let cells: Vec<&str> = row.iter().collect();
        let bad = |msg: &str| Error::Parse { line, msg: msg.into() };
        let num = |s: &str| s.parse::<u64>().map_err(|_| bad("bad integer"));
        let mut pos = 5;
        let mut take = |len: usize| {
            let s = &cells[pos..pos + len];
            pos += len;
            s
        };
        let g = parse_cells::<u64>(take(r + 1), line)?.ok_or_else(|| bad("missing g"))?;
        let f = parse_cells(take(r + 1), line)?;
        let g_hat = parse_cells::<u64>(take(r + 1 - ell), line)?.ok_or_else(|| bad("missing ghat"))?;
        let g_prime = num(take(1)[0])?;
        let f_prime = parse_cells(take(r + 1), line)?;
        let b_bad = parse_cells(take(r + 1 - ell), line)?;
        let betti = parse_cells(take(r + 1), line)?;
        let tail = take(4);
        out.push(ExperimentRecord {
            trial: num(cells[0])?,
            seed: num(cells[1])?,
            n: cells[2].parse().map_err(|_| bad("bad n"))?,
            r,
            alpha: cells[4].split(';').map(ext_real::parse).collect::<Result<_>>()?,
            ell,
            g,
            f,
            g_hat,
            g_prime,
            f_prime,
            bad: b_bad,
            betti,
            full_skeleton_up_to: tail[0].parse().map_err(|_| bad("bad full_skeleton_up_to"))?,
            phase_ms_sample: num(tail[1])?,
            phase_ms_collapse: num(tail[2])?,
            phase_ms_homology: num(tail[3])?,
            ftilde_prime: None,
            lm_vanishing: None,
            capped: false,
            empty: false,
            law_violations: Vec::new(),
        });
    }
    Ok(out)
}

pub fn read_csv(path: &Path) -> Result<Vec<ExperimentRecord>> {
    parse_csv(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

pub fn parse_jsonl(text: &str) -> Result<Vec<ExperimentRecord>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| Ok(serde_json::from_str(l)?)).collect()
}

/// Runs an experiment and writes the outputs named in the configuration.
pub fn run_and_emit(cfg: &ExperimentConfig) -> Result<(Experiment, Summary)> {
    let exp = run_experiment(cfg)?;
    let ell = cfg.resolved_ell(&exp.profile);
    if let Some(p) = &cfg.csv {
        emit(&exp.records, cfg.r, ell, Format::Csv, p)?;
    }
    if let Some(p) = &cfg.jsonl {
        emit(&exp.records, cfg.r, ell, Format::Jsonl, p)?;
    }
    let summary = aggregate_and_compare(&exp.records, &exp.profile, cfg.n, cfg.omega);
    if let Some(p) = &cfg.summary {
        std::fs::write(p, serde_json::to_vec_pretty(&summary)?).map_err(|e| Error::io(p, e))?;
    }
    Ok((exp, summary))
}
