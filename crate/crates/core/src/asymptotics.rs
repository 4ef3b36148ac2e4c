//! Exponents and coefficients of the large-`n` behaviour of the upper model.
//!
//! With `β_i = i + 1 - α_i` and `β = max β_i`, a parameter vector lies in `U_ℓ` when
//! `β > 0` is not an integer, with `ℓ = ⌊β⌋`. There the `ℓ`-th Betti number grows like
//! `d n^β`, `f_k` like `D_k n^{γ_k}` for `k ≥ ℓ`, and `b_k` is at most `ω n^{ν_k}` above `ℓ`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial_f64, factorial_f64};
use crate::error::{Error, Result};
use crate::ext_real;
use crate::sampler::ModelParams;

/// Tolerance for comparing exponents with integers and with each other.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regime {
    /// `β < 0`: the complex is empty a.a.s.
    UMinus,
    UEll { ell: usize },
    /// `β` is a non-negative integer; no predictions are made.
    Boundary { beta: f64 },
    /// Every `α_i` is infinite.
    Degenerate,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::UMinus => write!(f, "U_minus"),
            Regime::UEll { ell } => write!(f, "U_{ell}"),
            Regime::Boundary { beta } => write!(f, "boundary (beta = {beta})"),
            Regime::Degenerate => write!(f, "degenerate"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticProfile {
    pub n: u32,
    pub r: usize,
    #[serde(with = "ext_real::vec")]
    pub alpha: Vec<f64>,
    #[serde(with = "ext_real::vec")]
    pub beta_i: Vec<f64>,
    #[serde(with = "ext_real")]
    pub beta: f64,
    /// `⌊β⌋` for finite `β ≥ 0`.
    pub ell: Option<usize>,
    pub regime: Regime,
    /// `γ_k = max_{i ≥ k} β_i` for `k = 0..=r`.
    #[serde(with = "ext_real::vec")]
    pub gamma: Vec<f64>,
    /// `ν_k = 2γ_k - k`.
    #[serde(with = "ext_real::vec")]
    pub nu: Vec<f64>,
    /// Largest `k ∈ [ℓ, r]` with `ν_k ≥ 0`.
    pub ell_prime: Option<usize>,
    /// `⌊2β⌋`, the untruncated bound on `ℓ′`.
    pub two_beta_floor: Option<i64>,
    /// Coefficient of `n^β` in `b_ℓ`; zero outside `U_ℓ`.
    pub d: f64,
    /// `D_k` for `k = 0..=r`; only `k ≥ ℓ` carries meaning.
    pub big_d: Vec<f64>,
    /// `e_k = γ_k - k`.
    #[serde(with = "ext_real::vec")]
    pub e: Vec<f64>,
    /// Indices with `β_i = β`.
    pub stratum: Vec<usize>,
    pub notes: Vec<String>,
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() <= EPS
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= EPS
}

pub fn asymptotic_profile(params: &ModelParams) -> AsymptoticProfile {
    let r = params.r;
    let beta_i: Vec<f64> = params.alpha.iter().enumerate().map(|(i, &a)| (i + 1) as f64 - a).collect();
    let beta = beta_i.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut notes = Vec::new();

    let regime = if beta == f64::NEG_INFINITY {
        Regime::Degenerate
    } else if beta < -EPS {
        Regime::UMinus
    } else if near_integer(beta) {
        Regime::Boundary { beta }
    } else {
        Regime::UEll { ell: beta.floor() as usize }
    };
    if close(beta, (r + 1) as f64) {
        notes.push("Y is the full r-skeleton".into());
    }
    let ell = (beta.is_finite() && beta >= -EPS).then(|| (beta + EPS).floor() as usize);

    let mut gamma = vec![f64::NEG_INFINITY; r + 1];
    for k in (0..=r).rev() {
        gamma[k] = if k == r { beta_i[r] } else { beta_i[k].max(gamma[k + 1]) };
    }
    let nu: Vec<f64> = gamma.iter().enumerate().map(|(k, &g)| 2.0 * g - k as f64).collect();
    let e: Vec<f64> = gamma.iter().enumerate().map(|(k, &g)| g - k as f64).collect();
    let stratum: Vec<usize> = if beta.is_finite() { (0..=r).filter(|&i| close(beta_i[i], beta)).collect() } else { Vec::new() };

    let ell_prime = match regime {
        Regime::UEll { ell } if ell <= r => Some((ell..=r).rev().find(|&k| nu[k] >= -EPS).unwrap_or(ell)),
        _ => None,
    };
    let two_beta_floor = beta.is_finite().then(|| (2.0 * beta + EPS).floor() as i64);

    let d = match (regime, ell) {
        (Regime::UEll { .. }, Some(l)) => stratum
            .iter()
            .filter(|&&i| i >= l)
            .map(|&i| 1.0 / ((i + 1) as f64 * factorial_f64(l) * factorial_f64(i - l)))
            .sum(),
        _ => 0.0,
    };
    let big_d = (0..=r)
        .map(|k| {
            if !gamma[k].is_finite() {
                return 0.0;
            }
            (k..=r)
                .filter(|&i| close(beta_i[i], gamma[k]))
                .map(|i| 1.0 / (factorial_f64(k + 1) * factorial_f64(i - k)))
                .sum()
        })
        .collect();

    AsymptoticProfile {
        n: params.n,
        r,
        alpha: params.alpha.clone(),
        beta_i,
        beta,
        ell,
        regime,
        gamma,
        nu,
        ell_prime,
        two_beta_floor,
        d,
        big_d,
        e,
        stratum,
        notes,
    }
}

/// The slowly growing witness `ω(n)` used to make a.a.s. bounds concrete.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub enum Omega {
    #[default]
    Ln,
    LogLog,
    Pow(f64),
}

impl Omega {
    pub fn value(self, n: u32) -> f64 {
        let n = n as f64;
        match self {
            Omega::Ln => n.ln(),
            Omega::LogLog => n.ln().ln(),
            Omega::Pow(c) => n.powf(c),
        }
    }
}

impl FromStr for Omega {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ln" => Ok(Omega::Ln),
            "loglog" => Ok(Omega::LogLog),
            _ => s
                .strip_prefix("pow:")
                .and_then(|c| c.parse::<f64>().ok())
                .filter(|c| c.is_finite() && *c > 0.0)
                .map(Omega::Pow)
                .ok_or_else(|| Error::InvalidParams(format!("omega must be ln, loglog or pow:<c> with c > 0, got {s:?}"))),
        }
    }
}

impl fmt::Display for Omega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Omega::Ln => write!(f, "ln"),
            Omega::LogLog => write!(f, "loglog"),
            Omega::Pow(c) => write!(f, "pow:{c}"),
        }
    }
}

impl Serialize for Omega {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Omega {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Prediction {
    /// Asymptotic to the value.
    Approx { value: f64 },
    /// At most the value a.a.s.
    AtMost { value: f64 },
    Zero,
}

impl Prediction {
    pub fn value(self) -> f64 {
        match self {
            Prediction::Approx { value } | Prediction::AtMost { value } => value,
            Prediction::Zero => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predictions {
    pub n: u32,
    pub omega: Omega,
    pub omega_value: f64,
    /// `f_k` for `k = 0..=r`: the full count below `ℓ`, `D_k n^{γ_k}` from `ℓ` on.
    pub f: Vec<Prediction>,
    /// Reduced `b_k` for `k = 0..=r`.
    pub b: Vec<Prediction>,
    /// Exact `E g_i = C(n+1, i+1) n^{-α_i}`.
    pub expected_g: Vec<f64>,
    pub g_prime: f64,
}

pub fn predicted_counts(profile: &AsymptoticProfile, n: u32, omega: Omega) -> Result<Predictions> {
    let Regime::UEll { ell } = profile.regime else {
        return Err(Error::Regime(profile.regime.to_string()));
    };
    let r = profile.r;
    let nf = n as f64;
    let w = omega.value(n);
    let f = (0..=r)
        .map(|k| {
            let g = profile.gamma[k];
            if k < ell {
                Prediction::Approx { value: binomial_f64(n as u64 + 1, k as u64 + 1) }
            } else if g > EPS {
                Prediction::Approx { value: profile.big_d[k] * nf.powf(g) }
            } else if g >= -EPS {
                Prediction::AtMost { value: w }
            } else {
                Prediction::Zero
            }
        })
        .collect();
    let top = profile.ell_prime.unwrap_or(ell);
    let b = (0..=r)
        .map(|k| match k {
            k if k == ell => Prediction::Approx { value: profile.d * nf.powf(profile.beta) },
            k if k > ell && k <= top => Prediction::AtMost { value: w * nf.powf(profile.nu[k]) },
            _ => Prediction::Zero,
        })
        .collect();
    let expected_g = (0..=r)
        .map(|i| {
            let a = profile.alpha[i];
            if a == f64::INFINITY {
                0.0
            } else {
                binomial_f64(n as u64 + 1, i as u64 + 1) * nf.powf(-a)
            }
        })
        .collect();
    Ok(Predictions {
        n,
        omega,
        omega_value: w,
        f,
        b,
        expected_g,
        g_prime: profile.d * nf.powf(profile.beta),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawOutcome {
    pub law: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawCheck {
    pub outcomes: Vec<LawOutcome>,
}

impl LawCheck {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawOutcome> + '_ {
        self.outcomes.iter().filter(|o| !o.passed)
    }

    fn push(&mut self, law: &str, passed: bool, detail: String) {
        self.outcomes.push(LawOutcome { law: law.into(), passed, detail });
    }
}

/// Checks the exponent relations that hold for every parameter vector. Only the first one
/// applies outside `U_ℓ`.
pub fn exponent_law_check(p: &AsymptoticProfile) -> LawCheck {
    let mut c = LawCheck { outcomes: Vec::new() };
    let r = p.r;
    c.push("beta <= r+1", p.beta <= (r + 1) as f64 + EPS, format!("beta = {}", p.beta));
    let Regime::UEll { ell } = p.regime else { return c };

    c.push("gamma_ell = beta", ell <= r && close(p.gamma[ell], p.beta), format!("gamma_{ell} vs beta = {}", p.beta));
    for k in ell..=r {
        c.push("gamma_k < k+1", p.gamma[k] < (k + 1) as f64 - EPS, format!("gamma_{k} = {}", p.gamma[k]));
    }
    c.push(
        "stratum within [ell, r]",
        p.stratum.iter().all(|&i| i >= ell && i <= r) && !p.stratum.is_empty(),
        format!("stratum = {:?}", p.stratum),
    );
    if ell < r {
        let v = p.nu[ell + 1];
        c.push("nu_(ell+1) < beta", v < p.beta - EPS, format!("nu_{} = {v}", ell + 1));
        let e = p.e[ell + 1];
        c.push("e_(ell+1) < 0", e < -EPS, format!("e_{} = {e}", ell + 1));
    }
    for k in 0..r {
        let (a, b) = (p.nu[k + 1], p.nu[k]);
        c.push("nu_(k+1) <= nu_k - 1", a <= b - 1.0 + EPS, format!("nu_{} = {a}, nu_{k} = {b}", k + 1));
        if k >= ell {
            let (a, b) = (p.e[k + 1], p.e[k]);
            c.push("e_(k+1) <= e_k - 1", a <= b - 1.0 + EPS, format!("e_{} = {a}, e_{k} = {b}", k + 1));
        }
    }
    let lp = p.ell_prime.unwrap_or(ell);
    let cap = (r as i64).min(p.two_beta_floor.unwrap_or(i64::MIN));
    c.push(
        "ell <= ell' <= min(r, floor(2 beta)) <= 2 ell + 1",
        ell <= lp && lp as i64 <= cap && cap <= 2 * ell as i64 + 1,
        format!("ell = {ell}, ell' = {lp}, min(r, floor(2 beta)) = {cap}"),
    );
    let d_ell = p.big_d[ell];
    let only_ell = p.stratum == [ell];
    c.push(
        "d <= D_ell, equality iff stratum = {ell}",
        p.d <= d_ell + EPS && (close(p.d, d_ell) == only_ell),
        format!("d = {}, D_{ell} = {d_ell}", p.d),
    );
    c
}
