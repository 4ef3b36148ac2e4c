//! Exact probabilities of a complex in the upper and lower models, and the exhaustive
//! enumeration oracle that checks them on tiny vertex sets.
//!
//! Only dimension-homogeneous rational assignments are handled here: every `j`-simplex is
//! selected with the same probability `p_j`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::combinatorics::{binomial, LexSubsets};
use crate::complex::{maximal_simplices, minimal_missing, Ambient, SimplicialComplex};
use crate::error::{Error, Result};
use crate::simplex::Simplex;

/// Largest number of simplices the enumeration oracle accepts (`2^20` hypergraphs).
pub const ENUMERATION_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Output the closure of the sampled hypergraph.
    Upper,
    /// Output the largest complex contained in the sampled hypergraph.
    Lower,
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper" => Ok(Model::Upper),
            "lower" => Ok(Model::Lower),
            other => Err(Error::InvalidParams(format!("unknown model {other:?}, expected upper|lower"))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Upper => "upper",
            Model::Lower => "lower",
        })
    }
}

/// Per-dimension selection probabilities `p_0, …, p_r` as exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityAssignment {
    ambient: Ambient,
    p: Vec<BigRational>,
}

impl ProbabilityAssignment {
    pub fn new(n: u32, r: usize, p: Vec<BigRational>) -> Result<Self> {
        if p.len() != r + 1 {
            return Err(Error::InvalidParams(format!("expected {} probabilities, got {}", r + 1, p.len())));
        }
        if r as u64 > n as u64 {
            return Err(Error::InvalidParams(format!("r={r} exceeds n={n}")));
        }
        if let Some(bad) = p.iter().find(|x| x.is_negative() || **x > BigRational::one()) {
            return Err(Error::InvalidParams(format!("probability {bad} outside [0, 1]")));
        }
        Ok(ProbabilityAssignment { ambient: Ambient::new(n, r)?, p })
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_fractions(n: u32, r: usize, p: &[(i64, i64)]) -> Result<Self> {
        if p.iter().any(|&(_, d)| d == 0) {
            return Err(Error::InvalidParams("zero denominator".into()));
        }
        Self::new(n, r, p.iter().map(|&(a, b)| BigRational::new(a.into(), b.into())).collect())
    }

    /// Parses a comma separated list such as `1/2,1/3,1/5`.
    pub fn parse(n: u32, r: usize, text: &str) -> Result<Self> {
        let p = text
            .split(',')
            .map(|t| {
                BigRational::from_str(t.trim())
                    .map_err(|e| Error::InvalidParams(format!("bad probability {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, r, p)
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn p(&self, dim: usize) -> &BigRational {
        &self.p[dim]
    }

    pub fn q(&self, dim: usize) -> BigRational {
        BigRational::one() - &self.p[dim]
    }

    /// The assignment with every `p_j` replaced by `q_j`.
    pub fn complemented(&self) -> Self {
        ProbabilityAssignment { ambient: self.ambient, p: (0..self.p.len()).map(|j| self.q(j)).collect() }
    }
}

fn check_dims(y: &SimplicialComplex, pa: &ProbabilityAssignment) -> Result<()> {
    let r = pa.ambient.r;
    if let Some(s) = y.iter().find(|s| s.dim() > r) {
        return Err(Error::DimensionOverflow { simplex: s.clone(), dim: s.dim(), r });
    }
    if let Some(s) = y.iter().find(|s| s.max_vertex() > pa.ambient.n) {
        return Err(Error::VertexOutOfRange { vertex: s.max_vertex(), n: pa.ambient.n });
    }
    Ok(())
}

fn pow(base: &BigRational, exp: u128) -> BigRational {
    num::pow::pow(base.clone(), usize::try_from(exp).expect("exponent fits in usize"))
}

/// Probability that the closure of the random hypergraph equals `y`:
/// `∏_{σ ∉ y, dim σ ≤ r} q_σ · ∏_{σ ∈ M(y)} p_σ`.
pub fn upper_probability(y: &SimplicialComplex, pa: &ProbabilityAssignment) -> Result<BigRational> {
    check_dims(y, pa)?;
    let Ambient { n, r } = pa.ambient;
    let f = y.f_vector();
    let mut acc = BigRational::one();
    for j in 0..=r {
        let present = f.get(j).copied().unwrap_or(0) as u128;
        let missing = binomial(n as u64 + 1, j as u64 + 1) - present;
        acc *= pow(&pa.q(j), missing);
    }
    for s in maximal_simplices(y) {
        acc *= pa.p(s.dim());
    }
    Ok(acc)
}

/// Probability that the largest complex inside the random hypergraph equals `y`:
/// `∏_{σ ∈ y} p_σ · ∏_{σ ∈ E(y)} q_σ`.
pub fn lower_probability(y: &SimplicialComplex, pa: &ProbabilityAssignment) -> Result<BigRational> {
    check_dims(y, pa)?;
    let r = pa.ambient.r;
    let mut acc = BigRational::one();
    for (j, &c) in y.f_vector().iter().enumerate().take(r + 1) {
        acc *= pow(pa.p(j), c as u128);
    }
    // E(y) above dimension r has q = 1 and is skipped
    let y = SimplicialComplex::new(pa.ambient, y.iter().cloned())?;
    for s in minimal_missing(&y, r) {
        acc *= pa.q(s.dim());
    }
    Ok(acc)
}

/// One complex of the enumerated distribution.
#[derive(Debug, Clone)]
pub struct GroupedMass {
    pub complex: SimplicialComplex,
    /// Total probability of all hypergraphs mapped onto `complex`.
    pub mass: BigRational,
    /// Value of the matching closed form.
    pub closed_form: BigRational,
}

#[derive(Debug, Clone)]
pub struct MeasureCheck {
    pub model: Model,
    pub sum: BigRational,
    /// Support of the distribution, ordered by the canonical simplex lists of the complexes.
    pub distribution: Vec<GroupedMass>,
}

impl MeasureCheck {
    pub fn is_normalized(&self) -> bool {
        self.sum.is_one()
    }

    /// Complexes whose enumerated mass differs from the closed form.
    pub fn mismatches(&self) -> impl Iterator<Item = &GroupedMass> + '_ {
        self.distribution.iter().filter(|g| g.mass != g.closed_form)
    }

    pub fn passed(&self) -> bool {
        self.is_normalized() && self.mismatches().next().is_none()
    }

    /// `[{complex: [[v…]…], mass_num, mass_den}, …]`
    pub fn to_json(&self) -> serde_json::Value {
        fn int(v: &BigInt) -> serde_json::Value {
            match i64::try_from(v) {
                Ok(x) => serde_json::Value::from(x),
                Err(_) => serde_json::Value::from(v.to_string()),
            }
        }
        serde_json::Value::Array(
            self.distribution
                .iter()
                .map(|g| {
                    serde_json::json!({
                        "complex": g.complex.iter().collect::<Vec<_>>(),
                        "mass_num": int(g.mass.numer()),
                        "mass_den": int(g.mass.denom()),
                    })
                })
                .collect(),
        )
    }
}

/// All simplices of dimension at most `r` on `{0, …, n}` in canonical order.
pub fn canonical_simplices(ambient: Ambient) -> Vec<Simplex> {
    let mut out = Vec::new();
    for j in 0..=ambient.r {
        let mut it = LexSubsets::new(j + 1, ambient.n + 1);
        while let Some(s) = it.next_subset() {
            out.push(Simplex::from_sorted(s));
        }
    }
    out
}

/// Bit-level view of the simplices of a tiny ambient, indexed in canonical order.
pub(crate) struct BitLattice {
    pub simplices: Vec<Simplex>,
    /// `faces[s]`: bits of every nonempty face of simplex `s`, including itself.
    pub faces: Vec<u32>,
    pub dim_masks: Vec<u32>,
}

impl BitLattice {
    pub fn new(ambient: Ambient) -> Result<Self> {
        let simplices = canonical_simplices(ambient);
        if simplices.len() > ENUMERATION_LIMIT {
            return Err(Error::EnumerationTooLarge { simplices: simplices.len(), limit: ENUMERATION_LIMIT });
        }
        let index: HashMap<&Simplex, usize> = simplices.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let faces = simplices
            .iter()
            .map(|s| s.faces().fold(0u32, |m, f| m | 1 << index[&f]))
            .collect();
        let mut dim_masks = vec![0u32; ambient.r + 1];
        for (i, s) in simplices.iter().enumerate() {
            dim_masks[s.dim()] |= 1 << i;
        }
        Ok(BitLattice { simplices, faces, dim_masks })
    }

    pub fn closure(&self, mask: u32) -> u32 {
        bits(mask).fold(0, |acc, i| acc | self.faces[i])
    }

    pub fn lower(&self, mask: u32) -> u32 {
        bits(mask).filter(|&i| self.faces[i] & !mask == 0).fold(0, |acc, i| acc | 1 << i)
    }

    pub fn to_complex(&self, ambient: Ambient, mask: u32) -> SimplicialComplex {
        let members: HashSet<Simplex> = bits(mask).map(|i| self.simplices[i].clone()).collect();
        SimplicialComplex::from_closed(ambient, members)
    }
}

pub(crate) fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |b| mask & (1 << b) != 0)
}

/// Enumerates every hypergraph on the ambient of `pa`, accumulates `∏ p ∏ q` onto its
/// image under the model's closure operator, and pairs each grouped mass with the closed
/// form. The sum must be exactly one and every mass must match.
pub fn total_measure_check(pa: &ProbabilityAssignment, model: Model) -> Result<MeasureCheck> {
    let ambient = pa.ambient;
    let lattice = BitLattice::new(ambient)?;
    let r = ambient.r;
    let total = lattice.simplices.len();

    // hypergraph probability depends only on per-dimension counts, so count hypergraphs
    // per (image, count vector) first and multiply once per class
    let mut classes: HashMap<(u32, [u8; 8]), u64> = HashMap::new();
    for mask in 0u32..(1u32 << total) {
        let image = match model {
            Model::Upper => lattice.closure(mask),
            Model::Lower => lattice.lower(mask),
        };
        let mut counts = [0u8; 8];
        for (j, dm) in lattice.dim_masks.iter().enumerate() {
            counts[j] = (mask & dm).count_ones() as u8;
        }
        *classes.entry((image, counts)).or_insert(0) += 1;
    }

    let sizes: Vec<u32> = lattice.dim_masks.iter().map(|m| m.count_ones()).collect();
    let mut grouped: HashMap<u32, BigRational> = HashMap::new();
    for ((image, counts), mult) in classes {
        let mut w = BigRational::from_integer(mult.into());
        for j in 0..=r {
            let c = counts[j] as u128;
            w *= pow(pa.p(j), c) * pow(&pa.q(j), sizes[j] as u128 - c);
        }
        if !w.is_zero() {
            *grouped.entry(image).or_insert_with(BigRational::zero) += w;
        }
    }

    let mut distribution = Vec::with_capacity(grouped.len());
    let mut sum = BigRational::zero();
    for (mask, mass) in grouped {
        let complex = lattice.to_complex(ambient, mask);
        let closed_form = match model {
            Model::Upper => upper_probability(&complex, pa)?,
            Model::Lower => lower_probability(&complex, pa)?,
        };
        sum += &mass;
        distribution.push(GroupedMass { complex, mass, closed_form });
    }
    distribution.sort_by(|a, b| a.complex.iter().cmp(b.complex.iter()));
    Ok(MeasureCheck { model, sum, distribution })
}
