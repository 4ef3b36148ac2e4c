//! Reduced simplicial homology with integer coefficients.
//!
//! Betti numbers default to ranks over the prime field `Z/(2^31 - 1)`, computed by sparse
//! elimination that pivots on short rows and sparse columns. Exact mode computes the Smith
//! normal form of every boundary matrix and also reports torsion.
//!
//! The chain complex is augmented: `∂_0` is the all-ones row sending each vertex to the
//! generator of the empty simplex, so a point is acyclic and `b̃_0` counts components
//! minus one.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num::{BigInt, BigUint, Integer, One, Signed, ToPrimitive, Zero};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// Field modulus for the default rank computation.
pub const PRIME: u64 = (1 << 31) - 1;

/// Default cap on the nonzero count of a single boundary matrix.
pub const DEFAULT_MAX_NONZEROS: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, i64)>,
}

impl SparseIntMatrix {
    /// Zero entries are dropped; repeated positions are an error.
    pub fn new(rows: usize, cols: usize, entries: Vec<(usize, usize, i64)>) -> Result<Self> {
        let mut entries: Vec<_> = entries.into_iter().filter(|e| e.2 != 0).collect();
        entries.sort_unstable_by_key(|&(r, c, _)| (c, r));
        if let Some(w) = entries.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::InvalidParams(format!("duplicate matrix entry at {:?}", (w[0].0, w[0].1))));
        }
        if let Some(&(r, c, _)) = entries.iter().find(|&&(r, c, _)| r >= rows || c >= cols) {
            return Err(Error::InvalidParams(format!("entry ({r}, {c}) outside a {rows}x{cols} matrix")));
        }
        Ok(SparseIntMatrix { rows, cols, entries })
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &v)| (i, j, v)))
            .collect();
        Self::new(rows.len(), cols, entries).expect("dense input has unique positions")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Nonzero entries `(row, col, value)` in column-major order.
    pub fn entries(&self) -> &[(usize, usize, i64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            d[r][c] = v;
        }
        d
    }

    /// `self · other` over the integers.
    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut by_row: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
        for &(r, c, v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut acc: HashMap<(usize, usize), i64> = HashMap::new();
        for &(i, k, a) in &self.entries {
            for &(j, b) in by_row.get(&k).map_or(&[][..], Vec::as_slice) {
                *acc.entry((i, j)).or_insert(0) += a * b;
            }
        }
        Self::new(self.rows, other.cols, acc.into_iter().map(|((i, j), v)| (i, j, v)).collect())
            .expect("accumulated positions are unique")
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn sparse_rows(&self) -> Vec<Vec<(u32, i64)>> {
        let mut rows = vec![Vec::new(); self.rows];
        for &(r, c, v) in &self.entries {
            rows[r].push((c as u32, v));
        }
        rows
    }
}

/// Boundary map from `k`-chains to `(k-1)`-chains of `y`.
///
/// Rows follow the canonical order of the `(k-1)`-simplices (a single augmentation row when
/// `k = 0`), columns that of the `k`-simplices. The entry for the facet dropping the `j`-th
/// vertex is `(-1)^j`.
pub fn boundary_matrix(y: &SimplicialComplex, k: usize) -> SparseIntMatrix {
    let cols = y.of_dim(k);
    if k == 0 {
        let entries = (0..cols.len()).map(|j| (0, j, 1)).collect();
        return SparseIntMatrix { rows: 1, cols: cols.len(), entries };
    }
    let rows = y.of_dim(k - 1);
    let index: HashMap<_, _> = rows.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut entries = Vec::with_capacity(cols.len() * (k + 1));
    for (j, s) in cols.iter().enumerate() {
        let mut col: Vec<_> = s.boundary().map(|(f, sign)| (index[&f], j, sign)).collect();
        col.sort_unstable();
        entries.extend(col);
    }
    SparseIntMatrix { rows: rows.len(), cols: cols.len(), entries }
}

trait ElimRing: Copy + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn is_zero(self) -> bool;
    fn is_pivot(self) -> bool;
    /// `f` with `entry - f * pivot == 0`.
    fn factor(entry: Self, pivot: Self) -> Self;
    /// `a - f * b`, `None` on overflow.
    fn sub_mul(a: Self, f: Self, b: Self) -> Option<Self>;
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Fp(u64);

impl Fp {
    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(PRIME as i64) as u64)
    }

    fn inv(self) -> Self {
        // Fermat: a^(p-2)
        let (mut base, mut exp, mut acc) = (self.0, PRIME - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % PRIME;
            }
            base = base * base % PRIME;
            exp >>= 1;
        }
        Fp(acc)
    }
}

impl ElimRing for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(self) -> bool {
        self.0 == 0
    }
    fn is_pivot(self) -> bool {
        self.0 != 0
    }
    fn factor(entry: Self, pivot: Self) -> Self {
        Fp(entry.0 * pivot.inv().0 % PRIME)
    }
    fn sub_mul(a: Self, f: Self, b: Self) -> Option<Self> {
        Some(Fp((a.0 + PRIME - f.0 * b.0 % PRIME) % PRIME))
    }
}

/// Integers, pivoting only on units so that every step is unimodular.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct UnitZ(i64);

impl ElimRing for UnitZ {
    fn zero() -> Self {
        UnitZ(0)
    }
    fn is_zero(self) -> bool {
        self.0 == 0
    }
    fn is_pivot(self) -> bool {
        self.0 == 1 || self.0 == -1
    }
    fn factor(entry: Self, pivot: Self) -> Self {
        UnitZ(entry.0 * pivot.0)
    }
    fn sub_mul(a: Self, f: Self, b: Self) -> Option<Self> {
        a.0.checked_sub(f.0.checked_mul(b.0)?).map(UnitZ)
    }
}

struct Elimination<T> {
    pivots: usize,
    /// Rows left active when elimination stopped; empty for a field.
    residual: Vec<Vec<(u32, T)>>,
}

/// `a - f * b` for sorted sparse rows.
fn merge_rows<T: ElimRing>(a: &[(u32, T)], f: T, b: &[(u32, T)]) -> Option<Vec<(u32, T)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(u32::MAX, |e| e.0);
        let cb = b.get(j).map_or(u32::MAX, |e| e.0);
        if ca < cb {
            out.push(a[i]);
            i += 1;
        } else {
            let base = if ca == cb { a[i].1 } else { T::zero() };
            let v = T::sub_mul(base, f, b[j].1)?;
            if !v.is_zero() {
                out.push((cb, v));
            }
            if ca == cb {
                i += 1;
            }
            j += 1;
        }
    }
    Some(out)
}

fn eliminate<T: ElimRing>(mut rows: Vec<Vec<(u32, T)>>, ncols: usize) -> Elimination<T> {
    let nrows = rows.len();
    let mut active = vec![true; nrows];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut heap = BinaryHeap::new();
    for (i, row) in rows.iter().enumerate() {
        if row.is_empty() {
            active[i] = false;
            continue;
        }
        for &(c, _) in row {
            col_rows[c as usize].push(i as u32);
        }
        heap.push(Reverse((row.len(), i as u32)));
    }
    let mut stamp = vec![u32::MAX; nrows];
    let mut pivots = 0usize;
    let mut step = 0u32;

    'outer: while let Some(Reverse((len, row))) = heap.pop() {
        let row = row as usize;
        if !active[row] || rows[row].len() != len {
            continue;
        }
        // Markowitz-style choice: shortest row, then the sparsest pivotable column in it
        let Some(&(pc, pv)) = rows[row]
            .iter()
            .filter(|e| e.1.is_pivot())
            .min_by_key(|e| col_rows[e.0 as usize].len())
        else {
            continue; // parked until the row changes
        };
        step += 1;
        stamp[row] = step;
        let targets: Vec<usize> = col_rows[pc as usize]
            .iter()
            .map(|&t| t as usize)
            .filter(|&t| {
                let fresh = stamp[t] != step && active[t];
                stamp[t] = step;
                fresh && rows[t].binary_search_by_key(&pc, |e| e.0).is_ok()
            })
            .collect();
        let pivot_row = std::mem::take(&mut rows[row]);
        for t in targets {
            let entry = rows[t][rows[t].binary_search_by_key(&pc, |e| e.0).unwrap()].1;
            let Some(new_row) = merge_rows(&rows[t], T::factor(entry, pv), &pivot_row) else {
                rows[row] = pivot_row;
                break 'outer;
            };
            for &(c, _) in &new_row {
                if rows[t].binary_search_by_key(&c, |e| e.0).is_err() {
                    col_rows[c as usize].push(t as u32);
                }
            }
            rows[t] = new_row;
            if rows[t].is_empty() {
                active[t] = false;
            } else {
                heap.push(Reverse((rows[t].len(), t as u32)));
            }
        }
        active[row] = false;
        col_rows[pc as usize].clear();
        pivots += 1;
    }

    let residual = (0..nrows).filter(|&i| active[i]).map(|i| std::mem::take(&mut rows[i])).collect();
    Elimination { pivots, residual }
}

/// Rank over `Z/(2^31 - 1)`.
pub fn rank_mod_prime(m: &SparseIntMatrix) -> usize {
    let rows = m
        .sparse_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|(c, v)| (c, Fp::from_i64(v))).filter(|e| !e.1.is_zero()).collect())
        .collect();
    let e = eliminate::<Fp>(rows, m.cols);
    debug_assert!(e.residual.is_empty());
    e.pivots
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    /// Nonzero diagonal entries `d_1 | d_2 | …`, ascending.
    pub invariant_factors: Vec<BigUint>,
}

impl SmithForm {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> impl Iterator<Item = &BigUint> + '_ {
        self.invariant_factors.iter().filter(|d| !d.is_one())
    }
}

/// Smith normal form with exact integer arithmetic.
///
/// Unit pivots are eliminated sparsely in `i64`; what remains (or everything left once an
/// intermediate value would overflow) is finished densely with arbitrary precision.
pub fn smith_normal_form(m: &SparseIntMatrix, max_nonzeros: usize) -> Result<SmithForm> {
    if m.nnz() > max_nonzeros {
        return Err(Error::ResourceCap { dim: 0, nonzeros: m.nnz(), cap: max_nonzeros });
    }
    let rows = m.sparse_rows().into_iter().map(|r| r.into_iter().map(|(c, v)| (c, UnitZ(v))).collect()).collect();
    let e = eliminate::<UnitZ>(rows, m.cols);
    let mut factors = vec![BigUint::one(); e.pivots];

    if !e.residual.is_empty() {
        let mut cols: Vec<u32> = e.residual.iter().flatten().map(|e| e.0).collect();
        cols.sort_unstable();
        cols.dedup();
        let col_index: HashMap<u32, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut dense = vec![vec![BigInt::zero(); cols.len()]; e.residual.len()];
        for (i, row) in e.residual.iter().enumerate() {
            for &(c, UnitZ(v)) in row {
                dense[i][col_index[&c]] = BigInt::from(v);
            }
        }
        factors.extend(dense_smith(dense));
    }
    factors.sort();
    Ok(SmithForm { rank: factors.len(), invariant_factors: factors })
}

/// Diagonal of the Smith form of a dense integer matrix (nonzero entries only).
fn dense_smith(mut a: Vec<Vec<BigInt>>) -> Vec<BigUint> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        // smallest nonzero entry of the trailing block goes to (t, t)
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            // bring the smallest entry of row t / column t to the pivot
            let mut pick = (t, t);
            for i in t + 1..m {
                if !a[i][t].is_zero() && a[i][t].abs() < a[pick.0][pick.1].abs() {
                    pick = (i, t);
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() && a[t][j].abs() < a[pick.0][pick.1].abs() {
                    pick = (t, j);
                }
            }
            if pick.0 != t {
                a.swap(t, pick.0);
            } else if pick.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, pick.1);
                }
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &p;
                for j in t..n {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &p;
                for row in a.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    for j in t..n {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs().to_biguint().expect("absolute value is non-negative"));
    }
    diag
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomologyMode {
    /// Ranks over `Z/(2^31 - 1)`; torsion is not reported.
    #[default]
    FieldRank,
    /// Smith normal form over the integers.
    Exact,
}

#[derive(Debug, Clone, Copy)]
pub struct HomologyOptions {
    pub mode: HomologyMode,
    pub max_nonzeros: usize,
}

impl Default for HomologyOptions {
    fn default() -> Self {
        HomologyOptions { mode: HomologyMode::FieldRank, max_nonzeros: DEFAULT_MAX_NONZEROS }
    }
}

impl HomologyOptions {
    pub fn exact() -> Self {
        HomologyOptions { mode: HomologyMode::Exact, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct HomologyProfile {
    /// Reduced Betti numbers `b̃_0, …, b̃_r`.
    pub betti: Vec<u64>,
    /// Invariant factors above one of `H̃_k`, per dimension; all empty in field mode.
    pub torsion: Vec<Vec<u64>>,
    /// Set when the complex is empty (all Betti numbers are then reported as zero).
    #[serde(rename = "empty")]
    pub empty_flag: bool,
}

impl HomologyProfile {
    pub fn betti(&self, k: usize) -> u64 {
        self.betti.get(k).copied().unwrap_or(0)
    }

    pub fn vanishes(&self, k: usize) -> bool {
        self.betti(k) == 0 && self.torsion.get(k).map_or(true, Vec::is_empty)
    }
}

pub fn homology_profile(y: &SimplicialComplex, mode: HomologyMode) -> Result<HomologyProfile> {
    homology_profile_with(y, HomologyOptions { mode, ..Default::default() })
}

pub fn homology_profile_with(y: &SimplicialComplex, opts: HomologyOptions) -> Result<HomologyProfile> {
    let top = y.r();
    if y.is_empty() {
        return Ok(HomologyProfile { betti: vec![0; top + 1], torsion: vec![Vec::new(); top + 1], empty_flag: true });
    }
    let f: Vec<usize> = (0..=top).map(|k| y.of_dim(k).len()).collect();
    // ranks[k] = rank ∂_k for k = 0..=top+1, with ∂_{top+1} = 0
    let mut ranks = vec![0usize; top + 2];
    let mut torsion = vec![Vec::new(); top + 1];
    ranks[0] = 1;
    for k in 1..=top {
        if f[k] == 0 {
            continue;
        }
        let nnz = f[k] * (k + 1);
        if nnz > opts.max_nonzeros {
            return Err(Error::ResourceCap { dim: k, nonzeros: nnz, cap: opts.max_nonzeros });
        }
        let d = boundary_matrix(y, k);
        match opts.mode {
            HomologyMode::FieldRank => ranks[k] = rank_mod_prime(&d),
            HomologyMode::Exact => {
                let snf = smith_normal_form(&d, opts.max_nonzeros)?;
                ranks[k] = snf.rank;
                torsion[k - 1] = snf
                    .torsion()
                    .map(|t| t.to_u64().ok_or_else(|| Error::TorsionOverflow(t.to_string())))
                    .collect::<Result<Vec<_>>>()?;
            }
        }
    }
    let betti = (0..=top).map(|k| (f[k] - ranks[k] - ranks[k + 1]) as u64).collect();
    Ok(HomologyProfile { betti, torsion, empty_flag: false })
}

/// `Σ (-1)^k f_k - Σ (-1)^k b̃_k`, which equals one for every nonempty complex.
pub fn euler_defect(y: &SimplicialComplex, h: &HomologyProfile) -> i64 {
    let alt = |k: usize| if k % 2 == 0 { 1i64 } else { -1 };
    let chi: i64 = y.f_vector().iter().enumerate().map(|(k, &c)| alt(k) * c as i64).sum();
    let red: i64 = h.betti.iter().enumerate().map(|(k, &b)| alt(k) * b as i64).sum();
    chi - red
}
