//! Hypergraphs (arbitrary simplex sets) and simplicial complexes (downward-closed sets)
//! on the vertex set `{0, …, n}`, with the closure operators relating them.

use std::collections::HashSet;

use crate::combinatorics::LexSubsets;
use crate::error::{Error, Result};
use crate::simplex::{Simplex, MAX_DIM};

/// Vertex set `{0, …, n}` and the dimension cap `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Ambient {
    pub n: u32,
    pub r: usize,
}

impl Ambient {
    pub fn new(n: u32, r: usize) -> Result<Self> {
        if r > MAX_DIM {
            return Err(Error::InvalidParams(format!(
                "dimension cap r={r} above the supported limit {MAX_DIM}"
            )));
        }
        Ok(Ambient { n, r })
    }

    pub fn vertex_count(&self) -> u32 {
        self.n + 1
    }

    fn check(&self, s: &Simplex) -> Result<()> {
        if s.max_vertex() > self.n {
            return Err(Error::VertexOutOfRange { vertex: s.max_vertex(), n: self.n });
        }
        if s.dim() > self.r {
            return Err(Error::DimensionOverflow { simplex: s.clone(), dim: s.dim(), r: self.r });
        }
        Ok(())
    }
}

/// Per-dimension sorted lists plus a hash index.
#[derive(Clone, Default)]
struct Store {
    by_dim: Vec<Vec<Simplex>>,
    members: HashSet<Simplex>,
}

impl Store {
    fn from_set(r: usize, members: HashSet<Simplex>) -> Self {
        let mut by_dim = vec![Vec::new(); r + 1];
        for s in &members {
            by_dim[s.dim()].push(s.clone());
        }
        for v in &mut by_dim {
            v.sort_unstable();
        }
        Store { by_dim, members }
    }

    fn iter(&self) -> impl Iterator<Item = &Simplex> + '_ {
        self.by_dim.iter().flatten()
    }

    fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }
}

impl PartialEq for Store {
    fn eq(&self, other: &Self) -> bool {
        let trim = |v: &Vec<Vec<Simplex>>| {
            let top = v.iter().rposition(|d| !d.is_empty()).map_or(0, |t| t + 1);
            v[..top].to_vec()
        };
        trim(&self.by_dim) == trim(&other.by_dim)
    }
}

macro_rules! common_accessors {
    ($t:ty) => {
        impl $t {
            pub fn ambient(&self) -> Ambient {
                self.ambient
            }

            pub fn n(&self) -> u32 {
                self.ambient.n
            }

            pub fn r(&self) -> usize {
                self.ambient.r
            }

            pub fn len(&self) -> usize {
                self.store.members.len()
            }

            pub fn is_empty(&self) -> bool {
                self.store.members.is_empty()
            }

            pub fn contains(&self, s: &Simplex) -> bool {
                self.store.members.contains(s)
            }

            /// Members of dimension `k` in lexicographic order.
            pub fn of_dim(&self, k: usize) -> &[Simplex] {
                self.store.by_dim.get(k).map_or(&[], Vec::as_slice)
            }

            /// Members in canonical order (dimension-major, lexicographic within a dimension).
            pub fn iter(&self) -> impl Iterator<Item = &Simplex> + '_ {
                self.store.iter()
            }

            /// Number of members per dimension, indexed `0..=r`.
            pub fn f_vector(&self) -> Vec<usize> {
                self.store.counts()
            }

            /// Largest dimension present, `None` when empty.
            pub fn dim(&self) -> Option<usize> {
                self.store.by_dim.iter().rposition(|d| !d.is_empty())
            }
        }

        impl std::fmt::Debug for $t {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.debug_struct(stringify!($t))
                    .field("ambient", &self.ambient)
                    .field("simplices", &self.store.iter().collect::<Vec<_>>())
                    .finish()
            }
        }
    };
}

/// An arbitrary finite set of simplices of dimension at most `r`.
#[derive(Clone, PartialEq)]
pub struct Hypergraph {
    ambient: Ambient,
    store: Store,
}

common_accessors!(Hypergraph);

impl Hypergraph {
    pub fn new(ambient: Ambient, simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut members = HashSet::new();
        for s in simplices {
            ambient.check(&s)?;
            members.insert(s);
        }
        Ok(Hypergraph { ambient, store: Store::from_set(ambient.r, members) })
    }

    pub fn empty(ambient: Ambient) -> Self {
        Hypergraph { ambient, store: Store::from_set(ambient.r, HashSet::new()) }
    }

    /// Members of dimension at least `k` (the set written `X_{k+}`), canonical order.
    pub fn at_least_dim(&self, k: usize) -> impl Iterator<Item = &Simplex> + '_ {
        self.store.by_dim.iter().skip(k).flatten()
    }

    /// Copy with every member of dimension `k` removed.
    pub fn without_dim(&self, k: usize) -> Hypergraph {
        let members = self.store.members.iter().filter(|s| s.dim() != k).cloned().collect();
        Hypergraph { ambient: self.ambient, store: Store::from_set(self.ambient.r, members) }
    }

    /// Same set viewed as a complex, if it is downward closed.
    pub fn to_complex(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::new(self.ambient, self.iter().cloned())
    }
}

/// A downward-closed finite set of simplices of dimension at most `r`.
#[derive(Clone, PartialEq)]
pub struct SimplicialComplex {
    ambient: Ambient,
    store: Store,
}

common_accessors!(SimplicialComplex);

impl SimplicialComplex {
    /// Validates downward closure.
    pub fn new(ambient: Ambient, simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut members = HashSet::new();
        for s in simplices {
            ambient.check(&s)?;
            members.insert(s);
        }
        for s in &members {
            for (f, _) in s.boundary() {
                if !members.contains(&f) {
                    return Err(Error::NotClosed { simplex: s.clone(), face: f });
                }
            }
        }
        Ok(Self::from_closed(ambient, members))
    }

    pub(crate) fn from_closed(ambient: Ambient, members: HashSet<Simplex>) -> Self {
        debug_assert!(members.iter().all(|s| s.boundary().all(|(f, _)| members.contains(&f))));
        SimplicialComplex { ambient, store: Store::from_set(ambient.r, members) }
    }

    pub fn empty(ambient: Ambient) -> Self {
        Self::from_closed(ambient, HashSet::new())
    }

    pub fn into_hypergraph(self) -> Hypergraph {
        Hypergraph { ambient: self.ambient, store: self.store }
    }

    /// Union of two complexes on the same vertex set; the dimension cap is the larger one.
    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let ambient = Ambient { n: self.n().max(other.n()), r: self.r().max(other.r()) };
        let members = self.store.members.union(&other.store.members).cloned().collect();
        Self::from_closed(ambient, members)
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.store.members.is_subset(&other.store.members)
    }

    /// Whether every `k`-simplex on `{0, …, n}` is present.
    pub fn has_full_skeleton(&self, k: usize) -> bool {
        let total = crate::combinatorics::binomial(self.n() as u64 + 1, k as u64 + 1);
        self.of_dim(k).len() as u128 == total
    }

    /// Largest `k` such that the complete `j`-skeleton is present for every `j <= k`.
    pub fn full_skeleton_up_to(&self) -> Option<usize> {
        (0..=self.r()).take_while(|&k| self.has_full_skeleton(k)).last()
    }
}

/// Minimal complex containing `x`: every member together with all its faces.
pub fn closure(x: &Hypergraph) -> SimplicialComplex {
    let mut members: HashSet<Simplex> = HashSet::with_capacity(x.len() * 2);
    let mut stack = Vec::new();
    for s in x.store.by_dim.iter().rev().flatten() {
        if members.contains(s) {
            continue;
        }
        stack.push(s.clone());
        while let Some(t) = stack.pop() {
            if members.contains(&t) {
                continue;
            }
            // faces of an already present simplex are present, so only descend into new ones
            for (f, _) in t.boundary() {
                if !members.contains(&f) {
                    stack.push(f);
                }
            }
            members.insert(t);
        }
    }
    SimplicialComplex::from_closed(x.ambient, members)
}

/// Maximal complex contained in `x`: members all of whose faces are members.
pub fn lower_complex(x: &Hypergraph) -> SimplicialComplex {
    let mut members: HashSet<Simplex> = HashSet::new();
    for layer in &x.store.by_dim {
        for s in layer {
            if s.boundary().all(|(f, _)| members.contains(&f)) {
                members.insert(s.clone());
            }
        }
    }
    SimplicialComplex::from_closed(x.ambient, members)
}

/// Members of `y` contained in no other member, in canonical order.
pub fn maximal_simplices(y: &SimplicialComplex) -> Vec<Simplex> {
    let mut covered: HashSet<Simplex> = HashSet::new();
    for s in y.iter() {
        for (f, _) in s.boundary() {
            covered.insert(f);
        }
    }
    y.iter().filter(|s| !covered.contains(*s)).cloned().collect()
}

/// Minimal non-faces of `y` up to dimension `r`: simplices `σ ∉ y` on `{0, …, n}` whose
/// whole boundary lies in `y`. Vertices missing from `y` are included.
pub fn minimal_missing(y: &SimplicialComplex, r: usize) -> Vec<Simplex> {
    let mut out: Vec<Simplex> =
        (0..=y.n()).map(Simplex::vertex).filter(|v| !y.contains(v)).collect();
    for j in 1..=r {
        // each candidate is generated once, from its facet without the largest vertex
        for rho in y.of_dim(j - 1) {
            for w in rho.max_vertex() + 1..=y.n() {
                let sigma = rho.with_vertex(w).expect("w exceeds every vertex of rho");
                if !y.contains(&sigma) && sigma.boundary().all(|(f, _)| y.contains(&f)) {
                    out.push(sigma);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Members of `y` of dimension at most `k`.
pub fn skeleton(y: &SimplicialComplex, k: usize) -> SimplicialComplex {
    let ambient = Ambient { n: y.n(), r: y.r().min(k) };
    let members = y.store.members.iter().filter(|s| s.dim() <= k).cloned().collect();
    SimplicialComplex::from_closed(ambient, members)
}

/// Complete `k`-skeleton on `{0, …, n}`.
pub fn full_skeleton(n: u32, k: usize) -> Result<SimplicialComplex> {
    let ambient = Ambient::new(n, k)?;
    let mut members = HashSet::new();
    for j in 0..=k {
        let mut it = LexSubsets::new(j + 1, n + 1);
        while let Some(s) = it.next_subset() {
            members.insert(Simplex::from_sorted(s));
        }
    }
    Ok(SimplicialComplex::from_closed(ambient, members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex;

    fn hg(n: u32, r: usize, s: Vec<Simplex>) -> Hypergraph {
        Hypergraph::new(Ambient::new(n, r).unwrap(), s).unwrap()
    }

    fn cx(n: u32, r: usize, s: Vec<Simplex>) -> SimplicialComplex {
        SimplicialComplex::new(Ambient::new(n, r).unwrap(), s).unwrap()
    }

    #[test]
    fn closure_examples() {
        let y = closure(&hg(2, 2, vec![simplex![0, 1, 2]]));
        assert_eq!(y.len(), 7);
        assert_eq!(y.f_vector(), vec![3, 3, 1]);
        assert!(closure(&hg(2, 2, vec![])).is_empty());
        let y = closure(&hg(2, 1, vec![simplex![0, 1], simplex![1, 2]]));
        assert_eq!(
            y.iter().cloned().collect::<Vec<_>>(),
            vec![simplex![0], simplex![1], simplex![2], simplex![0, 1], simplex![1, 2]]
        );
        assert_eq!(y.f_vector(), vec![3, 2]);
    }

    #[test]
    fn lower_complex_examples() {
        assert!(lower_complex(&hg(2, 2, vec![simplex![0, 1, 2]])).is_empty());
        let x = hg(1, 1, vec![simplex![0], simplex![1], simplex![0, 1]]);
        assert_eq!(lower_complex(&x).len(), 3);
        let x = hg(
            2,
            2,
            vec![simplex![0], simplex![1], simplex![2], simplex![0, 1], simplex![1, 2], simplex![0, 1, 2]],
        );
        let y = lower_complex(&x);
        assert_eq!(y.len(), 5);
        assert!(!y.contains(&simplex![0, 1, 2]));
    }

    #[test]
    fn maximal_examples() {
        let full = full_skeleton(2, 2).unwrap();
        assert_eq!(maximal_simplices(&full), vec![simplex![0, 1, 2]]);
        assert_eq!(
            maximal_simplices(&cx(1, 1, vec![simplex![0], simplex![1]])),
            vec![simplex![0], simplex![1]]
        );
        let y = closure(&hg(2, 1, vec![simplex![0, 1], simplex![1, 2]]));
        assert_eq!(maximal_simplices(&y), vec![simplex![0, 1], simplex![1, 2]]);
        assert!(maximal_simplices(&SimplicialComplex::empty(Ambient::new(3, 2).unwrap())).is_empty());
    }

    #[test]
    fn minimal_missing_examples() {
        let hollow = skeleton(&full_skeleton(2, 2).unwrap(), 1);
        let hollow = SimplicialComplex::new(Ambient::new(2, 2).unwrap(), hollow.iter().cloned()).unwrap();
        assert_eq!(minimal_missing(&hollow, 2), vec![simplex![0, 1, 2]]);
        let empty = SimplicialComplex::empty(Ambient::new(2, 2).unwrap());
        assert_eq!(minimal_missing(&empty, 2), vec![simplex![0], simplex![1], simplex![2]]);
        let y = closure(&hg(3, 2, vec![simplex![0, 1, 2]]));
        assert_eq!(minimal_missing(&y, 2), vec![simplex![3]]);
    }

    #[test]
    fn minimal_missing_matches_brute_force() {
        // brute force over all subsets of {0..=3} of size <= 3
        let x = hg(3, 2, vec![simplex![0, 1], simplex![1, 2], simplex![0, 2], simplex![2, 3]]);
        let y = closure(&x);
        let mut brute = Vec::new();
        for mask in 1u32..16 {
            let s = Simplex::new((0..4).filter(|b| mask & (1 << b) != 0)).unwrap();
            if s.dim() <= 2 && !y.contains(&s) && s.boundary().all(|(f, _)| y.contains(&f)) {
                brute.push(s);
            }
        }
        brute.sort();
        assert_eq!(minimal_missing(&y, 2), brute);
        assert_eq!(brute, vec![simplex![0, 3], simplex![1, 3], simplex![0, 1, 2]]);
    }

    #[test]
    fn skeleton_examples() {
        let k4 = skeleton(&full_skeleton(3, 3).unwrap(), 1);
        assert_eq!(k4.f_vector(), vec![4, 6]);
        let y = closure(&hg(3, 2, vec![simplex![0, 1, 2], simplex![2, 3]]));
        assert_eq!(skeleton(&y, 2), y);
        assert_eq!(full_skeleton(2, 0).unwrap().iter().cloned().collect::<Vec<_>>(),
            vec![simplex![0], simplex![1], simplex![2]]);
    }

    #[test]
    fn rejects_bad_members() {
        let a = Ambient::new(2, 1).unwrap();
        assert!(matches!(Hypergraph::new(a, [simplex![0, 1, 2]]), Err(Error::DimensionOverflow { .. })));
        assert!(matches!(Hypergraph::new(a, [simplex![0, 5]]), Err(Error::VertexOutOfRange { .. })));
        assert!(matches!(SimplicialComplex::new(a, [simplex![0, 1]]), Err(Error::NotClosed { .. })));
        assert!(Ambient::new(10, 8).is_err());
    }

    #[test]
    fn full_skeleton_tracking() {
        let y = closure(&hg(3, 2, vec![simplex![0, 1, 2], simplex![3]]));
        assert_eq!(y.full_skeleton_up_to(), Some(0));
        assert_eq!(full_skeleton(4, 2).unwrap().full_skeleton_up_to(), Some(2));
        assert_eq!(SimplicialComplex::empty(Ambient::new(3, 2).unwrap()).full_skeleton_up_to(), None);
    }
}
