use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest dimension with first-class support. Simplices up to this dimension are stored
/// inline; larger ones still work but the ambient constructors reject them.
pub const MAX_DIM: usize = 7;

pub type Vertices = SmallVec<[u32; MAX_DIM + 1]>;

/// A nonempty set of vertices stored as a strictly increasing list.
///
/// Ordering is the canonical one: by dimension first, then lexicographic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Simplex(Vertices);

impl Simplex {
    /// Builds a simplex from vertices in any order. Duplicates and the empty set are rejected.
    pub fn new(vertices: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut v: Vertices = vertices.into_iter().collect();
        if v.is_empty() {
            return Err(Error::InvalidSimplex("the empty set is not a simplex".into()));
        }
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSimplex(format!("repeated vertex in {v:?}")));
        }
        Ok(Simplex(v))
    }

    /// Caller guarantees `vertices` is nonempty and strictly increasing.
    pub fn from_sorted(vertices: &[u32]) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(Vertices::from_slice(vertices))
    }

    pub fn vertex(v: u32) -> Self {
        Simplex(smallvec::smallvec![v])
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min_vertex(&self) -> u32 {
        self.0[0]
    }

    pub fn max_vertex(&self) -> u32 {
        self.0[self.0.len() - 1]
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.len() <= other.len() && self.intersection_len(other) == self.len()
    }

    /// Number of shared vertices (`dim(self ∩ other) + 1`).
    pub fn intersection_len(&self, other: &Simplex) -> usize {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j, mut c) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    c += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        c
    }

    /// `self ∪ {v}`, or `None` if `v` is already a vertex.
    pub fn with_vertex(&self, v: u32) -> Option<Simplex> {
        match self.0.binary_search(&v) {
            Ok(_) => None,
            Err(pos) => {
                let mut out = self.0.clone();
                out.insert(pos, v);
                Some(Simplex(out))
            }
        }
    }

    /// The facet opposite the `j`-th vertex, `None` for a vertex.
    pub fn facet(&self, j: usize) -> Option<Simplex> {
        if self.0.len() == 1 {
            return None;
        }
        let mut out = self.0.clone();
        out.remove(j);
        Some(Simplex(out))
    }

    /// Codimension-one faces with their boundary signs `(-1)^j`.
    pub fn boundary(&self) -> impl Iterator<Item = (Simplex, i64)> + '_ {
        let signs = [1i64, -1];
        (0..self.0.len()).filter_map(move |j| self.facet(j).map(|f| (f, signs[j % 2])))
    }

    /// All nonempty faces, including `self`.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let m = self.0.len() as u32;
        (1u32..(1u32 << m)).map(move |mask| {
            Simplex((0..m).filter(|b| mask & (1 << b) != 0).map(|b| self.0[b as usize]).collect())
        })
    }

    /// Faces of dimension exactly `k`, in lexicographic order.
    pub fn faces_of_dim(&self, k: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        let mut it = crate::combinatorics::LexSubsets::new(k + 1, self.0.len() as u32);
        while let Some(idx) = it.next_subset() {
            out.push(Simplex(idx.iter().map(|&i| self.0[i as usize]).collect()));
        }
        out
    }

    /// `self` with vertex `v` removed; `None` if that leaves nothing or `v` is absent.
    pub fn without_vertex(&self, v: u32) -> Option<Simplex> {
        let pos = self.0.binary_search(&v).ok()?;
        self.facet(pos)
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Simplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

impl<'de> serde::Deserialize<'de> for Simplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        Simplex::new(v).map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and examples: `simplex![0, 1, 2]`.
#[macro_export]
macro_rules! simplex {
    ($($v:expr),+ $(,)?) => {
        $crate::simplex::Simplex::new([$($v as u32),+]).expect("valid simplex literal")
    };
}
