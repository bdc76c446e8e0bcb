//! Finite simplicial complexes: construction, generators for the test
//! corpus, and the plain-text exchange format.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// A vertex, named by a non-negative integer. Ids within one complex are
/// distinct but need not be contiguous.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A simplex in canonical form: a non-empty, strictly ascending vertex list.
/// All orientation conventions downstream derive from this order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Simplex {
    vertices: Vec<VertexId>,
}

impl Simplex {
    /// Builds a simplex from an arbitrary vertex list; the list is sorted
    /// into canonical form. Repeated vertices are rejected.
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Parameter("empty vertex list".into()));
        }
        vertices.sort_unstable();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::MalformedSimplex(w[0].0));
            }
        }
        Ok(Self { vertices })
    }

    /// Convenience constructor used pervasively in tests and generators.
    ///
    /// # Panics
    /// Panics on an empty or repeating vertex list.
    pub fn of(vertices: &[u32]) -> Self {
        Self::new(vertices.iter().map(|&v| VertexId(v)).collect()).expect("valid simplex")
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    /// True iff the vertex sets are disjoint. Both lists are ascending, so a
    /// single merge scan suffices.
    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.vertices.len() && j < other.vertices.len() {
            match self.vertices[i].cmp(&other.vertices[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// True iff `self` is a (not necessarily proper) face of `other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.vertices.iter();
        self.vertices.iter().all(|v| it.any(|w| w == v))
    }

    /// Vertices common to both simplices, in ascending order.
    pub fn intersection(&self, other: &Simplex) -> Vec<VertexId> {
        self.vertices
            .iter()
            .copied()
            .filter(|v| other.vertices.binary_search(v).is_ok())
            .collect()
    }

    /// The codimension-one faces, in vertex-deletion order. The j-th facet
    /// (vertex j removed) carries boundary coefficient (-1)^j.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.dimension() == 0 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .map(|j| {
                let mut v = self.vertices.clone();
                v.remove(j);
                Simplex { vertices: v }
            })
            .collect()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            self.vertices.iter().map(|v| v.to_string()).join(" ")
        )
    }
}

/// True iff the vertex sets of `a` and `b` are disjoint.
pub fn are_disjoint(a: &Simplex, b: &Simplex) -> bool {
    a.is_disjoint(b)
}

/// A finite simplicial complex: a set of canonical simplices closed under
/// taking faces. Immutable after construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicialComplex {
    /// Simplices grouped by dimension, each group sorted.
    by_dim: Vec<Vec<Simplex>>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self { by_dim: Vec::new() }
    }

    /// The smallest complex containing all generators (downward closure).
    /// Idempotent: re-closing the simplices of a complex reproduces it.
    pub fn closure(generators: &[Simplex]) -> Self {
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        for g in generators {
            let n = g.vertices().len();
            assert!(n <= 30, "simplex dimension too large to close over");
            for mask in 1u32..(1 << n) {
                let vs: Vec<VertexId> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| g.vertices()[i])
                    .collect();
                all.insert(Simplex { vertices: vs });
            }
        }
        Self::from_set(all)
    }

    fn from_set(all: BTreeSet<Simplex>) -> Self {
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for s in all {
            let d = s.dimension();
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(s);
        }
        Self { by_dim }
    }

    /// Dimension of the complex; -1 for the empty complex.
    pub fn dim(&self) -> i64 {
        self.by_dim.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// Total number of simplices.
    pub fn len(&self) -> usize {
        self.by_dim.iter().map(|v| v.len()).sum()
    }

    /// Simplices of dimension `k`, sorted; empty slice when none exist.
    pub fn simplices_of_dim(&self, k: usize) -> &[Simplex] {
        self.by_dim.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.by_dim
            .get(s.dimension())
            .is_some_and(|v| v.binary_search(s).is_ok())
    }

    /// All vertex ids appearing in the complex, ascending.
    pub fn vertices(&self) -> Vec<VertexId> {
        self.simplices_of_dim(0)
            .iter()
            .map(|s| s.vertices()[0])
            .collect()
    }

    /// The subcomplex of simplices of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> Self {
        Self {
            by_dim: self.by_dim.iter().take(k + 1).cloned().collect(),
        }
    }

    /// Simplices not properly contained in any other simplex of the complex.
    pub fn maximal_simplices(&self) -> Vec<&Simplex> {
        self.simplices()
            .filter(|s| {
                !self
                    .by_dim
                    .iter()
                    .skip(s.dimension() + 1)
                    .flatten()
                    .any(|t| s.is_face_of(t))
            })
            .collect()
    }

    /// Checks face-closedness directly; holds for every constructed complex.
    pub fn is_face_closed(&self) -> bool {
        self.simplices()
            .all(|s| s.facets().iter().all(|t| self.contains(t)))
    }

    /// Parses the plain-text format: `#` starts a comment line, every other
    /// non-blank line lists the vertices of one simplex; the complex is the
    /// downward closure of all listed simplices.
    pub fn parse(text: &str) -> Result<Self> {
        let mut generators = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut vs = Vec::new();
            for tok in line.split_whitespace() {
                let v: u32 = tok.parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("invalid vertex id `{tok}`"),
                })?;
                vs.push(VertexId(v));
            }
            generators.push(Simplex::new(vs).map_err(|e| Error::Parse {
                line: idx + 1,
                msg: e.to_string(),
            })?);
        }
        Ok(Self::closure(&generators))
    }

    /// Emits one maximal simplex per line, lines sorted lexicographically by
    /// vertex list. `parse(serialize(K)) == K`.
    pub fn serialize(&self) -> String {
        let mut maximal = self.maximal_simplices();
        maximal.sort();
        let mut out = String::new();
        for s in maximal {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }
}

/// The k-skeleton of the full n-simplex on vertices 0..=n.
pub fn simplex_skeleton(n: usize, k: usize) -> SimplicialComplex {
    let k = k.min(n);
    let mut all = BTreeSet::new();
    for size in 1..=(k + 1) {
        for combo in (0..=n as u32).combinations(size) {
            all.insert(Simplex::new(combo.into_iter().map(VertexId).collect()).unwrap());
        }
    }
    SimplicialComplex::from_set(all)
}

/// The full n-simplex with all of its faces.
pub fn full_simplex(n: usize) -> SimplicialComplex {
    simplex_skeleton(n, n)
}

/// The N-simplex of the topological Tverberg problem, N = (d+1)(r-1).
pub fn tverberg_complex(r: usize, d: usize) -> Result<SimplicialComplex> {
    if r < 2 || d < 1 {
        return Err(Error::Parameter(format!(
            "tverberg complex needs r >= 2 and d >= 1, got r={r}, d={d}"
        )));
    }
    Ok(full_simplex((d + 1) * (r - 1)))
}

/// The complete bipartite graph K_{a,b} as a 1-complex. Part A gets vertices
/// 0..a, part B gets a..a+b.
pub fn complete_bipartite(a: usize, b: usize) -> SimplicialComplex {
    assert!(a >= 1 && b >= 1);
    let mut gens = Vec::new();
    for i in 0..a as u32 {
        for j in 0..b as u32 {
            gens.push(Simplex::of(&[i, a as u32 + j]));
        }
    }
    SimplicialComplex::closure(&gens)
}
