//! The r-fold r-wise deleted join of a complex and the equivariant
//! retraction from the topological deleted join onto its simplicial model.
//!
//! Points carry exact rational coefficients; all properties of the
//! retraction (idempotence, fixed points, equivariance) hold as exact
//! equalities.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::delprod::Permutation;
use crate::error::{Error, Result};
use crate::linalg::{rat_from_str, rat_to_string, Rat};

/// A cell of the simplicial deleted join: an r-tuple of simplices of the
/// base (empty factors allowed, not all empty) whose common intersection is
/// empty.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct JoinCell {
    pub factors: Vec<Option<Simplex>>,
}

impl JoinCell {
    /// Join dimension: sum of (dim + 1) over the non-empty factors, minus 1.
    pub fn dimension(&self) -> usize {
        let verts: usize = self
            .factors
            .iter()
            .flatten()
            .map(|s| s.vertices().len())
            .sum();
        verts - 1
    }
}

impl fmt::Display for JoinCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|s| s.as_ref().map_or("-".to_string(), |s| s.to_string()))
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// The r-fold r-wise simplicial deleted join: all factor tuples whose
/// r-wise intersection is empty.
#[derive(Clone, Debug)]
pub struct SimplicialDeletedJoin {
    r: usize,
    cells: Vec<JoinCell>,
}

impl SimplicialDeletedJoin {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn cells(&self) -> &[JoinCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Builds the simplicial deleted join by filtering all factor tuples
/// (including empty factors) for empty r-wise intersection.
pub fn build_deleted_join(base: &SimplicialComplex, r: usize) -> SimplicialDeletedJoin {
    assert!(r >= 2);
    let options: Vec<Option<Simplex>> = std::iter::once(None)
        .chain(base.simplices().cloned().map(Some))
        .collect();
    let mut cells = Vec::new();
    for combo in std::iter::repeat_n(options.iter(), r).multi_cartesian_product() {
        if combo.iter().all(|f| f.is_none()) {
            continue;
        }
        let factors: Vec<Option<Simplex>> = combo.into_iter().cloned().collect();
        if common_vertices(&factors).is_empty() {
            cells.push(JoinCell { factors });
        }
    }
    cells.sort();
    SimplicialDeletedJoin { r, cells }
}

fn common_vertices(factors: &[Option<Simplex>]) -> Vec<VertexId> {
    let mut iter = factors.iter();
    let Some(first) = iter.next() else {
        return Vec::new();
    };
    let mut common: Vec<VertexId> = match first {
        Some(s) => s.vertices().to_vec(),
        None => return Vec::new(),
    };
    for f in iter {
        match f {
            None => return Vec::new(),
            Some(s) => common.retain(|v| s.vertices().binary_search(v).is_ok()),
        }
        if common.is_empty() {
            break;
        }
    }
    common
}

/// A point of the r-fold join of a complex with itself: one non-negative
/// rational coefficient map per factor, total mass exactly one, each
/// factor's support a simplex of the base.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JoinPoint {
    factors: Vec<BTreeMap<VertexId, Rat>>,
}

impl JoinPoint {
    /// Validates coefficients (strictly positive entries only, total one)
    /// and supports (each must span a simplex of `base`).
    pub fn new(factors: Vec<BTreeMap<VertexId, Rat>>, base: &SimplicialComplex) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::Parameter("a join point needs r >= 2 factors".into()));
        }
        let mut total = Rat::zero();
        for coeffs in &factors {
            for c in coeffs.values() {
                if !c.is_positive() {
                    return Err(Error::Parameter(
                        "join point coefficients must be positive".into(),
                    ));
                }
                total += c;
            }
            if !coeffs.is_empty() {
                let support = Simplex::new(coeffs.keys().copied().collect())?;
                if !base.contains(&support) {
                    return Err(Error::Parameter(format!(
                        "support [{support}] is not a simplex of the base complex"
                    )));
                }
            }
        }
        if !total.is_one() {
            return Err(Error::Parameter(format!(
                "join point mass must be 1, got {total}"
            )));
        }
        Ok(Self { factors })
    }

    pub fn r(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, i: usize) -> &BTreeMap<VertexId, Rat> {
        &self.factors[i]
    }

    /// Support of factor `i`, or `None` when the factor carries no mass.
    pub fn support(&self, i: usize) -> Option<Simplex> {
        if self.factors[i].is_empty() {
            None
        } else {
            Some(Simplex::new(self.factors[i].keys().copied().collect()).unwrap())
        }
    }

    pub fn total_mass(&self) -> Rat {
        self.factors.iter().flat_map(|f| f.values()).sum()
    }

    /// Permutes the factors: factor `i` moves to position `pi(i)`.
    pub fn permute(&self, pi: &Permutation) -> JoinPoint {
        let mut factors = vec![BTreeMap::new(); self.r()];
        for (i, f) in self.factors.iter().enumerate() {
            factors[pi.apply(i)] = f.clone();
        }
        JoinPoint { factors }
    }
}

/// True iff the factor supports have empty r-wise intersection, i.e. the
/// point lies in the simplicial deleted join.
pub fn is_in_simplicial_deleted_join(p: &JoinPoint) -> bool {
    shared_support(&p.factors).is_empty()
}

fn shared_support(factors: &[BTreeMap<VertexId, Rat>]) -> Vec<VertexId> {
    let mut iter = factors.iter();
    let Some(first) = iter.next() else {
        return Vec::new();
    };
    let mut common: Vec<VertexId> = first.keys().copied().collect();
    for f in iter {
        common.retain(|v| f.contains_key(v));
        if common.is_empty() {
            break;
        }
    }
    common
}

/// Retracts a point of the topological deleted join onto the simplicial
/// deleted join: repeatedly subtract, on each vertex shared by all factor
/// supports, the minimal coefficient across factors (removing the diagonal
/// component), then renormalize. Points already in the simplicial deleted
/// join are fixed; diagonal points are rejected.
pub fn retract_point(p: &JoinPoint) -> Result<JoinPoint> {
    if p.factors.iter().all_equal() {
        return Err(Error::DiagonalPoint);
    }
    let mut factors = p.factors.clone();
    loop {
        let shared = shared_support(&factors);
        if shared.is_empty() {
            break;
        }
        for v in shared {
            let min = factors.iter().map(|f| f[&v].clone()).min().unwrap();
            for f in factors.iter_mut() {
                let c = f.get_mut(&v).unwrap();
                *c -= &min;
                if c.is_zero() {
                    f.remove(&v);
                }
            }
        }
        let total: Rat = factors.iter().flat_map(|f| f.values()).sum();
        if total.is_zero() {
            // Zero remainder would mean all factors were equal, which the
            // diagonal check above already rejected.
            return Err(Error::DiagonalPoint);
        }
        for f in factors.iter_mut() {
            for c in f.values_mut() {
                *c /= &total;
            }
        }
    }
    Ok(JoinPoint { factors })
}

/// Serializes a point in the exchange syntax
/// `factor_index vertex:num/den ... ; factor_index ...` (factors with no
/// mass are omitted).
pub fn point_to_string(p: &JoinPoint) -> String {
    let mut parts = Vec::new();
    for (i, f) in p.factors.iter().enumerate() {
        if f.is_empty() {
            continue;
        }
        let coeffs = f
            .iter()
            .map(|(v, c)| format!("{v}:{}", rat_to_string(c)))
            .join(" ");
        parts.push(format!("{i} {coeffs}"));
    }
    parts.join(" ; ")
}

/// Parses the point exchange syntax. `r` fixes the number of factors, which
/// may exceed the largest factor index present.
pub fn point_from_str(text: &str, r: usize, base: &SimplicialComplex) -> Result<JoinPoint> {
    let mut factors = vec![BTreeMap::new(); r];
    for part in text.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let mut toks = part.split_whitespace();
        let idx: usize = toks
            .next()
            .unwrap()
            .parse()
            .map_err(|_| Error::Parameter(format!("bad factor index in `{part}`")))?;
        if idx >= r {
            return Err(Error::Parameter(format!(
                "factor index {idx} out of range for r={r}"
            )));
        }
        for tok in toks {
            let (v, c) = tok
                .split_once(':')
                .ok_or_else(|| Error::Parameter(format!("bad coefficient token `{tok}`")))?;
            let v: u32 = v
                .parse()
                .map_err(|_| Error::Parameter(format!("bad vertex in `{tok}`")))?;
            let c = rat_from_str(c)
                .ok_or_else(|| Error::Parameter(format!("bad rational in `{tok}`")))?;
            factors[idx].insert(VertexId(v), c);
        }
    }
    JoinPoint::new(factors, base)
}
