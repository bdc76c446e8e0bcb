//! The deleted r-fold product of a simplicial complex: the polytopal cell
//! complex of ordered r-tuples of pairwise disjoint simplices, with its
//! signed boundary operator and free symmetric-group action.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// A permutation of {0, .., r-1}, stored as the image list: `i` is sent to
/// `images[i]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let r = images.len();
        let mut seen = vec![false; r];
        for &i in &images {
            if i >= r || seen[i] {
                return Err(Error::Parameter(format!("not a permutation: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(r: usize) -> Self {
        Self {
            images: (0..r).collect(),
        }
    }

    /// The transposition swapping `i` and `j`.
    pub fn transposition(r: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..r).collect();
        images.swap(i, j);
        Self { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Self { images }
    }

    /// `self` after `other`: (self * other)(i) = self(other(i)).
    pub fn compose(&self, other: &Permutation) -> Self {
        Self {
            images: (0..self.images.len())
                .map(|i| self.apply(other.apply(i)))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Sign of the permutation: (-1)^(number of inversions).
    pub fn sign(&self) -> i8 {
        let mut sign = 1i8;
        for i in 0..self.images.len() {
            for j in i + 1..self.images.len() {
                if self.images[i] > self.images[j] {
                    sign = -sign;
                }
            }
        }
        sign
    }

    /// All r! permutations of degree `r`, in a deterministic order.
    pub fn all(r: usize) -> Vec<Permutation> {
        (0..r)
            .permutations(r)
            .map(|images| Permutation { images })
            .collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.images.iter().join(" "))
    }
}

/// A cell of the deleted product: an ordered tuple of pairwise disjoint
/// simplices. Its dimension is the sum of the factor dimensions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ProductCell {
    factors: Vec<Simplex>,
}

impl ProductCell {
    pub fn new(factors: Vec<Simplex>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::Parameter(
                "a product cell needs r >= 2 factors".into(),
            ));
        }
        for (i, a) in factors.iter().enumerate() {
            for b in &factors[i + 1..] {
                if !a.is_disjoint(b) {
                    return Err(Error::Parameter(format!(
                        "factors are not pairwise disjoint: [{a}] and [{b}]"
                    )));
                }
            }
        }
        Ok(Self { factors })
    }

    /// Test/corpus shorthand: `ProductCell::of(&[&[0, 1], &[2]])`.
    ///
    /// # Panics
    /// Panics when the factors are not pairwise disjoint simplices.
    pub fn of(factors: &[&[u32]]) -> Self {
        Self::new(factors.iter().map(|f| Simplex::of(f)).collect()).expect("valid cell")
    }

    pub fn factors(&self) -> &[Simplex] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn dimension(&self) -> usize {
        self.factors.iter().map(|s| s.dimension()).sum()
    }

    pub fn factor_dims(&self) -> Vec<usize> {
        self.factors.iter().map(|s| s.dimension()).collect()
    }
}

impl fmt::Display for ProductCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            self.factors.iter().map(|s| s.to_string()).join("|")
        )
    }
}

/// Parses the dump syntax `0 1|2 3` back into a cell.
pub fn parse_cell(text: &str) -> Result<ProductCell> {
    let factors: Result<Vec<Simplex>> = text
        .split('|')
        .map(|part| {
            let vs: std::result::Result<Vec<u32>, _> =
                part.split_whitespace().map(|t| t.parse()).collect();
            let vs = vs.map_err(|_| Error::Parameter(format!("bad cell factor `{part}`")))?;
            Simplex::new(vs.into_iter().map(crate::complex::VertexId).collect())
        })
        .collect();
    ProductCell::new(factors?)
}

/// Boundary of a product cell as a signed facet list; every coefficient is
/// +1 or -1 and every facet is again a cell of the deleted product.
#[derive(Clone, Debug)]
pub struct SignedBoundary {
    pub terms: Vec<(ProductCell, i8)>,
}

/// Leibniz-rule boundary: the i-th factor contributes its simplicial
/// boundary with the sign (-1)^(s_1 + .. + s_{i-1}), and within a factor the
/// facet missing vertex j carries (-1)^j.
pub fn boundary(c: &ProductCell) -> SignedBoundary {
    let mut terms = Vec::new();
    let mut prefix_sign = 1i8;
    for (i, factor) in c.factors.iter().enumerate() {
        let mut facet_sign = 1i8;
        for facet in factor.facets() {
            let mut factors = c.factors.clone();
            factors[i] = facet;
            terms.push((ProductCell { factors }, prefix_sign * facet_sign));
            facet_sign = -facet_sign;
        }
        if factor.dimension() % 2 == 1 {
            prefix_sign = -prefix_sign;
        }
    }
    SignedBoundary { terms }
}

/// Permutes the factors of a cell: factor `i` moves to position `pi(i)`.
pub fn act(pi: &Permutation, c: &ProductCell) -> ProductCell {
    debug_assert_eq!(pi.degree(), c.arity());
    let mut factors = vec![None; c.arity()];
    for (i, f) in c.factors.iter().enumerate() {
        factors[pi.apply(i)] = Some(f.clone());
    }
    ProductCell {
        factors: factors.into_iter().map(Option::unwrap).collect(),
    }
}

/// Orientation change of a product under factor permutation: the product
/// over inverted pairs i < j (with pi placing j before i) of (-1)^(s_i s_j).
pub fn koszul_sign(pi: &Permutation, dims: &[usize]) -> i8 {
    debug_assert_eq!(pi.degree(), dims.len());
    let mut sign = 1i8;
    for i in 0..dims.len() {
        for j in i + 1..dims.len() {
            if pi.apply(i) > pi.apply(j) && dims[i] % 2 == 1 && dims[j] % 2 == 1 {
                sign = -sign;
            }
        }
    }
    sign
}

/// The lexicographically minimal reordering of the factors, together with
/// the unique permutation carrying it back to `c` (the action is free since
/// disjoint factors are pairwise distinct).
pub fn orbit_rep(c: &ProductCell) -> (ProductCell, Permutation) {
    let mut sorted = c.factors.clone();
    sorted.sort();
    let images = sorted
        .iter()
        .map(|f| c.factors.iter().position(|g| g == f).unwrap())
        .collect();
    (ProductCell { factors: sorted }, Permutation { images })
}

/// The deleted r-fold product with cells materialized per dimension.
/// Construction is skeletal: only the requested dimension band is built,
/// since the obstruction pipeline touches just three dimensions.
#[derive(Clone, Debug)]
pub struct DeletedProduct {
    r: usize,
    base: SimplicialComplex,
    cells: BTreeMap<usize, Vec<ProductCell>>,
}

impl DeletedProduct {
    /// Builds every cell of the deleted product.
    pub fn build(base: &SimplicialComplex, r: usize) -> Result<Self> {
        let hi = (r as i64 * base.dim().max(0)) as usize;
        Self::build_range(base, r, 0, hi)
    }

    /// Builds only the cells of dimension `lo..=hi`.
    pub fn build_range(base: &SimplicialComplex, r: usize, lo: usize, hi: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::Parameter(format!(
                "deleted product needs r >= 2, got {r}"
            )));
        }
        if base.is_empty() {
            return Err(Error::Parameter(
                "deleted product of an empty complex".into(),
            ));
        }
        let mut cells = BTreeMap::new();
        for dim in lo..=hi {
            let mut at_dim = Vec::new();
            enumerate_cells(base, r, dim, &mut at_dim);
            at_dim.sort();
            cells.insert(dim, at_dim);
        }
        Ok(Self {
            r,
            base: base.clone(),
            cells,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    /// Cells of the given dimension, sorted. Empty when the dimension holds
    /// no cells or was not materialized.
    pub fn cells(&self, dim: usize) -> &[ProductCell] {
        self.cells.get(&dim).map_or(&[], |v| v.as_slice())
    }

    pub fn materialized_dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.keys().copied()
    }

    pub fn all_cells(&self) -> impl Iterator<Item = &ProductCell> {
        self.cells.values().flatten()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.values().map(|v| v.len()).sum()
    }

    /// Largest materialized dimension carrying a cell, or -1 if none do.
    pub fn max_dim(&self) -> i64 {
        self.cells
            .iter()
            .rev()
            .find(|(_, v)| !v.is_empty())
            .map_or(-1, |(d, _)| *d as i64)
    }

    /// Representatives (lexicographically minimal in their orbit) of the
    /// cells at a given dimension, sorted.
    pub fn orbit_reps(&self, dim: usize) -> Vec<&ProductCell> {
        self.cells(dim)
            .iter()
            .filter(|c| c.factors.windows(2).all(|w| w[0] < w[1]))
            .collect()
    }
}

/// Depth-first enumeration of ordered tuples of pairwise disjoint simplices
/// with total dimension `dim`.
fn enumerate_cells(base: &SimplicialComplex, r: usize, dim: usize, out: &mut Vec<ProductCell>) {
    let mut chosen: Vec<Simplex> = Vec::with_capacity(r);
    recurse(base, r, dim, &mut chosen, out);
}

fn recurse(
    base: &SimplicialComplex,
    r: usize,
    remaining_dim: usize,
    chosen: &mut Vec<Simplex>,
    out: &mut Vec<ProductCell>,
) {
    let slot = chosen.len();
    // The last factor must absorb the remaining dimension exactly; earlier
    // factors may take any share of it.
    let dim_choices = if slot + 1 == r {
        remaining_dim..=remaining_dim
    } else {
        0..=remaining_dim
    };
    for s in dim_choices {
        for candidate in base.simplices_of_dim(s) {
            if chosen.iter().all(|c| c.is_disjoint(candidate)) {
                chosen.push(candidate.clone());
                if slot + 1 == r {
                    out.push(ProductCell {
                        factors: chosen.clone(),
                    });
                } else {
                    recurse(base, r, remaining_dim - s, chosen, out);
                }
                chosen.pop();
            }
        }
    }
}
