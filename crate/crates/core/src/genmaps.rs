//! Generic PL maps with exact rational vertex coordinates, r-fold
//! intersection points on critical cells, and assembly of the intersection
//! obstruction cocycle.
//!
//! The critical dimension is d(r-1): there a generic map meets each cell's
//! factor images in at most one interior point, counted with a sign. All
//! arithmetic is rational, so equal seeds give bit-identical cocycles.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::complex::{SimplicialComplex, VertexId};
use crate::delprod::{act, boundary, koszul_sign, DeletedProduct, Permutation, ProductCell};
use crate::error::{Error, Result};
use crate::linalg::{affinely_independent, det_sign, solve_square, Rat, SquareSolve};

/// Exact rational coordinates of a point in R^d.
pub type RationalVector = Vec<Rat>;

/// A PL map given by vertex images and extended affinely on each simplex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PLMap {
    images: BTreeMap<VertexId, RationalVector>,
    d: usize,
}

impl PLMap {
    pub fn new(images: BTreeMap<VertexId, RationalVector>, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Parameter("target dimension must be >= 1".into()));
        }
        for (v, img) in &images {
            if img.len() != d {
                return Err(Error::Parameter(format!(
                    "image of vertex {v} has {} coordinates, expected {d}",
                    img.len()
                )));
            }
        }
        Ok(Self { images, d })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn image(&self, v: VertexId) -> &RationalVector {
        &self.images[&v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.images.keys().copied()
    }
}

/// Maximum number of re-draws before sampling reports a genericity failure.
pub const MAX_SAMPLE_ATTEMPTS: u32 = 64;

const GRID_BITS: u32 = 20;
const SCALE_BITS: u32 = 10;

fn draw(k: &SimplicialComplex, d: usize, seed: u64, stream: u64) -> PLMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut images = BTreeMap::new();
    for v in k.vertices() {
        let coords: RationalVector = (0..d)
            .map(|_| {
                let g = rng.next_u32() & ((1u32 << GRID_BITS) - 1);
                Rat::new(g.into(), (1u64 << SCALE_BITS).into())
            })
            .collect();
        images.insert(v, coords);
    }
    PLMap { images, d }
}

/// Draws vertex images from the grid [0, 2^20)^d scaled by 2^-10 with a
/// deterministic generator, re-drawing on a fresh substream until all
/// subsets of at most d+1 images are affinely independent.
pub fn sample_map(k: &SimplicialComplex, d: usize, seed: u64) -> Result<PLMap> {
    sample_with(k, d, seed, |f| affine_condition(f))
}

/// Like [`sample_map`], but retries until the full general-position check
/// against the given deleted product passes.
pub fn sample_map_generic(
    k: &SimplicialComplex,
    x: &DeletedProduct,
    d: usize,
    seed: u64,
) -> Result<PLMap> {
    sample_with(k, d, seed, |f| check_general_position(f, x))
}

fn sample_with(
    k: &SimplicialComplex,
    d: usize,
    seed: u64,
    ok: impl Fn(&PLMap) -> bool,
) -> Result<PLMap> {
    if d == 0 {
        return Err(Error::Parameter("target dimension must be >= 1".into()));
    }
    for attempt in 0..MAX_SAMPLE_ATTEMPTS {
        let f = draw(k, d, seed, attempt as u64);
        if ok(&f) {
            return Ok(f);
        }
    }
    Err(Error::GenericityExhausted(MAX_SAMPLE_ATTEMPTS))
}

/// Condition (i) of general position: every d+1 or fewer vertex images are
/// affinely independent.
fn affine_condition(f: &PLMap) -> bool {
    let vs: Vec<VertexId> = f.vertices().collect();
    subsets_up_to(vs.len(), f.d + 1).all(|subset| {
        let pts: Vec<RationalVector> = subset.iter().map(|&i| f.image(vs[i]).clone()).collect();
        affinely_independent(&pts)
    })
}

fn subsets_up_to(n: usize, max_size: usize) -> impl Iterator<Item = Vec<usize>> {
    use itertools::Itertools;
    (2..=max_size.min(n)).flat_map(move |size| (0..n).combinations(size))
}

/// Full general-position check of a map against a deleted product:
/// (i) affine independence of all small vertex-image subsets,
/// (ii) no critical cell with a positive-dimensional intersection family
///     (a singular system is acceptable only when it is inconsistent,
///     which happens structurally when a factor subset is overdetermined
///     and means the intersection is empty),
/// (iii) no critical-cell solution with a zero barycentric coordinate.
pub fn check_general_position(f: &PLMap, x: &DeletedProduct) -> bool {
    if !affine_condition(f) {
        return false;
    }
    let critical = f.d * (x.r() - 1);
    x.cells(critical)
        .par_iter()
        .all(|cell| match raw_intersection(f, cell) {
            SquareSolve::Unique(solution) => solution.iter().all(|c| !c.is_zero()),
            SquareSolve::Inconsistent => true,
            SquareSolve::Underdetermined => false,
        })
}

/// Solves the square intersection system of a critical cell: unknowns are
/// all barycentric coordinates, equations force equal images plus one
/// normalization per factor.
fn raw_intersection(f: &PLMap, cell: &ProductCell) -> SquareSolve {
    let d = f.d;
    let r = cell.arity();
    debug_assert_eq!(cell.dimension(), d * (r - 1));
    let n: usize = cell.factors().iter().map(|s| s.vertices().len()).sum();
    let offsets: Vec<usize> = cell
        .factors()
        .iter()
        .scan(0usize, |acc, s| {
            let o = *acc;
            *acc += s.vertices().len();
            Some(o)
        })
        .collect();

    let mut a = vec![vec![Rat::zero(); n]; n];
    let mut b = vec![Rat::zero(); n];
    let mut row = 0;
    // f_{i+1}(b_{i+1}) - f_i(b_i) = 0, coordinatewise.
    for i in 0..r - 1 {
        for coord in 0..d {
            for (j, v) in cell.factors()[i].vertices().iter().enumerate() {
                a[row][offsets[i] + j] = -f.image(*v)[coord].clone();
            }
            for (j, v) in cell.factors()[i + 1].vertices().iter().enumerate() {
                a[row][offsets[i + 1] + j] = f.image(*v)[coord].clone();
            }
            row += 1;
        }
    }
    // One normalization per factor.
    for i in 0..r {
        for j in 0..cell.factors()[i].vertices().len() {
            a[row][offsets[i] + j] = Rat::from_integer(1.into());
        }
        b[row] = Rat::from_integer(1.into());
        row += 1;
    }
    debug_assert_eq!(row, n);
    solve_square(a, b)
}

/// An isolated r-fold intersection point of the factor images of a critical
/// cell, with its barycentric coordinates and intersection sign.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntersectionPoint {
    pub location: RationalVector,
    pub barycentric: Vec<Vec<Rat>>,
    pub sign: i8,
}

/// Computes the r-fold intersection points of a critical cell. The affine
/// system has at most one solution; it counts iff every barycentric
/// coordinate is strictly positive. An inconsistent system means the
/// intersection is empty; a positive-dimensional solution family is a
/// genericity violation and is propagated so the caller can resample.
pub fn intersect_r_simplices(f: &PLMap, cell: &ProductCell) -> Result<Vec<IntersectionPoint>> {
    let solution = match raw_intersection(f, cell) {
        SquareSolve::Unique(solution) => solution,
        SquareSolve::Inconsistent => return Ok(Vec::new()),
        SquareSolve::Underdetermined => {
            return Err(Error::Genericity(format!(
                "positive-dimensional intersection family on cell {cell}"
            )))
        }
    };
    if !solution.iter().all(|c| c.is_positive()) {
        return Ok(Vec::new());
    }
    let mut barycentric = Vec::with_capacity(cell.arity());
    let mut at = 0;
    for s in cell.factors() {
        let len = s.vertices().len();
        barycentric.push(solution[at..at + len].to_vec());
        at += len;
    }
    let location: RationalVector = (0..f.d)
        .map(|coord| {
            cell.factors()[0]
                .vertices()
                .iter()
                .zip(&barycentric[0])
                .map(|(v, c)| &f.image(*v)[coord] * c)
                .sum()
        })
        .collect();
    let sign = jacobian_sign(f, cell)?;
    Ok(vec![IntersectionPoint {
        location,
        barycentric,
        sign,
    }])
}

/// Sign of an intersection point: the determinant sign of the Jacobian of
/// the consecutive-difference map (f x_2 - f x_1, ..., f x_r - f x_{r-1})
/// in the ascending-vertex-order coordinates of each factor. For affine
/// maps the Jacobian is constant on the cell.
pub fn intersection_sign(f: &PLMap, cell: &ProductCell, _point: &IntersectionPoint) -> Result<i8> {
    jacobian_sign(f, cell)
}

fn jacobian_sign(f: &PLMap, cell: &ProductCell) -> Result<i8> {
    let orders: Vec<Vec<VertexId>> = cell
        .factors()
        .iter()
        .map(|s| s.vertices().to_vec())
        .collect();
    let sign = oriented_jacobian_sign(f, &orders);
    if sign == 0 {
        return Err(Error::Genericity(format!(
            "degenerate intersection Jacobian on cell {cell}"
        )));
    }
    Ok(sign)
}

/// Jacobian sign with explicit vertex orders per factor (the first listed
/// vertex is the basepoint); used to probe orientation conventions.
pub(crate) fn oriented_jacobian_sign(f: &PLMap, factor_orders: &[Vec<VertexId>]) -> i8 {
    let d = f.d;
    let size: usize = factor_orders.iter().map(|o| o.len() - 1).sum();
    if size == 0 {
        // Zero-dimensional cell: a single transverse point, positive.
        return 1;
    }
    let mut jac = vec![vec![Rat::zero(); size]; size];
    let mut col = 0;
    for (i, order) in factor_orders.iter().enumerate() {
        let base = &order[0];
        for v in &order[1..] {
            // Block row k of the Jacobian is f x_{k+1} - f x_k, so factor i
            // contributes +D_i to block row i-1 and -D_i to block row i.
            for coord in 0..d {
                let delta = &f.image(*v)[coord] - &f.image(*base)[coord];
                if i >= 1 {
                    jac[(i - 1) * d + coord][col] = delta.clone();
                }
                if i < factor_orders.len() - 1 {
                    jac[i * d + coord][col] = -delta;
                }
            }
            col += 1;
        }
    }
    debug_assert_eq!(col, size);
    det_sign(jac)
}

/// The sign rule for permuting the factors of an intersection: the degree
/// of the permutation on the target sphere times the orientation change of
/// the product cell.
pub fn epsilon(pi: &Permutation, dims: &[usize], d: usize) -> i8 {
    let sphere = if d % 2 == 0 { 1 } else { pi.sign() };
    sphere * koszul_sign(pi, dims)
}

/// The intersection cocycle: one integer per critical cell, the signed
/// count of its r-fold intersection points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntersectionCocycle {
    values: BTreeMap<ProductCell, i64>,
    d: usize,
    r: usize,
}

impl IntersectionCocycle {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Critical dimension d(r-1).
    pub fn critical_dim(&self) -> usize {
        self.d * (self.r - 1)
    }

    pub fn value(&self, cell: &ProductCell) -> i64 {
        self.values.get(cell).copied().unwrap_or(0)
    }

    pub fn values(&self) -> &BTreeMap<ProductCell, i64> {
        &self.values
    }

    /// Number of cells with a nonzero value.
    pub fn support_size(&self) -> usize {
        self.values.values().filter(|v| !v.is_zero()).count()
    }

    /// Pointwise difference of two cocycles over the same parameters.
    pub fn difference(&self, other: &IntersectionCocycle) -> IntersectionCocycle {
        assert!(self.d == other.d && self.r == other.r);
        let mut values = self.values.clone();
        for (cell, v) in &other.values {
            *values.entry(cell.clone()).or_insert(0) -= v;
        }
        IntersectionCocycle {
            values,
            d: self.d,
            r: self.r,
        }
    }

    #[cfg(test)]
    pub(crate) fn from_values(values: BTreeMap<ProductCell, i64>, d: usize, r: usize) -> Self {
        Self { values, d, r }
    }
}

/// Evaluates the intersection cocycle of a generic map on every critical
/// cell of the deleted product.
pub fn assemble_cocycle(f: &PLMap, x: &DeletedProduct) -> Result<IntersectionCocycle> {
    let critical = f.d * (x.r() - 1);
    let cells = x.cells(critical);
    let entries: Result<Vec<(ProductCell, i64)>> = cells
        .par_iter()
        .map(|cell| {
            let pts = intersect_r_simplices(f, cell)?;
            let total: i64 = pts.iter().map(|p| p.sign as i64).sum();
            Ok((cell.clone(), total))
        })
        .collect();
    Ok(IntersectionCocycle {
        values: entries?.into_iter().collect(),
        d: f.d,
        r: x.r(),
    })
}

/// Checks the cocycle condition: for every cell one dimension above the
/// critical one, the signed sum of the cocycle over its facets vanishes.
/// Vacuously true when no such cells exist.
pub fn verify_cocycle(c: &IntersectionCocycle, x: &DeletedProduct) -> bool {
    x.cells(c.critical_dim() + 1).par_iter().all(|e| {
        boundary(e)
            .terms
            .iter()
            .map(|(t, coef)| *coef as i64 * c.value(t))
            .sum::<i64>()
            == 0
    })
}

/// Checks equivariance of a cocycle: c(pi . e) = epsilon(pi, dims(e)) c(e)
/// for every critical cell e and every permutation pi.
pub fn verify_equivariance(c: &IntersectionCocycle) -> bool {
    let perms = Permutation::all(c.r);
    c.values.iter().all(|(e, &v)| {
        perms
            .iter()
            .all(|pi| c.value(&act(pi, e)) == epsilon(pi, &e.factor_dims(), c.d) as i64 * v)
    })
}
