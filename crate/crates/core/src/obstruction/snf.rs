//! Sparse arbitrary-precision integer matrices, Smith normal form, and
//! certified integer linear system solving.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A sparse integer matrix; only nonzero entries are stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    row_data: Vec<BTreeMap<usize, BigInt>>,
    col_index: Vec<BTreeSet<usize>>,
}

impl IntegerMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_data: vec![BTreeMap::new(); rows],
            col_index: vec![BTreeSet::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> Self {
        let mut m = Self::zero(rows, cols);
        for &(i, j, v) in entries {
            m.set(i, j, v.into());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.row_data[i]
            .get(&j)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        if v.is_zero() {
            if self.row_data[i].remove(&j).is_some() {
                self.col_index[j].remove(&i);
            }
        } else {
            self.row_data[i].insert(j, v);
            self.col_index[j].insert(i);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &BigInt) {
        if v.is_zero() {
            return;
        }
        let new = self.get(i, j) + v;
        self.set(i, j, new);
    }

    pub fn nnz(&self) -> usize {
        self.row_data.iter().map(|r| r.len()).sum()
    }

    pub fn row(&self, i: usize) -> &BTreeMap<usize, BigInt> {
        &self.row_data[i]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.row_data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(&j, v)| (i, j, v)))
    }

    fn rows_of_col(&self, j: usize) -> Vec<usize> {
        self.col_index[j].iter().copied().collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let cols: BTreeSet<usize> = self.row_data[a]
            .keys()
            .chain(self.row_data[b].keys())
            .copied()
            .collect();
        self.row_data.swap(a, b);
        for j in cols {
            let ia = self.row_data[a].contains_key(&j);
            let ib = self.row_data[b].contains_key(&j);
            if ia {
                self.col_index[j].insert(a);
            } else {
                self.col_index[j].remove(&a);
            }
            if ib {
                self.col_index[j].insert(b);
            } else {
                self.col_index[j].remove(&b);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let rows: Vec<usize> = self.col_index[a]
            .union(&self.col_index[b])
            .copied()
            .collect();
        for i in rows {
            let va = self.row_data[i].remove(&a);
            let vb = self.row_data[i].remove(&b);
            if let Some(v) = va {
                self.row_data[i].insert(b, v);
            }
            if let Some(v) = vb {
                self.row_data[i].insert(a, v);
            }
        }
        self.col_index.swap(a, b);
    }

    /// row\[target\] += q * row\[source\]
    pub fn add_row_multiple(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let updates: Vec<(usize, BigInt)> = self.row_data[source]
            .iter()
            .map(|(&j, v)| (j, v * q))
            .collect();
        for (j, delta) in updates {
            self.add_to(target, j, &delta);
        }
    }

    /// col\[target\] += q * col\[source\]
    pub fn add_col_multiple(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in self.rows_of_col(source) {
            let delta = &self.row_data[i][&source] * q;
            self.add_to(i, target, &delta);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for v in self.row_data[i].values_mut() {
            *v = -v.clone();
        }
    }

    /// Replaces rows (a, b) by (s row_a + t row_b, x row_a + y row_b); the
    /// caller guarantees the 2x2 transform is unimodular.
    fn two_row_transform(
        &mut self,
        a: usize,
        b: usize,
        s: &BigInt,
        t: &BigInt,
        x: &BigInt,
        y: &BigInt,
    ) {
        let cols: BTreeSet<usize> = self.row_data[a]
            .keys()
            .chain(self.row_data[b].keys())
            .copied()
            .collect();
        for j in cols {
            let va = self.get(a, j);
            let vb = self.get(b, j);
            self.set(a, j, s * &va + t * &vb);
            self.set(b, j, x * va + y * vb);
        }
    }

    /// Column version of [`Self::two_row_transform`].
    fn two_col_transform(
        &mut self,
        a: usize,
        b: usize,
        s: &BigInt,
        t: &BigInt,
        x: &BigInt,
        y: &BigInt,
    ) {
        let rows: Vec<usize> = self.col_index[a]
            .union(&self.col_index[b])
            .copied()
            .collect();
        for i in rows {
            let va = self.get(i, a);
            let vb = self.get(i, b);
            self.set(i, a, s * &va + t * &vb);
            self.set(i, b, x * va + y * vb);
        }
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntegerMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for (&k, a) in &self.row_data[i] {
                for (&j, b) in &other.row_data[k] {
                    out.add_to(i, j, &(a * b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| self.row_data[i].iter().map(|(&j, v)| v * &x[j]).sum())
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(i, j, _)| i == j)
    }

    /// Determinant modulo a prime, by dense elimination over F_p. Entry
    /// sizes do not matter here, so this stays fast where the exact
    /// Bareiss determinant would not.
    pub fn determinant_mod(&self, p: u64) -> u64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let pb = BigInt::from(p);
        let mut m: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut row = vec![0u64; n];
                for (&j, v) in &self.row_data[i] {
                    row[j] = u64::try_from(v.mod_floor(&pb)).unwrap();
                }
                row
            })
            .collect();
        let mulp = |a: u64, b: u64| -> u64 { ((a as u128 * b as u128) % p as u128) as u64 };
        let mut det: u64 = 1;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| m[i][c] % p != 0) else {
                return 0;
            };
            if piv != c {
                m.swap(c, piv);
                det = p - det;
            }
            det = mulp(det, m[c][c]);
            let inv = mod_pow(m[c][c], p - 2, p);
            for i in c + 1..n {
                if m[i][c] % p != 0 {
                    let f = mulp(m[i][c], inv);
                    for j in c..n {
                        m[i][j] = (m[i][j] + p - mulp(f, m[c][j])) % p;
                    }
                }
            }
        }
        det % p
    }

    /// Determinant by fraction-free (Bareiss) elimination; meant for the
    /// moderate sizes of the certification tests.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j)).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }
}

/// Smith normal form `U * A * V = D` with unimodular transforms and the
/// divisibility chain d_1 | d_2 | ... on the diagonal.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
    pub d: IntegerMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i))
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|v| !v.is_zero()).count()
    }
}

/// Quotient of round-to-nearest division: keeps remainders at most half the
/// divisor, which is what holds coefficient growth down during reduction.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    if &r.abs() * 2 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Pivot cost: smallest magnitude first (large pivots force gcd grinding
/// against whole rows, the main source of coefficient blow-up), then the
/// Markowitz fill-in estimate among candidates of equal magnitude.
fn pivot_cost(m: &IntegerMatrix, i: usize, j: usize, from: usize) -> (BigInt, usize) {
    let row_nnz = m.row(i).range(from..).count();
    let col_nnz = m.col_index[j].range(from..).count();
    (m.get(i, j).abs(), (row_nnz - 1) * (col_nnz - 1))
}

fn find_pivot(m: &IntegerMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<((BigInt, usize), (usize, usize))> = None;
    for i in from..m.rows() {
        for (&j, _) in m.row(i).range(from..) {
            let cost = pivot_cost(m, i, j, from);
            // A +-1 pivot with zero fill cannot be beaten.
            if cost.0.is_one() && cost.1 == 0 {
                return Some((i, j));
            }
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, (i, j)));
            }
        }
    }
    best.map(|(_, ij)| ij)
}

/// Bezout data for the 2x2 unimodular transform that moves gcd(a, b) into
/// the leading position: (s, t, x, y) with s a + t b = g, x = -b/g,
/// y = a/g, so the transform has determinant one.
fn bezout_transform(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt, BigInt) {
    let ext = a.extended_gcd(b);
    let (mut g, mut s, mut t) = (ext.gcd, ext.x, ext.y);
    if g.is_negative() {
        g = -g;
        s = -s;
        t = -t;
    }
    let x = -(b / &g);
    let y = a / &g;
    (s, t, x, y)
}

/// Computes the Smith normal form of an integer matrix by elimination with
/// smallest-entry pivoting. Non-divisible entries in the pivot row or
/// column are folded into the pivot by one extended-gcd transform each,
/// which avoids the coefficient blow-up of repeated remainder swaps.
pub fn smith_normal_form(a: &IntegerMatrix) -> SnfResult {
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(a.rows());
    let mut v = IntegerMatrix::identity(a.cols());
    let limit = a.rows().min(a.cols());

    for k in 0..limit {
        let Some((pi, pj)) = find_pivot(&d, k) else {
            break;
        };
        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);

        'reduce: loop {
            // Make the pivot the gcd of its column, then clear the column.
            loop {
                let bad = d.col_index[k]
                    .range(k + 1..)
                    .find(|&&i| !d.get(i, k).is_multiple_of(&d.get(k, k)))
                    .copied();
                match bad {
                    Some(i) => {
                        let (s, t, x, y) = bezout_transform(&d.get(k, k), &d.get(i, k));
                        d.two_row_transform(k, i, &s, &t, &x, &y);
                        u.two_row_transform(k, i, &s, &t, &x, &y);
                    }
                    None => break,
                }
            }
            for i in d.col_index[k].range(k + 1..).copied().collect::<Vec<_>>() {
                let q = d.get(i, k) / d.get(k, k);
                d.add_row_multiple(i, k, &-&q);
                u.add_row_multiple(i, k, &-q);
            }

            // Same for the row. The gcd transforms mix whole columns and
            // can reintroduce entries below the pivot.
            let mut columns_mixed = false;
            loop {
                let bad = d
                    .row(k)
                    .range(k + 1..)
                    .find(|(_, val)| !val.is_multiple_of(&d.get(k, k)))
                    .map(|(&j, _)| j);
                match bad {
                    Some(j) => {
                        let (s, t, x, y) = bezout_transform(&d.get(k, k), &d.get(k, j));
                        d.two_col_transform(k, j, &s, &t, &x, &y);
                        v.two_col_transform(k, j, &s, &t, &x, &y);
                        columns_mixed = true;
                    }
                    None => break,
                }
            }
            for j in d.row(k).range(k + 1..).map(|(&j, _)| j).collect::<Vec<_>>() {
                let q = d.get(k, j) / d.get(k, k);
                d.add_col_multiple(j, k, &-&q);
                v.add_col_multiple(j, k, &-q);
            }
            if columns_mixed && d.col_index[k].range(k + 1..).next().is_some() {
                continue 'reduce;
            }

            // Divisibility: the pivot must divide the whole active region.
            let pivot = d.get(k, k);
            let offender = d
                .row_data
                .iter()
                .enumerate()
                .skip(k + 1)
                .find_map(|(i, row)| {
                    row.range(k + 1..)
                        .find(|(_, val)| !val.is_multiple_of(&pivot))
                        .map(|_| i)
                });
            match offender {
                Some(i) => {
                    d.add_row_multiple(k, i, &BigInt::one());
                    u.add_row_multiple(k, i, &BigInt::one());
                }
                None => break 'reduce,
            }
        }

        if d.get(k, k).is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }

    SnfResult { u, v, d }
}

/// Outcome of an integer linear system `A x = b`: either a witness vector
/// satisfying the system exactly, or the row of the transformed system where
/// divisibility fails.
#[derive(Clone, Debug)]
pub enum DiophantineOutcome {
    Solution(Vec<BigInt>),
    NoSolution {
        /// Index of the violating row of the diagonalized system.
        row: usize,
        /// The diagonal divisor at that row (zero beyond the rank).
        divisor: BigInt,
        /// The transformed right-hand side (U b) at that row.
        value: BigInt,
        /// The corresponding row of U: a certificate vector y with
        /// y A = divisor * (row of V^-1), hence y A = 0 mod divisor
        /// while y b = value is not.
        combination: Vec<BigInt>,
    },
}

/// Solves `A x = b` over the integers via the Smith normal form. Returned
/// solutions are re-verified by exact multiplication.
pub fn solve_diophantine(a: &IntegerMatrix, b: &[BigInt]) -> DiophantineOutcome {
    assert_eq!(a.rows(), b.len());
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b);
    let diag = snf.diagonal();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        let di = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if di.is_zero() {
            if !ubi.is_zero() {
                return DiophantineOutcome::NoSolution {
                    row: i,
                    divisor: di,
                    value: ubi.clone(),
                    combination: (0..a.rows()).map(|j| snf.u.get(i, j)).collect(),
                };
            }
        } else {
            let (q, rem) = ubi.div_rem(&di);
            if !rem.is_zero() {
                return DiophantineOutcome::NoSolution {
                    row: i,
                    divisor: di,
                    value: ubi.clone(),
                    combination: (0..a.rows()).map(|j| snf.u.get(i, j)).collect(),
                };
            }
            if i < a.cols() {
                y[i] = q;
            }
        }
    }
    let mut x = snf.v.mul_vec(&y);
    reduce_by_kernel(&snf, &mut x);
    debug_assert_eq!(a.mul_vec(&x), b);
    DiophantineOutcome::Solution(x)
}

/// Shrinks a particular solution by rounding off components along the
/// kernel lattice of A, whose basis is the set of columns of V beyond the
/// rank. A x = b is preserved exactly; the sweeps are a heuristic size
/// reduction, not a closest-vector computation.
fn reduce_by_kernel(snf: &SnfResult, x: &mut [BigInt]) {
    let rank = snf.rank();
    let cols = snf.v.cols();
    if rank == cols {
        return;
    }
    let kernel: Vec<Vec<BigInt>> = (rank..cols)
        .map(|j| (0..cols).map(|i| snf.v.get(i, j)).collect())
        .collect();
    let norms: Vec<BigInt> = kernel
        .iter()
        .map(|k| k.iter().map(|v| v * v).sum())
        .collect();
    for _ in 0..3 {
        let mut changed = false;
        for (k, norm) in kernel.iter().zip(&norms) {
            if norm.is_zero() {
                continue;
            }
            let dot: BigInt = x.iter().zip(k).map(|(a, b)| a * b).sum();
            let q = div_round(&dot, norm);
            if q.is_zero() {
                continue;
            }
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi -= &q * ki;
            }
            changed = true;
        }
        if !changed {
            break;
        }
    }
}

/// Solvability of `A x = b` modulo a prime, by dense elimination over F_p.
pub fn solve_mod_p(a: &IntegerMatrix, b: &[BigInt], p: u64) -> bool {
    let pb = BigInt::from(p);
    let red = |v: &BigInt| -> u64 {
        let m = v.mod_floor(&pb);
        u64::try_from(m).unwrap()
    };
    let rows = a.rows();
    let cols = a.cols();
    let mut m: Vec<Vec<u64>> = (0..rows)
        .map(|i| {
            let mut row = vec![0u64; cols + 1];
            for (&j, v) in a.row(i) {
                row[j] = red(v);
            }
            row[cols] = red(&b[i]);
            row
        })
        .collect();
    let mulp = |a: u64, b: u64| -> u64 { ((a as u128 * b as u128) % p as u128) as u64 };
    let mut r = 0usize;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] % p != 0) else {
            continue;
        };
        m.swap(r, piv);
        let f = mod_pow(m[r][c] % p, p - 2, p);
        for j in c..=cols {
            m[r][j] = mulp(m[r][j] % p, f);
        }
        for i in 0..rows {
            if i != r && m[i][c] % p != 0 {
                let g = m[i][c] % p;
                for j in c..=cols {
                    m[i][j] = (m[i][j] % p + mulp(p - g, m[r][j])) % p;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    // Consistent iff no row reduces to 0 = nonzero.
    m.iter()
        .all(|row| row[..cols].iter().any(|&v| v % p != 0) || row[cols] % p == 0)
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}
