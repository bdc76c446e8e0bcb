//! Dense exact rational linear algebra: the small solvers behind the
//! intersection systems and the general-position checks.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// Outcome of a square rational linear system.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SquareSolve {
    /// Nonsingular matrix, unique solution.
    Unique(Vec<Rat>),
    /// Singular matrix, no solutions at all.
    Inconsistent,
    /// Singular matrix, a positive-dimensional solution family.
    Underdetermined,
}

/// Solves the square system `a x = b` over the rationals, distinguishing
/// the two singular outcomes.
pub fn solve_square(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> SquareSolve {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    let mut row = 0;
    let mut pivot_cols = Vec::with_capacity(n);
    for col in 0..n {
        let Some(pivot) = (row..n).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, pivot);
        b.swap(row, pivot);
        let p = a[row][col].clone();
        for j in col..n {
            a[row][j] /= &p;
        }
        b[row] /= &p;
        for i in 0..n {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..n {
                    let t = &a[row][j] * &f;
                    a[i][j] -= t;
                }
                let t = &b[row] * &f;
                b[i] -= t;
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    if row == n {
        // Nonsingular: undo the column bookkeeping (all columns are pivots
        // in order, so b already is the solution).
        return SquareSolve::Unique(b);
    }
    if b[row..].iter().any(|v| !v.is_zero()) {
        SquareSolve::Inconsistent
    } else {
        SquareSolve::Underdetermined
    }
}

/// Row rank of a rectangular rational matrix.
pub fn rank(mut m: Vec<Vec<Rat>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for col in 0..cols {
        let Some(pivot) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let p = m[r][col].clone();
        for j in col..cols {
            m[r][j] /= &p;
        }
        for i in 0..rows {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Sign of the determinant of a square rational matrix: -1, 0, or +1.
pub fn det_sign(mut m: Vec<Vec<Rat>>) -> i8 {
    let n = m.len();
    let mut sign = 1i8;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return 0;
        };
        if pivot != col {
            m.swap(col, pivot);
            sign = -sign;
        }
        if m[col][col].is_negative() {
            sign = -sign;
        }
        let p = m[col][col].clone();
        for i in col + 1..n {
            if !m[i][col].is_zero() {
                let f = &m[i][col] / &p;
                for j in col..n {
                    let t = &m[col][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
    }
    sign
}

/// True iff the given points are affinely independent.
pub fn affinely_independent(points: &[Vec<Rat>]) -> bool {
    if points.len() <= 1 {
        return true;
    }
    let diffs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| {
            p.iter()
                .zip(&points[0])
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>()
        })
        .collect();
    rank(diffs) == points.len() - 1
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Renders a rational as `num/den` in lowest terms (denominator always
/// printed, matching the point exchange syntax).
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num`, `num/den`, or a signed variant thereof.
pub fn rat_from_str(s: &str) -> Option<Rat> {
    let mut parts = s.splitn(2, '/');
    let num: num_bigint::BigInt = parts.next()?.trim().parse().ok()?;
    match parts.next() {
        None => Some(Rat::from_integer(num)),
        Some(d) => {
            let den: num_bigint::BigInt = d.trim().parse().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(Rat::new(num, den))
            }
        }
    }
}

/// True iff the rational is exactly one.
pub fn is_one(r: &Rat) -> bool {
    r.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_2x2_system() {
        // x + y = 3, x - y = 1  =>  x = 2, y = 1
        let a = vec![vec![rat_int(1), rat_int(1)], vec![rat_int(1), rat_int(-1)]];
        let b = vec![rat_int(3), rat_int(1)];
        assert_eq!(
            solve_square(a, b),
            SquareSolve::Unique(vec![rat_int(2), rat_int(1)])
        );
    }

    #[test]
    fn classifies_singular_systems() {
        let a = vec![vec![rat_int(1), rat_int(2)], vec![rat_int(2), rat_int(4)]];
        // Consistent: the second equation is twice the first.
        assert_eq!(
            solve_square(a.clone(), vec![rat_int(1), rat_int(2)]),
            SquareSolve::Underdetermined
        );
        // Inconsistent: parallel equations with different right-hand sides.
        assert_eq!(
            solve_square(a, vec![rat_int(1), rat_int(3)]),
            SquareSolve::Inconsistent
        );
    }

    #[test]
    fn rank_and_det_sign() {
        let m = vec![vec![rat_int(1), rat_int(0)], vec![rat_int(0), rat_int(-2)]];
        assert_eq!(rank(m.clone()), 2);
        assert_eq!(det_sign(m), -1);
        let singular = vec![vec![rat_int(1), rat_int(2)], vec![rat_int(2), rat_int(4)]];
        assert_eq!(det_sign(singular), 0);
    }

    #[test]
    fn moment_curve_points_are_affinely_independent() {
        // t -> (t, t^2, t^3) at distinct integers: Vandermonde.
        let pts: Vec<Vec<Rat>> = (1..=4)
            .map(|t: i64| vec![rat_int(t), rat_int(t * t), rat_int(t * t * t)])
            .collect();
        assert!(affinely_independent(&pts));
        let degenerate = vec![vec![rat_int(0); 3]; 2];
        assert!(!affinely_independent(&degenerate));
    }

    #[test]
    fn rational_string_round_trip() {
        let r = rat(-6, 4);
        assert_eq!(rat_to_string(&r), "-3/2");
        assert_eq!(rat_from_str("-3/2").unwrap(), r);
        assert_eq!(rat_from_str("7").unwrap(), rat_int(7));
        assert!(rat_from_str("1/0").is_none());
    }
}
