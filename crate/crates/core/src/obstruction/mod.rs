//! The equivariant coboundary decision: does the intersection cocycle
//! represent zero in equivariant cohomology with its sign-twisted
//! coefficients. Because the symmetric-group action on the deleted product
//! is free, the decision reduces to an integer linear system over orbit
//! representatives, solved exactly through the Smith normal form.

mod snf;

pub use snf::{
    smith_normal_form, solve_diophantine, solve_mod_p, DiophantineOutcome, IntegerMatrix, SnfResult,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::delprod::{boundary, orbit_rep, DeletedProduct, ProductCell};
use crate::error::{Error, Result};
use crate::genmaps::{epsilon, verify_cocycle, verify_equivariance, IntersectionCocycle};

/// The reduced coboundary system over orbit representatives: rows are
/// critical orbits, columns subcritical orbits, and the right-hand side the
/// cocycle on the critical representatives.
#[derive(Clone, Debug)]
pub struct EquivariantSystem {
    pub matrix: IntegerMatrix,
    pub rhs: Vec<BigInt>,
    pub critical_reps: Vec<ProductCell>,
    pub subcritical_reps: Vec<ProductCell>,
}

/// Assembles the reduced system. The cocycle must satisfy both the cocycle
/// condition and the equivariance law; violations are reported rather than
/// silently folded into the quotient.
pub fn build_equivariant_system(
    x: &DeletedProduct,
    c: &IntersectionCocycle,
) -> Result<EquivariantSystem> {
    if !verify_equivariance(c) {
        return Err(Error::InconsistentCocycle(
            "equivariance law fails on some critical cell".into(),
        ));
    }
    if !verify_cocycle(c, x) {
        return Err(Error::InconsistentCocycle(
            "cocycle condition fails one dimension above critical".into(),
        ));
    }
    let critical = c.critical_dim();
    let critical_reps: Vec<ProductCell> = x.orbit_reps(critical).into_iter().cloned().collect();
    let subcritical_reps: Vec<ProductCell> = if critical == 0 {
        Vec::new()
    } else {
        x.orbit_reps(critical - 1).into_iter().cloned().collect()
    };
    let col_of: BTreeMap<&ProductCell, usize> = subcritical_reps
        .iter()
        .enumerate()
        .map(|(i, cell)| (cell, i))
        .collect();

    let d = c.d();
    let rows: Vec<Vec<(usize, i64)>> = critical_reps
        .par_iter()
        .map(|e| {
            let mut coeffs: BTreeMap<usize, i64> = BTreeMap::new();
            for (facet, coef) in boundary(e).terms {
                let (rep, pi) = orbit_rep(&facet);
                let eps = epsilon(&pi, &rep.factor_dims(), d);
                let col = col_of[&rep];
                *coeffs.entry(col).or_insert(0) += coef as i64 * eps as i64;
            }
            coeffs.into_iter().collect()
        })
        .collect();

    let mut matrix = IntegerMatrix::zero(critical_reps.len(), subcritical_reps.len());
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row {
            matrix.set(i, j, v.into());
        }
    }
    let rhs = critical_reps.iter().map(|e| c.value(e).into()).collect();
    Ok(EquivariantSystem {
        matrix,
        rhs,
        critical_reps,
        subcritical_reps,
    })
}

/// An equivariant cochain on the subcritical orbits whose coboundary
/// reproduces the cocycle exactly.
#[derive(Clone, Debug)]
pub struct CoboundaryWitness {
    pub assignment: BTreeMap<ProductCell, BigInt>,
}

/// Certificate that the class does not vanish: a row of the diagonalized
/// system where divisibility fails, together with the integer row
/// combination y of the original system with y A = 0 modulo the divisor but
/// y b not.
#[derive(Clone, Debug)]
pub struct NonvanishingCertificate {
    pub row: usize,
    pub divisor: BigInt,
    pub value: BigInt,
    pub combination: Vec<BigInt>,
}

#[derive(Clone, Debug)]
pub enum ClassDecision {
    Vanishes(CoboundaryWitness),
    DoesNotVanish(NonvanishingCertificate),
}

impl ClassDecision {
    pub fn vanishes(&self) -> bool {
        matches!(self, ClassDecision::Vanishes(_))
    }
}

/// Decides whether the cocycle is an equivariant coboundary. A positive
/// answer carries a witness that is re-verified against the full ordered
/// complex; a negative answer carries the divisibility violation.
pub fn class_vanishes(x: &DeletedProduct, c: &IntersectionCocycle) -> Result<ClassDecision> {
    let system = build_equivariant_system(x, c)?;
    Ok(decide_system(x, c, &system))
}

/// The decision step on an already-assembled system.
pub fn decide_system(
    x: &DeletedProduct,
    c: &IntersectionCocycle,
    system: &EquivariantSystem,
) -> ClassDecision {
    match solve_diophantine(&system.matrix, &system.rhs) {
        DiophantineOutcome::Solution(values) => {
            let assignment = system
                .subcritical_reps
                .iter()
                .cloned()
                .zip(values)
                .collect();
            let witness = CoboundaryWitness { assignment };
            debug_assert!(verify_witness(x, c, &witness));
            ClassDecision::Vanishes(witness)
        }
        DiophantineOutcome::NoSolution {
            row,
            divisor,
            value,
            combination,
        } => ClassDecision::DoesNotVanish(NonvanishingCertificate {
            row,
            divisor,
            value,
            combination,
        }),
    }
}

/// Extends the witness equivariantly to every ordered subcritical cell and
/// re-applies the coboundary on the full ordered complex: the result must
/// equal the cocycle entry-exactly.
pub fn verify_witness(
    x: &DeletedProduct,
    c: &IntersectionCocycle,
    witness: &CoboundaryWitness,
) -> bool {
    let d = c.d();
    let value_on = |cell: &ProductCell| -> BigInt {
        let (rep, pi) = orbit_rep(cell);
        match witness.assignment.get(&rep) {
            Some(v) => BigInt::from(epsilon(&pi, &rep.factor_dims(), d)) * v,
            None => BigInt::zero(),
        }
    };
    x.cells(c.critical_dim()).par_iter().all(|e| {
        let total: BigInt = boundary(e)
            .terms
            .iter()
            .map(|(t, coef)| BigInt::from(*coef) * value_on(t))
            .sum();
        total == BigInt::from(c.value(e))
    })
}

/// Checks a nonvanishing certificate without redoing the Smith reduction:
/// the combination must annihilate the matrix modulo the divisor while
/// pairing with the right-hand side to a non-multiple (for divisor zero:
/// exact annihilation with a nonzero pairing).
pub fn verify_nonvanishing(system: &EquivariantSystem, cert: &NonvanishingCertificate) -> bool {
    use num_integer::Integer;
    if cert.combination.len() != system.matrix.rows() {
        return false;
    }
    let mut ya = vec![BigInt::zero(); system.matrix.cols()];
    for (i, j, v) in system.matrix.entries() {
        ya[j] += &cert.combination[i] * v;
    }
    let yb: BigInt = cert
        .combination
        .iter()
        .zip(&system.rhs)
        .map(|(a, b)| a * b)
        .sum();
    if yb != cert.value {
        return false;
    }
    if cert.divisor.is_zero() {
        ya.iter().all(|v| v.is_zero()) && !yb.is_zero()
    } else {
        ya.iter().all(|v| v.is_multiple_of(&cert.divisor)) && !yb.is_multiple_of(&cert.divisor)
    }
}
