//! Decides almost r-embeddability of finite simplicial complexes into R^d
//! through the deleted product criterion: build the deleted r-fold product,
//! evaluate the r-fold intersection cocycle of a generic PL map with exact
//! rational arithmetic, and decide equivariant class-vanishing by integer
//! linear algebra, with machine-checkable certificates either way.

pub mod complex;
pub mod deljoin;
pub mod delprod;
pub mod error;
pub mod genmaps;
pub mod linalg;
pub mod obstruction;
pub mod verdict;

pub use complex::{
    are_disjoint, complete_bipartite, full_simplex, simplex_skeleton, tverberg_complex, Simplex,
    SimplicialComplex, VertexId,
};
pub use deljoin::{
    build_deleted_join, is_in_simplicial_deleted_join, retract_point, JoinCell, JoinPoint,
    SimplicialDeletedJoin,
};
pub use delprod::{
    act, boundary, koszul_sign, orbit_rep, parse_cell, DeletedProduct, Permutation, ProductCell,
    SignedBoundary,
};
pub use error::{Error, Result};
pub use genmaps::{
    assemble_cocycle, check_general_position, epsilon, intersect_r_simplices, intersection_sign,
    sample_map, sample_map_generic, verify_cocycle, verify_equivariance, IntersectionCocycle,
    IntersectionPoint, PLMap, RationalVector,
};
pub use obstruction::{
    build_equivariant_system, class_vanishes, smith_normal_form, solve_diophantine, solve_mod_p,
    verify_nonvanishing, verify_witness, ClassDecision, CoboundaryWitness, DiophantineOutcome,
    EquivariantSystem, IntegerMatrix, NonvanishingCertificate, SnfResult,
};
pub use verdict::{check_metastable, decide, regime, DecideOptions, Outcome, Regime, Report};
