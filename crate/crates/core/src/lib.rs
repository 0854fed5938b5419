//! Exact computations with finite and tubular elliptic root systems: Weyl
//! groups as integer lattice automorphisms, Hurwitz orbits of reflection
//! factorizations, absolute-order intervals, and the congruence-subgroup
//! matrices attached to braids that stabilize a projected factorization.

// index loops read closer to the matrix formulas they implement
#![allow(clippy::needless_range_loop)]

pub mod diagram;
pub mod elliptic;
pub mod error;
pub mod gamma2;
pub mod hurwitz;
pub mod lattice;
pub mod linalg;
pub mod poset;
pub mod rootsys;
pub mod suite;
pub mod tables;
pub mod weyl;

#[cfg(test)]
mod cross_checks;

pub use diagram::{gram_from_diagram, Diagram, EdgeKind, GramForm};
pub use error::{Error, Result};
pub use lattice::{hnf_span, lattice_equal, Lattice, LatticeVector};
pub use linalg::{IMat, Signature};
pub use rootsys::{
    build_elliptic, build_finite, coxeter_transformation, mark_obstruction, roots_window,
    EllipticRootSystem, EllipticType, FiniteRootSystem, FiniteType,
};
pub use weyl::{
    enumerate_fac, is_generating, product, reflection_conjugacy_classes, reflection_length_finite,
    Ambient, FiniteWeyl, LatticeAutomorphism, ReflectionTuple,
};
