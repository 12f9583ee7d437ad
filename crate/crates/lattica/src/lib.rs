//! Exact-arithmetic engine for two-dimensional linear cellular automata
//! over the prime field Z_p.
//!
//! The automaton lives on an m x n lattice. Each step replaces every cell
//! with a weighted sum of its eight Moore neighbors modulo p; reads that
//! fall off the lattice are routed through a boundary-condition resolver
//! (null, periodic, adiabatic, reflexive, or a per-side mix of those).
//! Because the rule is linear, one step is multiplication of the flattened
//! state by an mn x mn rule matrix, and the interesting dynamical questions
//! reduce to exact linear algebra:
//!
//! * reversibility is full rank of the rule matrix ([`dynamics::reversibility`]),
//!   decided by a structured block elimination when the matrix is block
//!   tridiagonal with a constant invertible off-diagonal block, and by
//!   dense Gauss-Jordan otherwise;
//! * fixed points are the nullspace of T - I ([`dynamics::fixed_points`]);
//! * Gardens of Eden (orphan configurations) number exactly
//!   p^(mn) - p^rank ([`dynamics::goe_census`]);
//! * nilpotency means some power of T vanishes ([`dynamics::is_nilpotent`]).
//!
//! The direct stepper ([`stepper::step`]) never touches the matrices and
//! serves as the independent oracle the two matrix builders
//! ([`rulematrix::build_from_resolver`], [`rulematrix::build_closed_form`])
//! are verified against.

pub mod boundary;
pub mod dynamics;
pub mod error;
pub mod gfp;
pub mod grid;
pub mod linalg;
pub mod rulematrix;
pub mod stepper;

pub use boundary::{BaseBoundary, BoundarySpec, Corner, CornerRule, NamedSpec};
pub use error::{Error, Result};
pub use gfp::{FieldElement, FieldSpec};
pub use grid::{flatten, unflatten, Configuration, LatticeDims, StateVector};
pub use linalg::{DenseMatrix, EliminationResult};
pub use rulematrix::RuleMatrix;
pub use stepper::RuleCoefficients;
