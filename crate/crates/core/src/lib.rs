//! Exact ternary algebras of cubic matrices.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalars`]: the cyclotomic field ℚ(ζ₁₂) and a prime-field adapter.
//! - [`matrix`]: dense rectangular matrices with exact elimination.
//! - [`cubic`]: cubic matrices, the two induced maps and the cyclic
//!   symmetry decomposition.
//! - [`patterns`]: contraction patterns, i.e. candidate triple products.
//! - [`associativity`]: partial/total associativity checks and the full
//!   classification of the pattern space.
//! - [`structure`]: ternary algebras given by structure constants.
//! - [`brackets`]: the order-2 generator basis and j-commutator tables.
//! - [`sampling`]: reproducible random streams and sampling bounds.
//! - [`bimodule`]: the rectangular-matrix ternary algebra X·Y*·Z, its
//!   Jordan-type symmetrization and the associated Lie algebra.

pub mod associativity;
pub mod bimodule;
pub mod brackets;
pub mod cubic;
pub mod matrix;
pub mod patterns;
pub mod sampling;
pub mod scalars;
pub mod structure;
pub mod verdict;

pub use cubic::{CubicMatrix, SymClass};
pub use matrix::Matrix;
pub use patterns::{ContractionPattern, NamedProduct};
pub use scalars::{DefaultFp, Field, Fp, Ring, Scalar};
pub use structure::{Element, TernaryStructure};
pub use verdict::{Status, Verdict};
