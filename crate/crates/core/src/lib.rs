//! Exact-arithmetic computer algebra for comodule algebras glued from pieces.
//!
//! The crate builds finite-dimensional unital algebras from structure
//! constants, equips them with Hopf-algebra coactions, assembles
//! multi-pullbacks from gluing data, and constructs and verifies strong
//! connections on the result. All arithmetic is over the rationals and
//! every verification is an exact identity; there are no tolerances.
//!
//! Module overview:
//!
//! - [`scalar`], [`linalg`], [`subspace`]: exact rational vectors, sparse
//!   matrices, canonical (reduced row-echelon) subspaces, deterministic
//!   solvers.
//! - [`algebra`]: structure-constant algebras, morphisms, ideals,
//!   quotients, direct products.
//! - [`hopf`]: finite-dimensional Hopf algebras, comodule algebras,
//!   coinvariants, colinearity, comodule closures.
//! - [`lattice`]: distributivity analysis of subspace families and
//!   partitioned bases.
//! - [`pullback`]: multi-pullback algebras, cocycle and covering checks,
//!   canonical gluing families.
//! - [`splitting`]: subspace-respecting, colinear and global splittings of
//!   projections onto pullback components.
//! - [`connection`]: strong-connection verification, piecewise synthesis,
//!   two-piece gluing, projector extraction.
//! - [`toeplitz`]: the symbolic quantum-sphere model over the free
//!   isometry algebra.
//! - [`instances`]: ready-made reference instances used by tests and the
//!   command-line tool.

// basis indices are the natural currency here; iterator rewrites of the
// index loops obscure the formulas they implement
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod connection;
mod error;
pub mod hopf;
pub mod instances;
pub mod lattice;
pub mod linalg;
pub mod pullback;
pub mod scalar;
pub mod splitting;
pub mod subspace;
pub mod toeplitz;

pub use error::{Error, Result};
