//! Exact toolkit for additive actions on projective hypersurfaces.
//!
//! A local algebra `R` with a generating hyperplane `W` of its maximal ideal
//! determines a faithful action of the vector group `exp(W)` on `P(R)` by
//! multiplication, with an invariant hypersurface of degree `d` equal to the
//! largest exponent with `m^d` not inside `W`. This crate builds that data
//! exactly over the Gaussian rationals:
//!
//! * [`algebra`]: structure constants, ideal powers, generation, ideals and
//!   quotients, pointed pairs `(R, W)`.
//! * [`multilinear`]: homogeneous polynomials, polarization and the
//!   explicit invariant form of a pair.
//! * [`action`]: exponentials, action matrices, invariance checks and
//!   singular points.
//! * [`classify`]: canonical forms for invariant bilinear forms of corank
//!   zero and one.

pub mod action;
pub mod algebra;
pub mod catalog;
pub mod classify;
pub mod error;
pub mod io;
pub mod linalg;
pub mod multilinear;
pub mod poly;
pub mod scalar;
pub mod similarity;
pub mod unipoly;

pub use algebra::{ChangeOfBasis, Element, LocalAlgebra, PointedPair, StructureTable, ValidationReport};
pub use error::{Error, Result};
pub use scalar::Scalar;
