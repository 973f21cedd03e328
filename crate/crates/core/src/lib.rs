//! Exact algebra of proper multiplications on Z^d.
//!
//! A multiplication is a bilinear product on Z^d stored as a structure-constant
//! tensor. On top of it the crate provides left and right representations,
//! alignment and normalizer decisions, explicit set constructions with finite
//! verifiers, window-certified largeness checks and a rigorous evaluator for
//! generalized polynomials.

pub mod algebra;
pub mod catalog;
pub mod constructions;
pub mod error;
pub mod genpoly;
pub mod largeness;
pub mod linalg;
pub mod points;
pub mod structure;

pub use algebra::{Multiplication, Provenance, RepPair, ZeroDivisorSearch, ZeroDivisorStatus};
pub use error::{Error, Result};
pub use linalg::{IntLattice, RatMatrix, Q};
