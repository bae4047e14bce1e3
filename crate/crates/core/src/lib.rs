//! Exact computations for component groups of automorphism ladders of
//! compact complex surfaces.

pub mod lattice;
pub mod serde_util;
pub mod orbifold;
pub mod elliptic;
pub mod blowup;
pub mod ruled;
pub mod classifier;
