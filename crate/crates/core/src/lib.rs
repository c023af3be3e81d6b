//! Exact finite models for inverse-semigroup equivariant KK-theory.

// matrix code indexes several arrays by the same loop variable
#![allow(clippy::needless_range_loop)]

pub mod bitset;
pub mod builders;
pub mod corpus;
pub mod crossed;
pub mod galgebra;
pub mod induction;
pub mod ktheory;
pub mod l2;
pub mod linalg;
pub mod report;
pub mod semigroup;
pub mod spectrum;
