//! Associated groupoids, induced algebras and the restriction/induction
//! isomorphisms, all checked exhaustively on basis elements.

use thiserror::Error;

use crate::galgebra::AlgebraError;
use crate::semigroup::SemigroupError;

pub mod bprime;
pub mod ci0;
pub mod groupoid;
pub mod induced;
pub mod split;
pub mod theta;

pub use bprime::{build_bprime, BPrime};
pub use ci0::{ci0_enumerate, ideal_oracle, Ci0Decomposition, Ci0Summand};
pub use groupoid::{assoc_groupoid, FiniteGroupoid};
pub use induced::{build_induced, compute_gh, induce_hom, GHSpace, InducedAlgebra};
pub use split::{res_ind_split, technical_split, ResIndSplit, TechnicalSplit};
pub use theta::{central_decomp_tensor, theta_res_ind, theta_res_ind_tensor, TensorCorner};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InductionError {
    #[error("not a sub-inverse-semigroup: {0}")]
    NotSubsemigroup(String),
    #[error("not a groupoid: {0}")]
    NotGroupoid(String),
    #[error("invalid coefficient algebra: {0}")]
    InvalidCoefficientAlgebra(String),
    #[error("homomorphism is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("chain length {0} is outside 1..=3")]
    ChainTooLong(usize),
    #[error("{0} is not E-unitary")]
    NotEUnitary(String),
    #[error("element is not in G_H: {0}")]
    NotInGH(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<SemigroupError> for InductionError {
    fn from(e: SemigroupError) -> Self {
        match e {
            SemigroupError::NotSubsemigroup(w) => InductionError::NotSubsemigroup(w),
            other => InductionError::Algebra(AlgebraError::Semigroup(other)),
        }
    }
}

/// Closure under product and star, without requiring the unit.
pub(crate) fn closed_subset(
    x: &crate::spectrum::Spectrum,
    l: &crate::bitset::ElementSet,
) -> Result<(), InductionError> {
    let s = x.semigroup();
    for a in l.iter() {
        if !l.contains(s.star(a)) || l.iter().any(|b| !l.contains(s.mul(a, b))) {
            return Err(InductionError::NotSubsemigroup(format!("not closed at {}", s.name(a))));
        }
    }
    Ok(())
}
