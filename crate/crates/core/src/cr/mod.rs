//! Embedded and abstract CR structures, CR vector fields, characteristic
//! covectors, Levi forms and their exact inertia.

mod basis;
mod field;
mod levi;
mod manifold;

use thiserror::Error;

use crate::algebra::AlgebraError;

pub use basis::{
    basis_for_pivots, cr_basis, generic_pivot_columns, involutivity_check, pivot_columns, InvolutivityReport,
};
pub use field::VectorField;
pub use levi::{
    abstract_characteristic_space, characteristic_space, conormals, levi_form, levi_matrix, signature, Covector,
    LeviMatrix, Signature,
};
pub use manifold::{AbstractCRStructure, EmbeddedManifold, GraphForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrError {
    #[error("point is not on the manifold")]
    OffManifold,
    #[error("holomorphic gradients are dependent at the point")]
    NotGeneric,
    #[error("defining function {} is not real-valued", .0 + 1)]
    NotReal(usize),
    #[error("manifold is not in graph form (each ρ must be c·v + q with c real constant and q free of v)")]
    NotGraphForm,
    #[error("covector does not annihilate the CR bundle at the point")]
    NotCharacteristic,
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
