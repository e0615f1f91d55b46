//! Symbolic-numeric toolkit for CR manifolds: exact polynomial algebra, CR
//! structures and Levi forms, jet nondegeneracy of CR maps, frame
//! normalization, determinant identities and FBI wave-front probes.

// Float guards are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

/// Crate version, echoed in report provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod algebra;
pub mod cr;
pub mod sample;
pub mod jet;
pub mod normalize;
pub mod det;
pub mod fbi;
pub mod par;
