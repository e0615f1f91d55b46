//! Exact arithmetic: Gaussian rationals, polynomials in complex, conjugate
//! and real variables, rational expressions and dense linear algebra.

mod gaussian;
pub mod linalg;
mod parse;
mod point;
mod poly;
mod rational_expr;
mod var;

use thiserror::Error;

pub use gaussian::{rat_string, GaussianRational, GR};
#[allow(unused_imports)]
pub(crate) use gaussian::rat_to_f64;
pub use linalg::{poly_det, poly_rank, rank_of_rows, ExactMatrix};
pub use parse::{parse_constant, parse_poly, parse_poly_in, ParseContext, ParseError, ParseErrorKind};
pub use point::PointAssignment;
pub use poly::{Monomial, Poly};
pub use rational_expr::RationalExpr;
pub use var::{Family, RealFamily, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("variable {0} has no assigned value")]
    Unassigned(Var),
    #[error("real variable {0} given a non-real value")]
    NonRealValue(Var),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator vanishes at the evaluation point")]
    PoleAt,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("singular matrix")]
    Singular,
    #[error(transparent)]
    Parse(#[from] ParseError),
}
