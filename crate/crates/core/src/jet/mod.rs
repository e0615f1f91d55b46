//! Jets of CR maps: the vectors `L^α ρ'_{W}(H, conj H)`, their spans and
//! ranks, nondegeneracy orders, generic ranks, degenerate degree, reflection
//! quotients and hypothesis checks.

mod degree;
mod frame;
mod hypotheses;
mod jets;
mod map;
mod reflection;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::cr::CrError;

pub use degree::{degenerate_degree, generic_jets, generic_rank_l, generic_ranks, search_sequence, DegreeReport, SequenceSearch};
pub use frame::{select_frame, select_frame_with, Frame};
pub use hypotheses::{check_theorem25_hypotheses, hypotheses_at, quadric_linear_obstruction, HypothesisReport, ObstructionReport};
pub use jets::{
    apply_l_alpha, default_max_l, k0_order, mixed_order_rank, multiindices_of_degree, multiindices_up_to, rank_l,
    rank_report, JetLevel, JetSpanReport, JetTable, JetVector, MapJets, Multiindex,
};
pub use map::{CrMap, MapCheck};
pub use reflection::{reflection_quotients, reflection_quotients_with_columns, Quotient, ReflectionReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JetError {
    #[error("jet rank {have} is below the required {need} (dF must be injective)")]
    RankDeficient { have: usize, need: usize },
    #[error("frame determinant vanishes at the point")]
    FrameSingular,
    #[error("hypotheses not satisfied: {0}")]
    Hypotheses(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Cr(#[from] CrError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
