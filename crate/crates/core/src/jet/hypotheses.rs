use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::jets::MapJets;
use super::map::{eval_vec, CrMap};
use super::JetError;
use crate::algebra::{rank_of_rows, ExactMatrix, PointAssignment, GR};
use crate::cr::{characteristic_space, cr_basis, levi_form, levi_matrix, Signature};

/// Hypothesis flags at one source point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    /// Signatures at `+σ` and `-σ` for each characteristic basis covector.
    pub source_levi: Vec<(Signature, Signature)>,
    pub source_levi_nonzero: bool,
    pub target_signature: Option<Signature>,
    pub target_strongly_pseudoconvex: bool,
    /// Rank of `(L_i conj(H_j))(p)`.
    pub df_rank: usize,
    pub df_injective: bool,
    pub rank0: usize,
    pub rank1: usize,
    /// `rank₀ = 1` and `rank₁ = n+1`; only asserted where `dF` is injective.
    pub lemma41: Option<bool>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.source_levi_nonzero && self.target_strongly_pseudoconvex && self.df_injective && self.lemma41 != Some(false)
    }
}

pub fn hypotheses_at(map: &CrMap, p: &PointAssignment) -> Result<HypothesisReport, JetError> {
    let src = map.source();
    let basis = cr_basis(src, p)?;
    let mut source_levi = Vec::new();
    for sigma in characteristic_space(src, p)? {
        let plus = levi_matrix(&basis, p, &sigma)?.signature();
        let minus = levi_matrix(&basis, p, &sigma.neg())?.signature();
        source_levi.push((plus, minus));
    }
    let source_levi_nonzero = source_levi.iter().all(|(s, _)| s.has_nonzero_eigenvalue());

    let tgt = map.target();
    let q = map.image(p)?;
    let (target_signature, target_strongly_pseudoconvex) = if tgt.codim() == 1 && tgt.contains(&q)? {
        let sigma = characteristic_space(tgt, &q)?.remove(0);
        let s = levi_form(tgt, &q, &sigma)?.signature();
        (Some(s), s.zero == 0 && (s.neg == 0 || s.pos == 0))
    } else {
        (None, false)
    };

    let mut rows = Vec::new();
    for l in &basis {
        let row: Vec<_> = map.components().iter().map(|h| l.apply(&h.conj())).collect();
        rows.push(eval_vec(&row, p)?);
    }
    let df_rank = rank_of_rows(&rows);
    let n = map.n();
    let df_injective = df_rank == n;

    let report = MapJets::with_basis(map, basis).report(p, 1)?;
    let (rank0, rank1) = (report.levels[0].rank, report.levels[1].rank);
    let lemma41 = df_injective.then_some(rank0 == 1 && rank1 == n + 1);
    Ok(HypothesisReport {
        source_levi,
        source_levi_nonzero,
        target_signature,
        target_strongly_pseudoconvex,
        df_rank,
        df_injective,
        rank0,
        rank1,
        lemma41,
    })
}

pub fn check_theorem25_hypotheses(map: &CrMap, points: &[PointAssignment]) -> Result<Vec<HypothesisReport>, JetError> {
    points.iter().map(|p| hypotheses_at(map, p)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub feasible: bool,
    /// `N' < N`: `AA*` has rank at most `N'-1 < N-1`.
    pub rank_obstructed: bool,
    /// `AA* - λI`.
    pub residual: ExactMatrix,
}

/// Checks `λ I_{N-1} = A A*` for an `(N-1)×(N'-1)` matrix `A`.
pub fn quadric_linear_obstruction(
    n: usize,
    n_target: usize,
    lambda: &BigRational,
    a: &ExactMatrix,
) -> Result<ObstructionReport, JetError> {
    if !lambda.is_positive() {
        return Err(JetError::Invalid("λ must be positive".into()));
    }
    if n < 2 || n_target < 2 || a.rows() != n - 1 || a.cols() != n_target - 1 {
        return Err(JetError::Invalid(format!("A must be {}x{}", n.saturating_sub(1), n_target.saturating_sub(1))));
    }
    let aa = a.mul(&a.adjoint())?;
    let lam = GR::from_real(lambda.clone());
    let residual = ExactMatrix::from_fn(n - 1, n - 1, |i, j| {
        let target = if i == j { lam.clone() } else { GR::zero() };
        &aa[(i, j)] - &target
    });
    let rank_obstructed = n_target < n;
    let feasible = residual.to_rows().iter().flatten().all(Zero::is_zero);
    debug_assert!(!(rank_obstructed && feasible));
    Ok(ObstructionReport { feasible, rank_obstructed, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, Family};
    use crate::cr::EmbeddedManifold;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn obstruction_examples() {
        let a = ExactMatrix::from_rows(vec![vec![GR::from(1)], vec![GR::from(2)]]).unwrap();
        let rep = quadric_linear_obstruction(3, 2, &r(1, 1), &a).unwrap();
        assert!(rep.rank_obstructed && !rep.feasible);
        let one = ExactMatrix::from_rows(vec![vec![GR::from(1)]]).unwrap();
        assert!(quadric_linear_obstruction(2, 2, &r(1, 1), &one).unwrap().feasible);
        let row = ExactMatrix::from_rows(vec![vec![GR::ratio(5, 3), GR::zero()]]).unwrap();
        assert!(quadric_linear_obstruction(2, 3, &r(25, 9), &row).unwrap().feasible);
    }

    #[test]
    fn identity_on_heisenberg_passes() {
        let src = EmbeddedManifold::new(Family::Z, 2, vec![parse_poly("-(z2-conj(z2))/(2*i) + z1*conj(z1)").unwrap()]).unwrap();
        let tgt = EmbeddedManifold::new(Family::W, 2, vec![parse_poly("-(w2-conj(w2))/(2*i) + w1*conj(w1)").unwrap()]).unwrap();
        let map = CrMap::new(src, tgt, vec![parse_poly("z1").unwrap(), parse_poly("z2").unwrap()]).unwrap();
        let p = map.source().point_from_graph(&[GR::zero()], &[BigRational::zero()]).unwrap();
        let rep = hypotheses_at(&map, &p).unwrap();
        assert!(rep.all_pass());
        assert_eq!((rep.rank0, rep.rank1), (1, 2));
    }
}
