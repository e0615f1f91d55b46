use std::collections::BTreeMap;

use num_traits::Zero;

use super::degree::generic_rank_l;
use super::frame::select_frame_with;
use super::jets::{MapJets, Multiindex};
use super::map::CrMap;
use super::JetError;
use crate::algebra::{poly_det, PointAssignment, Poly, RationalExpr};

/// `G_{i₀}^j = N_{i₀}^j / D` with `D` the frame determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    /// Zero-based target index `j`.
    pub j: usize,
    /// Zero-based column `i₀`.
    pub i: usize,
    pub numerator: Poly,
    pub value: RationalExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionReport {
    pub frame: Vec<Multiindex>,
    /// Zero-based frame columns `{0, …, n+l-2, N'-1}`.
    pub columns: Vec<usize>,
    pub denominator: Poly,
    pub quotients: Vec<Quotient>,
    /// `L_ν G ≡ 0` on the source for every quotient and every `ν`.
    pub cr_verified: bool,
    /// `D a_j ≡ Σ_i N_i a_i` on the source for every `j`.
    pub reconstruction_verified: bool,
    pub rank_l: usize,
    pub generic_rank_next: usize,
}

impl ReflectionReport {
    pub fn get(&self, j: usize, i: usize) -> Option<&RationalExpr> {
        self.quotients.iter().find(|q| q.j == j && q.i == i).map(|q| &q.value)
    }
}

fn det_replacing(frame: &[Vec<Poly>], columns: &[usize], slot: usize, with: usize) -> Result<Poly, JetError> {
    let m: Vec<Vec<Poly>> = frame
        .iter()
        .map(|row| columns.iter().enumerate().map(|(s, &c)| row[if s == slot { with } else { c }].clone()).collect())
        .collect();
    Ok(poly_det(&m)?)
}

/// Reflection quotients at level `l` with the default columns.
pub fn reflection_quotients(map: &CrMap, p: &PointAssignment, l: u32) -> Result<ReflectionReport, JetError> {
    let n = map.n();
    let mut columns: Vec<usize> = (0..n + l as usize - 1).collect();
    columns.push(map.target_dim() - 1);
    reflection_quotients_with_columns(map, p, l, &columns)
}

pub fn reflection_quotients_with_columns(
    map: &CrMap,
    p: &PointAssignment,
    l: u32,
    columns: &[usize],
) -> Result<ReflectionReport, JetError> {
    let n = map.n();
    let n_target = map.target_dim();
    let want = n + l as usize;
    if columns.len() != want || columns.iter().any(|&c| c >= n_target) {
        return Err(JetError::Invalid(format!("need {want} distinct frame columns below {n_target}")));
    }
    let mut jets = MapJets::at(map, p)?;
    let rank = jets.report(p, l)?.levels.last().map_or(0, |x| x.rank);
    let generic_next = generic_rank_l(map, l + 1)?;
    if rank != want || generic_next != want {
        return Err(JetError::Hypotheses(format!(
            "need rank_l(p) = n+l = {want} and generic rank_(l+1) = {want}; found {rank} and {generic_next}"
        )));
    }
    let frame = select_frame_with(map, &mut jets, p, l)?;
    let g = map.source().require_graph()?.clone();
    let rows: Vec<Vec<Poly>> = frame.rows.iter().map(|alpha| jets.table().get(alpha)[0].clone()).collect();
    let den = det_replacing(&rows, columns, usize::MAX, 0)?;
    if den.eval(p)?.is_zero() {
        return Err(JetError::FrameSingular);
    }
    let a = rows[0].clone();
    let basis = jets.basis().to_vec();
    let mut quotients = Vec::new();
    let mut cr_ok = true;
    let mut recon_ok = true;
    let l_den: Vec<Poly> = basis.iter().map(|f| f.apply(&den)).collect();
    for j in (0..n_target).filter(|j| !columns.contains(j)) {
        let mut nums = BTreeMap::new();
        for (slot, &i) in columns.iter().enumerate() {
            let num = det_replacing(&rows, columns, slot, j)?;
            for (f, ld) in basis.iter().zip(&l_den) {
                let w = &(&f.apply(&num) * &den) - &(&num * ld);
                if !g.reduce(&w).is_zero() {
                    cr_ok = false;
                }
            }
            quotients.push(Quotient { j, i, numerator: num.clone(), value: RationalExpr::new(num.clone(), den.clone())? });
            nums.insert(i, num);
        }
        let mut recon = &den * &a[j];
        for (i, num) in &nums {
            recon = &recon - &(num * &a[*i]);
        }
        if !g.reduce(&recon).is_zero() {
            recon_ok = false;
        }
    }
    Ok(ReflectionReport {
        frame: frame.rows,
        columns: columns.to_vec(),
        denominator: den,
        quotients,
        cr_verified: cr_ok,
        reconstruction_verified: recon_ok,
        rank_l: rank,
        generic_rank_next: generic_next,
    })
}
