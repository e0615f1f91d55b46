use super::jets::{multiindices_up_to, MapJets, Multiindex};
use super::map::{eval_vec, CrMap};
use super::JetError;
use crate::algebra::{rank_of_rows, PointAssignment};

/// Rows spanning `E_l(p)`: `a`, `L_1 a, …, L_n a`, then `L^β a` for the
/// extension multiindices, all for a hypersurface target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    /// Multiindices of every frame row, in order; the first `n+1` are `0, e_1, …, e_n`.
    pub rows: Vec<Multiindex>,
    /// The extension part `β_{n+1}, …, β_{N₀-1}`.
    pub extension: Vec<Multiindex>,
    /// `N₀ = rank_l(F, p)`.
    pub n0: usize,
}

fn unit(n: usize, i: usize) -> Multiindex {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// Greedy graded-lex extension of `{a, L_1 a, …, L_n a}(p)` to a basis of `E_l(p)`.
pub fn select_frame(map: &CrMap, p: &PointAssignment, l: u32) -> Result<Frame, JetError> {
    let mut jets = MapJets::at(map, p)?;
    select_frame_with(map, &mut jets, p, l)
}

pub fn select_frame_with(map: &CrMap, jets: &mut MapJets, p: &PointAssignment, l: u32) -> Result<Frame, JetError> {
    if map.target().codim() != 1 {
        return Err(JetError::Invalid("frames need a hypersurface target".into()));
    }
    let n = jets.n();
    let report = jets.report(p, l)?;
    let n0 = report.levels.last().map_or(0, |x| x.rank);
    let mut rows: Vec<Multiindex> = vec![vec![0; n]];
    rows.extend((0..n).map(|i| unit(n, i)));
    let mut values = Vec::new();
    for alpha in &rows {
        values.push(eval_vec(&jets.table().get(alpha)[0], p)?);
    }
    let base = rank_of_rows(&values);
    if n0 < n + 1 || base < n + 1 {
        return Err(JetError::RankDeficient { have: base.min(n0), need: n + 1 });
    }
    let mut extension = Vec::new();
    let mut rank = base;
    for beta in multiindices_up_to(n, l) {
        if rank == n0 {
            break;
        }
        if beta.iter().sum::<u32>() < 2 {
            continue;
        }
        let v = eval_vec(&jets.table().get(&beta)[0], p)?;
        values.push(v);
        let r = rank_of_rows(&values);
        if r > rank {
            rank = r;
            rows.push(beta.clone());
            extension.push(beta);
        } else {
            values.pop();
        }
    }
    Ok(Frame { rows, extension, n0 })
}
