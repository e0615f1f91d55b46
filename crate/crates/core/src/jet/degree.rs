use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::hypotheses::hypotheses_at;
use super::jets::MapJets;
use super::map::CrMap;
use super::JetError;
use crate::algebra::{poly_rank, PointAssignment, Poly};
use crate::cr::{basis_for_pivots, generic_pivot_columns};
use crate::sample::graph_point_near;

/// Jets with the basis solved for the generic pivot columns.
pub fn generic_jets(map: &CrMap) -> Result<MapJets, JetError> {
    let pivots = generic_pivot_columns(map.source())?;
    Ok(MapJets::with_basis(map, basis_for_pivots(map.source(), &pivots)?))
}

/// Ranks `generic_rank_0..=l` over the field of rational functions in the
/// free graph coordinates.
pub fn generic_ranks(map: &CrMap, l: u32) -> Result<Vec<usize>, JetError> {
    let g = map.source().require_graph()?.clone();
    let mut jets = generic_jets(map)?;
    let mut out = Vec::new();
    let mut rows: Vec<Vec<Poly>> = Vec::new();
    let mut done = 0;
    for level in 0..=l {
        let all = jets.symbolic_rows(level);
        for (_, _, row) in &all[done..] {
            rows.push(row.iter().map(|p| g.reduce(p)).collect());
        }
        done = all.len();
        let r = poly_rank(&rows);
        out.push(r);
        // once full, deeper levels cannot add anything
        if r == map.target_dim() {
            out.resize(l as usize + 1, r);
            break;
        }
    }
    Ok(out)
}

pub fn generic_rank_l(map: &CrMap, l: u32) -> Result<usize, JetError> {
    Ok(*generic_ranks(map, l)?.last().expect("level 0 always present"))
}

/// Result of searching rational points `q → p` with `rank_{d-1}(q) = n+d-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSearch {
    pub tried: usize,
    pub found: Vec<PointAssignment>,
}

impl SequenceSearch {
    pub fn message(&self) -> String {
        if self.found.is_empty() {
            format!("not found within budget ({} rational points tried)", self.tried)
        } else {
            format!("found {} of {} rational points", self.found.len(), self.tried)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub k: u32,
    pub generic_ranks: Vec<usize>,
    pub pointwise_ranks: Vec<usize>,
    pub in_omega1: bool,
    pub in_omega2: bool,
    pub degree: Option<u32>,
    /// Some level has pointwise rank below the generic rank at `p`.
    pub exceptional: bool,
    /// Set when the hypotheses could not be certified at `p`.
    pub warning: Option<String>,
    pub sequence: Option<SequenceSearch>,
}

/// `deg(F,p) = min{l ≤ k : generic_rank_l ≤ n+l-1}` for `p ∈ Ω₂`, with the
/// generic rank standing in for "on a neighborhood of `p`".
pub fn degenerate_degree(
    map: &CrMap,
    p: &PointAssignment,
    k: u32,
    search_budget: usize,
    seed: u64,
) -> Result<DegreeReport, JetError> {
    map.source().require_on(p)?;
    let n = map.n();
    let generic = generic_ranks(map, k)?;
    let pointwise = MapJets::at(map, p)?.report(p, k)?.ranks();
    let exceptional = generic.iter().zip(&pointwise).any(|(g, q)| q < g);
    let in_omega1 = pointwise[k as usize] == n + k as usize;
    let in_omega2 = generic[k as usize] < n + k as usize;
    let degree = if in_omega2 {
        (1..=k).find(|&l| generic[l as usize] < n + l as usize)
    } else {
        None
    };
    let warning = match hypotheses_at(map, p) {
        Ok(h) if h.all_pass() => None,
        Ok(h) => Some(format!(
            "hypotheses not certified at p: source Levi nonzero={}, target strongly pseudoconvex={}, dF injective={}",
            h.source_levi_nonzero, h.target_strongly_pseudoconvex, h.df_injective
        )),
        Err(e) => Some(format!("hypotheses not checked: {e}")),
    };
    let sequence = match degree {
        Some(d) if d >= 1 && search_budget > 0 => Some(search_sequence(map, p, d, search_budget, seed)?),
        _ => None,
    };
    Ok(DegreeReport { k, generic_ranks: generic, pointwise_ranks: pointwise, in_omega1, in_omega2, degree, exceptional, warning, sequence })
}

/// Samples rational points at radii `2^-1, 2^-2, …` around `p` looking for
/// `rank_{d-1}(F,q) = n+d-1`.
pub fn search_sequence(map: &CrMap, p: &PointAssignment, d: u32, budget: usize, seed: u64) -> Result<SequenceSearch, JetError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let want = map.n() + d as usize - 1;
    let per_radius = 4usize;
    let mut found = Vec::new();
    let mut tried = 0;
    let mut radius = BigRational::new(BigInt::from(1), BigInt::from(2));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut jets = generic_jets(map)?;
    while tried < budget {
        for _ in 0..per_radius.min(budget - tried) {
            tried += 1;
            let q = graph_point_near(map.source(), p, &radius, &mut rng)?;
            let report = if jets.basis_valid_at(&q)? {
                jets.report(&q, d - 1)?
            } else {
                MapJets::at(map, &q)?.report(&q, d - 1)?
            };
            if report.levels.last().map(|x| x.rank) == Some(want) {
                found.push(q);
                break;
            }
        }
        radius = &radius * &half;
    }
    Ok(SequenceSearch { tried, found })
}
