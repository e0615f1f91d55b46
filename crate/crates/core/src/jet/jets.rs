use std::collections::HashMap;

use num_traits::Zero;

use super::map::{eval_vec, CrMap};
use super::JetError;
use crate::algebra::{rank_of_rows, PointAssignment, Poly, GR};
use crate::cr::{cr_basis, VectorField};

pub type Multiindex = Vec<u32>;

/// Multiindices of length `n` and total degree exactly `deg`, lexicographically
/// descending: `(2,0), (1,1), (0,2)`.
pub fn multiindices_of_degree(n: usize, deg: u32) -> Vec<Multiindex> {
    fn rec(n: usize, left: u32, cur: &mut Multiindex, out: &mut Vec<Multiindex>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, deg, &mut Vec::new(), &mut out);
    out
}

/// All multiindices with `|α| ≤ l` in graded-lex order.
pub fn multiindices_up_to(n: usize, l: u32) -> Vec<Multiindex> {
    (0..=l).flat_map(|d| multiindices_of_degree(n, d)).collect()
}

/// Memoized `L^α v = L_1^{α_1} ⋯ L_n^{α_n} v` for a fixed basis and a fixed
/// list of polynomial vectors `v`.
#[derive(Clone, Debug)]
pub struct JetTable {
    basis: Vec<VectorField>,
    memo: HashMap<Multiindex, Vec<Vec<Poly>>>,
}

impl JetTable {
    pub fn new(basis: Vec<VectorField>, base: Vec<Vec<Poly>>) -> Self {
        let mut memo = HashMap::new();
        memo.insert(vec![0; basis.len()], base);
        Self { basis, memo }
    }

    pub fn basis(&self) -> &[VectorField] {
        &self.basis
    }

    /// `L^α` applied to every base vector. The first nonzero index acts last.
    pub fn get(&mut self, alpha: &[u32]) -> &Vec<Vec<Poly>> {
        if !self.memo.contains_key(alpha) {
            let j = alpha.iter().position(|&e| e > 0).expect("α = 0 is seeded");
            let mut prev = alpha.to_vec();
            prev[j] -= 1;
            let inner = self.get(&prev).clone();
            let lj = &self.basis[j];
            let out = inner.iter().map(|row| row.iter().map(|c| lj.apply(c)).collect()).collect();
            self.memo.insert(alpha.to_vec(), out);
        }
        &self.memo[alpha]
    }

    /// A word `L_{i_1} ⋯ L_{i_r}` applied in the given order (last acts first).
    pub fn word(&mut self, word: &[usize]) -> Vec<Vec<Poly>> {
        let mut cur = self.get(&vec![0; self.basis.len()]).clone();
        for &i in word.iter().rev() {
            cur = cur.iter().map(|row| row.iter().map(|c| self.basis[i].apply(c)).collect()).collect();
        }
        cur
    }
}

/// `L^α` applied to a single vector of polynomials.
pub fn apply_l_alpha(v: &[Poly], alpha: &[u32], basis: &[VectorField]) -> Vec<Poly> {
    let mut t = JetTable::new(basis.to_vec(), vec![v.to_vec()]);
    t.get(alpha)[0].clone()
}

/// One jet vector `L^α ρ'_{μ,W}(H, conj H)(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetVector {
    pub alpha: Multiindex,
    pub mu: usize,
    pub value: Vec<GR>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetLevel {
    pub l: u32,
    pub vectors: Vec<JetVector>,
    /// `dim E_l(p)`.
    pub rank: usize,
    /// `E_{l-1} ⊊ E_l` (always true at level 0 unless every vector vanishes).
    pub grew: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetSpanReport {
    pub target_dim: usize,
    pub levels: Vec<JetLevel>,
    /// Least `k₀` with `E_{k₀} = C^{N'}`, if reached.
    pub order: Option<u32>,
}

impl JetSpanReport {
    pub fn ranks(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.rank).collect()
    }

    pub fn rank(&self, l: u32) -> Option<usize> {
        self.levels.get(l as usize).map(|x| x.rank)
    }
}

/// Jets of a map at one point, reusable for nearby points where the same
/// basis stays independent.
#[derive(Clone, Debug)]
pub struct MapJets {
    table: JetTable,
    target_dim: usize,
}

impl MapJets {
    pub fn at(map: &CrMap, p: &PointAssignment) -> Result<Self, JetError> {
        let basis = cr_basis(map.source(), p)?;
        Ok(Self::with_basis(map, basis))
    }

    pub fn with_basis(map: &CrMap, basis: Vec<VectorField>) -> Self {
        Self { table: JetTable::new(basis, map.a_vector()), target_dim: map.target_dim() }
    }

    pub fn n(&self) -> usize {
        self.table.basis.len()
    }

    pub fn basis(&self) -> &[VectorField] {
        self.table.basis()
    }

    pub fn table(&mut self) -> &mut JetTable {
        &mut self.table
    }

    /// True iff the basis fields are independent at `p`.
    pub fn basis_valid_at(&self, p: &PointAssignment) -> Result<bool, JetError> {
        let vars: std::collections::BTreeSet<_> = self.table.basis.iter().flat_map(|f| f.coeffs().keys().copied()).collect();
        let mut rows = Vec::new();
        for f in &self.table.basis {
            let at = f.eval(p)?;
            rows.push(vars.iter().map(|v| at.get(v).cloned().unwrap_or_else(GR::zero)).collect());
        }
        Ok(rank_of_rows(&rows) == self.n())
    }

    /// Symbolic rows `L^α ρ'_{μ,W}` for `|α| ≤ l`, tagged.
    pub fn symbolic_rows(&mut self, l: u32) -> Vec<(Multiindex, usize, Vec<Poly>)> {
        let mut out = Vec::new();
        for alpha in multiindices_up_to(self.n(), l) {
            for (mu, row) in self.table.get(&alpha).iter().enumerate() {
                out.push((alpha.clone(), mu, row.clone()));
            }
        }
        out
    }

    pub fn report(&mut self, p: &PointAssignment, max_l: u32) -> Result<JetSpanReport, JetError> {
        let mut levels = Vec::new();
        let mut all: Vec<Vec<GR>> = Vec::new();
        let mut prev_rank = 0;
        let mut order = None;
        for l in 0..=max_l {
            let mut vectors = Vec::new();
            for alpha in multiindices_of_degree(self.n(), l) {
                for (mu, row) in self.table.get(&alpha).iter().enumerate() {
                    let value = eval_vec(row, p)?;
                    all.push(value.clone());
                    vectors.push(JetVector { alpha: alpha.clone(), mu, value });
                }
            }
            let rank = rank_of_rows(&all);
            if order.is_none() && rank == self.target_dim {
                order = Some(l);
            }
            levels.push(JetLevel { l, vectors, rank, grew: rank > prev_rank });
            prev_rank = rank;
        }
        Ok(JetSpanReport { target_dim: self.target_dim, levels, order })
    }
}

/// Full jet-span report up to `max_l`; fails off the source manifold.
pub fn rank_report(map: &CrMap, p: &PointAssignment, max_l: u32) -> Result<JetSpanReport, JetError> {
    MapJets::at(map, p)?.report(p, max_l)
}

pub fn rank_l(map: &CrMap, p: &PointAssignment, l: u32) -> Result<usize, JetError> {
    Ok(rank_report(map, p, l)?.levels.last().map_or(0, |x| x.rank))
}

/// Least `k₀ ≤ max_l` with `E_{k₀} = C^{N'}`.
pub fn k0_order(map: &CrMap, p: &PointAssignment, max_l: u32) -> Result<Option<u32>, JetError> {
    Ok(rank_report(map, p, max_l)?.order)
}

/// The default depth `k = N' - n`.
pub fn default_max_l(map: &CrMap) -> u32 {
    map.target_dim().saturating_sub(map.n()) as u32
}

/// Rank of the span of all words `L_{i_1} ⋯ L_{i_r}`, `r ≤ l`, applied to
/// the defining gradients; compared against the ordered span as a diagnostic.
pub fn mixed_order_rank(map: &CrMap, p: &PointAssignment, l: u32) -> Result<usize, JetError> {
    let mut jets = MapJets::at(map, p)?;
    let n = jets.n();
    let mut rows = Vec::new();
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..=l {
        let mut next = Vec::new();
        for w in &words {
            for row in jets.table().word(w) {
                rows.push(eval_vec(&row, p)?);
            }
            for i in 0..n {
                let mut x = w.clone();
                x.push(i);
                next.push(x);
            }
        }
        words = next;
    }
    Ok(rank_of_rows(&rows))
}
