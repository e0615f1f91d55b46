use std::collections::BTreeSet;

use num_traits::Zero;

use super::manifold::eval_rows;
use super::{CrError, EmbeddedManifold, VectorField};
use crate::algebra::{poly_det, poly_rank, ExactMatrix, PointAssignment, Poly, Var};

/// d-subsets of `0..n` in lexicographically descending order.
fn subsets_desc(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for k in start..n {
            cur.push(k);
            rec(k + 1, n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, d, &mut Vec::new(), &mut out);
    out.reverse();
    out
}

/// Zero-based columns of the antiholomorphic gradient solved for: the
/// lexicographically last d-subset whose minor is nonzero at `p`.
pub fn pivot_columns(m: &EmbeddedManifold, p: &PointAssignment) -> Result<Vec<usize>, CrError> {
    let grad = eval_rows(&m.anti_gradient(), p)?;
    let g = ExactMatrix::from_rows(grad)?;
    let rows: Vec<usize> = (0..m.codim()).collect();
    for cols in subsets_desc(m.dim(), m.codim()) {
        if !g.submatrix(&rows, &cols).det()?.is_zero() {
            return Ok(cols);
        }
    }
    Err(CrError::NotGeneric)
}

/// A basis of (0,1) fields tangent to `m` near `p`:
/// `L_i = D ∂/∂z̄_i - Σ_{k∈P} D_k^i ∂/∂z̄_k` where `D` is the pivot minor of
/// `(∂ρ/∂z̄)` and `D_k^i` the same minor with column `k` replaced by column `i`.
/// Every `L_i` annihilates every `ρ_μ` as a polynomial identity.
pub fn cr_basis(m: &EmbeddedManifold, p: &PointAssignment) -> Result<Vec<VectorField>, CrError> {
    m.require_on(p)?;
    m.require_generic(p)?;
    let pivots = pivot_columns(m, p)?;
    basis_for_pivots(m, &pivots)
}

/// Pivot columns whose minor does not vanish identically on a graph-form
/// manifold; the basis they give is valid off a proper algebraic subset.
pub fn generic_pivot_columns(m: &EmbeddedManifold) -> Result<Vec<usize>, CrError> {
    let g = m.require_graph()?;
    let grad = m.anti_gradient();
    for cols in subsets_desc(m.dim(), m.codim()) {
        let sub: Vec<Vec<Poly>> = grad.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
        if !g.reduce(&poly_det(&sub)?).is_zero() {
            return Ok(cols);
        }
    }
    Err(CrError::NotGeneric)
}

/// Basis solved for the given zero-based antiholomorphic pivot columns.
pub fn basis_for_pivots(m: &EmbeddedManifold, pivots: &[usize]) -> Result<Vec<VectorField>, CrError> {
    let grad = m.anti_gradient();
    let minor = |cols: &[usize]| -> Result<Poly, CrError> {
        let sub: Vec<Vec<Poly>> = grad.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
        Ok(poly_det(&sub)?)
    };
    let den = minor(pivots)?;
    let mut basis = Vec::with_capacity(m.cr_dim());
    for i in (0..m.dim()).filter(|i| !pivots.contains(i)) {
        let mut f = VectorField::new();
        f.add_term(m.anti(i + 1), den.clone());
        for (slot, &k) in pivots.iter().enumerate() {
            let mut cols = pivots.to_vec();
            cols[slot] = i;
            f.add_term(m.anti(k + 1), -minor(&cols)?);
        }
        basis.push(f);
    }
    Ok(basis)
}

/// Outcome of the involutivity test; the witness is the first commutator
/// outside the span of the fields over the rational-function field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutivityReport {
    pub involutive: bool,
    pub witness: Option<(usize, usize, VectorField)>,
}

pub fn involutivity_check(fields: &[VectorField]) -> InvolutivityReport {
    let vars: BTreeSet<Var> = fields.iter().flat_map(|f| f.coeffs().keys().copied()).collect();
    let column = |f: &VectorField| -> Vec<Poly> { vars.iter().map(|v| f.coeff(*v)).collect() };
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            let c = fields[i].commutator(&fields[j]);
            if c.is_zero() {
                continue;
            }
            let outside = c.coeffs().keys().any(|v| !vars.contains(v));
            let mut rows: Vec<Vec<Poly>> = fields.iter().map(column).collect();
            let base = poly_rank(&rows);
            rows.push(column(&c));
            if outside || poly_rank(&rows) > base {
                return InvolutivityReport { involutive: false, witness: Some((i, j, c)) };
            }
        }
    }
    InvolutivityReport { involutive: true, witness: None }
}
