//! Unitary change of target coordinates putting the jet frame at a point in
//! the block form `(B | 0 | b)`, with exact verification of the
//! transformation law.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{ExactMatrix, PointAssignment, GR};
use crate::jet::{select_frame_with, CrMap, JetError, MapJets, Multiindex};

pub type ComplexMatrix = DMatrix<Complex64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormalizeError {
    #[error("a(p) must equal (0, ..., 0, i/2); found {0}")]
    NotNormalizedAtBase(String),
    #[error("F(p) must be the origin; translate the target first")]
    NotAtOrigin,
    #[error("coordinate matrix has a non-finite entry")]
    NonFinite,
    #[error(transparent)]
    Jet(#[from] JetError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub unitarity: f64,
    pub zero_block: f64,
    pub invertibility: f64,
    pub transformation_law: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { unitarity: 1e-12, zero_block: 1e-10, invertibility: 1e-8, transformation_law: 1e-10 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationResult {
    /// Unitary `A` with `w = A w̃`, so jets transform as `J ↦ J A`.
    pub a: DMatrix<Complex64>,
    pub frame: Vec<Multiindex>,
    pub extension: Vec<Multiindex>,
    pub n0: usize,
    /// Frame rows `L^α a(p)` before and after the change.
    pub jet: DMatrix<Complex64>,
    pub transformed: DMatrix<Complex64>,
    /// `‖AA* - I‖_max`.
    pub unitarity_residual: f64,
    /// Largest entry of the zero block.
    pub zero_block_residual: f64,
    /// `‖ã(p) - (0, …, 0, i/2)‖_max`.
    pub base_residual: f64,
    pub sigma_min_b: f64,
    pub cond_b: f64,
    /// `max |jet(Ã-map) - J A|` with the jets of the changed map computed exactly.
    pub transformation_law_residual: f64,
    pub exact_rank: usize,
    pub float_rank: usize,
    pub tolerances: Tolerances,
}

impl NormalizationResult {
    pub fn violations(&self) -> Vec<String> {
        let t = &self.tolerances;
        let mut v = Vec::new();
        if self.unitarity_residual > t.unitarity {
            v.push(format!("unitarity residual {:e} > {:e}", self.unitarity_residual, t.unitarity));
        }
        if self.zero_block_residual > t.zero_block {
            v.push(format!("zero block residual {:e} > {:e}", self.zero_block_residual, t.zero_block));
        }
        if self.base_residual > t.zero_block {
            v.push(format!("base row residual {:e} > {:e}", self.base_residual, t.zero_block));
        }
        if self.sigma_min_b < t.invertibility {
            v.push(format!("smallest singular value of B {:e} < {:e} (cond {:e})", self.sigma_min_b, t.invertibility, self.cond_b));
        }
        if self.transformation_law_residual > t.transformation_law {
            v.push(format!(
                "transformation law residual {:e} > {:e}",
                self.transformation_law_residual, t.transformation_law
            ));
        }
        if self.float_rank != self.exact_rank {
            v.push(format!("floating rank {} differs from exact rank {}", self.float_rank, self.exact_rank));
        }
        v
    }

    /// `A` with its float entries read as exact dyadic rationals.
    pub fn a_exact(&self) -> ExactMatrix {
        exact_matrix(&self.a)
    }

    pub fn passed(&self) -> bool {
        self.violations().is_empty()
    }
}

fn dot_conj(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Removes the components of `v` along the orthonormal `basis`, twice.
fn orthogonalize(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for e in basis {
            let c = dot_conj(e, v);
            for (x, y) in v.iter_mut().zip(e) {
                *x -= c * y;
            }
        }
    }
}

/// Orthonormal basis of `span(vectors)` (modified Gram–Schmidt with
/// reorthogonalization) completed to a basis of `C^m` by the identity
/// columns, largest residual first.
pub fn orthonormal_completion(vectors: &[Vec<Complex64>], m: usize, drop_tol: f64) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        let scale = norm(v);
        orthogonalize(&mut w, &basis);
        let nw = norm(&w);
        if scale > 0.0 && nw > drop_tol * scale {
            basis.push(w.iter().map(|x| x / nw).collect());
        }
    }
    while basis.len() < m {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for k in 0..m {
            let mut e = vec![Complex64::zero(); m];
            e[k] = Complex64::new(1.0, 0.0);
            orthogonalize(&mut e, &basis);
            let ne = norm(&e);
            if best.as_ref().is_none_or(|(b, _)| ne > *b) {
                best = Some((ne, e));
            }
        }
        let (ne, e) = best.expect("m > 0");
        basis.push(e.iter().map(|x| x / ne).collect());
    }
    basis
}

fn to_dmatrix(rows: &[Vec<GR>]) -> DMatrix<Complex64> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(r, c, |i, j| rows[i][j].to_complex64())
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn float_rank(m: &DMatrix<Complex64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > tol * top.max(1.0)).count()
}

/// Frame rows at `p` as exact vectors.
fn frame_rows(jets: &mut MapJets, frame: &[Multiindex], p: &PointAssignment) -> Result<Vec<Vec<GR>>, JetError> {
    let mut out = Vec::new();
    for alpha in frame {
        let row = jets.table().get(alpha)[0].clone();
        out.push(row.iter().map(|x| x.eval(p)).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(out)
}

/// The exact dyadic rationals equal to the entries of a finite float matrix.
pub fn exact_matrix(a: &DMatrix<Complex64>) -> ExactMatrix {
    ExactMatrix::from_fn(a.nrows(), a.ncols(), |i, j| GR::from_complex64(a[(i, j)]).unwrap_or_else(GR::zero))
}

pub fn normalize_frame(map: &CrMap, p: &PointAssignment, l: u32) -> Result<NormalizationResult, NormalizeError> {
    normalize_frame_with(map, p, l, Tolerances::default())
}

pub fn normalize_frame_with(
    map: &CrMap,
    p: &PointAssignment,
    l: u32,
    tolerances: Tolerances,
) -> Result<NormalizationResult, NormalizeError> {
    let nt = map.target_dim();
    let image = map.image(p).map_err(NormalizeError::Jet)?;
    if image.iter().any(|(_, x)| !x.is_zero()) {
        return Err(NormalizeError::NotAtOrigin);
    }
    let mut jets = MapJets::at(map, p)?;
    let frame = select_frame_with(map, &mut jets, p, l)?;
    let rows = frame_rows(&mut jets, &frame.rows, p)?;
    let expected: Vec<GR> = (0..nt).map(|j| if j + 1 == nt { GR::ratio(1, 2) * GR::i() } else { GR::zero() }).collect();
    if rows[0] != expected {
        let shown: Vec<String> = rows[0].iter().map(ToString::to_string).collect();
        return Err(NormalizeError::NotNormalizedAtBase(format!("({})", shown.join(", "))));
    }
    let n0 = frame.n0;
    let m = nt - 1;
    let jet = to_dmatrix(&rows);

    // S = span of the conjugated leading parts of the rows after `a`
    let hats: Vec<Vec<Complex64>> = (1..n0).map(|r| (0..m).map(|j| jet[(r, j)].conj()).collect()).collect();
    let basis = orthonormal_completion(&hats, m, 1e-8);
    let mut a = DMatrix::<Complex64>::zeros(nt, nt);
    for (col, e) in basis.iter().enumerate() {
        for (row, x) in e.iter().enumerate() {
            a[(row, col)] = *x;
        }
    }
    a[(m, m)] = Complex64::new(1.0, 0.0);
    let transformed = &jet * &a;

    let unitarity_residual = max_abs(&(&a * a.adjoint() - DMatrix::identity(nt, nt)));
    let zero_block_residual = (1..n0)
        .flat_map(|r| (n0 - 1..m).map(move |c| (r, c)))
        .map(|(r, c)| transformed[(r, c)].norm())
        .fold(0.0, f64::max);
    let base_residual = (0..nt)
        .map(|j| (transformed[(0, j)] - expected[j].to_complex64()).norm())
        .fold(0.0, f64::max);
    let b = transformed.view((1, 0), (n0 - 1, n0 - 1)).into_owned();
    let sv = b.clone().svd(false, false).singular_values;
    let sigma_min_b = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let sigma_max_b = sv.iter().cloned().fold(0.0, f64::max);

    // exact route: the entries of A are dyadic rationals
    if a.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(NormalizeError::NonFinite);
    }
    let a_exact = exact_matrix(&a);
    let changed = map.change_target_coordinates(&a_exact)?;
    let mut changed_jets = MapJets::with_basis(&changed, jets.basis().to_vec());
    let changed_rows = to_dmatrix(&frame_rows(&mut changed_jets, &frame.rows, p)?);
    let transformation_law_residual = max_abs(&(changed_rows - &transformed));

    let exact_rank = crate::algebra::rank_of_rows(&rows);
    Ok(NormalizationResult {
        float_rank: float_rank(&transformed, 1e-8),
        a,
        frame: frame.rows,
        extension: frame.extension,
        n0,
        jet,
        transformed,
        unitarity_residual,
        zero_block_residual,
        base_residual,
        sigma_min_b,
        cond_b: sigma_max_b / sigma_min_b,
        transformation_law_residual,
        exact_rank,
        tolerances,
    })
}
