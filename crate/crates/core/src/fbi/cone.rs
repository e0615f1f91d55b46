use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::decay::{decay_profile, Classification, DecayOptions, DecayProfile};
use super::sampled::{Cutoff, SampledFunction};
use super::FbiError;
use crate::algebra::{rat_to_f64, ExactMatrix, PointAssignment, GR};
use crate::cr::{cr_basis, levi_matrix, Covector, CrError, EmbeddedManifold, Signature, VectorField};
use crate::par;

/// Distance below which a tested direction counts as lying in `T⁰`.
pub const CHARACTERISTIC_TOL: f64 = 1e-9;
/// NNLS residual below which a vector counts as lying in `Γ`.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// `n` equally spaced unit vectors in the plane.
pub fn circle_directions(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|j| {
            let a = std::f64::consts::TAU * j as f64 / n as f64;
            vec![a.cos(), a.sin()]
        })
        .collect()
}

/// `±e_k` for every coordinate axis.
pub fn axis_directions(dim: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * dim);
    for k in 0..dim {
        for s in [1.0, -1.0] {
            let mut v = vec![0.0; dim];
            v[k] = s;
            out.push(v);
        }
    }
    out
}

/// The convex cone spanned by the slow directions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexCone {
    pub generators: Vec<Vec<f64>>,
}

impl ConvexCone {
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Residual of the best nonnegative combination approximating `v`.
    pub fn distance(&self, v: &[f64]) -> f64 {
        if self.generators.is_empty() {
            return v.iter().map(|x| x * x).sum::<f64>().sqrt();
        }
        let a = DMatrix::from_fn(v.len(), self.generators.len(), |i, j| self.generators[j][i]);
        let b = DVector::from_column_slice(v);
        let x = nnls(&a, &b);
        (&a * x - b).norm()
    }

    pub fn contains(&self, v: &[f64]) -> bool {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        n == 0.0 || self.distance(v) <= MEMBERSHIP_TOL * n
    }

    /// True when `Γ` contains no line.
    pub fn is_pointed(&self) -> bool {
        let sum: Vec<f64> = (0..self.generators.first().map_or(0, Vec::len))
            .map(|i| self.generators.iter().map(|g| g[i]).sum())
            .collect();
        !self.generators.iter().any(|g| self.contains(&g.iter().map(|x| -x).collect::<Vec<_>>()))
            && (self.generators.is_empty() || sum.iter().any(|x| x.abs() > MEMBERSHIP_TOL))
    }
}

/// Lawson–Hanson nonnegative least squares `min ‖Ax − b‖, x ≥ 0`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let tol = 1e-12 * a.norm().max(1.0);
    for _ in 0..3 * n + 10 {
        let w = a.transpose() * (b - a * &x);
        let Some((j, wj)) = (0..n).filter(|&j| !passive[j]).map(|j| (j, w[j])).max_by(|p, q| p.1.total_cmp(&q.1)) else {
            break;
        };
        if wj <= tol {
            break;
        }
        passive[j] = true;
        loop {
            let idx: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let sub = DMatrix::from_fn(a.nrows(), idx.len(), |r, c| a[(r, idx[c])]);
            let z_sub = sub.clone().svd(true, true).solve(b, 1e-14).unwrap_or_else(|_| DVector::zeros(idx.len()));
            if z_sub.iter().all(|&v| v > 0.0) {
                x = DVector::zeros(n);
                for (c, &j) in idx.iter().enumerate() {
                    x[j] = z_sub[c];
                }
                break;
            }
            // step back toward feasibility and drop the variables that hit zero
            let mut alpha = f64::INFINITY;
            for (c, &j) in idx.iter().enumerate() {
                if z_sub[c] <= 0.0 {
                    alpha = alpha.min(x[j] / (x[j] - z_sub[c]));
                }
            }
            for (c, &j) in idx.iter().enumerate() {
                x[j] += alpha * (z_sub[c] - x[j]);
                if x[j] <= tol {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
        }
    }
    x
}

/// Levi-form prediction for one tested direction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeviPrediction {
    pub characteristic: bool,
    /// Signature of the Levi form at the direction's covector, when characteristic.
    pub signature: Option<Signature>,
    /// Characteristic with a positive semidefinite Levi form.
    pub in_s: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CrossCheck {
    /// No manifold supplied.
    NotApplicable,
    Consistent,
    /// Indices of slow directions outside `S`.
    Inconsistent { directions: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeReport {
    pub directions: Vec<Vec<f64>>,
    pub profiles: Vec<DecayProfile>,
    pub classifications: Vec<Classification>,
    pub gamma: ConvexCone,
    pub predictions: Option<Vec<LeviPrediction>>,
    pub cross_check: CrossCheck,
}

/// A manifold in graph form with a point; sample coordinates are
/// `(x₁, y₁, …, xₙ, yₙ, u₁, …, u_d)` with `z_j = x_j + i y_j` and `u` the real
/// parts of the dependent coordinates.
pub struct LeviContext<'a> {
    pub manifold: &'a EmbeddedManifold,
    pub point: &'a PointAssignment,
}

impl LeviContext<'_> {
    pub fn dim(&self) -> usize {
        2 * self.manifold.cr_dim() + self.manifold.codim()
    }

    /// The real covector `Σ ξ_j dx_j + η_j dy_j + τ_μ du_μ` restricted to `M`.
    pub fn covector(&self, dir: &[GR]) -> Result<Covector, CrError> {
        let m = self.manifold;
        let g = m.require_graph()?;
        let n = m.cr_dim();
        if dir.len() != self.dim() {
            return Err(CrError::Invalid(format!("direction has {} entries, expected {}", dir.len(), self.dim())));
        }
        let half = GR::ratio(1, 2);
        let mut coeffs = Vec::new();
        for j in 0..n {
            // ξ dx + η dy = Re((ξ - iη) dz)
            let a = &(&dir[j] - &(&GR::i() * &dir[n + j])) * &half;
            coeffs.push((m.holo(j + 1), a));
        }
        for (mu, v) in g.dependent().iter().enumerate() {
            coeffs.push((*v, &dir[2 * n + mu] * &half));
        }
        Covector::new(coeffs)
    }

    /// Exact basis of the directions annihilating every CR vector field at the point.
    pub fn characteristic_basis(&self, fields: &[VectorField]) -> Result<Vec<Vec<GR>>, CrError> {
        let dim = self.dim();
        let values = fields.iter().map(|f| f.eval(self.point)).collect::<Result<Vec<_>, _>>()?;
        let mut rows = vec![Vec::with_capacity(dim); 2 * fields.len()];
        for e in 0..dim {
            let mut unit = vec![GR::zero(); dim];
            unit[e] = GR::from(1);
            let c = self.covector(&unit)?;
            for (i, x) in values.iter().enumerate() {
                let v = c.pair(x);
                rows[2 * i].push(GR::from_real(v.re.clone()));
                rows[2 * i + 1].push(GR::from_real(v.im.clone()));
            }
        }
        if rows.is_empty() {
            return Ok((0..dim).map(|e| (0..dim).map(|k| GR::from(i64::from(k == e))).collect()).collect());
        }
        Ok(ExactMatrix::from_rows(rows)?.nullspace())
    }

    /// Unit characteristic directions: `±` each basis vector.
    pub fn characteristic_directions(&self) -> Result<Vec<Vec<f64>>, CrError> {
        let fields = cr_basis(self.manifold, self.point)?;
        let mut out = Vec::new();
        for b in self.characteristic_basis(&fields)? {
            let v: Vec<f64> = b.iter().map(|x| rat_to_f64(&x.re)).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            out.push(v.iter().map(|x| x / n).collect());
            out.push(v.iter().map(|x| -x / n).collect());
        }
        Ok(out)
    }

    pub fn predictions(&self, dirs: &[Vec<f64>]) -> Result<Vec<LeviPrediction>, CrError> {
        let fields = cr_basis(self.manifold, self.point)?;
        let basis = self.characteristic_basis(&fields)?;
        let bf: Vec<Vec<f64>> = basis.iter().map(|b| b.iter().map(|x| rat_to_f64(&x.re)).collect()).collect();
        let dim = self.dim();
        let mut out = Vec::with_capacity(dirs.len());
        for d in dirs {
            if d.len() != dim {
                return Err(CrError::Invalid(format!("direction has {} entries, expected {dim}", d.len())));
            }
            // least-squares coordinates in the characteristic basis
            let coords = if bf.is_empty() {
                Vec::new()
            } else {
                let a = DMatrix::from_fn(dim, bf.len(), |i, j| bf[j][i]);
                let x = a.clone().svd(true, true).solve(&DVector::from_column_slice(d), 1e-14).map_err(|e| CrError::Invalid(e.into()))?;
                let r = (&a * &x - DVector::from_column_slice(d)).norm();
                if r > CHARACTERISTIC_TOL {
                    Vec::new()
                } else {
                    x.iter().copied().collect()
                }
            };
            if coords.is_empty() || coords.iter().all(|c| c.abs() < CHARACTERISTIC_TOL) {
                out.push(LeviPrediction { characteristic: false, signature: None, in_s: false });
                continue;
            }
            // exact representative inside T⁰
            let mut exact = vec![GR::zero(); dim];
            for (c, b) in coords.iter().zip(&basis) {
                let q = GR::from_real(BigRational::from_float(*c).ok_or_else(|| CrError::Invalid("non-finite".into()))?);
                for (e, x) in exact.iter_mut().zip(b) {
                    *e += &(&q * x);
                }
            }
            let sig = levi_matrix(&fields, self.point, &self.covector(&exact)?)?.signature();
            out.push(LeviPrediction { characteristic: true, signature: Some(sig), in_s: sig.neg == 0 });
        }
        Ok(out)
    }
}

pub fn cone_report(
    u: &SampledFunction,
    eta: &Cutoff,
    probe: &[f64],
    directions: &[Vec<f64>],
    opts: &DecayOptions,
    levi: Option<&LeviContext<'_>>,
) -> Result<ConeReport, FbiError> {
    let profiles = par::map_slice(directions, |d| decay_profile(u, eta, probe, d, opts))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let classifications: Vec<Classification> = profiles.iter().map(|p| p.classification).collect();
    let gamma = ConvexCone {
        generators: profiles
            .iter()
            .filter(|p| p.classification == Classification::SlowDecay)
            .map(|p| p.direction.clone())
            .collect(),
    };
    let predictions = match levi {
        Some(ctx) => {
            if ctx.dim() != u.dim() {
                return Err(FbiError::Dimension { expected: u.dim(), got: ctx.dim() });
            }
            Some(ctx.predictions(directions)?)
        }
        None => None,
    };
    let cross_check = match &predictions {
        None => CrossCheck::NotApplicable,
        Some(pr) => {
            let bad: Vec<usize> = (0..directions.len())
                .filter(|&j| classifications[j] == Classification::SlowDecay && !pr[j].in_s)
                .collect();
            if bad.is_empty() {
                CrossCheck::Consistent
            } else {
                CrossCheck::Inconsistent { directions: bad }
            }
        }
    };
    Ok(ConeReport { directions: directions.to_vec(), profiles, classifications, gamma, predictions, cross_check })
}
