use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{CrError, VectorField};
use crate::algebra::{rank_of_rows, ExactMatrix, Family, PointAssignment, Poly, RealFamily, Var, GR};

/// Real graph coordinates for the last `d` complex coordinates:
/// `z_{N-d+μ} = u_μ + i v_μ` with each `v_μ` solved as a polynomial in the
/// remaining coordinates and the `u`'s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphForm {
    /// Substitution eliminating every dependent coordinate and its conjugate.
    subst: BTreeMap<Var, Poly>,
    /// `v_μ` as polynomials in the free variables.
    heights: Vec<Poly>,
    dependent: Vec<Var>,
    u_vars: Vec<Var>,
}

impl GraphForm {
    pub fn reduce(&self, p: &Poly) -> Poly {
        p.substitute(&self.subst)
    }

    pub fn heights(&self) -> &[Poly] {
        &self.heights
    }

    pub fn dependent(&self) -> &[Var] {
        &self.dependent
    }

    pub fn u_vars(&self) -> &[Var] {
        &self.u_vars
    }

    pub fn substitution(&self) -> &BTreeMap<Var, Poly> {
        &self.subst
    }
}

fn real_index(mu: usize, d: usize) -> u16 {
    if d == 1 {
        0
    } else {
        mu as u16 + 1
    }
}

/// A generic real submanifold `{ρ_1 = … = ρ_d = 0}` of complex space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedManifold {
    family: Family,
    dim: u16,
    defining: Vec<Poly>,
    graph: Option<GraphForm>,
}

impl EmbeddedManifold {
    pub fn new(family: Family, dim: u16, defining: Vec<Poly>) -> Result<Self, CrError> {
        if defining.is_empty() || defining.len() > dim as usize {
            return Err(CrError::Invalid(format!("need 1 <= codimension <= {dim}")));
        }
        for (mu, r) in defining.iter().enumerate() {
            if !r.is_real() {
                return Err(CrError::NotReal(mu));
            }
            for v in r.variables() {
                let ok = match v {
                    Var::Holo(f, k) | Var::Anti(f, k) => f == family && (1..=dim).contains(&k),
                    Var::Real(..) => false,
                };
                if !ok {
                    return Err(CrError::Invalid(format!("defining function {} uses foreign variable {v}", mu + 1)));
                }
            }
        }
        let mut m = Self { family, dim, defining, graph: None };
        m.graph = m.detect_graph();
        Ok(m)
    }

    /// The model quadric `-Im x_N + Σ_k signs_k |x_k|^2` in `C^N`, `N = signs.len() + 1`.
    pub fn quadric(family: Family, signs: &[i64]) -> Self {
        let n = signs.len() as u16 + 1;
        let (xn, xbn) = (Poly::var(Var::Holo(family, n)), Poly::var(Var::Anti(family, n)));
        // -Im x = -(x - x̄)/(2i) = (i/2)(x - x̄)
        let mut r = (&xn - &xbn).scale(&GR::new(Zero::zero(), BigRational::new(1.into(), 2.into())));
        for (k, &sg) in signs.iter().enumerate() {
            let k = k as u16 + 1;
            let sq = &Poly::var(Var::Holo(family, k)) * &Poly::var(Var::Anti(family, k));
            r = &r + &sq.scale(&GR::from(sg));
        }
        Self::new(family, n, vec![r]).expect("model quadrics are valid")
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Ambient complex dimension N.
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn codim(&self) -> usize {
        self.defining.len()
    }

    /// CR dimension N - d.
    pub fn cr_dim(&self) -> usize {
        self.dim() - self.codim()
    }

    pub fn defining(&self) -> &[Poly] {
        &self.defining
    }

    pub fn holo(&self, k: usize) -> Var {
        Var::Holo(self.family, k as u16)
    }

    pub fn anti(&self, k: usize) -> Var {
        Var::Anti(self.family, k as u16)
    }

    pub fn graph(&self) -> Option<&GraphForm> {
        self.graph.as_ref()
    }

    pub fn require_graph(&self) -> Result<&GraphForm, CrError> {
        self.graph.as_ref().ok_or(CrError::NotGraphForm)
    }

    fn detect_graph(&self) -> Option<GraphForm> {
        let d = self.codim();
        let n = self.dim();
        let mut subst0 = BTreeMap::new();
        let mut dependent = Vec::new();
        let mut u_vars = Vec::new();
        let mut v_vars = Vec::new();
        for mu in 0..d {
            let k = n - d + mu + 1;
            let u = Var::real(RealFamily::U, real_index(mu, d));
            let v = Var::real(RealFamily::V, real_index(mu, d));
            let iv = Poly::var(v).scale(&GR::i());
            subst0.insert(self.holo(k), &Poly::var(u) + &iv);
            subst0.insert(self.anti(k), &Poly::var(u) - &iv);
            dependent.push(self.holo(k));
            u_vars.push(u);
            v_vars.push(v);
        }
        // ρ_μ = Σ_ν C_μν v_ν + q_μ with C constant real and q free of v
        let mut c = ExactMatrix::zeros(d, d);
        let mut q = Vec::with_capacity(d);
        for (mu, r) in self.defining.iter().enumerate() {
            let hat = r.substitute(&subst0);
            let mut rest = hat.clone();
            for (nu, v) in v_vars.iter().enumerate() {
                let coeff = hat.derive(*v).constant_value()?;
                if !coeff.is_real() {
                    return None;
                }
                rest = &rest - &Poly::var(*v).scale(&coeff);
                c[(mu, nu)] = coeff;
            }
            if v_vars.iter().any(|v| rest.degree_in(*v) > 0) {
                return None;
            }
            q.push(rest);
        }
        let cinv = c.inverse().ok()?;
        let heights: Vec<Poly> = (0..d)
            .map(|nu| {
                let mut h = Poly::zero();
                for (mu, qm) in q.iter().enumerate() {
                    h = &h - &qm.scale(&cinv[(nu, mu)]);
                }
                h
            })
            .collect();
        let mut subst = BTreeMap::new();
        for mu in 0..d {
            let ih = heights[mu].scale(&GR::i());
            subst.insert(dependent[mu], &Poly::var(u_vars[mu]) + &ih);
            subst.insert(dependent[mu].conj(), &Poly::var(u_vars[mu]) - &ih);
        }
        Some(GraphForm { subst, heights, dependent, u_vars })
    }

    /// The on-manifold point with free coordinates `z'` and real parts `u`
    /// of the dependent coordinates.
    pub fn point_from_graph(&self, free: &[GR], u: &[BigRational]) -> Result<PointAssignment, CrError> {
        let g = self.require_graph()?;
        if free.len() != self.cr_dim() || u.len() != self.codim() {
            return Err(CrError::Invalid(format!(
                "expected {} free coordinates and {} real parts",
                self.cr_dim(),
                self.codim()
            )));
        }
        let mut pt = PointAssignment::new();
        for (k, x) in free.iter().enumerate() {
            pt.set(self.holo(k + 1), x.clone())?;
        }
        for (mu, x) in u.iter().enumerate() {
            pt.set(g.u_vars[mu], GR::from_real(x.clone()))?;
        }
        let mut full = PointAssignment::new();
        for (k, x) in free.iter().enumerate() {
            full.set(self.holo(k + 1), x.clone())?;
        }
        for ((height, &dep), um) in g.heights.iter().zip(&g.dependent).zip(u) {
            let h = height.eval(&pt)?;
            full.set(dep, GR::new(um.clone(), h.re))?;
        }
        Ok(full)
    }

    pub fn contains(&self, p: &PointAssignment) -> Result<bool, CrError> {
        for r in &self.defining {
            if !r.eval(p)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn require_on(&self, p: &PointAssignment) -> Result<(), CrError> {
        if self.contains(p)? {
            Ok(())
        } else {
            Err(CrError::OffManifold)
        }
    }

    /// `(∂ρ_μ/∂z_k)` as a d×N polynomial matrix.
    pub fn holo_gradient(&self) -> Vec<Vec<Poly>> {
        self.defining.iter().map(|r| (1..=self.dim()).map(|k| r.derive(self.holo(k))).collect()).collect()
    }

    pub fn anti_gradient(&self) -> Vec<Vec<Poly>> {
        self.defining.iter().map(|r| (1..=self.dim()).map(|k| r.derive(self.anti(k))).collect()).collect()
    }

    /// Checks that the holomorphic gradients are independent at `p`.
    pub fn require_generic(&self, p: &PointAssignment) -> Result<(), CrError> {
        let rows = eval_rows(&self.holo_gradient(), p)?;
        if rank_of_rows(&rows) < self.codim() {
            return Err(CrError::NotGeneric);
        }
        Ok(())
    }
}

pub(crate) fn eval_rows(rows: &[Vec<Poly>], p: &PointAssignment) -> Result<Vec<Vec<GR>>, CrError> {
    rows.iter().map(|r| r.iter().map(|x| x.eval(p).map_err(CrError::from)).collect()).collect()
}

/// An abstract CR structure on `C^n × R^d` with coordinates `(z, s)` and
/// fields `L_i = ∂/∂z̄_i + Σ_j a_ij ∂/∂z_j + Σ_l b_il ∂/∂s_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractCRStructure {
    n: usize,
    d: usize,
    fields: Vec<VectorField>,
}

impl AbstractCRStructure {
    pub fn new(n: usize, d: usize, a: Vec<Vec<Poly>>, b: Vec<Vec<Poly>>) -> Result<Self, CrError> {
        if a.len() != n || b.len() != n || a.iter().any(|r| r.len() != n) || b.iter().any(|r| r.len() != d) {
            return Err(CrError::Invalid(format!("coefficient arrays must be {n}x{n} and {n}x{d}")));
        }
        for c in a.iter().flatten().chain(b.iter().flatten()) {
            for v in c.variables() {
                let ok = match v {
                    Var::Holo(Family::Z, k) | Var::Anti(Family::Z, k) => (1..=n as u16).contains(&k),
                    Var::Real(RealFamily::S, l) => (1..=d as u16).contains(&l),
                    _ => false,
                };
                if !ok {
                    return Err(CrError::Invalid(format!("coefficient uses foreign variable {v}")));
                }
            }
        }
        let fields = (0..n)
            .map(|i| {
                let mut f = VectorField::new();
                f.add_term(Var::zbar(i as u16 + 1), Poly::one());
                for (j, c) in a[i].iter().enumerate() {
                    f.add_term(Var::z(j as u16 + 1), c.clone());
                }
                for (l, c) in b[i].iter().enumerate() {
                    f.add_term(Var::real(RealFamily::S, l as u16 + 1), c.clone());
                }
                f
            })
            .collect();
        Ok(Self { n, d, fields })
    }

    /// Wraps arbitrary fields on `C^n × R^d`.
    pub fn from_fields(n: usize, d: usize, fields: Vec<VectorField>) -> Self {
        Self { n, d, fields }
    }

    pub fn cr_dim(&self) -> usize {
        self.n
    }

    pub fn codim(&self) -> usize {
        self.d
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    /// Holomorphic coordinates then real ones.
    pub fn coordinates(&self) -> Vec<Var> {
        (1..=self.n as u16).map(Var::z).chain((1..=self.d as u16).map(|l| Var::real(RealFamily::S, l))).collect()
    }
}
