use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::basis::cr_basis;
use super::{AbstractCRStructure, CrError, EmbeddedManifold, VectorField};
use crate::algebra::{rank_of_rows, ExactMatrix, PointAssignment, Var, GR};

/// A real covector `Σ a_k dz_k + conj(a_k) dz̄_k + Σ c_l ds_l`, stored by its
/// holomorphic coefficients `a_k` and real coefficients `c_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covector {
    coeffs: BTreeMap<Var, GR>,
}

impl Covector {
    pub fn new<I: IntoIterator<Item = (Var, GR)>>(it: I) -> Result<Self, CrError> {
        let mut coeffs = BTreeMap::new();
        for (v, c) in it {
            match v {
                Var::Anti(..) => return Err(CrError::Invalid(format!("covector keyed by conjugate variable {v}"))),
                Var::Real(..) if !c.is_real() => return Err(CrError::Invalid(format!("non-real coefficient on {v}"))),
                _ => {}
            }
            if !c.is_zero() {
                coeffs.insert(v, c);
            }
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &BTreeMap<Var, GR> {
        &self.coeffs
    }

    pub fn coeff(&self, v: Var) -> GR {
        self.coeffs.get(&v).cloned().unwrap_or_else(GR::zero)
    }

    /// `dρ` at `p`.
    pub fn differential(r: &crate::algebra::Poly, vars: &[Var], p: &PointAssignment) -> Result<Self, CrError> {
        let mut out = Vec::new();
        for v in vars {
            out.push((*v, r.derive(*v).eval(p)?));
        }
        Self::new(out)
    }

    /// `⟨σ, X⟩` for a tangent vector given by its coefficients.
    pub fn pair(&self, x: &BTreeMap<Var, GR>) -> GR {
        let mut acc = GR::zero();
        for (v, a) in &self.coeffs {
            if let Some(c) = x.get(v) {
                acc += &(a * c);
            }
            if let Var::Holo(..) = v {
                if let Some(c) = x.get(&v.conj()) {
                    acc += &(&a.conj() * c);
                }
            }
        }
        acc
    }

    pub fn scale(&self, r: &BigRational) -> Covector {
        let g = GR::from_real(r.clone());
        Covector { coeffs: self.coeffs.iter().map(|(v, c)| (*v, c * &g)).filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn neg(&self) -> Covector {
        Covector { coeffs: self.coeffs.iter().map(|(v, c)| (*v, -c)).collect() }
    }

    pub fn add(&self, o: &Covector) -> Covector {
        let mut coeffs = self.coeffs.clone();
        for (v, c) in &o.coeffs {
            let s = &coeffs.remove(v).unwrap_or_else(GR::zero) + c;
            if !s.is_zero() {
                coeffs.insert(*v, s);
            }
        }
        Covector { coeffs }
    }

    /// Real coordinates `(Re a, Im a, c)` over the given variable list.
    fn real_vector(&self, vars: &[Var]) -> Vec<GR> {
        let mut out = Vec::new();
        for v in vars {
            let c = self.coeff(*v);
            out.push(GR::from_real(c.re.clone()));
            if !matches!(v, Var::Real(..)) {
                out.push(GR::from_real(c.im.clone()));
            }
        }
        out
    }

    /// Equality modulo the real span of `conormals`.
    pub fn equivalent_mod(&self, other: &Covector, conormals: &[Covector]) -> bool {
        let vars: Vec<Var> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .chain(conormals.iter().flat_map(|c| c.coeffs.keys()))
            .copied()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut rows: Vec<Vec<GR>> = conormals.iter().map(|c| c.real_vector(&vars)).collect();
        let base = rank_of_rows(&rows);
        rows.push(self.add(&other.neg()).real_vector(&vars));
        rank_of_rows(&rows) == base
    }
}

impl fmt::Display for Covector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(v, c)| match v {
                Var::Real(..) => format!("({c})*d{v}"),
                _ => format!("({c})*d{v} + ({})*d{}", c.conj(), v.conj()),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Representatives of `T⁰_p` for an embedded manifold: `σ_μ` with
/// `a_k = -i ∂ρ_μ/∂z_k(p)`, the imaginary part of `∂ρ_μ`.
pub fn characteristic_space(m: &EmbeddedManifold, p: &PointAssignment) -> Result<Vec<Covector>, CrError> {
    m.require_on(p)?;
    let mi = -GR::i();
    m.defining()
        .iter()
        .map(|r| {
            let mut out = Vec::new();
            for k in 1..=m.dim() {
                out.push((m.holo(k), &mi * &r.derive(m.holo(k)).eval(p)?));
            }
            Covector::new(out)
        })
        .collect()
}

pub fn conormals(m: &EmbeddedManifold, p: &PointAssignment) -> Result<Vec<Covector>, CrError> {
    let vars: Vec<Var> = (1..=m.dim()).map(|k| m.holo(k)).collect();
    m.defining().iter().map(|r| Covector::differential(r, &vars, p)).collect()
}

/// Basis of real covectors annihilating every field at `p` (and so their
/// conjugates), for an abstract structure.
pub fn abstract_characteristic_space(s: &AbstractCRStructure, p: &PointAssignment) -> Result<Vec<Covector>, CrError> {
    let coords = s.coordinates();
    // unknowns: Re a_k, Im a_k for z_k; c_l for s_l
    let mut unknowns: Vec<(Var, bool)> = Vec::new();
    for v in &coords {
        unknowns.push((*v, false));
        if !matches!(v, Var::Real(..)) {
            unknowns.push((*v, true));
        }
    }
    let mut rows = Vec::new();
    for f in s.fields() {
        let x = f.eval(p)?;
        // ⟨σ, X⟩ is linear in the unknowns; split its real and imaginary parts.
        let mut re_row = Vec::new();
        let mut im_row = Vec::new();
        for (v, imag) in &unknowns {
            let unit = if *imag { GR::i() } else { GR::one() };
            let mut trial = BTreeMap::new();
            trial.insert(*v, unit);
            let value = Covector { coeffs: trial }.pair(&x);
            re_row.push(GR::from_real(value.re.clone()));
            im_row.push(GR::from_real(value.im.clone()));
        }
        rows.push(re_row);
        rows.push(im_row);
    }
    let sys = if rows.is_empty() {
        ExactMatrix::zeros(1, unknowns.len())
    } else {
        ExactMatrix::from_rows(rows)?
    };
    sys.nullspace()
        .into_iter()
        .map(|x| {
            let mut coeffs: BTreeMap<Var, GR> = BTreeMap::new();
            for ((v, imag), val) in unknowns.iter().zip(x) {
                let add = if *imag { &GR::i() * &val } else { val };
                let e = coeffs.entry(*v).or_insert_with(GR::zero);
                *e = &*e + &add;
            }
            Covector::new(coeffs)
        })
        .collect()
}

/// Hermitian matrix `H_ij = (1/2i) ⟨σ, [L_i, conj(L_j)](p)⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviMatrix {
    pub matrix: ExactMatrix,
    /// Printed basis fields the entries refer to.
    pub basis: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl Signature {
    pub fn swapped(self) -> Signature {
        Signature { pos: self.neg, neg: self.pos, zero: self.zero }
    }

    pub fn has_nonzero_eigenvalue(self) -> bool {
        self.pos + self.neg > 0
    }

    pub fn definite(self) -> bool {
        self.zero == 0 && (self.pos == 0 || self.neg == 0)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.pos, self.neg, self.zero)
    }
}

impl LeviMatrix {
    pub fn is_hermitian(&self) -> bool {
        self.matrix == self.matrix.adjoint()
    }

    pub fn signature(&self) -> Signature {
        signature(&self.matrix)
    }
}

/// Levi matrix of a list of (0,1) fields at `p`. Errors if `σ` does not
/// annihilate the fields at `p`.
pub fn levi_matrix(fields: &[VectorField], p: &PointAssignment, sigma: &Covector) -> Result<LeviMatrix, CrError> {
    for f in fields {
        if !sigma.pair(&f.eval(p)?).is_zero() {
            return Err(CrError::NotCharacteristic);
        }
    }
    let n = fields.len();
    let conj: Vec<VectorField> = fields.iter().map(VectorField::conj).collect();
    let half_over_i = GR::ratio(1, 2) * (-GR::i());
    let mut h = ExactMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let c = fields[i].commutator(&conj[j]).eval(p)?;
            h[(i, j)] = &half_over_i * &sigma.pair(&c);
        }
    }
    Ok(LeviMatrix { matrix: h, basis: fields.iter().map(ToString::to_string).collect() })
}

pub fn levi_form(m: &EmbeddedManifold, p: &PointAssignment, sigma: &Covector) -> Result<LeviMatrix, CrError> {
    let basis = cr_basis(m, p)?;
    levi_matrix(&basis, p, sigma)
}

/// Exact inertia of a Hermitian matrix by congruence: symmetric pivoting on
/// nonzero diagonal entries, otherwise a 2×2 block `[[0,h],[conj h,0]]`
/// contributing one positive and one negative square.
pub fn signature(h: &ExactMatrix) -> Signature {
    let mut m = h.clone();
    let mut alive: Vec<usize> = (0..m.rows()).collect();
    let (mut pos, mut neg) = (0, 0);
    loop {
        if let Some(&k) = alive.iter().find(|&&k| !m[(k, k)].is_zero()) {
            let piv = m[(k, k)].clone();
            if piv.re.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            alive.retain(|&x| x != k);
            let inv = piv.inv().unwrap();
            for &r in &alive {
                let f = &m[(r, k)] * &inv;
                for &c in &alive {
                    let t = &f * &m[(k, c)];
                    m[(r, c)] -= &t;
                }
            }
            continue;
        }
        let off = alive.iter().flat_map(|&i| alive.iter().map(move |&j| (i, j))).find(|&(i, j)| i < j && !m[(i, j)].is_zero());
        let Some((i, j)) = off else { break };
        pos += 1;
        neg += 1;
        let hv = m[(i, j)].clone();
        let (inv_h, inv_hbar) = (hv.inv().unwrap(), hv.conj().inv().unwrap());
        alive.retain(|&x| x != i && x != j);
        // Schur complement of the block
        let snapshot = m.clone();
        for &r in &alive {
            for &c in &alive {
                let t1 = &(&snapshot[(r, j)] * &inv_h) * &snapshot[(i, c)];
                let t2 = &(&snapshot[(r, i)] * &inv_hbar) * &snapshot[(j, c)];
                m[(r, c)] -= &(&t1 + &t2);
            }
        }
    }
    Signature { pos, neg, zero: h.rows() - pos - neg }
}
