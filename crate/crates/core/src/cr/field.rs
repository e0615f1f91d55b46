use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::algebra::{AlgebraError, PointAssignment, Poly, Var, GR};

/// A first-order differential operator `Σ c_v ∂/∂v` with polynomial
/// coefficients. Variables are formally independent, so `∂/∂z` and
/// `∂/∂z̄` act as Wirtinger derivatives.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VectorField {
    coeffs: BTreeMap<Var, Poly>,
}

impl VectorField {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_coeffs<I: IntoIterator<Item = (Var, Poly)>>(it: I) -> Self {
        let mut f = Self::new();
        for (v, c) in it {
            f.add_term(v, c);
        }
        f
    }

    /// Adds `c ∂/∂v`.
    pub fn add_term(&mut self, v: Var, c: Poly) {
        let sum = match self.coeffs.remove(&v) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(v, sum);
        }
    }

    pub fn coeff(&self, v: Var) -> Poly {
        self.coeffs.get(&v).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<Var, Poly> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (v, c) in &self.coeffs {
            let d = f.derive(*v);
            if !d.is_zero() {
                out = &out + &(c * &d);
            }
        }
        out
    }

    /// `[X, Y] = Σ_v (X(Y_v) - Y(X_v)) ∂/∂v`.
    pub fn commutator(&self, other: &VectorField) -> VectorField {
        let vars: std::collections::BTreeSet<Var> =
            self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        Self::from_coeffs(vars.into_iter().map(|v| (v, &self.apply(&other.coeff(v)) - &other.apply(&self.coeff(v)))))
    }

    /// The conjugate field: `conj(c) ∂/∂conj(v)`.
    pub fn conj(&self) -> VectorField {
        Self::from_coeffs(self.coeffs.iter().map(|(v, c)| (v.conj(), c.conj())))
    }

    pub fn scale(&self, c: &Poly) -> VectorField {
        Self::from_coeffs(self.coeffs.iter().map(|(v, x)| (*v, c * x)))
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        let mut out = self.clone();
        for (v, c) in &other.coeffs {
            out.add_term(*v, c.clone());
        }
        out
    }

    /// Coefficients at a point.
    pub fn eval(&self, at: &PointAssignment) -> Result<BTreeMap<Var, GR>, AlgebraError> {
        let mut out = BTreeMap::new();
        for (v, c) in &self.coeffs {
            let x = c.eval(at)?;
            if !x.is_zero() {
                out.insert(*v, x);
            }
        }
        Ok(out)
    }

    /// Applies a substitution to every coefficient.
    pub fn substitute(&self, map: &BTreeMap<Var, Poly>) -> VectorField {
        Self::from_coeffs(self.coeffs.iter().map(|(v, c)| (*v, c.substitute(map))))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(v, c)| format!("({c})*d/d{v}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn heisenberg_commutator() {
        let l = VectorField::from_coeffs([(Var::zbar(1), p("-i/2")), (Var::zbar(2), p("-z1"))]);
        let c = l.commutator(&l.conj());
        assert_eq!(c.coeff(Var::z(2)), p("i/2"));
        assert_eq!(c.coeff(Var::zbar(2)), p("i/2"));
        assert_eq!(c.coeffs().len(), 2);
    }

    #[test]
    fn commutator_is_antisymmetric() {
        let a = VectorField::from_coeffs([(Var::zbar(1), p("z1*conj(z2)")), (Var::z(2), p("1"))]);
        let b = VectorField::from_coeffs([(Var::zbar(2), p("conj(z1)^2"))]);
        let ab = a.commutator(&b);
        let ba = b.commutator(&a);
        assert_eq!(ab.add(&ba), VectorField::new());
    }
}
