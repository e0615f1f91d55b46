use std::collections::BTreeMap;

use super::JetError;
use crate::algebra::{ExactMatrix, Family, PointAssignment, Poly, Var, GR};
use crate::cr::EmbeddedManifold;

/// A polynomial map `H = (H_1, …, H_{N'})` from a source manifold in the
/// `z` variables into a target manifold in the `w` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrMap {
    source: EmbeddedManifold,
    target: EmbeddedManifold,
    components: Vec<Poly>,
}

/// Outcome of composing the target defining functions with the map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapCheck {
    pub passed: bool,
    /// `ρ'_μ(H, conj H)` after graph reduction, one per target function.
    pub residuals: Vec<Poly>,
}

impl CrMap {
    pub fn new(source: EmbeddedManifold, target: EmbeddedManifold, components: Vec<Poly>) -> Result<Self, JetError> {
        if source.family() != Family::Z || target.family() != Family::W {
            return Err(JetError::Invalid("source must use z coordinates and target w coordinates".into()));
        }
        if components.len() != target.dim() {
            return Err(JetError::Invalid(format!(
                "map has {} components but the target lives in dimension {}",
                components.len(),
                target.dim()
            )));
        }
        for h in &components {
            for v in h.variables() {
                let ok = matches!(v, Var::Holo(Family::Z, k) | Var::Anti(Family::Z, k) if (1..=source.dim() as u16).contains(&k));
                if !ok {
                    return Err(JetError::Invalid(format!("map component uses foreign variable {v}")));
                }
            }
        }
        Ok(Self { source, target, components })
    }

    pub fn source(&self) -> &EmbeddedManifold {
        &self.source
    }

    pub fn target(&self) -> &EmbeddedManifold {
        &self.target
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    /// Source CR dimension n.
    pub fn n(&self) -> usize {
        self.source.cr_dim()
    }

    /// Target dimension N'.
    pub fn target_dim(&self) -> usize {
        self.target.dim()
    }

    fn substitution(&self) -> BTreeMap<Var, Poly> {
        let mut m = BTreeMap::new();
        for (j, h) in self.components.iter().enumerate() {
            m.insert(Var::w(j as u16 + 1), h.clone());
            m.insert(Var::wbar(j as u16 + 1), h.conj());
        }
        m
    }

    /// `P(H, conj H)` for a polynomial `P` in the target variables.
    pub fn compose(&self, p: &Poly) -> Poly {
        p.substitute(&self.substitution())
    }

    pub fn verify_into_target(&self) -> Result<MapCheck, JetError> {
        let g = self.source.require_graph()?;
        let residuals: Vec<Poly> = self.target.defining().iter().map(|r| g.reduce(&self.compose(r))).collect();
        Ok(MapCheck { passed: residuals.iter().all(Poly::is_zero), residuals })
    }

    /// `ρ'_{μ,W}(H, conj H)`: one row of N' polynomials per target function.
    pub fn a_vector(&self) -> Vec<Vec<Poly>> {
        let sub = self.substitution();
        self.target
            .defining()
            .iter()
            .map(|r| (1..=self.target_dim()).map(|j| r.derive(Var::w(j as u16)).substitute(&sub)).collect())
            .collect()
    }

    /// `F(p)` as a point of the target space.
    pub fn image(&self, p: &PointAssignment) -> Result<PointAssignment, JetError> {
        let mut q = PointAssignment::new();
        for (j, h) in self.components.iter().enumerate() {
            q.set(Var::w(j as u16 + 1), h.eval(p)?)?;
        }
        Ok(q)
    }

    /// The same map written in target coordinates `w = A w̃`:
    /// `ρ̃(w̃) = ρ(A w̃)` and `H̃ = A⁻¹ H`.
    pub fn change_target_coordinates(&self, a: &ExactMatrix) -> Result<CrMap, JetError> {
        let n = self.target_dim();
        if a.rows() != n || a.cols() != n {
            return Err(JetError::Invalid(format!("coordinate change must be {n}x{n}")));
        }
        let ainv = a.inverse()?;
        let mut sub = BTreeMap::new();
        for j in 0..n {
            let mut wj = Poly::zero();
            let mut wbj = Poly::zero();
            for k in 0..n {
                wj = &wj + &Poly::var(Var::w(k as u16 + 1)).scale(&a[(j, k)]);
                wbj = &wbj + &Poly::var(Var::wbar(k as u16 + 1)).scale(&a[(j, k)].conj());
            }
            sub.insert(Var::w(j as u16 + 1), wj);
            sub.insert(Var::wbar(j as u16 + 1), wbj);
        }
        let defining = self.target.defining().iter().map(|r| r.substitute(&sub)).collect();
        let target = EmbeddedManifold::new(Family::W, n as u16, defining)?;
        let components = (0..n)
            .map(|j| {
                let mut h = Poly::zero();
                for k in 0..n {
                    h = &h + &self.components[k].scale(&ainv[(j, k)]);
                }
                h
            })
            .collect();
        CrMap::new(self.source.clone(), target, components)
    }

    /// Multiplies each target defining function by a real polynomial in `w`.
    pub fn rescale_target(&self, factors: &[Poly]) -> Result<CrMap, JetError> {
        if factors.len() != self.target.codim() || factors.iter().any(|f| !f.is_real()) {
            return Err(JetError::Invalid("one real factor per target defining function is required".into()));
        }
        let defining = self.target.defining().iter().zip(factors).map(|(r, f)| r * f).collect();
        let target = EmbeddedManifold::new(Family::W, self.target_dim() as u16, defining)?;
        CrMap::new(self.source.clone(), target, self.components.clone())
    }
}

/// Every entry of `v` evaluated at `p`.
pub(crate) fn eval_vec(v: &[Poly], p: &PointAssignment) -> Result<Vec<GR>, JetError> {
    v.iter().map(|x| x.eval(p).map_err(JetError::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    pub(crate) fn power_map(m: u32) -> CrMap {
        let src = EmbeddedManifold::new(
            Family::Z,
            2,
            vec![parse_poly(&format!("-(z2-conj(z2))/(2*i) + (z1*conj(z1))^{m}")).unwrap()],
        )
        .unwrap();
        let tgt = EmbeddedManifold::new(Family::W, 2, vec![parse_poly("-(w2-conj(w2))/(2*i) + w1*conj(w1)").unwrap()])
            .unwrap();
        CrMap::new(src, tgt, vec![parse_poly(&format!("z1^{m}")).unwrap(), parse_poly("z2").unwrap()]).unwrap()
    }

    #[test]
    fn verify_examples() {
        assert!(power_map(2).verify_into_target().unwrap().passed);
        let m = power_map(2);
        let id = CrMap::new(m.source().clone(), m.target().clone(), vec![parse_poly("z1").unwrap(), parse_poly("z2").unwrap()])
            .unwrap();
        let chk = id.verify_into_target().unwrap();
        assert!(!chk.passed);
        assert_eq!(chk.residuals[0], parse_poly("z1*conj(z1) - z1^2*conj(z1)^2").unwrap());
    }

    #[test]
    fn a_vector_of_example() {
        let a = power_map(2).a_vector();
        assert_eq!(a[0], vec![parse_poly("conj(z1)^2").unwrap(), parse_poly("i/2").unwrap()]);
    }
}
