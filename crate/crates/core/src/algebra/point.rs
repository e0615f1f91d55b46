use std::collections::BTreeMap;

use num_traits::Zero;

use super::gaussian::GR;
use super::var::Var;
use super::AlgebraError;

/// Exact values for a set of variables, kept conjugate-consistent.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PointAssignment {
    values: BTreeMap<Var, GR>,
}

impl PointAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Assigns a complex coordinate and its conjugate, or a real variable.
    pub fn set(&mut self, v: Var, value: GR) -> Result<(), AlgebraError> {
        match v {
            Var::Real(..) => {
                if !value.im.is_zero() {
                    return Err(AlgebraError::NonRealValue(v));
                }
                self.values.insert(v, value);
            }
            _ => {
                self.values.insert(v.conj(), value.conj());
                self.values.insert(v, value);
            }
        }
        Ok(())
    }

    pub fn with(mut self, v: Var, value: GR) -> Result<Self, AlgebraError> {
        self.set(v, value)?;
        Ok(self)
    }

    pub fn get(&self, v: Var) -> Option<&GR> {
        self.values.get(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &GR)> {
        self.values.iter()
    }

    /// Holomorphic and real coordinates only (the conjugates are implied).
    pub fn coordinates(&self) -> impl Iterator<Item = (&Var, &GR)> {
        self.values.iter().filter(|(v, _)| !matches!(v, Var::Anti(..)))
    }

    pub fn contains(&self, v: Var) -> bool {
        self.values.contains_key(&v)
    }

    /// Checks `value(conj v) = conj(value(v))` and real values on real variables.
    pub fn is_conjugate_consistent(&self) -> bool {
        self.values.iter().all(|(v, x)| match v {
            Var::Real(..) => x.im.is_zero(),
            _ => self.values.get(&v.conj()).is_some_and(|y| *y == x.conj()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RealFamily;

    #[test]
    fn setting_holomorphic_sets_conjugate() {
        let p = PointAssignment::new().with(Var::z(1), GR::from_ints(1, 1)).unwrap();
        assert_eq!(p.get(Var::zbar(1)), Some(&GR::from_ints(1, -1)));
        assert!(p.is_conjugate_consistent());
    }

    #[test]
    fn real_variables_reject_complex_values() {
        let err = PointAssignment::new().with(Var::real(RealFamily::U, 0), GR::i());
        assert!(err.is_err());
    }
}
