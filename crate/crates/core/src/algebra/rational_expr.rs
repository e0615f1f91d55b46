use std::fmt;

use num_traits::{One, Zero};

use super::gaussian::GR;
use super::point::PointAssignment;
use super::poly::Poly;
use super::var::Var;
use super::AlgebraError;

/// A quotient of polynomials. Common factors are removed only when the
/// denominator divides the numerator exactly; no gcd is computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalExpr {
    num: Poly,
    den: Poly,
}

impl RationalExpr {
    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self { num, den: Poly::one() };
        }
        if let Some(q) = num.exact_div(&den) {
            return Self { num: q, den: Poly::one() };
        }
        // monic denominator in graded-lex order
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap_or_else(GR::one);
        let inv = lc.inv().expect("nonzero leading coefficient");
        Self { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.constant_value().filter(|c| c.is_one()).map(|_| &self.num)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RationalExpr) -> RationalExpr {
        if self.den == o.den {
            return Self::normalized(&self.num + &o.num, self.den.clone());
        }
        Self::normalized(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn mul(&self, o: &RationalExpr) -> RationalExpr {
        Self::normalized(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn neg(&self) -> RationalExpr {
        Self { num: -&self.num, den: self.den.clone() }
    }

    pub fn conj(&self) -> RationalExpr {
        Self::normalized(self.num.conj(), self.den.conj())
    }

    /// Quotient rule: `(N'D - ND') / D^2`.
    pub fn derive(&self, v: Var) -> RationalExpr {
        let top = &(&self.num.derive(v) * &self.den) - &(&self.num * &self.den.derive(v));
        Self::normalized(top, &self.den * &self.den)
    }

    pub fn eval(&self, at: &PointAssignment) -> Result<GR, AlgebraError> {
        let d = self.den.eval(at)?;
        if d.is_zero() {
            return Err(AlgebraError::PoleAt);
        }
        Ok(&self.num.eval(at)? / &d)
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_poly() {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "({})/({})", self.num, self.den),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn cancels_exact_quotients() {
        let r = RationalExpr::new(p("4/5*conj(z1)"), p("3/5*conj(z1)")).unwrap();
        assert_eq!(r.as_poly(), Some(&p("4/3")));
        assert!(RationalExpr::new(p("1"), Poly::zero()).is_err());
    }

    #[test]
    fn quotient_rule() {
        let r = RationalExpr::new(p("z1"), p("z1 + conj(z1)")).unwrap();
        let d = r.derive(Var::zbar(1));
        let expect = RationalExpr::new(p("-z1"), p("(z1 + conj(z1))^2")).unwrap();
        assert_eq!(d, expect);
    }
}
