//! Recursive-descent parser for the polynomial text grammar.
//!
//! ```text
//! expr   := ["+"|"-"] term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*        division only by nonzero constants
//! factor := "-" factor | base ("^" uint)?
//! base   := var | "conj(" expr ")" | "i" | uint | "(" expr ")"
//! var    := z<k> | w<k> | u | v | t | s<k> | u<k> | v<k> | x<k> | y<k>
//! ```

use num_traits::Zero;

use thiserror::Error;

use super::gaussian::GR;
use super::poly::Poly;
use super::var::{Family, RealFamily, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("non-integer exponent")]
    NonIntegerExponent,
    #[error("division by a non-constant expression")]
    NonConstantDivisor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("expected a constant")]
    NotConstant,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input.
    pub position: usize,
}

/// Which variables an expression may mention. `None` dimensions are unbounded.
#[derive(Clone, Debug, Default)]
pub struct ParseContext {
    pub z_dim: Option<u16>,
    pub w_dim: Option<u16>,
    pub s_dim: Option<u16>,
    /// Restricts the real variables; `None` accepts every real family.
    pub real: Option<Vec<RealFamily>>,
}

impl ParseContext {
    pub fn permissive() -> Self {
        Self::default()
    }

    /// Source space `C^n`, target space `C^n'`, with real graph and abstract variables.
    pub fn spaces(n: u16, n_target: u16) -> Self {
        Self { z_dim: Some(n), w_dim: Some(n_target), s_dim: None, real: None }
    }

    fn admits(&self, v: Var) -> bool {
        let within = |i: u16, dim: Option<u16>| i >= 1 && dim.is_none_or(|d| i <= d);
        match v {
            Var::Holo(Family::Z, i) | Var::Anti(Family::Z, i) => within(i, self.z_dim),
            Var::Holo(Family::W, i) | Var::Anti(Family::W, i) => within(i, self.w_dim),
            Var::Real(f, i) => {
                let fam_ok = self.real.as_ref().is_none_or(|r| r.contains(&f));
                let idx_ok = match f {
                    RealFamily::S => within(i, self.s_dim),
                    _ => true,
                };
                fam_ok && idx_ok
            }
        }
    }
}

pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    parse_poly_in(text, &ParseContext::permissive())
}

pub fn parse_poly_in(text: &str, ctx: &ParseContext) -> Result<Poly, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ctx };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err(ParseErrorKind::Syntax(format!("unexpected `{}`", p.src[p.pos] as char))));
    }
    Ok(e)
}

/// Parses a constant expression such as `1/2 - 3*i`.
pub fn parse_constant(text: &str) -> Result<GR, ParseError> {
    let p = parse_poly_in(text, &ParseContext { real: Some(vec![]), z_dim: Some(0), w_dim: Some(0), s_dim: Some(0) })
        .map_err(|e| match e.kind {
            ParseErrorKind::UnknownVariable(_) => ParseError { kind: ParseErrorKind::NotConstant, position: e.position },
            _ => e,
        })?;
    p.constant_value().ok_or(ParseError { kind: ParseErrorKind::NotConstant, position: 0 })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a ParseContext,
}

impl Parser<'_> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { kind, position: self.pos }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(ParseErrorKind::Syntax(format!("expected `{}`", c as char))))
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = if self.eat(b'-') {
            -self.term()?
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.factor()?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.factor()?;
                let c = d
                    .constant_value()
                    .ok_or(ParseError { kind: ParseErrorKind::NonConstantDivisor, position: at })?;
                let inv = c.inv().ok_or(ParseError { kind: ParseErrorKind::DivisionByZero, position: at })?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        if self.eat(b'-') {
            return Ok(-self.factor()?);
        }
        let b = self.base()?;
        if !self.eat(b'^') {
            return Ok(b);
        }
        let at = self.pos;
        let e = match self.peek() {
            Some(c) if c.is_ascii_digit() => self.uint()?,
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                constant_exponent(&inner).ok_or(ParseError { kind: ParseErrorKind::NonIntegerExponent, position: at })?
            }
            _ => return Err(ParseError { kind: ParseErrorKind::NonIntegerExponent, position: at }),
        };
        if self.peek() == Some(b'.') {
            return Err(self.err(ParseErrorKind::NonIntegerExponent));
        }
        Ok(b.pow(e))
    }

    fn uint(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v = s.parse().map_err(|_| ParseError {
            kind: ParseErrorKind::Syntax("integer out of range".into()),
            position: start,
        })?;
        self.skip_ws();
        Ok(v)
    }

    fn base(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: num_bigint::BigInt = s.parse().unwrap();
                if self.peek() == Some(b'.') {
                    return Err(self.err(ParseErrorKind::Syntax("decimal literals are not exact; use a/b".into())));
                }
                self.skip_ws();
                Ok(Poly::constant(GR::from_real(num_rational::BigRational::from_integer(n))))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
                self.skip_ws();
                if name == "i" {
                    return Ok(Poly::constant(GR::i()));
                }
                if name == "conj" {
                    self.expect(b'(')?;
                    let e = self.expr()?;
                    self.expect(b')')?;
                    return Ok(e.conj());
                }
                let v = variable(&name)
                    .filter(|v| self.ctx.admits(*v))
                    .ok_or(ParseError { kind: ParseErrorKind::UnknownVariable(name), position: start })?;
                Ok(Poly::var(v))
            }
            Some(c) => Err(self.err(ParseErrorKind::Syntax(format!("unexpected `{}`", c as char)))),
            None => Err(self.err(ParseErrorKind::Syntax("unexpected end of input".into()))),
        }
    }
}

fn constant_exponent(p: &Poly) -> Option<u32> {
    let c = p.constant_value()?;
    if !c.im.is_zero() || !c.re.is_integer() {
        return None;
    }
    u32::try_from(c.re.to_integer()).ok()
}

fn variable(name: &str) -> Option<Var> {
    let mut chars = name.chars();
    let head = chars.next()?;
    let rest = chars.as_str();
    let index = if rest.is_empty() {
        None
    } else if rest.bytes().all(|b| b.is_ascii_digit()) && !rest.starts_with('0') {
        Some(rest.parse::<u16>().ok()?)
    } else {
        return None;
    };
    match head {
        'z' => Some(Var::z(index?)),
        'w' => Some(Var::w(index?)),
        c => {
            let fam = RealFamily::from_letter(c)?;
            Some(Var::real(fam, index.unwrap_or(0)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Monomial;

    #[test]
    fn levi_monomial() {
        let ctx = ParseContext::spaces(2, 2);
        let p = parse_poly_in("z1*conj(z1)", &ctx).unwrap();
        assert_eq!(p, Poly::term(GR::from(1), Monomial::from_pairs(vec![(Var::z(1), 1), (Var::zbar(1), 1)])));
    }

    #[test]
    fn quartic_model_defining_function() {
        let p = parse_poly("-(z2-conj(z2))/(2*i) + (z1*conj(z1))^2").unwrap();
        // -(z2 - conj z2)/(2i) = (i/2) z2 - (i/2) conj z2
        let half_i = &GR::i() / &GR::from(2);
        assert_eq!(p.coeff(&Monomial::var(Var::z(2))), half_i);
        assert_eq!(p.coeff(&Monomial::var(Var::zbar(2))), -half_i);
        assert_eq!(p.coeff(&Monomial::from_pairs(vec![(Var::z(1), 2), (Var::zbar(1), 2)])), GR::from(1));
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn rejects_fractional_exponent() {
        let e = parse_poly("z1^(1/2)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NonIntegerExponent);
        assert_eq!(parse_poly("z1^-1").unwrap_err().kind, ParseErrorKind::NonIntegerExponent);
        assert_eq!(parse_poly("z1^(4/2)").unwrap(), parse_poly("z1^2").unwrap());
    }

    #[test]
    fn reports_positions() {
        let e = parse_poly("z1 + * z2").unwrap_err();
        assert_eq!(e.position, 5);
        let e = parse_poly_in("z3", &ParseContext::spaces(2, 2)).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable("z3".into()));
        assert!(matches!(parse_poly("q1").unwrap_err().kind, ParseErrorKind::UnknownVariable(_)));
        assert_eq!(parse_poly("z1/z2").unwrap_err().kind, ParseErrorKind::NonConstantDivisor);
        assert_eq!(parse_poly("z1/0").unwrap_err().kind, ParseErrorKind::DivisionByZero);
    }

    #[test]
    fn constants() {
        assert_eq!(parse_constant("1/2 - 3*i").unwrap(), &GR::ratio(1, 2) - &GR::from_ints(0, 3));
        assert_eq!(parse_constant("z1").unwrap_err().kind, ParseErrorKind::NotConstant);
    }

    #[test]
    fn real_variables() {
        let p = parse_poly("u + s2*t - v1").unwrap();
        assert_eq!(p.variables().len(), 4);
    }
}
