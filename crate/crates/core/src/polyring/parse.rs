//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'z' | variable | '(' expr ')'
//! ```
//!
//! `z` is the generator `ζₙ` of the active cyclotomic field; the variables
//! are a caller-chosen subset of `x`, `y`, `t`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::multi::{MultiPoly, RationalFunction, Var};
use crate::cyclotomic::{CycloNum, CyclotomicField};
use crate::scalar::{Field, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at column {}: {msg}", pos + 1)]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at column {}", pos + 1)]
    UnknownVariable { name: String, pos: usize },
    #[error("denominator is identically zero at column {}", pos + 1)]
    ZeroDenominator { pos: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::UnknownVariable { pos, .. } | ParseError::ZeroDenominator { pos } => *pos,
        }
    }
}

/// Result of a parse: a polynomial when the denominator cancels to a
/// constant, otherwise a reduced quotient.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Poly(MultiPoly<CycloNum>),
    Ratio(RationalFunction<CycloNum>),
}

impl Expr {
    pub fn into_rational_function(self) -> RationalFunction<CycloNum> {
        match self {
            Expr::Poly(p) => RationalFunction::from_poly(p),
            Expr::Ratio(r) => r,
        }
    }

    pub fn as_poly(&self) -> Option<&MultiPoly<CycloNum>> {
        match self {
            Expr::Poly(p) => Some(p),
            Expr::Ratio(_) => None,
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expr::Poly(p) => write!(f, "{p}"),
            Expr::Ratio(r) => write!(f, "{r}"),
        }
    }
}

/// Parses `src` over `field`, accepting only the variables in `allowed`.
pub fn parse_expression(src: &str, allowed: &[Var], field: &Arc<CyclotomicField>) -> Result<Expr, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, allowed, field };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    // raw quotients are reduced once at the end
    if let Some(c) = v.den.as_constant() {
        return Ok(Expr::Poly(v.num.scale(&c.inv().expect("nonzero constant denominator"))));
    }
    let r = RationalFunction::new(v.num, v.den).expect("denominator checked nonzero");
    Ok(match r.as_poly() {
        Some(p) => Expr::Poly(p),
        None => Expr::Ratio(r),
    })
}

/// Unreduced quotient used while parsing.
struct Raw {
    num: MultiPoly<CycloNum>,
    den: MultiPoly<CycloNum>,
}

impl Raw {
    fn poly(p: MultiPoly<CycloNum>) -> Self {
        Raw { num: p, den: MultiPoly::one() }
    }

    fn simplify(mut self) -> Self {
        if let Some(c) = self.den.as_constant() {
            if !c.is_one() {
                self.num = self.num.scale(&c.inv().unwrap());
                self.den = MultiPoly::one();
            }
        }
        self
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    allowed: &'a [Var],
    field: &'a Arc<CyclotomicField>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Raw, ParseError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            let cross = &rhs.num * &acc.den;
            let num = &acc.num * &rhs.den;
            let num = if op == b'+' { &num + &cross } else { &num - &cross };
            acc = Raw { num, den: &acc.den * &rhs.den }.simplify();
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Raw, ParseError> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            let op_pos = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == b'*' {
                Raw { num: &acc.num * &rhs.num, den: &acc.den * &rhs.den }
            } else {
                if rhs.num.is_zero() {
                    return Err(ParseError::ZeroDenominator { pos: op_pos });
                }
                Raw { num: &acc.num * &rhs.den, den: &acc.den * &rhs.num }
            }
            .simplify();
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(Raw { num: -&v.num, den: v.den });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Raw, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        let e = self.integer().ok_or_else(|| ParseError::Syntax { pos: start, msg: "expected a nonnegative integer exponent".into() })?;
        let e: u32 = e.try_into().map_err(|_| ParseError::Syntax { pos: start, msg: "exponent too large".into() })?;
        Ok(Raw { num: base.num.pow(e), den: base.den.pow(e) })
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn atom(&mut self) -> Result<Raw, ParseError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer().expect("digit present");
                Ok(Raw::poly(MultiPoly::constant(CycloNum::rational(Rational::from_integer(n)))))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "z" {
                    return Ok(Raw::poly(MultiPoly::constant(CycloNum::zeta(self.field))));
                }
                match Var::from_name(name) {
                    Some(v) if self.allowed.contains(&v) => Ok(Raw::poly(MultiPoly::var(v))),
                    _ => Err(ParseError::UnknownVariable { name: name.to_string(), pos: start }),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::zeta_pow;
    use crate::polyring::UniPoly;

    const XYT: &[Var] = &[Var::X, Var::Y, Var::T];

    fn k() -> Arc<CyclotomicField> {
        CyclotomicField::new(16)
    }

    #[test]
    fn discriminant_polynomial_parses_to_univariate() {
        let e = parse_expression("t^3*(t^4-1)", &[Var::T], &k()).unwrap();
        let u = e.as_poly().unwrap().to_uni_t().unwrap();
        assert_eq!(u, UniPoly::from_i64s(&[0, 0, 0, -1, 0, 0, 0, 1]));
    }

    #[test]
    fn scaled_monomial() {
        let e = parse_expression("z^6*x", XYT, &k()).unwrap();
        let p = e.as_poly().unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.terms().next().unwrap(), (&[1, 0, 0], &zeta_pow(&k(), 6)));
    }

    #[test]
    fn quotient_stays_a_quotient() {
        let e = parse_expression("(y^2-x^3)/x^2", XYT, &k()).unwrap();
        assert!(matches!(e, Expr::Ratio(_)));
        let same = parse_expression("(y^2*t - x^3*t)/(t*x^2)", XYT, &k()).unwrap();
        assert_eq!(e, same);
    }

    #[test]
    fn errors_are_positioned() {
        let err = parse_expression("x + * y", XYT, &k()).unwrap_err();
        assert_eq!(err.position(), 4);
        assert!(matches!(parse_expression("t + w", &[Var::T], &k()), Err(ParseError::UnknownVariable { pos: 4, .. })));
        assert!(matches!(parse_expression("x", &[Var::T], &k()), Err(ParseError::UnknownVariable { .. })));
        assert!(matches!(parse_expression("1/(x-x)", XYT, &k()), Err(ParseError::ZeroDenominator { pos: 1 })));
        assert!(matches!(parse_expression("x^-1", XYT, &k()), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expression("(x", XYT, &k()), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn zero_and_rationals() {
        assert_eq!(parse_expression("0", &[Var::T], &k()).unwrap(), Expr::Poly(MultiPoly::zero()));
        let half = parse_expression("1/2*t", &[Var::T], &k()).unwrap();
        assert_eq!(half.to_string(), "1/2*t");
        let z8 = parse_expression("z^8", &[], &k()).unwrap();
        assert_eq!(z8.to_string(), "-1");
    }
}
