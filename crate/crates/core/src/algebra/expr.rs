//! A small expression parser for polynomials and rational functions in the
//! canonical text form: `+ - * / ^`, integer literals, parentheses, and
//! symbols drawn from a concentration-variable list and a parameter list.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::mono::VarSet;
use super::scalar::ParamScalar;
use super::xpoly::XPoly;
use crate::error::AlgebraError;

/// Parses an expression into a polynomial in the concentration variables.
/// Division is only allowed by parameter-level expressions.
pub fn parse_xpoly(
    input: &str,
    vars: &Arc<VarSet>,
    params: &Arc<VarSet>,
) -> Result<XPoly, AlgebraError> {
    match Parser::new(input, vars.clone(), params.clone()).parse_full()? {
        Value::Poly(p) => Ok(p),
        Value::Scalar(s) => Ok(XPoly::from_scalar(vars.clone(), s)),
    }
}

/// Parses an expression into a parameter-field element; concentration
/// variables are not allowed here.
pub fn parse_scalar(input: &str, params: &Arc<VarSet>) -> Result<ParamScalar, AlgebraError> {
    let vars = VarSet::empty();
    match Parser::new(input, vars, params.clone()).parse_full()? {
        Value::Scalar(s) => Ok(s),
        Value::Poly(_) => unreachable!("no concentration variables declared"),
    }
}

/// Test helper: parses a plain polynomial (denominator must be trivial).
#[cfg(test)]
pub(crate) fn parse_poly_for_tests(
    input: &str,
    params: &Arc<VarSet>,
) -> super::poly::ParamPoly {
    let s = parse_scalar(input, params).expect("parse");
    assert!(s.den().is_one(), "expected a polynomial, got {s}");
    s.num().clone()
}

#[derive(Clone)]
enum Value {
    Scalar(ParamScalar),
    Poly(XPoly),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
    vars: Arc<VarSet>,
    params: Arc<VarSet>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, vars: Arc<VarSet>, params: Arc<VarSet>) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
            vars,
            params,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AlgebraError> {
        Err(AlgebraError::Expr {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.bump();
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn parse_full(mut self) -> Result<Value, AlgebraError> {
        let v = self.parse_sum()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.err("trailing input");
        }
        Ok(v)
    }

    fn parse_sum(&mut self) -> Result<Value, AlgebraError> {
        let mut acc = self.parse_product()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    let rhs = self.parse_product()?;
                    acc = self.combine(acc, rhs, Op::Add)?;
                }
                Some(b'-') => {
                    self.bump();
                    let rhs = self.parse_product()?;
                    acc = self.combine(acc, rhs, Op::Sub)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_product(&mut self) -> Result<Value, AlgebraError> {
        let mut acc = self.parse_unary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    let rhs = self.parse_unary()?;
                    acc = self.combine(acc, rhs, Op::Mul)?;
                }
                Some(b'/') => {
                    self.bump();
                    let rhs = self.parse_unary()?;
                    acc = self.combine(acc, rhs, Op::Div)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Value, AlgebraError> {
        self.skip_ws();
        if self.peek() == Some(b'-') {
            self.bump();
            let v = self.parse_unary()?;
            return Ok(match v {
                Value::Scalar(s) => Value::Scalar(s.neg()),
                Value::Poly(p) => Value::Poly(p.neg()),
            });
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Value, AlgebraError> {
        let base = self.parse_atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.bump();
            self.skip_ws();
            let e = self.parse_uint()?;
            return Ok(match base {
                Value::Scalar(s) => {
                    let mut acc = ParamScalar::one(self.params.clone());
                    for _ in 0..e {
                        acc = acc.mul(&s);
                    }
                    Value::Scalar(acc)
                }
                Value::Poly(p) => Value::Poly(p.pow(e)),
            });
        }
        Ok(base)
    }

    fn parse_uint(&mut self) -> Result<u32, AlgebraError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.bump();
        }
        if start == self.pos {
            return self.err("expected an integer exponent");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| AlgebraError::Expr {
                line: self.line,
                col: self.col,
                msg: "exponent out of range".into(),
            })
    }

    fn parse_atom(&mut self) -> Result<Value, AlgebraError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let v = self.parse_sum()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                Ok(v)
            }
            Some(b'0'..=b'9') => {
                let start = self.pos;
                while matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.bump();
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                Ok(Value::Scalar(ParamScalar::from_rational(
                    self.params.clone(),
                    BigRational::from(n),
                )))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'')
                {
                    self.bump();
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if let Some(i) = self.vars.position(name) {
                    Ok(Value::Poly(XPoly::var(
                        self.vars.clone(),
                        self.params.clone(),
                        i,
                    )))
                } else if let Some(i) = self.params.position(name) {
                    Ok(Value::Scalar(ParamScalar::symbol(self.params.clone(), i)))
                } else {
                    self.err(format!("unknown symbol `{name}`"))
                }
            }
            Some(c) => self.err(format!("unexpected character `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn combine(&self, a: Value, b: Value, op: Op) -> Result<Value, AlgebraError> {
        use Value::*;
        let promote = |s: ParamScalar| XPoly::from_scalar(self.vars.clone(), s);
        Ok(match (op, a, b) {
            (Op::Add, Scalar(a), Scalar(b)) => Scalar(a.add(&b)),
            (Op::Sub, Scalar(a), Scalar(b)) => Scalar(a.sub(&b)),
            (Op::Mul, Scalar(a), Scalar(b)) => Scalar(a.mul(&b)),
            (Op::Div, Scalar(a), Scalar(b)) => Scalar(a.div(&b)?),
            (Op::Div, Poly(a), Scalar(b)) => Poly(a.scale(&b.inverse()?)),
            (Op::Div, _, Poly(_)) => {
                return self.err("division by an expression in the concentration variables")
            }
            (Op::Add, a, b) => Poly(to_poly(a, promote).add(&to_poly(b, promote))),
            (Op::Sub, a, b) => Poly(to_poly(a, promote).sub(&to_poly(b, promote))),
            (Op::Mul, a, b) => Poly(to_poly(a, promote).mul(&to_poly(b, promote))),
        })
    }
}

fn to_poly(v: Value, promote: impl Fn(ParamScalar) -> XPoly) -> XPoly {
    match v {
        Value::Poly(p) => p,
        Value::Scalar(s) => promote(s),
    }
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_expression() {
        let x = VarSet::new(["x1", "x2"]);
        let k = VarSet::new(["k1", "k2"]);
        let f = parse_xpoly("k1/(k1 + k2)*x1*x2 - x2^2 + 3", &x, &k).unwrap();
        assert_eq!(f.num_terms(), 3);
        assert_eq!(f.render(), "k1/(k1 + k2)*x1*x2 - x2^2 + 3");
    }

    #[test]
    fn division_by_variable_rejected() {
        let x = VarSet::new(["x1"]);
        let k = VarSet::new(["k1"]);
        assert!(parse_xpoly("k1/x1", &x, &k).is_err());
    }

    #[test]
    fn unknown_symbol_rejected() {
        let x = VarSet::new(["x1"]);
        let k = VarSet::new(["k1"]);
        let err = parse_xpoly("x1 + z", &x, &k).unwrap_err();
        assert!(matches!(err, AlgebraError::Expr { .. }));
    }

    #[test]
    fn render_parse_roundtrip() {
        let x = VarSet::new(["x1", "x2", "x3"]);
        let k = VarSet::new(["k1", "k2"]);
        for s in [
            "x1^2 - k2/(2*k1)*x1*x2",
            "-k1*x1*x3 + k2*x3",
            "(k1 + k2)*x1 - 1/2*x2",
            "k1^2/(k1*k2 + k2^2)*x1 + k2",
        ] {
            let f = parse_xpoly(s, &x, &k).unwrap();
            let again = parse_xpoly(&f.render(), &x, &k).unwrap();
            assert_eq!(f, again, "roundtrip failed for `{s}`");
        }
    }
}
