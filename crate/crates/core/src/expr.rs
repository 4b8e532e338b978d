//! Parser for the polynomial text grammar used by the case data file and CLI.
//!
//! Grammar (standard precedence, `^` binds tightest):
//!   expr   := term (('+' | '-') term)*
//!   term   := factor ('*' factor)*
//!   factor := atom ('^' uint)?
//!   atom   := '(' expr ')' | '-' atom | rational | ident
//!   rational := uint ('/' uint)?
//!
//! `x`, `y`, `t` are the polynomial variables and `z` is the primitive N-th
//! root of unity of the session field. Other identifiers resolve through the
//! supplied environment.

use crate::cyclo::{CycField, CycNum, Rational};
use crate::error::Error;
use crate::poly::Poly;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::HashMap;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub enum Value {
    Scalar(CycNum),
    Poly(Poly),
}

impl Value {
    pub fn into_poly(self) -> Poly {
        match self {
            Value::Poly(p) => p,
            Value::Scalar(c) => Poly::constant(c),
        }
    }

    pub fn into_scalar(self) -> Result<CycNum, Error> {
        match self {
            Value::Scalar(c) => Ok(c),
            Value::Poly(p) => {
                if p.is_zero() {
                    Ok(CycNum::zero(p.field()))
                } else if p.num_terms() == 1 && p.total_degree() == Some(0) {
                    Ok(p.terms().next().unwrap().1.clone())
                } else {
                    Err(Error::Parse(format!(
                        "expected a scalar, found polynomial `{}`",
                        p.render()
                    )))
                }
            }
        }
    }
}

#[derive(Clone)]
pub struct Env {
    pub field: Arc<CycField>,
    pub bindings: HashMap<String, Value>,
}

impl Env {
    pub fn new(field: &Arc<CycField>) -> Env {
        Env {
            field: field.clone(),
            bindings: HashMap::new(),
        }
    }

    pub fn bind(&mut self, name: &str, v: Value) {
        self.bindings.insert(name.to_string(), v);
    }

    pub fn bind_scalar(&mut self, name: &str, c: CycNum) {
        self.bind(name, Value::Scalar(c));
    }

    pub fn bind_poly(&mut self, name: &str, p: Poly) {
        self.bind(name, Value::Poly(p));
    }

    fn lookup(&self, name: &str) -> Result<Value, Error> {
        match name {
            "x" => Ok(Value::Poly(Poly::var_x(&self.field))),
            "y" => Ok(Value::Poly(Poly::var_y(&self.field))),
            "t" => Ok(Value::Poly(Poly::var_t(&self.field))),
            "z" => Ok(Value::Scalar(CycNum::root_of_unity(&self.field, 1))),
            _ => self
                .bindings
                .get(name)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("unknown identifier `{}`", name))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, Error> {
    let mut toks = Vec::new();
    let bytes: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = bytes[start..i].iter().collect();
                toks.push(Tok::Num(BigInt::from_str(&text).unwrap()));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(bytes[start..i].iter().collect()));
            }
            other => {
                return Err(Error::Parse(format!("unexpected character `{}`", other)));
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    env: &'a Env,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Value, Error> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek() {
            let negate = match op {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.next();
            let rhs = self.term()?;
            acc = combine(acc, rhs, |a, b| if negate { a.sub(&b) } else { a.add(&b) });
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value, Error> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.next();
            let rhs = self.factor()?;
            acc = combine(acc, rhs, |a, b| a.mul(&b));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Value, Error> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.next();
            let e = match self.next() {
                Some(Tok::Num(n)) => n,
                other => {
                    return Err(Error::Parse(format!(
                        "expected integer exponent, found {:?}",
                        other
                    )))
                }
            };
            let e: u32 = e
                .try_into()
                .map_err(|_| Error::Parse("exponent out of range".into()))?;
            return Ok(match base {
                Value::Scalar(c) => Value::Scalar(c.pow(e as i64)),
                Value::Poly(p) => Value::Poly(p.pow(e)),
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Value, Error> {
        match self.next() {
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(v),
                    _ => Err(Error::Parse("missing `)`".into())),
                }
            }
            Some(Tok::Minus) => {
                let v = self.atom()?;
                Ok(match v {
                    Value::Scalar(c) => Value::Scalar(-&c),
                    Value::Poly(p) => Value::Poly(p.neg()),
                })
            }
            Some(Tok::Num(n)) => {
                // rational literal p/q
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.next();
                    match self.next() {
                        Some(Tok::Num(d)) => Ok(Value::Scalar(CycNum::from_rational(
                            &self.env.field,
                            BigRational::new(n, d),
                        ))),
                        other => Err(Error::Parse(format!(
                            "expected denominator, found {:?}",
                            other
                        ))),
                    }
                } else {
                    Ok(Value::Scalar(CycNum::from_rational(
                        &self.env.field,
                        BigRational::from(n),
                    )))
                }
            }
            Some(Tok::Ident(name)) => self.env.lookup(&name),
            other => Err(Error::Parse(format!("unexpected token {:?}", other))),
        }
    }
}

fn combine(a: Value, b: Value, f: impl Fn(Poly, Poly) -> Poly) -> Value {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => {
            let p = f(Poly::constant(x), Poly::constant(y));
            // keep scalars scalar so `^` on them stays exact for inverses
            if p.is_zero() {
                Value::Scalar(CycNum::zero(p.field()))
            } else if p.num_terms() == 1 && p.total_degree() == Some(0) {
                Value::Scalar(p.terms().next().unwrap().1.clone())
            } else {
                Value::Poly(p)
            }
        }
        (x, y) => Value::Poly(f(x.into_poly(), y.into_poly())),
    }
}

/// Parse an expression against an environment.
pub fn parse(input: &str, env: &Env) -> Result<Value, Error> {
    let toks = tokenize(input)?;
    let mut p = Parser { toks, pos: 0, env };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input at token {} in `{}`",
            p.pos, input
        )));
    }
    Ok(v)
}

/// Parse a polynomial (promoting scalars to constants).
pub fn parse_poly(input: &str, env: &Env) -> Result<Poly, Error> {
    Ok(parse(input, env)?.into_poly())
}

/// Parse a scalar; errors if the expression has positive degree.
pub fn parse_scalar(input: &str, env: &Env) -> Result<CycNum, Error> {
    parse(input, env)?.into_scalar()
}

/// Convenience: parse rational `p/q` or integer text into a Rational.
pub fn parse_rational(input: &str) -> Result<Rational, Error> {
    let input = input.trim();
    match input.split_once('/') {
        Some((n, d)) => Ok(BigRational::new(
            BigInt::from_str(n.trim()).map_err(|e| Error::Parse(e.to_string()))?,
            BigInt::from_str(d.trim()).map_err(|e| Error::Parse(e.to_string()))?,
        )),
        None => Ok(BigRational::from(
            BigInt::from_str(input).map_err(|e| Error::Parse(e.to_string()))?,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let f = CycField::new(24);
        let env = Env::new(&f);
        let p = parse_poly("x^5*y - x*y^5", &env).unwrap();
        assert_eq!(p.render(), "x^5*y - x*y^5");
        let q = parse_poly(&p.render(), &env).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parse_scalars_and_env() {
        let f = CycField::new(24);
        let mut env = Env::new(&f);
        let i = parse_scalar("z^6", &env).unwrap();
        assert!((&i * &i).is_int(-1));
        env.bind_scalar("i", i);
        let c = parse_scalar("(1 - i) * 1/2", &env).unwrap();
        assert_eq!(c.render(), "-1/2*z^6 + 1/2");
        let w = parse_scalar("z^8", &env).unwrap();
        env.bind_scalar("w", w.clone());
        assert_eq!(parse_scalar("w^3", &env).unwrap(), CycNum::one(&f));
    }

    #[test]
    fn cyclotomic_coefficient_roundtrip() {
        let f = CycField::new(24);
        let env = Env::new(&f);
        let p = parse_poly("(1/2*z^3 - 1/2*z)*x^2*y + 3*y^2", &env).unwrap();
        let q = parse_poly(&p.render(), &env).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn errors() {
        let f = CycField::new(24);
        let env = Env::new(&f);
        assert!(parse_poly("x +", &env).is_err());
        assert!(parse_poly("q*x", &env).is_err());
        assert!(parse_scalar("x+1", &env).is_err());
    }
}
