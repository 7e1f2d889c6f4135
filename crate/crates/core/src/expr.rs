//! Arithmetic expression syntax shared by every polynomial-like input.
//!
//! Grammar: sums and differences of products; `*`, `/` and juxtaposition
//! multiply or divide; `^` takes a signed integer exponent.

use std::collections::HashMap;
use std::sync::Arc;

use crate::element::TruncatedElement;
use crate::error::ParseError;
use crate::laurent::LaurentPoly;
use crate::scalar::Scalar;
use crate::torus::{RingContext, TorusCoefficient};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(String, usize),
    Var(String, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64, usize),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_ascii_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            out.push((Tok::Num(src[start..i].to_string()), start));
        } else if ch.is_ascii_alphabetic() || ch == '_' || ch == '@' {
            let start = i;
            i += 1;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^()".contains(ch) {
            out.push((Tok::Op(ch), i));
            i += 1;
        } else {
            return Err(ParseError::new(i, format!("unexpected character `{ch}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Op('/')) {
                let at = self.here();
                self.pos += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
            } else if matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        let at = self.here();
        self.pos += 1;
        let paren = self.eat('(');
        let sign = if self.eat('-') {
            -1
        } else {
            self.eat('+');
            1
        };
        let n = match self.peek() {
            Some(Tok::Num(s)) => s
                .parse::<i64>()
                .map_err(|_| ParseError::new(self.here(), "exponent must be an integer"))?,
            _ => return Err(ParseError::new(self.here(), "expected integer exponent")),
        };
        self.pos += 1;
        if paren && !self.eat(')') {
            return Err(ParseError::new(self.here(), "expected `)`"));
        }
        Ok(Expr::Pow(Box::new(base), sign * n, at))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.here();
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Num(s), p)) => {
                self.pos += 1;
                Ok(Expr::Num(s, p))
            }
            Some((Tok::Ident(s), p)) => {
                self.pos += 1;
                Ok(Expr::Var(s, p))
            }
            Some((Tok::Op('('), _)) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(ParseError::new(self.here(), "expected `)`"));
                }
                Ok(e)
            }
            Some((Tok::Op(c), _)) => Err(ParseError::new(at, format!("unexpected `{c}`"))),
            None => Err(ParseError::new(at, "unexpected end of input")),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ParseError::new(p.here(), "trailing input"));
    }
    Ok(e)
}

/// A ring an expression can be evaluated in.
pub trait Evaluator {
    type Value: Clone;
    fn literal(&self, text: &str, pos: usize) -> Result<Self::Value, ParseError>;
    fn variable(&self, name: &str, pos: usize) -> Result<Self::Value, ParseError>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn neg(&self, a: Self::Value) -> Self::Value;
    fn div(&self, a: Self::Value, b: Self::Value, pos: usize) -> Result<Self::Value, ParseError>;
    fn pow(&self, a: Self::Value, e: i64, pos: usize) -> Result<Self::Value, ParseError>;
}

pub fn evaluate<E: Evaluator>(ev: &E, e: &Expr) -> Result<E::Value, ParseError> {
    Ok(match e {
        Expr::Num(s, p) => ev.literal(s, *p)?,
        Expr::Var(s, p) => ev.variable(s, *p)?,
        Expr::Neg(a) => ev.neg(evaluate(ev, a)?),
        Expr::Add(a, b) => ev.add(evaluate(ev, a)?, evaluate(ev, b)?),
        Expr::Sub(a, b) => ev.sub(evaluate(ev, a)?, evaluate(ev, b)?),
        Expr::Mul(a, b) => ev.mul(evaluate(ev, a)?, evaluate(ev, b)?),
        Expr::Div(a, b, p) => ev.div(evaluate(ev, a)?, evaluate(ev, b)?, *p)?,
        Expr::Pow(a, n, p) => ev.pow(evaluate(ev, a)?, *n, *p)?,
    })
}

fn literal<C: Scalar>(s: &str, pos: usize) -> Result<C, ParseError> {
    C::parse_literal(s).ok_or_else(|| ParseError::new(pos, format!("bad number `{s}`")))
}

/// Evaluates into Laurent polynomials over named variables, with optional
/// bindings of extra names to fixed polynomials.
pub struct LaurentEvaluator<'a, C> {
    names: &'a [String],
    bindings: HashMap<String, LaurentPoly<C>>,
}

impl<'a, C: Scalar> LaurentEvaluator<'a, C> {
    pub fn new(names: &'a [String]) -> Self {
        LaurentEvaluator { names, bindings: HashMap::new() }
    }

    pub fn bind(mut self, name: &str, value: LaurentPoly<C>) -> Self {
        self.bindings.insert(name.to_string(), value);
        self
    }
}

impl<C: Scalar> Evaluator for LaurentEvaluator<'_, C> {
    type Value = LaurentPoly<C>;

    fn literal(&self, text: &str, pos: usize) -> Result<Self::Value, ParseError> {
        Ok(LaurentPoly::constant(self.names.len(), literal(text, pos)?))
    }

    fn variable(&self, name: &str, pos: usize) -> Result<Self::Value, ParseError> {
        if let Some(v) = self.bindings.get(name) {
            return Ok(v.clone());
        }
        match self.names.iter().position(|n| n == name) {
            Some(i) => Ok(LaurentPoly::var(self.names.len(), i)),
            None => Err(ParseError::new(pos, format!("unknown variable `{name}`"))),
        }
    }

    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value {
        a.add(&b)
    }

    fn sub(&self, a: Self::Value, b: Self::Value) -> Self::Value {
        a.sub(&b)
    }

    fn mul(&self, a: Self::Value, b: Self::Value) -> Self::Value {
        a.mul(&b)
    }

    fn neg(&self, a: Self::Value) -> Self::Value {
        a.neg()
    }

    fn div(&self, a: Self::Value, b: Self::Value, pos: usize) -> Result<Self::Value, ParseError> {
        a.div_exact(&b).ok_or_else(|| ParseError::new(pos, "division is not exact"))
    }

    fn pow(&self, a: Self::Value, e: i64, pos: usize) -> Result<Self::Value, ParseError> {
        let n = u32::try_from(e.unsigned_abs()).map_err(|_| ParseError::new(pos, "exponent too large"))?;
        if e >= 0 {
            return Ok(a.pow(n));
        }
        let (m, c) = a
            .as_monomial()
            .ok_or_else(|| ParseError::new(pos, "negative power of a non-monomial"))?;
        let inv = LaurentPoly::monomial(m.iter().map(|x| -x).collect(), C::one() / c.clone());
        Ok(inv.pow(n))
    }
}

pub fn parse_laurent<C: Scalar>(src: &str, names: &[String]) -> Result<LaurentPoly<C>, ParseError> {
    evaluate(&LaurentEvaluator::new(names), &parse_expr(src)?)
}

/// Evaluates into R^k: `x`, `y`, `z`, `t = xyz` and the torus variables.
pub struct ElementEvaluator<'a, C> {
    pub ctx: &'a Arc<RingContext<C>>,
    pub order: u32,
}

impl<C: Scalar> Evaluator for ElementEvaluator<'_, C> {
    type Value = TruncatedElement<C>;

    fn literal(&self, text: &str, pos: usize) -> Result<Self::Value, ParseError> {
        Ok(TruncatedElement::scalar(self.ctx, self.order, literal(text, pos)?))
    }

    fn variable(&self, name: &str, pos: usize) -> Result<Self::Value, ParseError> {
        let (ctx, k) = (self.ctx, self.order);
        Ok(match name {
            "x" => TruncatedElement::x(ctx, k),
            "y" => TruncatedElement::y(ctx, k),
            "z" => TruncatedElement::z(ctx, k),
            "t" => TruncatedElement::t(ctx, k),
            _ => match ctx.torus_names().iter().position(|n| *n == name) {
                Some(i) => TruncatedElement::constant(
                    ctx,
                    k,
                    TorusCoefficient::from_poly(ctx, LaurentPoly::var(ctx.ntorus(), i)),
                ),
                None => return Err(ParseError::new(pos, format!("unknown variable `{name}`"))),
            },
        })
    }

    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value {
        a + b
    }

    fn sub(&self, a: Self::Value, b: Self::Value) -> Self::Value {
        a - b
    }

    fn mul(&self, a: Self::Value, b: Self::Value) -> Self::Value {
        a * b
    }

    fn neg(&self, a: Self::Value) -> Self::Value {
        -a
    }

    fn div(&self, a: Self::Value, b: Self::Value, pos: usize) -> Result<Self::Value, ParseError> {
        let inv = b.invert().map_err(|e| ParseError::new(pos, e.to_string()))?;
        Ok(a * inv)
    }

    fn pow(&self, a: Self::Value, e: i64, pos: usize) -> Result<Self::Value, ParseError> {
        a.pow(e).map_err(|err| ParseError::new(pos, err.to_string()))
    }
}

pub fn parse_element<C: Scalar>(
    src: &str,
    ctx: &Arc<RingContext<C>>,
    order: u32,
) -> Result<TruncatedElement<C>, ParseError> {
    evaluate(&ElementEvaluator { ctx, order }, &parse_expr(src)?)
}

/// Builds a ring context from torus variable names and unit texts.
pub fn parse_context<C: Scalar>(
    torus: &[String],
    units: &[String],
) -> Result<Arc<RingContext<C>>, ParseError> {
    let polys = units
        .iter()
        .map(|u| parse_laurent(u, torus))
        .collect::<Result<Vec<_>, _>>()?;
    RingContext::new(torus.to_vec(), polys).map_err(|e| ParseError::new(0, e.to_string()))
}
