//! Elements of the truncated ring R^k = S_f[x,y,z] / ((xyz - t) + (x,y,z)^{k+1}).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::RingError;
use crate::laurent::{render_monomial, LaurentPoly};
use crate::scalar::Scalar;
use crate::torus::{RingContext, TorusCoefficient};

/// Exponents of x, y, z. Ordered lexicographically on (a, b, c).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScatterExponent {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl ScatterExponent {
    pub const ZERO: ScatterExponent = ScatterExponent { a: 0, b: 0, c: 0 };

    pub fn new(a: u32, b: u32, c: u32) -> Self {
        ScatterExponent { a, b, c }
    }

    pub fn degree(&self) -> u32 {
        self.a + self.b + self.c
    }

    /// Projection to the normal plane: x ↦ (-1,0), y ↦ (0,-1), z ↦ (1,1).
    pub fn projection(&self) -> (i64, i64) {
        let (a, b, c) = (self.a as i64, self.b as i64, self.c as i64);
        (c - a, c - b)
    }

    pub fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(ScatterExponent {
            a: self.a.checked_add(o.a)?,
            b: self.b.checked_add(o.b)?,
            c: self.c.checked_add(o.c)?,
        })
    }

    /// The unique monomial of the given degree and projection, if any.
    pub fn from_projection(m: (i64, i64), degree: u32) -> Option<Self> {
        let s = degree as i64 + m.0 + m.1;
        if s < 0 || s % 3 != 0 {
            return None;
        }
        let c = s / 3;
        let (a, b) = (c - m.0, c - m.1);
        if a < 0 || b < 0 {
            return None;
        }
        Some(ScatterExponent::new(a as u32, b as u32, c as u32))
    }

    pub fn is_pure_t(&self) -> bool {
        self.a == self.b && self.b == self.c
    }

    pub fn render(&self) -> String {
        render_monomial(&[self.a as i32, self.b as i32, self.c as i32], &["x", "y", "z"])
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedElement<C> {
    ctx: Arc<RingContext<C>>,
    order: u32,
    terms: BTreeMap<ScatterExponent, TorusCoefficient<C>>,
}

impl<C: Scalar> PartialEq for TruncatedElement<C> {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.ctx.same_ring(&other.ctx) && self.terms == other.terms
    }
}

impl<C: Scalar> TruncatedElement<C> {
    pub fn zero(ctx: &Arc<RingContext<C>>, order: u32) -> Self {
        TruncatedElement { ctx: ctx.clone(), order, terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<RingContext<C>>, order: u32) -> Self {
        Self::constant(ctx, order, TorusCoefficient::one(ctx))
    }

    pub fn constant(ctx: &Arc<RingContext<C>>, order: u32, c: TorusCoefficient<C>) -> Self {
        Self::monomial(ctx, order, ScatterExponent::ZERO, c)
    }

    pub fn scalar(ctx: &Arc<RingContext<C>>, order: u32, c: C) -> Self {
        Self::constant(ctx, order, TorusCoefficient::scalar(ctx, c))
    }

    pub fn monomial(ctx: &Arc<RingContext<C>>, order: u32, e: ScatterExponent, c: TorusCoefficient<C>) -> Self {
        let mut r = Self::zero(ctx, order);
        r.add_term(e, c);
        r
    }

    pub fn x(ctx: &Arc<RingContext<C>>, order: u32) -> Self {
        Self::monomial(ctx, order, ScatterExponent::new(1, 0, 0), TorusCoefficient::one(ctx))
    }

    pub fn y(ctx: &Arc<RingContext<C>>, order: u32) -> Self {
        Self::monomial(ctx, order, ScatterExponent::new(0, 1, 0), TorusCoefficient::one(ctx))
    }

    pub fn z(ctx: &Arc<RingContext<C>>, order: u32) -> Self {
        Self::monomial(ctx, order, ScatterExponent::new(0, 0, 1), TorusCoefficient::one(ctx))
    }

    /// t = xyz.
    pub fn t(ctx: &Arc<RingContext<C>>, order: u32) -> Self {
        Self::monomial(ctx, order, ScatterExponent::new(1, 1, 1), TorusCoefficient::one(ctx))
    }

    pub fn from_terms(
        ctx: &Arc<RingContext<C>>,
        order: u32,
        terms: impl IntoIterator<Item = (ScatterExponent, TorusCoefficient<C>)>,
    ) -> Self {
        let mut r = Self::zero(ctx, order);
        for (e, c) in terms {
            r.add_term(e, c);
        }
        r
    }

    pub fn ctx(&self) -> &Arc<RingContext<C>> {
        &self.ctx
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<ScatterExponent, TorusCoefficient<C>> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&ScatterExponent::ZERO).is_some_and(TorusCoefficient::is_one)
    }

    pub fn coeff(&self, e: &ScatterExponent) -> TorusCoefficient<C> {
        self.terms.get(e).cloned().unwrap_or_else(|| TorusCoefficient::zero(&self.ctx))
    }

    pub fn constant_part(&self) -> TorusCoefficient<C> {
        self.coeff(&ScatterExponent::ZERO)
    }

    /// Adds a term, dropping it if its degree exceeds the order.
    pub fn add_term(&mut self, e: ScatterExponent, c: TorusCoefficient<C>) {
        if e.degree() > self.order || c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            None => {
                self.terms.insert(e, c);
            }
            Some(old) => {
                let s = old.add(&c, &self.ctx);
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
        }
    }

    /// Terms of exactly the given total degree.
    pub fn degree_part(&self, d: u32) -> Self {
        TruncatedElement {
            ctx: self.ctx.clone(),
            order: self.order,
            terms: self.terms.iter().filter(|(e, _)| e.degree() == d).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// Re-labels the order, discarding terms above it.
    pub fn truncate(&self, order: u32) -> Self {
        TruncatedElement {
            ctx: self.ctx.clone(),
            order,
            terms: self.terms.iter().filter(|(e, _)| e.degree() <= order).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    fn check(&self, other: &Self) -> Result<(), RingError> {
        if self.order != other.order || !self.ctx.same_ring(&other.ctx) {
            Err(RingError::Mismatch)
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(*e, c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let k = self.order;
        let mut rhs: Vec<_> = other.terms.iter().collect();
        rhs.sort_by_key(|(e, _)| e.degree());
        let mut acc: BTreeMap<ScatterExponent, TorusCoefficient<C>> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            let room = k - e1.degree();
            for (e2, c2) in &rhs {
                if e2.degree() > room {
                    break;
                }
                let e = ScatterExponent { a: e1.a + e2.a, b: e1.b + e2.b, c: e1.c + e2.c };
                let p = c1.mul(c2, &self.ctx);
                match acc.get_mut(&e) {
                    Some(v) => *v = v.add_unreduced(&p, &self.ctx),
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .map(|(e, c)| (e, c.normalized(&self.ctx)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        TruncatedElement { ctx: self.ctx.clone(), order: k, terms }
    }

    fn neg_ref(&self) -> Self {
        TruncatedElement {
            ctx: self.ctx.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &TorusCoefficient<C>) -> Self {
        let mut r = Self::zero(&self.ctx, self.order);
        for (e, v) in &self.terms {
            r.add_term(*e, v.mul(c, &self.ctx));
        }
        r
    }

    pub fn scale_scalar(&self, c: &C) -> Self {
        let mut r = Self::zero(&self.ctx, self.order);
        for (e, v) in &self.terms {
            r.add_term(*e, v.scale(c));
        }
        r
    }

    /// Multiplies by the monomial x^a y^b z^c.
    pub fn shift(&self, s: ScatterExponent) -> Self {
        let mut r = Self::zero(&self.ctx, self.order);
        for (e, v) in &self.terms {
            if let Some(e2) = e.checked_add(&s) {
                r.add_term(e2, v.clone());
            }
        }
        r
    }

    /// Inverse via the geometric series around the constant part.
    pub fn invert(&self) -> Result<Self, RingError> {
        let u = self.constant_part();
        let uinv = u
            .inverse(&self.ctx)
            .ok_or_else(|| RingError::NotInvertible(u.render(&self.ctx)))?;
        let one = Self::one(&self.ctx, self.order);
        let nil = &self.scale(&uinv) - &one;
        let mut s = one.clone();
        for _ in 0..self.order {
            s = &one - &(&nil * &s);
        }
        Ok(s.scale(&uinv))
    }

    pub fn pow(&self, e: i64) -> Result<Self, RingError> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut result = Self::one(&self.ctx, self.order);
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &b;
            }
            n >>= 1;
            if n > 0 {
                b = &b * &b;
            }
        }
        Ok(result)
    }

    /// Highest declared-unit power appearing in any denominator.
    pub fn max_denominator_power(&self) -> u32 {
        self.terms
            .values()
            .flat_map(|c| c.denominator_powers().iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Canonical text, terms ordered lexicographically by (a, b, c).
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let (neg, body) = render_term(e, c, &self.ctx);
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// The first non-constant term of lowest degree, or the whole text if constant.
    pub fn leading_term(&self) -> String {
        let lead = self.terms.iter().filter(|(e, _)| e.degree() > 0).min_by_key(|(e, _)| e.degree());
        match lead {
            Some((e, c)) => {
                let (neg, body) = render_term(e, c, &self.ctx);
                if neg {
                    format!("-{body}")
                } else {
                    body
                }
            }
            None => self.render(),
        }
    }
}

fn render_term<C: Scalar>(e: &ScatterExponent, c: &TorusCoefficient<C>, ctx: &RingContext<C>) -> (bool, String) {
    let mono = e.render();
    let simple = if c.has_denominator() { None } else { c.numerator().as_monomial() };
    if let Some((te, k)) = simple {
        let neg = k.is_neg();
        let abs = if neg { -k.clone() } else { k.clone() };
        let mut parts = Vec::new();
        let tm = render_monomial(te, &ctx.torus_names());
        if !abs.is_one() || (tm.is_empty() && mono.is_empty()) {
            parts.push(abs.to_string());
        }
        if !tm.is_empty() {
            parts.push(tm);
        }
        if !mono.is_empty() {
            parts.push(mono);
        }
        return (neg, parts.join("*"));
    }
    let coeff = c.render(ctx);
    let coeff = if c.has_denominator() { coeff } else { format!("({coeff})") };
    if mono.is_empty() {
        (false, coeff)
    } else {
        (false, format!("{coeff}*{mono}"))
    }
}

impl<C: Scalar> fmt::Display for TruncatedElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<C: Scalar> $tr<&TruncatedElement<C>> for &TruncatedElement<C> {
            type Output = TruncatedElement<C>;
            fn $m(self, rhs: &TruncatedElement<C>) -> TruncatedElement<C> {
                self.$checked(rhs).expect("ring mismatch")
            }
        }
        impl<C: Scalar> $tr for TruncatedElement<C> {
            type Output = TruncatedElement<C>;
            fn $m(self, rhs: TruncatedElement<C>) -> TruncatedElement<C> {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<C: Scalar> Neg for &TruncatedElement<C> {
    type Output = TruncatedElement<C>;
    fn neg(self) -> TruncatedElement<C> {
        self.neg_ref()
    }
}

impl<C: Scalar> Neg for TruncatedElement<C> {
    type Output = TruncatedElement<C>;
    fn neg(self) -> TruncatedElement<C> {
        self.neg_ref()
    }
}

/// Convenience: a coefficient that is a Laurent polynomial in the torus variables.
pub fn torus_coeff<C: Scalar>(ctx: &RingContext<C>, p: LaurentPoly<C>) -> TorusCoefficient<C> {
    TorusCoefficient::from_poly(ctx, p)
}
