//! The coefficient ring: Laurent polynomials in torus variables localized at a
//! declared table of units.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::RingError;
use crate::laurent::LaurentPoly;
use crate::scalar::Scalar;

/// Torus variable names and the declared units, fixed when a ring is built.
#[derive(Clone, Debug)]
pub struct RingContext<C> {
    torus: Vec<String>,
    units: Vec<LaurentPoly<C>>,
}

impl<C: Scalar> RingContext<C> {
    /// Units must be non-monomial and pairwise coprime for reduced forms to be canonical.
    pub fn new(torus: Vec<String>, units: Vec<LaurentPoly<C>>) -> Result<Arc<Self>, RingError> {
        for (i, name) in torus.iter().enumerate() {
            if ["x", "y", "z", "t"].contains(&name.as_str()) || torus[..i].contains(name) {
                return Err(RingError::BadVariable(name.clone()));
            }
        }
        for u in &units {
            if u.nvars() != torus.len() || u.len() < 2 {
                return Err(RingError::BadUnit(u.render(&names_of(&torus))));
            }
        }
        Ok(Arc::new(RingContext { torus, units }))
    }

    /// No torus variables and no units: coefficients are plain scalars.
    pub fn plain() -> Arc<Self> {
        Arc::new(RingContext { torus: Vec::new(), units: Vec::new() })
    }

    pub fn torus_names(&self) -> Vec<&str> {
        names_of(&self.torus)
    }

    pub fn ntorus(&self) -> usize {
        self.torus.len()
    }

    pub fn units(&self) -> &[LaurentPoly<C>] {
        &self.units
    }

    pub fn unit_texts(&self) -> Vec<String> {
        let names = self.torus_names();
        self.units.iter().map(|u| u.render(&names)).collect()
    }

    pub fn same_ring(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || (self.torus == other.torus && self.units == other.units)
    }

    fn unit_pow(&self, i: usize, e: u32) -> LaurentPoly<C> {
        self.units[i].pow(e)
    }
}

fn names_of(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

/// numerator / ∏ unit_i^{den_i}, kept reduced.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusCoefficient<C> {
    num: LaurentPoly<C>,
    den: Vec<u32>,
}

impl<C: Scalar> TorusCoefficient<C> {
    pub fn zero(ctx: &RingContext<C>) -> Self {
        TorusCoefficient { num: LaurentPoly::zero(ctx.ntorus()), den: vec![0; ctx.units.len()] }
    }

    pub fn one(ctx: &RingContext<C>) -> Self {
        Self::scalar(ctx, C::one())
    }

    pub fn scalar(ctx: &RingContext<C>, c: C) -> Self {
        Self::from_poly(ctx, LaurentPoly::constant(ctx.ntorus(), c))
    }

    pub fn from_poly(ctx: &RingContext<C>, num: LaurentPoly<C>) -> Self {
        TorusCoefficient { num, den: vec![0; ctx.units.len()] }
    }

    /// Builds and reduces num / ∏ unit^den.
    pub fn new(ctx: &RingContext<C>, num: LaurentPoly<C>, den: Vec<u32>) -> Self {
        let mut c = TorusCoefficient { num, den };
        c.reduce(ctx);
        c
    }

    /// 1 / unit_i^e.
    pub fn unit_inverse(ctx: &RingContext<C>, i: usize, e: u32) -> Self {
        let mut den = vec![0; ctx.units.len()];
        den[i] = e;
        TorusCoefficient { num: LaurentPoly::one(ctx.ntorus()), den }
    }

    pub fn numerator(&self) -> &LaurentPoly<C> {
        &self.num
    }

    pub fn denominator_powers(&self) -> &[u32] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.iter().all(|&d| d == 0)
    }

    pub fn has_denominator(&self) -> bool {
        self.den.iter().any(|&d| d > 0)
    }

    fn reduce(&mut self, ctx: &RingContext<C>) {
        if self.num.is_zero() {
            self.den.iter_mut().for_each(|d| *d = 0);
            return;
        }
        for i in 0..self.den.len() {
            while self.den[i] > 0 {
                match self.num.div_exact(&ctx.units[i]) {
                    Some(q) => {
                        self.num = q;
                        self.den[i] -= 1;
                    }
                    None => break,
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        TorusCoefficient { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut r = TorusCoefficient { num: self.num.scale(k), den: self.den.clone() };
        if r.num.is_zero() {
            r.den.iter_mut().for_each(|d| *d = 0);
        }
        r
    }

    /// Sum without the final reduction step.
    pub(crate) fn add_unreduced(&self, other: &Self, ctx: &RingContext<C>) -> Self {
        if self.num.is_zero() {
            return other.clone();
        }
        if other.num.is_zero() {
            return self.clone();
        }
        let mut a = self.num.clone();
        let mut b = other.num.clone();
        let mut den = Vec::with_capacity(self.den.len());
        for i in 0..self.den.len() {
            let (da, db) = (self.den[i], other.den[i]);
            if da < db {
                a = a.mul(&ctx.unit_pow(i, db - da));
            } else if db < da {
                b = b.mul(&ctx.unit_pow(i, da - db));
            }
            den.push(da.max(db));
        }
        TorusCoefficient { num: a.add(&b), den }
    }

    pub(crate) fn normalized(mut self, ctx: &RingContext<C>) -> Self {
        self.reduce(ctx);
        self
    }

    pub fn add(&self, other: &Self, ctx: &RingContext<C>) -> Self {
        self.add_unreduced(other, ctx).normalized(ctx)
    }

    pub fn sub(&self, other: &Self, ctx: &RingContext<C>) -> Self {
        self.add(&other.neg(), ctx)
    }

    pub fn mul(&self, other: &Self, ctx: &RingContext<C>) -> Self {
        if self.num.is_zero() || other.num.is_zero() {
            return Self::zero(ctx);
        }
        let den = self.den.iter().zip(&other.den).map(|(a, b)| a + b).collect();
        let mut r = TorusCoefficient { num: self.num.mul(&other.num), den };
        if self.has_denominator() || other.has_denominator() {
            r.reduce(ctx);
        }
        r
    }

    /// Inverse in the coefficient ring: possible iff the numerator is a
    /// monomial times a product of declared units.
    pub fn inverse(&self, ctx: &RingContext<C>) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        let mut rest = self.num.clone();
        let mut stripped = vec![0u32; ctx.units.len()];
        for (i, u) in ctx.units.iter().enumerate() {
            while rest.as_monomial().is_none() {
                match rest.div_exact(u) {
                    Some(q) => {
                        rest = q;
                        stripped[i] += 1;
                    }
                    None => break,
                }
            }
        }
        let (e, c) = rest.as_monomial()?;
        let mut num = LaurentPoly::monomial(e.iter().map(|x| -x).collect(), C::one() / c.clone());
        for (i, &d) in self.den.iter().enumerate() {
            if d > 0 {
                num = num.mul(&ctx.unit_pow(i, d));
            }
        }
        Some(TorusCoefficient::new(ctx, num, stripped))
    }

    pub fn pow(&self, e: i64, ctx: &RingContext<C>) -> Option<Self> {
        let base = if e < 0 { self.inverse(ctx)? } else { self.clone() };
        let n = e.unsigned_abs() as u32;
        let den = base.den.iter().map(|d| d * n).collect();
        Some(TorusCoefficient::new(ctx, base.num.pow(n), den))
    }

    /// A monomial in the torus variables with no denominators, i.e. a scalar multiple of w^v.
    pub fn as_scalar(&self) -> Option<C> {
        if self.has_denominator() {
            return None;
        }
        if self.num.is_zero() {
            return Some(C::zero());
        }
        let (e, c) = self.num.as_monomial()?;
        e.iter().all(|&x| x == 0).then(|| c.clone())
    }

    /// Canonical text: `(num)/(unit)^e...`, or the bare numerator without denominators.
    pub fn render(&self, ctx: &RingContext<C>) -> String {
        let names = ctx.torus_names();
        let num = self.num.render(&names);
        if !self.has_denominator() {
            return num;
        }
        let mut s = format!("({num})");
        for (i, &d) in self.den.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let u = ctx.units[i].render(&names);
            if d == 1 {
                write!(s, "/({u})").unwrap();
            } else {
                write!(s, "/({u})^{d}").unwrap();
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ctx() -> Arc<RingContext<BigRational>> {
        let u = LaurentPoly::from_terms(1, [(vec![0], BigRational::from_int(1)), (vec![1], BigRational::from_int(1))]);
        RingContext::new(vec!["w".into()], vec![u]).unwrap()
    }

    #[test]
    fn unit_cancels() {
        let c = ctx();
        let u = TorusCoefficient::from_poly(&c, c.units()[0].clone());
        let inv = TorusCoefficient::unit_inverse(&c, 0, 1);
        assert!(u.mul(&inv, &c).is_one());
        assert_eq!(inv.render(&c), "(1)/(1 + w)");
    }

    #[test]
    fn canonical_after_addition() {
        let c = ctx();
        let a = TorusCoefficient::unit_inverse(&c, 0, 2);
        let w = TorusCoefficient::from_poly(&c, LaurentPoly::var(1, 0));
        let b = w.mul(&TorusCoefficient::unit_inverse(&c, 0, 2), &c);
        let s = a.add(&b, &c);
        assert_eq!(s, TorusCoefficient::unit_inverse(&c, 0, 1));
    }

    #[test]
    fn inverse_of_unit_times_monomial() {
        let c = ctx();
        let num = c.units()[0].pow(2).shift(&[1]).scale(&BigRational::from_int(-3));
        let f = TorusCoefficient::new(&c, num, vec![1]);
        let g = f.inverse(&c).unwrap();
        assert!(f.mul(&g, &c).is_one());
        let two_plus_w = TorusCoefficient::from_poly(&c, c.units()[0].add(&LaurentPoly::one(1)));
        assert!(two_plus_w.inverse(&c).is_none());
    }

    #[test]
    fn rejects_reserved_names() {
        assert!(RingContext::<BigRational>::new(vec!["t".into()], vec![]).is_err());
    }
}
