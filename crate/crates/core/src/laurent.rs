//! Sparse multivariate Laurent polynomials.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::scalar::Scalar;

/// Exponent vector of a Laurent monomial.
pub type Exponent = Vec<i32>;

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<C> {
    nvars: usize,
    terms: BTreeMap<Exponent, C>,
}

impl<C: Scalar> LaurentPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exp: Exponent, c: C) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { nvars, terms }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, C::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, C> {
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
            && self.terms.iter().all(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    pub fn coeff(&self, e: &[i32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.nvars])
    }

    /// The single term, if the polynomial is a nonzero monomial.
    pub fn as_monomial(&self) -> Option<(&Exponent, &C)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, e: Exponent, c: C) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * k.clone())).collect(),
        }
    }

    /// Multiplies by the monomial x^shift.
    pub fn shift(&self, shift: &[i32]) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (add_exp(e, shift), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                r.add_term(add_exp(e1, e2), c1.clone() * c2.clone());
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Componentwise minimum exponent; `None` for the zero polynomial.
    pub fn min_exponent(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let mut m = it.next()?.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        Some(m)
    }

    pub fn max_exponent(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let mut m = it.next()?.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).max(*b);
            }
        }
        Some(m)
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Exponent, &C)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d` in the Laurent ring, or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        if let Some((de, dc)) = d.as_monomial() {
            let inv: Vec<i32> = de.iter().map(|x| -x).collect();
            let k = C::one() / dc.clone();
            return Some(self.shift(&inv).scale(&k));
        }
        let ms = self.min_exponent()?;
        let md = d.min_exponent()?;
        let neg = |v: &Exponent| v.iter().map(|x| -x).collect::<Vec<_>>();
        let mut p = self.shift(&neg(&ms));
        let dd = d.shift(&neg(&md));
        let (lde, ldc) = dd.leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut q = Self::zero(self.nvars);
        while let Some((pe, pc)) = p.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            let qe = sub_exp(&pe, &lde);
            if qe.iter().any(|&x| x < 0) {
                return None;
            }
            let qc = pc / ldc.clone();
            let t = Self::monomial(qe, qc);
            p = p.sub(&t.mul(&dd));
            q = q.add(&t);
        }
        let back: Vec<i32> = ms.iter().zip(&md).map(|(a, b)| a - b).collect();
        Some(q.shift(&back))
    }

    /// Substitutes every variable by a Laurent polynomial in another ring.
    /// Negative exponents require the image to be a monomial.
    pub fn substitute(&self, images: &[LaurentPoly<C>], target_nvars: usize) -> Option<LaurentPoly<C>> {
        let mut r = LaurentPoly::zero(target_nvars);
        for (e, c) in &self.terms {
            let mut t = LaurentPoly::constant(target_nvars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let img = if k > 0 {
                    images[i].pow(k as u32)
                } else {
                    let (me, mc) = images[i].as_monomial()?;
                    let inv = LaurentPoly::monomial(me.iter().map(|x| -x).collect(), C::one() / mc.clone());
                    inv.pow((-k) as u32)
                };
                t = t.mul(&img);
            }
            r = r.add(&t);
        }
        Some(r)
    }

    /// Renders with the given variable names, terms in ascending exponent order.
    pub fn render(&self, names: &[&str]) -> String {
        self.render_ordered(names, self.terms.iter())
    }

    /// Renders with terms in descending exponent order.
    pub fn render_desc(&self, names: &[&str]) -> String {
        self.render_ordered(names, self.terms.iter().rev())
    }

    fn render_ordered<'a>(
        &'a self,
        names: &[&str],
        terms: impl Iterator<Item = (&'a Exponent, &'a C)>,
    ) -> String {
        let mut s = String::new();
        for (i, (e, c)) in terms.enumerate() {
            let neg = c.is_neg();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = render_monomial(e, names);
            if mono.is_empty() {
                write!(s, "{abs}").unwrap();
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                write!(s, "{abs}*{mono}").unwrap();
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

pub fn render_monomial(e: &[i32], names: &[&str]) -> String {
    let mut parts = Vec::new();
    for (k, &x) in e.iter().enumerate() {
        match x {
            0 => {}
            1 => parts.push(names[k].to_string()),
            _ => parts.push(format!("{}^{}", names[k], x)),
        }
    }
    parts.join("*")
}

pub fn add_exp(a: &[i32], b: &[i32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_exp(a: &[i32], b: &[i32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
