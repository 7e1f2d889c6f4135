//! Families of projective relations over the rationals: canonical generator
//! normalization, deterministic rendering and set comparison.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;
use crate::expr::parse_laurent;
use crate::laurent::LaurentPoly;
use crate::Rational;

/// Variables of a family, split by role. Exponent vectors follow the order
/// vertices, then `t`, then parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyVars {
    pub vertices: Vec<String>,
    pub params: Vec<String>,
}

impl FamilyVars {
    pub fn new(vertices: Vec<String>, params: Vec<String>) -> Self {
        FamilyVars { vertices, params }
    }

    pub fn all(&self) -> Vec<String> {
        let mut v = self.vertices.clone();
        v.push("t".into());
        v.extend(self.params.iter().cloned());
        v
    }

    pub fn len(&self) -> usize {
        self.vertices.len() + 1 + self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t_index(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|v| v == name).map(|i| i + self.vertices.len() + 1)
    }

    pub fn parse(&self, src: &str) -> Result<LaurentPoly<Rational>, ParseError> {
        parse_laurent(src, &self.all())
    }

    pub fn render_monomial(&self, e: &[i32]) -> String {
        let names = self.all();
        let nv = self.vertices.len();
        let mut order: Vec<usize> = ((nv + 1)..names.len()).collect();
        order.push(nv);
        order.extend(0..nv);
        let mut parts = Vec::new();
        for i in order {
            match e[i] {
                0 => {}
                1 => parts.push(names[i].clone()),
                k => parts.push(format!("{}^{}", names[i], k)),
            }
        }
        parts.join("*")
    }

    /// Terms by ascending power of `t`, then descending exponent vector.
    pub fn ordered_terms<'a>(&self, p: &'a LaurentPoly<Rational>) -> Vec<(&'a Vec<i32>, &'a Rational)> {
        let ti = self.t_index();
        let mut terms: Vec<_> = p.terms().iter().rev().collect();
        terms.sort_by_key(|(e, _)| e[ti]);
        terms
    }

    pub fn render(&self, p: &LaurentPoly<Rational>) -> String {
        let terms = self.ordered_terms(p).into_iter();
        let mut s = String::new();
        for (i, (e, c)) in terms.enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.render_monomial(e);
            if mono.is_empty() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{abs}*{mono}"));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }

    /// Clears monomial denominators and common monomial factors, makes the
    /// coefficients coprime integers and the first term positive.
    pub fn normalize(&self, p: &LaurentPoly<Rational>) -> LaurentPoly<Rational> {
        let Some(min) = p.min_exponent() else {
            return p.clone();
        };
        let neg: Vec<i32> = min.iter().map(|x| -x).collect();
        let q = primitive_part(&p.shift(&neg));
        if self.ordered_terms(&q).first().is_some_and(|(_, c)| c.is_negative()) {
            q.neg()
        } else {
            q
        }
    }
}

/// Scales to coprime integer coefficients with a positive lex-leading term.
pub fn primitive_part(p: &LaurentPoly<Rational>) -> LaurentPoly<Rational> {
    let mut den = BigInt::one();
    for c in p.terms().values() {
        den = den.lcm(c.denom());
    }
    let mut g = BigInt::zero();
    for c in p.terms().values() {
        g = g.gcd(&(c.numer() * (&den / c.denom())));
    }
    if g.is_zero() {
        return p.clone();
    }
    let lead_neg = p.terms().iter().next_back().is_some_and(|(_, c)| c.is_negative());
    let k = Rational::new(den, g);
    p.scale(&if lead_neg { -k } else { k })
}

/// A list of relations over Q in vertex, t and parameter variables.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyIdeal {
    pub vars: FamilyVars,
    pub generators: Vec<LaurentPoly<Rational>>,
}

impl FamilyIdeal {
    pub fn new(vars: FamilyVars) -> Self {
        FamilyIdeal { vars, generators: Vec::new() }
    }

    /// Adds a normalized generator unless it is zero or already present.
    pub fn push(&mut self, p: &LaurentPoly<Rational>) -> bool {
        let n = self.vars.normalize(p);
        if n.is_zero() || self.generators.contains(&n) {
            return false;
        }
        self.generators.push(n);
        true
    }

    pub fn from_texts(vars: FamilyVars, texts: &[&str]) -> Result<Self, ParseError> {
        let mut f = FamilyIdeal::new(vars);
        for t in texts {
            let p = f.vars.parse(t)?;
            f.push(&p);
        }
        Ok(f)
    }

    /// Canonical rendering of every generator, sorted.
    pub fn canonical_set(&self) -> BTreeSet<String> {
        self.generators.iter().map(|g| self.vars.render(g)).collect()
    }

    pub fn same_generators(&self, other: &FamilyIdeal) -> bool {
        self.canonical_set() == other.canonical_set()
    }

    /// Sets t = 0 in every generator.
    pub fn at_t_zero(&self) -> Vec<LaurentPoly<Rational>> {
        let ti = self.vars.t_index();
        self.generators
            .iter()
            .map(|g| {
                LaurentPoly::from_terms(g.nvars(), g.terms().iter().filter(|(e, _)| e[ti] == 0).map(|(e, c)| (e.clone(), c.clone())))
            })
            .collect()
    }

    /// Substitutes a value for a parameter.
    pub fn specialize(&self, param: &str, value: &Rational) -> Option<FamilyIdeal> {
        let i = self.vars.param_index(param)?;
        let mut out = FamilyIdeal::new(self.vars.clone());
        for g in &self.generators {
            let mut p = LaurentPoly::zero(g.nvars());
            for (e, c) in g.terms() {
                let mut e2 = e.clone();
                let k = e2[i];
                e2[i] = 0;
                let mut v = c.clone();
                for _ in 0..k.max(0) {
                    v *= value.clone();
                }
                p.add_term(e2, v);
            }
            out.push(&p);
        }
        Some(out)
    }
}

impl fmt::Display for FamilyIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.generators {
            writeln!(f, "{}", self.vars.render(g))?;
        }
        Ok(())
    }
}

/// All 2×2 minors of a 2×n matrix of polynomials, in column-pair order.
pub fn two_by_two_minors(rows: [&[LaurentPoly<Rational>]; 2]) -> Vec<LaurentPoly<Rational>> {
    let n = rows[0].len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(rows[0][i].mul(&rows[1][j]).sub(&rows[0][j].mul(&rows[1][i])));
        }
    }
    out
}
