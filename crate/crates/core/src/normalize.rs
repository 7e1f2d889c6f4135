//! Removal of pure t-powers from the logarithm of a slab function.

use std::collections::BTreeMap;
use std::fmt;

use crate::element::{ScatterExponent, TruncatedElement};
use crate::error::{NormalizeError, ParseError};
use crate::family::{FamilyIdeal, FamilyVars};
use crate::laurent::LaurentPoly;
use crate::scalar::Scalar;
use crate::torus::TorusCoefficient;
use crate::Rational;

/// g(t) = Σ a_l t^l.
#[derive(Clone, Debug, PartialEq)]
pub struct PureTSeries<C> {
    pub coefficients: BTreeMap<u32, C>,
    pub order: u32,
}

impl<C: Scalar> PureTSeries<C> {
    pub fn zero(order: u32) -> Self {
        PureTSeries { coefficients: BTreeMap::new(), order }
    }

    pub fn coeff(&self, l: u32) -> C {
        self.coefficients.get(&l).cloned().unwrap_or_else(C::zero)
    }

    /// a_1, …, a_K in order, zeros included.
    pub fn to_vec(&self) -> Vec<C> {
        (1..=self.order).map(|l| self.coeff(l)).collect()
    }

    pub fn truncate(&self, order: u32) -> Self {
        PureTSeries {
            coefficients: self.coefficients.range(..=order).map(|(k, v)| (*k, v.clone())).collect(),
            order: order.min(self.order),
        }
    }

    /// g as an element of R^k (t = xyz).
    pub fn to_element(&self, like: &TruncatedElement<C>) -> TruncatedElement<C> {
        let ctx = like.ctx();
        let mut g = TruncatedElement::zero(ctx, like.order());
        for (&l, a) in &self.coefficients {
            g.add_term(ScatterExponent::new(l, l, l), TorusCoefficient::scalar(ctx, a.clone()));
        }
        g
    }

    /// Comma-separated coefficients, empty when every a_l vanishes.
    pub fn render_list(&self) -> String {
        if self.coefficients.is_empty() {
            return String::new();
        }
        self.to_vec().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
    }
}

impl<C: Scalar> fmt::Display for PureTSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = LaurentPoly::from_terms(1, self.coefficients.iter().map(|(l, c)| (vec![*l as i32], c.clone())));
        f.write_str(&p.render(&["t"]))
    }
}

fn nilpotent_part<C: Scalar>(f: &TruncatedElement<C>) -> Result<TruncatedElement<C>, NormalizeError> {
    let c0 = f.constant_part();
    if !c0.is_one() {
        return Err(NormalizeError::ConstantTerm(c0.render(f.ctx())));
    }
    Ok(f - &TruncatedElement::one(f.ctx(), f.order()))
}

/// log f = Σ_{j≥1} (−1)^{j+1} n^j / j for f = 1 + n, truncated at `order`.
pub fn log_series<C: Scalar>(f: &TruncatedElement<C>, order: u32) -> Result<TruncatedElement<C>, NormalizeError> {
    let n = nilpotent_part(&f.truncate(order))?;
    let mut out = TruncatedElement::zero(f.ctx(), order);
    let mut power = n.clone();
    for j in 1..=order as i64 {
        if power.is_zero() {
            break;
        }
        let k = C::from_int(if j % 2 == 1 { 1 } else { -1 }) / C::from_int(j);
        out = &out + &power.scale_scalar(&k);
        power = &power * &n;
    }
    Ok(out)
}

/// exp n = Σ n^j / j! for nilpotent n.
pub fn exp_series<C: Scalar>(n: &TruncatedElement<C>) -> Result<TruncatedElement<C>, NormalizeError> {
    let c0 = n.constant_part();
    if !c0.is_zero() {
        return Err(NormalizeError::ConstantTerm(c0.render(n.ctx())));
    }
    let mut out = TruncatedElement::one(n.ctx(), n.order());
    let mut term = out.clone();
    for j in 1..=n.order() as i64 {
        term = (&term * n).scale_scalar(&(C::one() / C::from_int(j)));
        if term.is_zero() {
            break;
        }
        out = &out + &term;
    }
    Ok(out)
}

/// The coefficient of t^l = (xyz)^l with zero torus exponent.
pub fn pure_t_coefficient<C: Scalar>(f: &TruncatedElement<C>, l: u32) -> Result<C, NormalizeError> {
    let c = f.coeff(&ScatterExponent::new(l, l, l));
    if c.has_denominator() {
        return Err(NormalizeError::Denominator(l));
    }
    Ok(c.numerator().constant_term())
}

/// The unique g(t) with no t^l (1 ≤ l ≤ K) in log(f + g(t)); a_l is fixed at order 3l.
pub fn normalize_slab<C: Scalar>(f: &TruncatedElement<C>, k: u32) -> Result<PureTSeries<C>, NormalizeError> {
    let base = f.truncate(3 * k);
    nilpotent_part(&base)?;
    let mut g = PureTSeries::zero(k);
    for l in 1..=k {
        let h = &base.truncate(3 * l) + &g.to_element(&base.truncate(3 * l));
        let a = -pure_t_coefficient(&log_series(&h, 3 * l)?, l)?;
        if !a.is_zero() {
            g.coefficients.insert(l, a);
        }
    }
    Ok(g)
}

/// A family whose generators mention a slot `@unit` for the normalized unit 1 + g(t).
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyTemplate {
    pub vars: FamilyVars,
    pub generators: Vec<String>,
}

pub const UNIT_SLOT: &str = "@unit";

/// Substitutes 1 + g(t), truncated at `t_order`, into the slot.
pub fn apply_normalization(
    template: &FamilyTemplate,
    g: &PureTSeries<Rational>,
    t_order: u32,
) -> Result<FamilyIdeal, ParseError> {
    let all = template.vars.all();
    let ti = template.vars.t_index();
    let mut unit = LaurentPoly::one(all.len());
    for (l, a) in g.truncate(t_order).coefficients {
        let mut e = vec![0; all.len()];
        e[ti] = l as i32;
        unit.add_term(e, a);
    }
    let ev = crate::expr::LaurentEvaluator::new(&all).bind(UNIT_SLOT, unit);
    let mut out = FamilyIdeal::new(template.vars.clone());
    for src in &template.generators {
        let p = crate::expr::evaluate(&ev, &crate::expr::parse_expr(src)?)?;
        out.push(&p);
    }
    Ok(out)
}
