//! Piecewise-linear gradings on the normal plane and τ-order bookkeeping.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::element::{ScatterExponent, TruncatedElement};
use crate::error::{DiagramError, RingError};
use crate::laurent::LaurentPoly;
use crate::lattice::{cross, gcd, V2};
use crate::scalar::Scalar;
use crate::torus::{RingContext, TorusCoefficient};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingCone {
    pub gens: [V2; 2],
    pub functional: V2,
}

impl GradingCone {
    pub fn eval(&self, m: V2) -> i64 {
        self.functional.0 * m.0 + self.functional.1 * m.1
    }

    /// Generators ordered counterclockwise.
    fn ccw(&self) -> (V2, V2) {
        let [g0, g1] = self.gens;
        if cross(g0, g1) > 0 {
            (g0, g1)
        } else {
            (g1, g0)
        }
    }

    pub fn contains(&self, m: V2) -> bool {
        let (g0, g1) = self.ccw();
        cross(g0, m) >= 0 && cross(m, g1) >= 0
    }
}

/// The piecewise-linear function φ̄ given by a complete fan of cones with linear functionals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PLGrading {
    pub cones: Vec<GradingCone>,
}

impl PLGrading {
    /// Checks primitivity, strict convexity, that the cones tile the plane,
    /// agreement on shared rays and convexity of φ̄.
    pub fn new(cones: Vec<GradingCone>) -> Result<Self, DiagramError> {
        let err = |s: String| Err(DiagramError::Grading(s));
        if cones.is_empty() {
            return err("no cones".into());
        }
        for c in &cones {
            for g in c.gens {
                if gcd(g.0, g.1) != 1 {
                    return err(format!("generator ({}, {}) is not primitive", g.0, g.1));
                }
            }
            if cross(c.gens[0], c.gens[1]) == 0 {
                return err("cone is not strictly convex".into());
            }
        }
        let mut ordered: Vec<&GradingCone> = cones.iter().collect();
        ordered.sort_by(|a, b| crate::lattice::angle_cmp(a.ccw().0, b.ccw().0));
        let n = ordered.len();
        for i in 0..n {
            let a = ordered[i];
            let b = ordered[(i + 1) % n];
            let (_, a1) = a.ccw();
            let (b0, b1) = b.ccw();
            if a1 != b0 {
                return err("cones do not tile the plane".into());
            }
            if a.eval(a1) != b.eval(b0) {
                return err(format!("functionals disagree on ({}, {})", a1.0, a1.1));
            }
            if b.eval(b1) < a.eval(b1) {
                return err("grading is not convex".into());
            }
        }
        Ok(PLGrading { cones })
    }

    /// φ̄(m): the maximum of the cone functionals, valid by convexity.
    pub fn eval(&self, m: V2) -> i64 {
        self.cones.iter().map(|c| c.eval(m)).max().unwrap_or(0)
    }

    pub fn is_normalized(&self) -> bool {
        self.eval((-1, 0)) == 0 && self.eval((0, 0)) == 0 && self.eval((1, 1)) >= 1
    }

    /// max over cones of (c − φ_σ(c−a, c−b)).
    pub fn tau_order(&self, e: &ScatterExponent) -> i64 {
        let m = e.projection();
        self.cones
            .iter()
            .map(|cone| e.c as i64 - cone.eval(m))
            .max()
            .unwrap_or(0)
    }

    /// The minimum of the τ-order over the real simplex a+b+c = 1.
    pub fn min_order_slope(&self) -> BigRational {
        // pieces as linear forms in (a, b, c)
        let pieces: Vec<[i64; 3]> = self
            .cones
            .iter()
            .map(|cone| {
                let (p, q) = cone.functional;
                [p, q, 1 - p - q]
            })
            .collect();
        let mut eqs: Vec<[i64; 3]> = vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                eqs.push([0, 1, 2].map(|k| pieces[i][k] - pieces[j][k]));
            }
        }
        let value = |pt: &[BigRational; 3]| {
            pieces
                .iter()
                .map(|l| (0..3).fold(BigRational::zero(), |s, k| s + BigRational::from_int(l[k]) * pt[k].clone()))
                .max()
                .unwrap()
        };
        let mut best: Option<BigRational> = None;
        for i in 0..eqs.len() {
            for j in i + 1..eqs.len() {
                let rows = [eqs[i], eqs[j], [1, 1, 1]];
                if let Some(pt) = solve3(rows, [0, 0, 1]) {
                    if pt.iter().all(|v| !v.is_negative()) {
                        let v = value(&pt);
                        if best.as_ref().is_none_or(|b| v < *b) {
                            best = Some(v);
                        }
                    }
                }
            }
        }
        best.unwrap_or_else(BigRational::zero)
    }

    /// The largest total degree of a monomial whose τ-order is at most `k_prime`:
    /// truncating above it keeps every monomial visible at that order.
    /// `None` when the order is not bounded below by a positive multiple of the degree.
    pub fn order_to_degree(&self, k_prime: u32) -> Option<u32> {
        let mu = self.min_order_slope();
        if !mu.is_positive() {
            return None;
        }
        let bound = (BigRational::from_int(k_prime as i64) / mu).floor().to_integer();
        let bound: u32 = bound.try_into().ok()?;
        let mut best = 0;
        for d in 0..=bound {
            let visible = (0..=d).any(|a| {
                (0..=d - a).any(|b| self.tau_order(&ScatterExponent::new(a, b, d - a - b)) <= k_prime as i64)
            });
            if visible {
                best = d;
            }
        }
        Some(best)
    }
}

fn solve3(rows: [[i64; 3]; 3], rhs: [i64; 3]) -> Option<[BigRational; 3]> {
    let mut m: Vec<Vec<BigRational>> = (0..3)
        .map(|i| {
            let mut r: Vec<BigRational> = rows[i].iter().map(|&v| BigRational::from_int(v)).collect();
            r.push(BigRational::from_int(rhs[i]));
            r
        })
        .collect();
    for col in 0..3 {
        let piv = (col..3).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        for r in 0..3 {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone() / m[col][col].clone();
                let pivot = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(pivot).skip(col) {
                    *x -= p * f.clone();
                }
            }
        }
    }
    Some([0, 1, 2].map(|i| m[i][3].clone() / m[i][i].clone()))
}

/// An exponent (m, u, h) of the toric monoid: m in the normal plane, u on the torus, h the height.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMonomial {
    pub m: V2,
    pub u: Vec<i32>,
    pub h: i64,
}

impl LatticeMonomial {
    pub fn new(m: V2, u: Vec<i32>, h: i64) -> Self {
        LatticeMonomial { m, u, h }
    }

    pub fn add(&self, o: &Self) -> Self {
        LatticeMonomial {
            m: (self.m.0 + o.m.0, self.m.1 + o.m.1),
            u: self.u.iter().zip(&o.u).map(|(a, b)| a + b).collect(),
            h: self.h + o.h,
        }
    }

    /// Membership in P: h ≥ φ̄(m).
    pub fn in_monoid(&self, grading: &PLGrading) -> bool {
        self.h >= grading.eval(self.m)
    }

    /// z^{(m,u,h)} ↦ x^{h−m₁} y^{h−m₂} z^h · w^u.
    pub fn embed<C: Scalar>(&self, ctx: &Arc<RingContext<C>>, order: u32) -> Result<TruncatedElement<C>, RingError> {
        let needed = self.m.0.max(self.m.1).max(0);
        if self.h < needed {
            return Err(RingError::NeedsTShift { h: self.h, needed });
        }
        let conv = |v: i64| u32::try_from(v).map_err(|_| RingError::Overflow);
        let e = ScatterExponent::new(conv(self.h - self.m.0)?, conv(self.h - self.m.1)?, conv(self.h)?);
        if self.u.len() != ctx.ntorus() {
            return Err(RingError::Mismatch);
        }
        let coeff = TorusCoefficient::from_poly(ctx, LaurentPoly::monomial(self.u.clone(), C::one()));
        Ok(TruncatedElement::monomial(ctx, order, e, coeff))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn grading_43() -> PLGrading {
        PLGrading::new(vec![
            GradingCone { gens: [(-1, 0), (-1, -3)], functional: (0, 0) },
            GradingCone { gens: [(-1, -3), (2, 3)], functional: (3, -1) },
            GradingCone { gens: [(2, 3), (-1, 0)], functional: (0, 1) },
        ])
        .unwrap()
    }

    #[test]
    fn tau_orders() {
        let g = grading_43();
        assert!(g.is_normalized());
        assert_eq!(g.tau_order(&ScatterExponent::new(2, 1, 0)), 5);
        assert_eq!(g.tau_order(&ScatterExponent::new(5, 5, 5)), 5);
        assert_eq!(g.tau_order(&ScatterExponent::new(1, 0, 0)), 3);
    }

    #[test]
    fn degree_bounds() {
        let g = grading_43();
        assert!(g.order_to_degree(5).unwrap() >= 15);
        assert!(g.order_to_degree(5).unwrap() > 3);
        assert_eq!(g.order_to_degree(0), Some(0));
    }

    #[test]
    fn rejects_bad_fans() {
        let overlapping = vec![
            GradingCone { gens: [(1, 0), (0, 1)], functional: (0, 0) },
            GradingCone { gens: [(0, 1), (-1, 0)], functional: (0, 0) },
        ];
        assert!(PLGrading::new(overlapping).is_err());
        let concave = vec![
            GradingCone { gens: [(0, -1), (1, 0)], functional: (-1, 0) },
            GradingCone { gens: [(1, 0), (0, 1)], functional: (-1, 0) },
            GradingCone { gens: [(0, 1), (-1, 0)], functional: (1, 0) },
            GradingCone { gens: [(-1, 0), (0, -1)], functional: (1, 0) },
        ];
        assert!(PLGrading::new(concave).is_err());
    }
}
