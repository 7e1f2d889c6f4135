//! Rays around a joint, wall-crossing automorphisms and loop composition.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::element::{ScatterExponent, TruncatedElement};
use crate::error::{DiagramError, RingError};
use crate::grading::PLGrading;
use crate::lattice::{angle_cmp, angle_cmp_from, cross, dot, is_primitive, same_direction, V2};
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::torus::{RingContext, TorusCoefficient};

/// Projections of x, y, z to the normal plane.
pub const GENERATOR_PROJECTIONS: [V2; 3] = [(-1, 0), (0, -1), (1, 1)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RayKind {
    Wall,
    Slab,
}

impl RayKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RayKind::Wall => "wall",
            RayKind::Slab => "slab",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Counterclockwise,
    Clockwise,
}

#[derive(Clone, Debug)]
pub struct Ray<C> {
    direction: V2,
    kind: RayKind,
    function: TruncatedElement<C>,
}

impl<C: Scalar> Ray<C> {
    /// Every monomial must project into Z·direction; walls start with 1,
    /// slabs with a unit of the coefficient ring.
    pub fn new(direction: V2, kind: RayKind, function: TruncatedElement<C>) -> Result<Self, DiagramError> {
        if !is_primitive(direction) {
            return Err(DiagramError::NotPrimitive(direction.0, direction.1));
        }
        let bad = |s: String| Err(DiagramError::BadFunction(direction.0, direction.1, s));
        for e in function.terms().keys() {
            if cross(e.projection(), direction) != 0 {
                return bad(format!("monomial {} is not collinear with the ray", e.render()));
            }
            if kind == RayKind::Wall && e.degree() > 0 && e.projection() == (0, 0) {
                return bad(format!("monomial {} has no direction", e.render()));
            }
        }
        let c0 = function.constant_part();
        match kind {
            RayKind::Wall if !c0.is_one() => return bad("wall function must have constant term 1".into()),
            RayKind::Slab if c0.inverse(function.ctx()).is_none() => {
                return bad("slab function must have an invertible constant part".into())
            }
            _ => {}
        }
        Ok(Ray { direction, kind, function })
    }

    pub fn wall(direction: V2, function: TruncatedElement<C>) -> Result<Self, DiagramError> {
        Self::new(direction, RayKind::Wall, function)
    }

    pub fn slab(direction: V2, function: TruncatedElement<C>) -> Result<Self, DiagramError> {
        Self::new(direction, RayKind::Slab, function)
    }

    pub fn direction(&self) -> V2 {
        self.direction
    }

    pub fn kind(&self) -> RayKind {
        self.kind
    }

    pub fn function(&self) -> &TruncatedElement<C> {
        &self.function
    }

    /// Primitive normal that is negative on the side entered.
    pub fn normal(&self, side: Orientation) -> V2 {
        let n = (self.direction.1, -self.direction.0);
        match side {
            Orientation::Counterclockwise => n,
            Orientation::Clockwise => (-n.0, -n.1),
        }
    }

    pub(crate) fn with_function(&self, function: TruncatedElement<C>) -> Self {
        Ray { direction: self.direction, kind: self.kind, function }
    }
}

/// Powers of a ray function, computed on demand.
struct PowerCache<C> {
    base: TruncatedElement<C>,
    inverse: Option<TruncatedElement<C>>,
    powers: HashMap<i64, TruncatedElement<C>>,
}

impl<C: Scalar> PowerCache<C> {
    fn new(base: TruncatedElement<C>) -> Self {
        PowerCache { base, inverse: None, powers: HashMap::new() }
    }

    fn get(&mut self, e: i64) -> Result<TruncatedElement<C>, RingError> {
        if let Some(p) = self.powers.get(&e) {
            return Ok(p.clone());
        }
        let p = if e == 0 {
            TruncatedElement::one(self.base.ctx(), self.base.order())
        } else if e > 0 {
            &self.get(e - 1)? * &self.base
        } else {
            if self.inverse.is_none() {
                self.inverse = Some(self.base.invert()?);
            }
            let inv = self.inverse.clone().unwrap();
            &self.get(e + 1)? * &inv
        };
        self.powers.insert(e, p.clone());
        Ok(p)
    }
}

fn cross_with_cache<C: Scalar>(
    n: V2,
    f: &TruncatedElement<C>,
    cache: &mut PowerCache<C>,
) -> Result<TruncatedElement<C>, RingError> {
    let mut groups: BTreeMap<i64, TruncatedElement<C>> = BTreeMap::new();
    for (e, c) in f.terms() {
        let k = dot(n, e.projection());
        groups
            .entry(k)
            .or_insert_with(|| TruncatedElement::zero(f.ctx(), f.order()))
            .add_term(*e, c.clone());
    }
    let mut out = TruncatedElement::zero(f.ctx(), f.order());
    for (k, g) in groups {
        let part = if k == 0 { g } else { &g * &cache.get(k)? };
        out = &out + &part;
    }
    Ok(out)
}

/// The automorphism z^m ↦ f^{⟨n, m̄⟩} z^m of crossing `ray` in the given orientation.
pub fn cross_ray<C: Scalar>(
    ray: &Ray<C>,
    f: &TruncatedElement<C>,
    side: Orientation,
) -> Result<TruncatedElement<C>, RingError> {
    let mut cache = PowerCache::new(ray.function.truncate(f.order()));
    cross_with_cache(ray.normal(side), f, &mut cache)
}

/// Images of x, y, z under a composition, stored as factors F_g with g ↦ F_g·g.
#[derive(Clone, Debug)]
pub struct LoopResult<C> {
    pub factors: [TruncatedElement<C>; 3],
}

impl<C: Scalar> LoopResult<C> {
    pub fn identity(ctx: &Arc<RingContext<C>>, order: u32) -> Self {
        let one = TruncatedElement::one(ctx, order);
        LoopResult { factors: [one.clone(), one.clone(), one] }
    }

    pub fn image(&self, g: usize) -> TruncatedElement<C> {
        let s = [ScatterExponent::new(1, 0, 0), ScatterExponent::new(0, 1, 0), ScatterExponent::new(0, 0, 1)];
        self.factors[g].shift(s[g])
    }

    pub fn image_x(&self) -> TruncatedElement<C> {
        self.image(0)
    }

    pub fn image_y(&self) -> TruncatedElement<C> {
        self.image(1)
    }

    pub fn image_z(&self) -> TruncatedElement<C> {
        self.image(2)
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(TruncatedElement::is_one)
    }

    /// Composes with the crossing of one ray (applied after the current map).
    pub fn then_cross(&self, ray: &Ray<C>, side: Orientation) -> Result<Self, RingError> {
        let order = self.factors[0].order();
        let mut cache = PowerCache::new(ray.function.truncate(order));
        let n = ray.normal(side);
        let mut factors = self.factors.clone();
        for (g, fg) in factors.iter_mut().enumerate() {
            let moved = cross_with_cache(n, fg, &mut cache)?;
            let e = dot(n, GENERATOR_PROJECTIONS[g]);
            *fg = &moved * &cache.get(e)?;
        }
        Ok(LoopResult { factors })
    }
}

/// One monomial of a failed consistency check.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscrepancyTerm<C> {
    pub degree: u32,
    pub exponent: ScatterExponent,
    pub direction: V2,
    pub triple: [TorusCoefficient<C>; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub struct Discrepancy<C> {
    pub terms: Vec<DiscrepancyTerm<C>>,
}

impl<C: Scalar> Discrepancy<C> {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Collects F_g − 1 by monomial, optionally skipping pure t-powers.
    pub fn from_loop(l: &LoopResult<C>, allow_pure_t: bool) -> Self {
        let ctx = l.factors[0].ctx().clone();
        let mut by_mono: BTreeMap<(u32, ScatterExponent), [TorusCoefficient<C>; 3]> = BTreeMap::new();
        for (g, f) in l.factors.iter().enumerate() {
            for (e, c) in f.terms() {
                if *e == ScatterExponent::ZERO {
                    let d = c.sub(&TorusCoefficient::one(&ctx), &ctx);
                    if d.is_zero() {
                        continue;
                    }
                    by_mono.entry((0, *e)).or_insert_with(|| zero3(&ctx))[g] = d;
                    continue;
                }
                if allow_pure_t && e.is_pure_t() {
                    continue;
                }
                by_mono.entry((e.degree(), *e)).or_insert_with(|| zero3(&ctx))[g] = c.clone();
            }
        }
        let terms = by_mono
            .into_iter()
            .map(|((degree, exponent), triple)| DiscrepancyTerm {
                degree,
                exponent,
                direction: exponent.projection(),
                triple,
            })
            .collect();
        Discrepancy { terms }
    }

    pub fn lowest_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.degree).min()
    }
}

fn zero3<C: Scalar>(ctx: &RingContext<C>) -> [TorusCoefficient<C>; 3] {
    [TorusCoefficient::zero(ctx), TorusCoefficient::zero(ctx), TorusCoefficient::zero(ctx)]
}

#[derive(Clone, Debug)]
pub struct ScatteringDiagram<C> {
    grading: PLGrading,
    ctx: Arc<RingContext<C>>,
    rays: Vec<Ray<C>>,
    reference: V2,
}

impl<C: Scalar> ScatteringDiagram<C> {
    pub fn new(
        grading: PLGrading,
        ctx: Arc<RingContext<C>>,
        rays: Vec<Ray<C>>,
        reference: V2,
    ) -> Result<Self, DiagramError> {
        if reference == (0, 0) {
            return Err(DiagramError::ReferenceOnRay(0, 0));
        }
        let d = ScatteringDiagram { grading, ctx, rays: Vec::new(), reference };
        let mut d = d;
        for r in rays {
            d.push_ray(r)?;
        }
        Ok(d)
    }

    pub fn empty(grading: PLGrading, ctx: Arc<RingContext<C>>, reference: V2) -> Self {
        ScatteringDiagram { grading, ctx, rays: Vec::new(), reference }
    }

    /// Adds a ray, enforcing the diagram invariants.
    pub fn push_ray(&mut self, r: Ray<C>) -> Result<(), DiagramError> {
        let (a, b) = r.direction;
        if !r.function.ctx().same_ring(&self.ctx) {
            return Err(DiagramError::Ring(RingError::Mismatch));
        }
        if r.kind == RayKind::Wall {
            if let Some(e) = r.function.terms().keys().find(|e| e.degree() > 0 && self.grading.tau_order(e) <= 0) {
                return Err(DiagramError::BadFunction(a, b, format!("monomial {} has no positive order", e.render())));
            }
        }
        if same_direction(r.direction, self.reference) {
            return Err(DiagramError::ReferenceOnRay(self.reference.0, self.reference.1));
        }
        for other in &self.rays {
            if other.direction != r.direction {
                continue;
            }
            match (other.kind, r.kind) {
                (RayKind::Slab, RayKind::Slab) => return Err(DiagramError::DuplicateSlab(a, b)),
                (RayKind::Slab, RayKind::Wall) | (RayKind::Wall, RayKind::Slab) => {
                    return Err(DiagramError::WallOnSlab(a, b))
                }
                _ => {}
            }
        }
        self.rays.push(r);
        Ok(())
    }

    pub fn grading(&self) -> &PLGrading {
        &self.grading
    }

    pub fn ctx(&self) -> &Arc<RingContext<C>> {
        &self.ctx
    }

    pub fn rays(&self) -> &[Ray<C>] {
        &self.rays
    }

    pub fn reference(&self) -> V2 {
        self.reference
    }

    pub fn with_reference(&self, reference: V2) -> Result<Self, DiagramError> {
        Self::new(self.grading.clone(), self.ctx.clone(), self.rays.clone(), reference)
    }

    pub fn slab_index(&self, direction: V2) -> Option<usize> {
        self.rays.iter().position(|r| r.kind == RayKind::Slab && r.direction == direction)
    }

    pub(crate) fn replace_function(&mut self, i: usize, f: TruncatedElement<C>) {
        self.rays[i] = self.rays[i].with_function(f);
    }

    /// Rays in the order a counterclockwise loop from the reference meets them.
    pub fn loop_order(&self) -> Vec<&Ray<C>> {
        let mut v: Vec<&Ray<C>> = self.rays.iter().collect();
        v.sort_by(|a, b| angle_cmp_from(self.reference, a.direction, b.direction));
        v
    }

    /// Composes the crossings of all rays counterclockwise, starting just after the reference.
    pub fn loop_compose(&self, order: u32) -> Result<LoopResult<C>, RingError> {
        let mut l = LoopResult::identity(&self.ctx, order);
        for ray in self.loop_order() {
            l = l.then_cross(ray, Orientation::Counterclockwise)?;
        }
        Ok(l)
    }

    pub fn is_consistent(&self, order: u32, allow_pure_t: bool) -> Result<(bool, Discrepancy<C>), RingError> {
        let l = self.loop_compose(order)?;
        let d = Discrepancy::from_loop(&l, allow_pure_t);
        Ok((d.is_empty(), d))
    }

    /// Multiplies together walls with identical direction and sorts rays by angle.
    pub fn merge_parallel(&self) -> Self {
        let mut out: Vec<Ray<C>> = Vec::new();
        for r in &self.rays {
            if r.kind == RayKind::Wall {
                if let Some(existing) = out.iter_mut().find(|o| o.kind == RayKind::Wall && o.direction == r.direction) {
                    let order = existing.function.order().max(r.function.order());
                    let prod = &existing.function.truncate(order) * &r.function.truncate(order);
                    existing.function = prod;
                    continue;
                }
            }
            out.push(r.clone());
        }
        out.sort_by(|a, b| {
            angle_cmp(a.direction, b.direction).then_with(|| (a.kind == RayKind::Wall).cmp(&(b.kind == RayKind::Wall)))
        });
        ScatteringDiagram { grading: self.grading.clone(), ctx: self.ctx.clone(), rays: out, reference: self.reference }
    }
}

impl<C: Scalar> PartialEq for Ray<C> {
    fn eq(&self, o: &Self) -> bool {
        self.direction == o.direction && self.kind == o.kind && self.function == o.function
    }
}

impl<C: Scalar> PartialEq for LoopResult<C> {
    fn eq(&self, o: &Self) -> bool {
        self.factors == o.factors
    }
}

impl<C: Scalar> PartialEq for ScatteringDiagram<C> {
    fn eq(&self, o: &Self) -> bool {
        self.grading == o.grading && self.ctx.same_ring(&o.ctx) && self.rays == o.rays && self.reference == o.reference
    }
}
