//! Order-by-order completion of a scattering diagram.

use crate::diagram::{Discrepancy, Orientation, Ray, RayKind, ScatteringDiagram, GENERATOR_PROJECTIONS};
use crate::element::{ScatterExponent, TruncatedElement};
use crate::error::ScatterError;
use crate::lattice::{angle_cmp, angle_cmp_from, dot, primitive, V2};
use crate::scalar::Scalar;
use crate::torus::TorusCoefficient;

#[derive(Clone, Debug)]
pub struct InsertedWall<C> {
    pub degree: u32,
    pub ray: Ray<C>,
}

#[derive(Clone, Debug)]
pub struct SlabCorrection<C> {
    pub degree: u32,
    pub direction: V2,
    pub term: TruncatedElement<C>,
}

#[derive(Clone, Debug)]
pub struct ResidualPureT<C> {
    pub degree: u32,
    pub exponent: ScatterExponent,
    pub triple: [TorusCoefficient<C>; 3],
}

#[derive(Clone, Debug)]
pub struct CompletionReport<C> {
    pub order: u32,
    pub inserted_walls: Vec<InsertedWall<C>>,
    pub slab_corrections: Vec<SlabCorrection<C>>,
    pub residual_pure_t: Vec<ResidualPureT<C>>,
}

impl<C: Scalar> CompletionReport<C> {
    pub fn is_trivial(&self) -> bool {
        self.inserted_walls.is_empty() && self.slab_corrections.is_empty() && self.residual_pure_t.is_empty()
    }

    /// Whether any inserted wall or slab correction divides by a declared unit.
    pub fn has_negative_unit_powers(&self) -> bool {
        self.inserted_walls.iter().any(|w| w.ray.function().max_denominator_power() > 0)
            || self.slab_corrections.iter().any(|s| s.term.max_denominator_power() > 0)
    }
}

/// Where a correction in a given direction goes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    NewWall(V2),
    Slab(usize),
}

/// The slab along −m̄ if there is one, else a new wall along −m̄.
pub fn placement<C: Scalar>(d: &ScatteringDiagram<C>, m: V2) -> Placement {
    let dir = primitive((-m.0, -m.1)).expect("nonzero direction");
    match d.slab_index(dir) {
        Some(i) => Placement::Slab(i),
        None => Placement::NewWall(dir),
    }
}

/// (⟨n, m_x⟩, ⟨n, m_y⟩, ⟨n, m_z⟩) for the counterclockwise normal of `dir`.
fn crossing_vector(dir: V2) -> [i64; 3] {
    let n = (dir.1, -dir.0);
    GENERATOR_PROJECTIONS.map(|g| dot(n, g))
}

/// The λ with triple = λ·v, if it exists.
fn proportionality<C: Scalar>(triple: &[TorusCoefficient<C>; 3], v: [i64; 3]) -> Option<TorusCoefficient<C>> {
    let i = (0..3).find(|&i| v[i] != 0)?;
    let lambda = triple[i].scale(&(C::one() / C::from_int(v[i])));
    (0..3)
        .all(|j| triple[j] == lambda.scale(&C::from_int(v[j])))
        .then_some(lambda)
}

/// The first-order effect of adding the monomial `e` (coefficient 1) at `placement`,
/// measured by looping over the degree-0 parts of the slabs only.
fn measured_effect<C: Scalar>(
    d: &ScatteringDiagram<C>,
    place: Placement,
    e: ScatterExponent,
) -> Result<[TorusCoefficient<C>; 3], ScatterError> {
    let ctx = d.ctx();
    let k = e.degree();
    let mono = TruncatedElement::monomial(ctx, k, e, TorusCoefficient::one(ctx));
    let mut probe = ScatteringDiagram::empty(d.grading().clone(), ctx.clone(), d.reference());
    for (i, r) in d.rays().iter().enumerate() {
        if r.kind() != RayKind::Slab {
            continue;
        }
        let mut f = TruncatedElement::constant(ctx, k, r.function().constant_part());
        if place == Placement::Slab(i) {
            f = &f + &mono;
        }
        probe.push_ray(Ray::slab(r.direction(), f)?)?;
    }
    if let Placement::NewWall(dir) = place {
        probe.push_ray(Ray::wall(dir, &TruncatedElement::one(ctx, k) + &mono)?)?;
    }
    let l = probe.loop_compose(k)?;
    Ok([0, 1, 2].map(|g| l.factors[g].coeff(&e)))
}

/// The unit factor a candidate monomial with projection `m` picks up from the slabs
/// crossed after it on the way back to the reference (with an extra 1/u for a slab
/// correction).
pub fn commute_past_slabs<C: Scalar>(
    d: &ScatteringDiagram<C>,
    place: Placement,
    m: V2,
) -> Result<TorusCoefficient<C>, ScatterError> {
    let ctx = d.ctx();
    let cand_dir = match place {
        Placement::NewWall(dir) => dir,
        Placement::Slab(i) => d.rays()[i].direction(),
    };
    let mut factor = TorusCoefficient::one(ctx);
    for (i, r) in d.rays().iter().enumerate() {
        if r.kind() != RayKind::Slab {
            continue;
        }
        let u = r.function().constant_part();
        if place == Placement::Slab(i) {
            factor = factor.mul(&u.inverse(ctx).expect("slab constant is a unit"), ctx);
            continue;
        }
        let after = angle_cmp_from(d.reference(), cand_dir, r.direction()) == std::cmp::Ordering::Less;
        if after {
            let n = r.normal(Orientation::Counterclockwise);
            let p = u.pow(dot(n, m), ctx).expect("slab constant is a unit");
            factor = factor.mul(&p, ctx);
        }
    }
    Ok(factor)
}

/// The coefficient of a single correction, and where it goes.
pub struct Correction<C> {
    pub placement: Placement,
    pub exponent: ScatterExponent,
    pub coefficient: TorusCoefficient<C>,
}

/// Solves for the correction cancelling one discrepancy monomial.
pub fn solve_correction<C: Scalar>(
    d: &ScatteringDiagram<C>,
    degree: u32,
    e: ScatterExponent,
    triple: &[TorusCoefficient<C>; 3],
) -> Result<Correction<C>, ScatterError> {
    let ctx = d.ctx().clone();
    let m = e.projection();
    let inconsistent = || ScatterError::InternalInconsistency { degree, m0: m.0, m1: m.1 };
    let place = placement(d, m);
    let dir = primitive((-m.0, -m.1)).expect("nonzero");
    let v = crossing_vector(dir);
    let lambda = proportionality(triple, v).ok_or_else(inconsistent)?;
    let effect = measured_effect(d, place, e)?;
    let eps = proportionality(&effect, v).ok_or_else(inconsistent)?;
    let coefficient = lambda.neg().mul(&eps.inverse(&ctx).ok_or_else(inconsistent)?, &ctx);
    Ok(Correction { placement: place, exponent: e, coefficient })
}

/// Inserts walls and corrects slabs degree by degree until the loop around the
/// joint is the identity modulo (x,y,z)^{order+1}.
pub fn complete<C: Scalar>(
    d: &ScatteringDiagram<C>,
    order: u32,
    allow_pure_t: bool,
) -> Result<(ScatteringDiagram<C>, CompletionReport<C>), ScatterError> {
    complete_through(d, order, order, allow_pure_t)
}

/// Works in R^order but only repairs degrees up to `last`.
pub fn complete_through<C: Scalar>(
    d: &ScatteringDiagram<C>,
    order: u32,
    last: u32,
    allow_pure_t: bool,
) -> Result<(ScatteringDiagram<C>, CompletionReport<C>), ScatterError> {
    let ctx = d.ctx().clone();
    let mut diagram = ScatteringDiagram::empty(d.grading().clone(), ctx.clone(), d.reference());
    for r in d.rays() {
        diagram.push_ray(Ray::new(r.direction(), r.kind(), r.function().truncate(order))?)?;
    }
    let mut report = CompletionReport {
        order,
        inserted_walls: Vec::new(),
        slab_corrections: Vec::new(),
        residual_pure_t: Vec::new(),
    };
    if !diagram.loop_compose(0)?.is_identity() {
        return Err(ScatterError::OrderZero);
    }
    for degree in 1..=last.min(order) {
        let l = diagram.loop_compose(degree)?;
        let disc = Discrepancy::from_loop(&l, true);
        if let Some(low) = disc.lowest_degree() {
            if low < degree {
                let t = disc.terms.iter().find(|t| t.degree == low).unwrap();
                return Err(ScatterError::InternalInconsistency { degree: low, m0: t.direction.0, m1: t.direction.1 });
            }
        }
        let full = Discrepancy::from_loop(&l, false);
        for t in full.terms.into_iter().filter(|t| t.degree == degree && t.exponent.is_pure_t()) {
            if !allow_pure_t {
                return Err(ScatterError::NormalizationRequired { degree });
            }
            report.residual_pure_t.push(ResidualPureT { degree, exponent: t.exponent, triple: t.triple });
        }
        let mut terms: Vec<_> = disc.terms.into_iter().filter(|t| t.degree == degree).collect();
        terms.sort_by(|a, b| {
            let da = (-a.direction.0, -a.direction.1);
            let db = (-b.direction.0, -b.direction.1);
            angle_cmp(da, db)
        });
        let mut corrections = Vec::new();
        for t in &terms {
            corrections.push(solve_correction(&diagram, degree, t.exponent, &t.triple)?);
        }
        for c in corrections {
            let term = TruncatedElement::monomial(&ctx, order, c.exponent, c.coefficient);
            match c.placement {
                Placement::NewWall(dir) => {
                    let ray = Ray::wall(dir, &TruncatedElement::one(&ctx, order) + &term)?;
                    diagram.push_ray(ray.clone())?;
                    report.inserted_walls.push(InsertedWall { degree, ray });
                }
                Placement::Slab(i) => {
                    let f = diagram.rays()[i].function() + &term;
                    let direction = diagram.rays()[i].direction();
                    diagram.replace_function(i, f);
                    report.slab_corrections.push(SlabCorrection { degree, direction, term });
                }
            }
        }
    }
    Ok((diagram, report))
}
