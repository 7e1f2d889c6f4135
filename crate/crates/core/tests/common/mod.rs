#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use scatterforge::element::{ScatterExponent, TruncatedElement};
use scatterforge::expr::{parse_context, parse_element};
use scatterforge::grading::{GradingCone, PLGrading};
use scatterforge::laurent::LaurentPoly;
use scatterforge::torus::TorusCoefficient;
use scatterforge::tropical::{mat_apply, mat_inv, mat_mul, Cell, Chart, Edge, Mat2, TropicalSurface, IDENTITY};
use scatterforge::{Context, Element, Rational};

pub fn config(seed: u64) -> Config {
    config_with(seed, 128)
}

pub fn config_with(seed: u64, cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Torus variable w with the unit 1 + w declared.
pub fn ctx_w() -> Arc<Context> {
    parse_context(&["w".to_string()], &["1 + w".to_string()]).unwrap()
}

pub fn plain() -> Arc<Context> {
    parse_context(&[], &[]).unwrap()
}

pub fn el(src: &str, ctx: &Arc<Context>, k: u32) -> Element {
    parse_element(src, ctx, k).unwrap()
}

pub fn cone(gens: [(i64, i64); 2], functional: (i64, i64)) -> GradingCone {
    GradingCone { gens, functional }
}

/// The grading of the three-slab example.
pub fn grading_three_slabs() -> PLGrading {
    PLGrading::new(vec![
        cone([(-1, 0), (-1, -3)], (0, 0)),
        cone([(-1, -3), (2, 3)], (3, -1)),
        cone([(2, 3), (-1, 0)], (0, 1)),
    ])
    .unwrap()
}

/// The grading of the four-slab example.
pub fn grading_four_slabs() -> PLGrading {
    PLGrading::new(vec![
        cone([(-1, 0), (0, -1)], (0, 0)),
        cone([(0, -1), (1, 1)], (1, 0)),
        cone([(1, 1), (-1, 0)], (0, 1)),
    ])
    .unwrap()
}

/// A coefficient c·w^e/(1+w)^d, or just c over the plain ring.
pub fn coefficient(ctx: &Context, c: i64, e: i32, d: u32) -> TorusCoefficient<Rational> {
    if ctx.ntorus() == 0 {
        return TorusCoefficient::scalar(ctx, q(c));
    }
    TorusCoefficient::new(ctx, LaurentPoly::monomial(vec![e], q(c)), vec![d])
}

/// Sparse elements of R^k over Q[w^±1]_{1+w}.
pub fn element(ctx: Arc<Context>, k: u32, with_denominators: bool) -> impl Strategy<Value = Element> {
    let dmax = if with_denominators { 2u32 } else { 0 };
    let term = (0..=k, 0..=k, 0..=k, -3i64..=3, -1i32..=1, 0..=dmax);
    prop::collection::vec(term, 0..5).prop_map(move |terms| {
        let mut f = TruncatedElement::zero(&ctx, k);
        for (a, b, c, coef, e, d) in terms {
            if a + b + c <= k && coef != 0 {
                f.add_term(ScatterExponent::new(a, b, c), coefficient(&ctx, coef, e, d));
            }
        }
        f
    })
}

/// 1 + n with n nilpotent: always invertible.
pub fn unipotent(ctx: Arc<Context>, k: u32, with_denominators: bool) -> impl Strategy<Value = Element> {
    let c = ctx.clone();
    element(ctx, k, with_denominators).prop_map(move |f| {
        let mut g = TruncatedElement::one(&c, k);
        for (e, coef) in f.terms() {
            if e.degree() > 0 {
                g.add_term(*e, coef.clone());
            }
        }
        g
    })
}

use scatterforge::diagram::{Ray, ScatteringDiagram};
use scatterforge::lattice::V2;

/// Slabs 1+x on (±1,0) and 1+y on (0,±1).
pub fn four_slabs(k: u32, reference: V2) -> ScatteringDiagram<Rational> {
    let ctx = plain();
    let e = |s: &str| el(s, &ctx, k);
    ScatteringDiagram::new(
        grading_four_slabs(),
        ctx.clone(),
        vec![
            Ray::slab((1, 0), e("1 + x")).unwrap(),
            Ray::slab((-1, 0), e("1 + x")).unwrap(),
            Ray::slab((0, 1), e("1 + y")).unwrap(),
            Ray::slab((0, -1), e("1 + y")).unwrap(),
        ],
        reference,
    )
    .unwrap()
}

/// Three slabs over Q[w^±1]_{1+w} and one incoming wall.
pub fn three_slabs(k: u32, reference: V2) -> ScatteringDiagram<Rational> {
    let ctx = ctx_w();
    let e = |s: &str| el(s, &ctx, k);
    ScatteringDiagram::new(
        grading_three_slabs(),
        ctx.clone(),
        vec![
            Ray::slab((-1, 0), e("1 + w + 2*x^2*y*z")).unwrap(),
            Ray::slab((-1, -3), e("1 + w - w*x*y^3")).unwrap(),
            Ray::slab((2, 3), e("1 + w + 5*x*z^3")).unwrap(),
            Ray::wall((-1, 1), e("1 + 7*x^3*y*z^2")).unwrap(),
        ],
        reference,
    )
    .unwrap()
}

pub const DIRECTIONS: [V2; 12] =
    [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1), (2, 1), (1, 2), (-1, -3), (2, 3)];

/// 1 + c·w^u·z^m with m̄ = −s·direction, raised by `lift` powers of t.
pub fn wall_function(ctx: &Arc<Context>, k: u32, d: V2, s: i64, lift: u32, c: i64, u: i32) -> Element {
    let m = (-s * d.0, -s * d.1);
    let h = m.0.max(m.1).max(0) + lift as i64;
    let e = ScatterExponent::new((h - m.0) as u32, (h - m.1) as u32, h as u32);
    let mut f = TruncatedElement::one(ctx, k);
    f.add_term(e, coefficient(ctx, c, u, 0));
    f
}

/// Random walls over Q[w^±1]_{1+w}, possibly vanishing beyond order k.
pub fn wall(k: u32) -> impl Strategy<Value = Ray<Rational>> {
    (0..DIRECTIONS.len(), 1i64..=2, 0u32..=1, prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]), -1i32..=1).prop_map(
        move |(i, s, lift, c, u)| {
            let d = DIRECTIONS[i];
            Ray::wall(d, wall_function(&ctx_w(), k, d, s, lift, c, u)).unwrap()
        },
    )
}

pub fn chart(name: &str, at: &[&str], coords: &[(&str, V2)]) -> Chart {
    Chart {
        name: name.into(),
        at: at.iter().map(|s| s.to_string()).collect(),
        coords: coords.iter().map(|(v, p)| (v.to_string(), [p.0, p.1])).collect(),
        cells: vec![],
        phi: BTreeMap::new(),
    }
}

pub fn cell(name: &str, vertices: &[&str], chart: &str) -> Cell {
    Cell { name: name.into(), vertices: vertices.iter().map(|s| s.to_string()).collect(), chart: chart.into() }
}

/// Two triangles glued along ZW with `s` focus-focus points on the edge,
/// every chart moved by `lin` and `shift`.
pub fn blowup(s: i64, lin: Mat2, shift: V2) -> TropicalSurface {
    let place = |p: V2| {
        let v = mat_apply(&lin, p);
        (v.0 + shift.0, v.1 + shift.1)
    };
    let names: Vec<String> = (0..=s).map(|j| format!("c{j}")).collect();
    let charts = (0..=s)
        .map(|j| {
            let at: &[&str] = if j == 0 {
                &["Z", "X", "Y"]
            } else if j == s {
                &["W"]
            } else {
                &[]
            };
            chart(
                &names[j as usize],
                at,
                &[("X", place((-1, 0))), ("Z", place((0, 0))), ("Y", place((1, j))), ("W", place((0, 1)))],
            )
        })
        .collect();
    TropicalSurface {
        name: format!("blowup-{s}"),
        vertices: ["X", "Y", "Z", "W"].map(String::from).to_vec(),
        params: vec![],
        charts,
        cells: vec![cell("s1", &["X", "Z", "W"], "c0"), cell("s2", &["Z", "Y", "W"], "c0")],
        edges: vec![Edge {
            name: "ZW".into(),
            vertices: ["Z".into(), "W".into()],
            singular: (1..=s).map(|j| format!("{j}/{}", s + 1)).collect(),
            charts: names,
        }],
        phi: BTreeMap::from([("X".into(), 0), ("Y".into(), 1), ("Z".into(), 0), ("W".into(), 0)]),
        boundary: ["X", "Z", "Y", "W"].map(String::from).to_vec(),
        slabs: vec![],
        chamber: None,
    }
}

pub fn conjugate(a: &Mat2, m: &Mat2) -> Mat2 {
    mat_mul(&mat_mul(a, m), &mat_inv(a).unwrap())
}

/// Random elements of SL₂(Z) as words in the elementary shears.
pub fn sl2() -> impl Strategy<Value = Mat2> {
    prop::collection::vec((0usize..4, 1i64..=2), 0..5).prop_map(|steps| {
        let gens: [Mat2; 4] = [[[1, 1], [0, 1]], [[1, -1], [0, 1]], [[1, 0], [1, 1]], [[1, 0], [-1, 1]]];
        steps.into_iter().fold(IDENTITY, |m, (g, n)| (0..n).fold(m, |m, _| mat_mul(&gens[g], &m)))
    })
}
