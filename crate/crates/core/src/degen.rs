//! Degeneration relations of tropical surfaces: local models, central
//! fibers, toric cell relations, homogenized gluing and edge-path relations,
//! chamber elimination and chart-transition checks.

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::expr::parse_laurent;
use crate::family::{primitive_part, FamilyIdeal, FamilyVars};
use crate::lattice::{cross, gcd, primitive, V2};
use crate::tropical::{Cell, Chart, Edge, SlabAssignment, TropicalSurface};
use crate::{Poly, Rational};

fn sub(a: V2, b: V2) -> V2 {
    (a.0 - b.0, a.1 - b.1)
}

fn add(a: V2, b: V2) -> V2 {
    (a.0 + b.0, a.1 + b.1)
}

fn unsupported(msg: impl Into<String>) -> GeometryError {
    GeometryError::Unsupported(msg.into())
}

/// Variables of the family of a surface.
pub fn family_vars(s: &TropicalSurface) -> FamilyVars {
    FamilyVars::new(s.vertices.clone(), s.params.clone())
}

fn coords(ch: &Chart, v: &str) -> Result<V2, GeometryError> {
    ch.get(v)
        .ok_or_else(|| GeometryError::Chart(format!("chart `{}` has no coordinates for `{v}`", ch.name)))
}

fn vertex_monomial(vars: &FamilyVars, v: &str, power: i32) -> Result<Poly, GeometryError> {
    let i = vars.vertex_index(v).ok_or_else(|| GeometryError::Unknown { kind: "vertex", name: v.into() })?;
    let mut e = vec![0; vars.len()];
    e[i] = power;
    Ok(Poly::monomial(e, Rational::one()))
}

fn t_power(vars: &FamilyVars, h: i64) -> Poly {
    let mut e = vec![0; vars.len()];
    e[vars.t_index()] = h as i32;
    Poly::monomial(e, Rational::one())
}

/// `x·y − f(w)·t^κ` in the variables `x, y, w`, `t` and the parameters;
/// `f` is over `w` and the parameters.
pub fn codim_one_local_model(f: &Poly, kappa: u32, params: &[String]) -> (FamilyVars, Poly) {
    let vars = FamilyVars::new(vec!["x".into(), "y".into(), "w".into()], params.to_vec());
    let mut lifted = Poly::zero(vars.len());
    for (e, c) in f.terms() {
        let mut x = vec![0; vars.len()];
        x[2] = e[0];
        x[vars.t_index()] = kappa as i32;
        for (j, p) in e[1..].iter().enumerate() {
            x[vars.t_index() + 1 + j] = *p;
        }
        lifted.add_term(x, c.clone());
    }
    let mut xy = vec![0; vars.len()];
    xy[0] = 1;
    xy[1] = 1;
    let rel = Poly::monomial(xy, Rational::one()).sub(&lifted);
    (vars, rel)
}

/// Products of vertex sets contained in no common cell, minimal under
/// inclusion. Requires every cell to be a triangle.
pub fn stanley_reisner(s: &TropicalSurface) -> Result<Vec<Poly>, GeometryError> {
    if let Some(c) = s.cells.iter().find(|c| c.vertices.len() != 3) {
        return Err(unsupported(format!("cell `{}` is not a simplex", c.name)));
    }
    let vars = family_vars(s);
    let n = s.vertices.len();
    let is_face = |set: &[usize]| {
        s.cells.iter().any(|c| set.iter().all(|i| c.vertices.contains(&s.vertices[*i])))
    };
    let mut non_faces: Vec<Vec<usize>> = Vec::new();
    for size in 2..=4.min(n) {
        for set in subsets(n, size) {
            if !is_face(&set) && !non_faces.iter().any(|m| m.iter().all(|i| set.contains(i))) {
                non_faces.push(set);
            }
        }
    }
    Ok(non_faces
        .iter()
        .map(|set| {
            let mut e = vec![0; vars.len()];
            for i in set {
                e[*i] = 1;
            }
            Poly::monomial(e, Rational::one())
        })
        .collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Degree-two binomials `a·b − c·d` among named lattice points with
/// `a + b = c + d`; each class of equal sums contributes a chain.
pub fn toric_polygon_relations(vars: &FamilyVars, points: &[(String, V2)]) -> Result<Vec<Poly>, GeometryError> {
    let mut classes: BTreeMap<V2, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..points.len() {
        for j in i..points.len() {
            classes.entry(add(points[i].1, points[j].1)).or_default().push((i, j));
        }
    }
    let mut out = Vec::new();
    for pairs in classes.values().filter(|p| p.len() > 1) {
        for w in pairs.windows(2) {
            let m = |(i, j): (usize, usize)| -> Result<Poly, GeometryError> {
                Ok(vertex_monomial(vars, &points[i].0, 1)?.mul(&vertex_monomial(vars, &points[j].0, 1)?))
            };
            out.push(vars.normalize(&m(w[0])?.sub(&m(w[1])?)));
        }
    }
    Ok(out)
}

/// Binomial relations among the lattice points of a cell, which must all
/// be vertices of the cell.
pub fn toric_cell_relations(s: &TropicalSurface, cell: &Cell) -> Result<Vec<Poly>, GeometryError> {
    let ch = s.chart(&cell.chart)?;
    let points: Vec<(String, V2)> =
        cell.vertices.iter().map(|v| Ok((v.clone(), coords(ch, v)?))).collect::<Result<_, GeometryError>>()?;
    toric_polygon_relations(&family_vars(s), &points)
}

/// A slab function over `w` and the parameters, homogenized at vertex `v`:
/// `w^k` becomes `(N/V)^k` with `N` the vertex at `v + k·e`.
pub fn homogenize_slab(
    s: &TropicalSurface,
    ch: &Chart,
    v: &str,
    e: V2,
    f: &Poly,
) -> Result<Poly, GeometryError> {
    let vars = family_vars(s);
    let p = coords(ch, v)?;
    let mut out = Poly::zero(vars.len());
    for (exp, c) in f.terms() {
        let k = exp[0];
        let mut term = Poly::constant(vars.len(), c.clone());
        if k != 0 {
            let step = if k > 0 { e } else { (-e.0, -e.1) };
            let n = ch
                .vertex_at(add(p, step))
                .ok_or_else(|| unsupported(format!("no vertex next to `{v}` in chart `{}`", ch.name)))?;
            term = term.mul(&vertex_monomial(&vars, n, k.abs())?).mul(&vertex_monomial(&vars, v, -k.abs())?);
        }
        let mut pe = vec![0; vars.len()];
        for (j, x) in exp[1..].iter().enumerate() {
            pe[vars.t_index() + 1 + j] = *x;
        }
        out = out.add(&term.mul(&Poly::monomial(pe, Rational::one())));
    }
    Ok(out)
}

fn cell_neighbour<'a>(cell: &'a Cell, v: &str, not: &str) -> Result<&'a str, GeometryError> {
    let n = cell.vertices.len();
    let i = cell
        .vertices
        .iter()
        .position(|x| x == v)
        .ok_or_else(|| unsupported(format!("`{v}` is not a vertex of `{}`", cell.name)))?;
    let (a, b) = (&cell.vertices[(i + n - 1) % n], &cell.vertices[(i + 1) % n]);
    Ok(if a == not { b } else { a })
}

/// The homogenized codimension-one gluing relation of `edge` at `v`, or
/// `None` if the edge carries no slab function there.
pub fn gluing_relation(
    s: &TropicalSurface,
    a: &SlabAssignment,
    edge: &Edge,
    v: &str,
) -> Result<Option<Poly>, GeometryError> {
    let Some(f) = a.get(&edge.name, v) else {
        return Ok(None);
    };
    let vars = family_vars(s);
    let ch = s.edge_chart_at(edge, v)?;
    let other = if edge.vertices[0] == v { &edge.vertices[1] } else { &edge.vertices[0] };
    let p = coords(ch, v)?;
    let e = primitive(sub(coords(ch, &edge.vertices[1])?, coords(ch, &edge.vertices[0])?))
        .ok_or_else(|| unsupported("zero-length edge"))?;
    let (left, right) = s.sides(edge, ch)?;
    let pa = cell_neighbour(left, v, other)?;
    let pb = cell_neighbour(right, v, other)?;
    let sum = add(sub(coords(ch, pa)?, p), sub(coords(ch, pb)?, p));
    if cross(sum, e) != 0 {
        return Err(unsupported(format!("neighbours of `{v}` across `{}` are not balanced", edge.name)));
    }
    let j = if e.0 != 0 { sum.0 / e.0 } else { sum.1 / e.1 };
    let mut rhs = vertex_monomial(&vars, v, 2)?;
    let mut h = s.phi_in(ch, pa)? + s.phi_in(ch, pb)? - 2 * s.phi_in(ch, v)?;
    if j != 0 {
        let step = if j > 0 { e } else { (-e.0, -e.1) };
        let q = ch
            .vertex_at(add(p, step))
            .ok_or_else(|| unsupported(format!("no vertex next to `{v}` in chart `{}`", ch.name)))?;
        let jj = j.abs();
        h -= jj * (s.phi_in(ch, q)? - s.phi_in(ch, v)?);
        rhs = rhs.mul(&vertex_monomial(&vars, q, jj as i32)?).mul(&vertex_monomial(&vars, v, -(jj as i32))?);
    }
    if h < 0 {
        return Err(unsupported(format!("negative t-power in the gluing of `{}` at `{v}`", edge.name)));
    }
    let rhs = rhs.mul(&t_power(&vars, h)).mul(&homogenize_slab(s, ch, v, e, f)?);
    let lhs = vertex_monomial(&vars, pa, 1)?.mul(&vertex_monomial(&vars, pb, 1)?);
    Ok(Some(vars.normalize(&lhs.sub(&rhs))))
}

/// The relation along the straight segment from `a` to `b` in `ch`, or
/// `None` when the chart does not realize such a segment through named
/// lattice points crossing interior edges only at vertices.
pub fn edge_path_in_chart(
    s: &TropicalSurface,
    asg: &SlabAssignment,
    ch: &Chart,
    a: &str,
    b: &str,
) -> Result<Option<Poly>, GeometryError> {
    let (Some(pa), Some(pb)) = (ch.get(a), ch.get(b)) else {
        return Ok(None);
    };
    let d = sub(pb, pa);
    let len = gcd(d.0, d.1);
    if len < 2 {
        return Ok(None);
    }
    let step = (d.0 / len, d.1 / len);
    let mut path = Vec::new();
    for i in 0..=len {
        match ch.vertex_at((pa.0 + i * step.0, pa.1 + i * step.1)) {
            Some(v) => path.push(v.to_string()),
            None => return Ok(None),
        }
    }
    for w in path.windows(2) {
        if s.is_interior_edge(&w[0], &w[1]) || !s.cells_on(&w[0], &w[1]).iter().any(|c| ch.realizes(c)) {
            return Ok(None);
        }
    }
    let vars = family_vars(s);
    let edges = s.interior_edges();
    let mut rhs = Poly::one(vars.len());
    for c in &path[1..path.len() - 1] {
        let pc = coords(ch, c)?;
        let mut left = Vec::new();
        let mut right = Vec::new();
        for e in edges.iter().filter(|e| e.vertices.iter().any(|v| v == c)) {
            let other = if &e.vertices[0] == c { &e.vertices[1] } else { &e.vertices[0] };
            let Some(po) = ch.get(other) else {
                return Ok(None);
            };
            match cross(step, sub(po, pc)).signum() {
                1 => left.push(e),
                -1 => right.push(e),
                _ => {}
            }
        }
        let crossed = if left.is_empty() { right } else { left };
        for e in crossed {
            if e.singular_count() > 0 && s.edge_chart_at(e, c)?.name != ch.name {
                return Ok(None);
            }
            if let Some(f) = asg.get(&e.name, c) {
                let dir = primitive(sub(coords(ch, &e.vertices[1])?, coords(ch, &e.vertices[0])?))
                    .ok_or_else(|| unsupported("zero-length edge"))?;
                rhs = rhs.mul(&homogenize_slab(s, ch, c, dir, f)?);
            }
        }
    }
    let (p1, pl) = (&path[1], &path[path.len() - 2]);
    let h = s.phi_in(ch, a)? + s.phi_in(ch, b)? - s.phi_in(ch, p1)? - s.phi_in(ch, pl)?;
    if h < 0 {
        return Err(unsupported(format!("negative t-power on the segment `{a}`–`{b}`")));
    }
    let rhs = rhs.mul(&t_power(&vars, h)).mul(&vertex_monomial(&vars, p1, 1)?).mul(&vertex_monomial(&vars, pl, 1)?);
    let lhs = vertex_monomial(&vars, a, 1)?.mul(&vertex_monomial(&vars, b, 1)?);
    Ok(Some(vars.normalize(&lhs.sub(&rhs))))
}

/// The edge-path relation between two vertices, from the first chart that
/// realizes a straight segment. `None` for adjacent vertices.
pub fn edge_path_relation(
    s: &TropicalSurface,
    asg: &SlabAssignment,
    a: &str,
    b: &str,
) -> Result<Option<Poly>, GeometryError> {
    let mut adjacent = false;
    for ch in &s.charts {
        if let Some(r) = edge_path_in_chart(s, asg, ch, a, b)? {
            return Ok(Some(r));
        }
        if let (Some(pa), Some(pb)) = (ch.get(a), ch.get(b)) {
            let d = sub(pb, pa);
            adjacent |= gcd(d.0, d.1) == 1 && s.cells_on(a, b).iter().any(|c| ch.realizes(c));
        }
    }
    if adjacent {
        Ok(None)
    } else {
        Err(GeometryError::NotStraight(a.into(), b.into()))
    }
}

/// Eliminates the local coordinates of a chamber: the images of the
/// non-homogenizing vertices are local variables times units with constant
/// term 1, and the product of the local variables is `t`. The result is the
/// homogenized relation `∏ images = t·C`.
pub fn chamber_relation(s: &TropicalSurface) -> Result<Poly, GeometryError> {
    let chamber = s.chamber.as_ref().ok_or_else(|| unsupported("surface has no chamber data"))?;
    let vars = family_vars(s);
    let nl = chamber.local.len();
    let mut images: Vec<(String, Poly)> = Vec::new();
    for (v, text) in &chamber.images {
        images.push((v.clone(), parse_laurent(text, &chamber.local)?));
    }
    if images.len() != nl {
        return Err(unsupported("chamber needs one image per local coordinate"));
    }
    // images[k] has lowest term local[slot[k]]
    let mut slot = vec![usize::MAX; nl];
    for (k, (v, p)) in images.iter().enumerate() {
        let lowest = p
            .terms()
            .iter()
            .min_by_key(|(e, _)| (e.iter().sum::<i32>(), (*e).clone()))
            .ok_or_else(|| unsupported(format!("image of `{v}` is zero")))?;
        let j = lowest.0.iter().position(|x| *x == 1).filter(|_| lowest.0.iter().sum::<i32>() == 1);
        match j {
            Some(j) if lowest.1.is_one() && p.min_exponent().is_some_and(|m| m[j] == 1) => slot[j] = k,
            _ => return Err(unsupported(format!("image of `{v}` is not a local coordinate times a unit"))),
        }
    }
    if slot.contains(&usize::MAX) {
        return Err(unsupported("chamber images do not cover the local coordinates"));
    }
    let product = images.iter().fold(Poly::one(nl), |acc, (_, p)| acc.mul(p));
    let mut rest = product.shift(&vec![-1; nl]);
    let start_degree = rest.max_exponent().map_or(0, |m| m.iter().sum::<i32>());
    let mut lifted = Poly::zero(vars.len());
    let mut guard = 0;
    while let Some((e, c)) =
        rest.terms().iter().min_by_key(|(e, _)| (e.iter().sum::<i32>(), (*e).clone())).map(|(e, c)| (e.clone(), c.clone()))
    {
        guard += 1;
        if guard > 10_000 || e.iter().sum::<i32>() > 4 * start_degree + 8 {
            return Err(unsupported("chamber function is not a polynomial in the images"));
        }
        let dmin = *e.iter().min().expect("nonempty");
        let mut image = Poly::one(nl);
        let mut fam = vec![0; vars.len()];
        for j in 0..nl {
            let k = e[j] - dmin;
            image = image.mul(&images[slot[j]].1.pow(k as u32));
            let idx = vars.vertex_index(&images[slot[j]].0).ok_or_else(|| GeometryError::Unknown {
                kind: "vertex",
                name: images[slot[j]].0.clone(),
            })?;
            fam[idx] = k;
        }
        image = image.shift(&vec![dmin; nl]);
        fam[vars.t_index()] = dmin;
        rest = rest.sub(&image.scale(&c));
        lifted.add_term(fam, c);
    }
    // ∏ x_j − t·C(x, t), then x_j = V_j / homogenizer
    let mut lhs = vec![0; vars.len()];
    for (v, _) in &images {
        lhs[vars.vertex_index(v).expect("checked")] = 1;
    }
    let rel = Poly::monomial(lhs, Rational::one()).sub(&lifted.mul(&t_power(&vars, 1)));
    let h = vars
        .vertex_index(&chamber.homogenizer)
        .ok_or_else(|| GeometryError::Unknown { kind: "vertex", name: chamber.homogenizer.clone() })?;
    let homogenized = Poly::from_terms(
        vars.len(),
        rel.terms().iter().map(|(e, c)| {
            let mut e = e.clone();
            e[h] = -(0..vars.vertices.len()).filter(|i| *i != h).map(|i| e[i]).sum::<i32>();
            (e, c.clone())
        }),
    );
    Ok(vars.normalize(&homogenized))
}

/// Toric cell relations, gluing relations at each vertex of each edge with
/// slab functions and edge-path relations, without duplicates. Surfaces
/// with chamber data yield the chamber relation instead.
pub fn build_family(s: &TropicalSurface, asg: &SlabAssignment) -> Result<FamilyIdeal, GeometryError> {
    let mut ideal = FamilyIdeal::new(family_vars(s));
    if s.chamber.is_some() {
        ideal.push(&chamber_relation(s)?);
        return Ok(ideal);
    }
    for c in &s.cells {
        for r in toric_cell_relations(s, c)? {
            ideal.push(&r);
        }
    }
    for e in &s.edges {
        for v in &e.vertices {
            if let Some(r) = gluing_relation(s, asg, e, v)? {
                ideal.push(&r);
            }
        }
    }
    for (i, a) in s.vertices.iter().enumerate() {
        for b in &s.vertices[i + 1..] {
            for ch in &s.charts {
                if let Some(r) = edge_path_in_chart(s, asg, ch, a, b)? {
                    ideal.push(&r);
                }
            }
        }
    }
    Ok(ideal)
}

/// An affine chart given by variables and polynomial relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentedChart {
    pub name: String,
    pub variables: Vec<String>,
    pub relations: Vec<String>,
}

/// Monomial substitution from one chart to another. Unmapped variables map
/// to the target variable of the same name; `units` are the target
/// variables invertible on the overlap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub map: BTreeMap<String, String>,
    #[serde(default)]
    pub units: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartPresentation {
    pub name: String,
    pub charts: Vec<PresentedChart>,
    pub transitions: Vec<Transition>,
}

/// One relation carried along one transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionOutcome {
    pub from: String,
    pub to: String,
    pub relation: String,
    pub image: String,
    pub holds: bool,
}

impl ChartPresentation {
    pub fn chart(&self, name: &str) -> Result<&PresentedChart, GeometryError> {
        self.charts
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| GeometryError::Unknown { kind: "chart", name: name.into() })
    }
}

/// Removes the largest monomial in the unit variables dividing `p`, allowing
/// negative exponents only in units, and fixes the scale.
fn clear_units(p: &Poly, names: &[String], units: &[usize]) -> Result<Poly, GeometryError> {
    let Some(min) = p.min_exponent() else {
        return Ok(p.clone());
    };
    let mut shift = vec![0; p.nvars()];
    for (i, m) in min.iter().enumerate() {
        if units.contains(&i) {
            shift[i] = -m;
        } else if *m < 0 {
            return Err(GeometryError::NegativeExponent(names[i].clone()));
        }
    }
    Ok(primitive_part(&p.shift(&shift)))
}

/// The image of a relation of the source chart in the target chart's
/// variables, with declared units cleared.
pub fn transport_relation(
    p: &ChartPresentation,
    tr: &Transition,
    relation: &str,
) -> Result<Poly, GeometryError> {
    let src = p.chart(&tr.from)?;
    let dst = p.chart(&tr.to)?;
    let rel: Poly = parse_laurent(relation, &src.variables)?;
    let images = src
        .variables
        .iter()
        .map(|v| match tr.map.get(v) {
            Some(text) => {
                let img: Poly = parse_laurent(text, &dst.variables)?;
                if img.as_monomial().is_none() {
                    return Err(unsupported(format!("image of `{v}` is not a monomial")));
                }
                Ok(img)
            }
            None => {
                let i = dst.variables.iter().position(|x| x == v).ok_or_else(|| GeometryError::Unknown {
                    kind: "target variable",
                    name: v.clone(),
                })?;
                Ok(Poly::var(dst.variables.len(), i))
            }
        })
        .collect::<Result<Vec<_>, GeometryError>>()?;
    let image = rel
        .substitute(&images, dst.variables.len())
        .ok_or_else(|| unsupported("substitution failed"))?;
    let units: Vec<usize> = tr
        .units
        .iter()
        .map(|u| {
            dst.variables
                .iter()
                .position(|x| x == u)
                .ok_or_else(|| GeometryError::Unknown { kind: "unit", name: u.clone() })
        })
        .collect::<Result<_, _>>()?;
    clear_units(&image, &dst.variables, &units)
}

/// Carries every relation along every transition and records whether its
/// image is, up to units and scale, a relation of the target chart.
pub fn chart_transition_report(p: &ChartPresentation) -> Result<Vec<TransitionOutcome>, GeometryError> {
    let mut out = Vec::new();
    for tr in &p.transitions {
        let src = p.chart(&tr.from)?;
        let dst = p.chart(&tr.to)?;
        let units: Vec<usize> =
            tr.units.iter().filter_map(|u| dst.variables.iter().position(|x| x == u)).collect();
        let targets = dst
            .relations
            .iter()
            .map(|r| clear_units(&parse_laurent(r, &dst.variables)?, &dst.variables, &units))
            .collect::<Result<Vec<_>, GeometryError>>()?;
        let names: Vec<&str> = dst.variables.iter().map(|s| s.as_str()).collect();
        for r in &src.relations {
            let image = transport_relation(p, tr, r)?;
            out.push(TransitionOutcome {
                from: tr.from.clone(),
                to: tr.to.clone(),
                relation: r.clone(),
                image: image.render_desc(&names),
                holds: targets.contains(&image),
            });
        }
    }
    Ok(out)
}

/// Whether every transition maps every relation to a target relation.
pub fn chart_transition_check(p: &ChartPresentation) -> Result<bool, GeometryError> {
    Ok(chart_transition_report(p)?.iter().all(|o| o.holds))
}
