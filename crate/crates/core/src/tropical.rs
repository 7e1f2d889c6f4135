//! Two-dimensional integral tropical manifolds with focus-focus points:
//! charts, validation, monodromy, change of vertex and the order-one
//! multiplicative condition.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::expr::parse_laurent;
use crate::lattice::{cross, dot, gcd, primitive, V2};
use crate::{Poly, Rational};

pub type Mat2 = [[i64; 2]; 2];

pub const IDENTITY: Mat2 = [[1, 0], [0, 1]];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut m = [[0; 2]; 2];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

pub fn mat_apply(a: &Mat2, v: V2) -> V2 {
    (a[0][0] * v.0 + a[0][1] * v.1, a[1][0] * v.0 + a[1][1] * v.1)
}

pub fn det(a: &Mat2) -> i64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Inverse of a unimodular matrix.
pub fn mat_inv(a: &Mat2) -> Option<Mat2> {
    let d = det(a);
    if d != 1 && d != -1 {
        return None;
    }
    Some([[a[1][1] * d, -a[0][1] * d], [-a[1][0] * d, a[0][0] * d]])
}

/// Primitive normal to `d` pointing to its right.
pub fn right_normal(d: V2) -> V2 {
    (d.1, -d.0)
}

/// Integral affine map `v ↦ lin·v + shift`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub lin: Mat2,
    pub shift: V2,
}

impl Affine {
    pub fn apply(&self, v: V2) -> V2 {
        let w = mat_apply(&self.lin, v);
        (w.0 + self.shift.0, w.1 + self.shift.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub at: Vec<String>,
    pub coords: BTreeMap<String, [i64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<String>,
    /// φ values that differ from the surface-wide ones in this chart.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub phi: BTreeMap<String, i64>,
}

impl Chart {
    pub fn get(&self, v: &str) -> Option<V2> {
        self.coords.get(v).map(|c| (c[0], c[1]))
    }

    pub fn vertex_at(&self, p: V2) -> Option<&str> {
        self.coords.iter().find(|(_, c)| (c[0], c[1]) == p).map(|(n, _)| n.as_str())
    }

    /// Whether the chart is valid on `cell`: it lists the cell, or lists no
    /// cells, and has coordinates for all its vertices.
    pub fn realizes(&self, cell: &Cell) -> bool {
        (self.cells.is_empty() || self.cells.contains(&cell.name))
            && cell.vertices.iter().all(|v| self.coords.contains_key(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub name: String,
    pub vertices: Vec<String>,
    pub chart: String,
}

/// Interior edge between two maximal cells. `singular` holds the positions of
/// focus-focus points as fractions of the way from the first vertex to the
/// second; `charts` lists one chart per gap between consecutive points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    pub vertices: [String; 2],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub singular: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub charts: Vec<String>,
}

impl Edge {
    pub fn singular_count(&self) -> usize {
        self.singular.len()
    }
}

/// Slab function on `edge` at `vertex`, a Laurent polynomial in `w` and the
/// surface parameters, where `w` is the primitive edge tangent oriented from
/// the first vertex of the edge to the second.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlabEntry {
    pub edge: String,
    pub vertex: String,
    pub function: String,
}

/// Local chart images of the homogeneous coordinates for surfaces whose
/// relations come from a chamber of a consistent scattering diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chamber {
    pub homogenizer: String,
    pub local: Vec<String>,
    pub images: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalSurface {
    pub name: String,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub params: Vec<String>,
    pub charts: Vec<Chart>,
    pub cells: Vec<Cell>,
    #[serde(default)]
    pub edges: Vec<Edge>,
    pub phi: BTreeMap<String, i64>,
    #[serde(default)]
    pub boundary: Vec<String>,
    #[serde(default)]
    pub slabs: Vec<SlabEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chamber: Option<Chamber>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FindingKind {
    Reference,
    Chart,
    Phi,
    Kink,
    Boundary,
    Singular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    pub kind: FindingKind,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{sev} [{:?}] {}", self.kind, self.message)
    }
}

fn sub(a: V2, b: V2) -> V2 {
    (a.0 - b.0, a.1 - b.1)
}

fn chart_err(msg: impl Into<String>) -> GeometryError {
    GeometryError::Chart(msg.into())
}

/// Slab functions keyed by (edge, vertex), over the variables `w` and the
/// surface parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SlabAssignment {
    pub names: Vec<String>,
    pub functions: BTreeMap<(String, String), Poly>,
}

impl SlabAssignment {
    pub fn names_for(params: &[String]) -> Vec<String> {
        let mut names = vec!["w".to_string()];
        names.extend(params.iter().cloned());
        names
    }

    pub fn get(&self, edge: &str, vertex: &str) -> Option<&Poly> {
        self.functions.get(&(edge.to_string(), vertex.to_string()))
    }
}

impl TropicalSurface {
    pub fn chart(&self, name: &str) -> Result<&Chart, GeometryError> {
        self.charts
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| GeometryError::Unknown { kind: "chart", name: name.into() })
    }

    pub fn cell(&self, name: &str) -> Result<&Cell, GeometryError> {
        self.cells
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| GeometryError::Unknown { kind: "cell", name: name.into() })
    }

    pub fn edge(&self, name: &str) -> Result<&Edge, GeometryError> {
        self.edges
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| GeometryError::Unknown { kind: "edge", name: name.into() })
    }

    pub fn phi_of(&self, v: &str) -> Result<i64, GeometryError> {
        self.phi.get(v).copied().ok_or_else(|| GeometryError::Unknown { kind: "phi value", name: v.into() })
    }

    /// The φ value of `v` in the representative used by `chart`.
    pub fn phi_in(&self, chart: &Chart, v: &str) -> Result<i64, GeometryError> {
        match chart.phi.get(v) {
            Some(h) => Ok(*h),
            None => self.phi_of(v),
        }
    }

    /// Cells containing both endpoints of the segment.
    pub fn cells_on(&self, a: &str, b: &str) -> Vec<&Cell> {
        self.cells
            .iter()
            .filter(|c| c.vertices.iter().any(|v| v == a) && c.vertices.iter().any(|v| v == b))
            .collect()
    }

    /// Unordered vertex pairs shared by two cells; listed edges keep their
    /// orientation, the others get an implicit name.
    pub fn interior_edges(&self) -> Vec<Edge> {
        let mut out = self.edges.clone();
        for c in &self.cells {
            let n = c.vertices.len();
            for i in 0..n {
                let (a, b) = (&c.vertices[i], &c.vertices[(i + 1) % n]);
                let listed = out.iter().any(|e| {
                    (&e.vertices[0] == a && &e.vertices[1] == b) || (&e.vertices[0] == b && &e.vertices[1] == a)
                });
                if !listed && self.cells_on(a, b).len() == 2 {
                    out.push(Edge {
                        name: format!("{a}{b}"),
                        vertices: [a.clone(), b.clone()],
                        singular: Vec::new(),
                        charts: Vec::new(),
                    });
                }
            }
        }
        out
    }

    pub fn is_interior_edge(&self, a: &str, b: &str) -> bool {
        self.cells_on(a, b).len() == 2
    }

    /// The gap charts of an edge, defaulting to the tagged chart of a cell
    /// that realizes both adjacent cells.
    pub fn gap_charts(&self, e: &Edge) -> Result<Vec<&Chart>, GeometryError> {
        if !e.charts.is_empty() {
            return e.charts.iter().map(|c| self.chart(c)).collect();
        }
        let cells = self.cells_on(&e.vertices[0], &e.vertices[1]);
        for c in &cells {
            let ch = self.chart(&c.chart)?;
            if cells.iter().all(|d| ch.realizes(d)) {
                return Ok(vec![ch]);
            }
        }
        self.charts
            .iter()
            .find(|ch| cells.iter().all(|d| ch.realizes(d)))
            .map(|ch| vec![ch])
            .ok_or_else(|| chart_err(format!("no chart realizes both cells of `{}`", e.name)))
    }

    /// The chart used near a vertex: one declared `at` it, else the first
    /// chart realizing every cell around it, else the first containing it.
    pub fn vertex_chart(&self, v: &str) -> Result<&Chart, GeometryError> {
        if let Some(c) = self.charts.iter().find(|c| c.at.iter().any(|a| a == v)) {
            return Ok(c);
        }
        let star: Vec<&Cell> = self.cells.iter().filter(|c| c.vertices.iter().any(|x| x == v)).collect();
        self.charts
            .iter()
            .find(|ch| !star.is_empty() && star.iter().all(|c| ch.realizes(c)))
            .or_else(|| self.charts.iter().find(|ch| ch.coords.contains_key(v)))
            .ok_or_else(|| GeometryError::Unknown { kind: "chart at vertex", name: v.into() })
    }

    /// The chart realizing the surface near `v` on edge `e`.
    pub fn edge_chart_at(&self, e: &Edge, v: &str) -> Result<&Chart, GeometryError> {
        let charts = self.gap_charts(e)?;
        if v == e.vertices[0] {
            Ok(charts[0])
        } else if v == e.vertices[1] {
            Ok(charts[charts.len() - 1])
        } else {
            Err(GeometryError::NotOnEdge { vertex: v.into(), edge: e.name.clone() })
        }
    }

    fn coords(&self, chart: &Chart, v: &str) -> Result<V2, GeometryError> {
        chart
            .get(v)
            .ok_or_else(|| chart_err(format!("chart `{}` has no coordinates for `{v}`", chart.name)))
    }

    /// Affine map carrying the coordinates of `cell` in `from` to those in `to`.
    pub fn cell_transition(&self, cell: &Cell, from: &Chart, to: &Chart) -> Result<Affine, GeometryError> {
        let p: Vec<V2> = cell.vertices.iter().map(|v| self.coords(from, v)).collect::<Result<_, _>>()?;
        let q: Vec<V2> = cell.vertices.iter().map(|v| self.coords(to, v)).collect::<Result<_, _>>()?;
        let (i, j) = basis_pair(&p).ok_or_else(|| chart_err(format!("cell `{}` is degenerate", cell.name)))?;
        let (a, b) = (sub(p[i], p[0]), sub(p[j], p[0]));
        let (a2, b2) = (sub(q[i], q[0]), sub(q[j], q[0]));
        let d = cross(a, b);
        // lin = [a2 b2] · adj([a b]) / d
        let adj: Mat2 = [[b.1, -b.0], [-a.1, a.0]];
        let img: Mat2 = [[a2.0, b2.0], [a2.1, b2.1]];
        let num = mat_mul(&img, &adj);
        let mut lin = [[0; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                if num[r][c] % d != 0 {
                    return Err(chart_err(format!(
                        "transition {}→{} on `{}` is not integral",
                        from.name, to.name, cell.name
                    )));
                }
                lin[r][c] = num[r][c] / d;
            }
        }
        let img0 = mat_apply(&lin, p[0]);
        let map = Affine { lin, shift: sub(q[0], img0) };
        for (x, y) in p.iter().zip(&q) {
            if map.apply(*x) != *y {
                return Err(chart_err(format!(
                    "transition {}→{} on `{}` is not affine",
                    from.name, to.name, cell.name
                )));
            }
        }
        if det(&lin).abs() != 1 {
            return Err(chart_err(format!(
                "transition {}→{} on `{}` has determinant {}",
                from.name,
                to.name,
                cell.name,
                det(&lin)
            )));
        }
        Ok(map)
    }

    /// Splits the cells of an interior edge into (left, right) relative to
    /// the direction from its first vertex to its second, in `chart`.
    pub fn sides<'a>(&'a self, e: &Edge, chart: &Chart) -> Result<(&'a Cell, &'a Cell), GeometryError> {
        let cells = self.cells_on(&e.vertices[0], &e.vertices[1]);
        if cells.len() != 2 {
            return Err(chart_err(format!("edge `{}` does not separate two cells", e.name)));
        }
        let p0 = self.coords(chart, &e.vertices[0])?;
        let d = sub(self.coords(chart, &e.vertices[1])?, p0);
        let side = |c: &Cell| -> Result<i64, GeometryError> {
            for v in &c.vertices {
                let s = cross(d, sub(self.coords(chart, v)?, p0));
                if s != 0 {
                    return Ok(s.signum());
                }
            }
            Ok(0)
        };
        match (side(cells[0])?, side(cells[1])?) {
            (1, -1) => Ok((cells[0], cells[1])),
            (-1, 1) => Ok((cells[1], cells[0])),
            _ => Err(chart_err(format!("cells of `{}` overlap in chart `{}`", e.name, chart.name))),
        }
    }

    /// Integral slope and constant of φ on `cell` in `chart`.
    pub fn phi_slope(&self, cell: &Cell, chart: &Chart) -> Result<(V2, i64), PhiProblem> {
        let p: Vec<V2> = cell
            .vertices
            .iter()
            .map(|v| self.coords(chart, v))
            .collect::<Result<_, _>>()
            .map_err(|e| PhiProblem::Geometry(e.to_string()))?;
        let h: Vec<i64> = cell
            .vertices
            .iter()
            .map(|v| self.phi_in(chart, v))
            .collect::<Result<_, _>>()
            .map_err(|e| PhiProblem::Geometry(e.to_string()))?;
        let (i, j) = basis_pair(&p).ok_or_else(|| PhiProblem::Geometry("degenerate cell".into()))?;
        let (a, b) = (sub(p[i], p[0]), sub(p[j], p[0]));
        let (ha, hb) = (h[i] - h[0], h[j] - h[0]);
        let d = cross(a, b);
        // g·a = ha, g·b = hb
        let gx = ha * b.1 - hb * a.1;
        let gy = hb * a.0 - ha * b.0;
        if gx % d != 0 || gy % d != 0 {
            return Err(PhiProblem::NotIntegral);
        }
        let g = (gx / d, gy / d);
        let c = h[0] - dot(g, p[0]);
        for (x, hx) in p.iter().zip(&h) {
            if dot(g, *x) + c != *hx {
                return Err(PhiProblem::NotAffine);
            }
        }
        Ok((g, c))
    }

    /// Kink of φ across an edge computed in `chart`.
    pub fn kink_in(&self, e: &Edge, chart: &Chart) -> Result<i64, GeometryError> {
        let (l, r) = self.sides(e, chart)?;
        let slope = |c: &Cell| self.phi_slope(c, chart).map(|s| s.0).map_err(|p| chart_err(p.to_string()));
        let (gl, gr) = (slope(l)?, slope(r)?);
        let d = sub(self.coords(chart, &e.vertices[1])?, self.coords(chart, &e.vertices[0])?);
        let n = right_normal(primitive(d).ok_or_else(|| chart_err("zero-length edge"))?);
        let diff = sub(gr, gl);
        if cross(diff, n) != 0 {
            return Err(chart_err(format!("φ is discontinuous across `{}`", e.name)));
        }
        Ok(if n.0 != 0 { diff.0 / n.0 } else { diff.1 / n.1 })
    }

    /// The kink of φ across an edge, in its first gap chart.
    pub fn kink(&self, e: &Edge) -> Result<i64, GeometryError> {
        self.kink_in(e, self.gap_charts(e)?[0])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiProblem {
    NotIntegral,
    NotAffine,
    Geometry(String),
}

impl fmt::Display for PhiProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiProblem::NotIntegral => write!(f, "φ has a non-integral slope"),
            PhiProblem::NotAffine => write!(f, "φ is not affine"),
            PhiProblem::Geometry(s) => write!(f, "{s}"),
        }
    }
}

fn basis_pair(p: &[V2]) -> Option<(usize, usize)> {
    for i in 1..p.len() {
        for j in (i + 1)..p.len() {
            if cross(sub(p[i], p[0]), sub(p[j], p[0])) != 0 {
                return Some((i, j));
            }
        }
    }
    None
}

fn finding(severity: Severity, kind: FindingKind, message: String) -> Finding {
    Finding { severity, kind, message }
}

fn signed_area2(p: &[V2]) -> i64 {
    (0..p.len()).map(|i| cross(p[i], p[(i + 1) % p.len()])).sum()
}

fn is_convex_ccw(p: &[V2]) -> bool {
    let n = p.len();
    signed_area2(p) > 0
        && (0..n).all(|i| cross(sub(p[(i + 1) % n], p[i]), sub(p[(i + 2) % n], p[(i + 1) % n])) >= 0)
}

/// Parses the singular positions of an edge.
pub fn singular_positions(e: &Edge) -> Result<Vec<Rational>, GeometryError> {
    e.singular
        .iter()
        .map(|s| {
            Rational::from_str(s.trim())
                .map_err(|_| chart_err(format!("bad singular position `{s}` on `{}`", e.name)))
        })
        .collect()
}

fn check_references(s: &TropicalSurface, out: &mut Vec<Finding>) {
    let known = |v: &String| s.vertices.contains(v);
    let mut err = |m: String| out.push(finding(Severity::Error, FindingKind::Reference, m));
    for (i, v) in s.vertices.iter().enumerate() {
        if s.vertices[..i].contains(v) {
            err(format!("duplicate vertex `{v}`"));
        }
        if !s.phi.contains_key(v) {
            err(format!("no φ value for `{v}`"));
        }
    }
    for c in &s.cells {
        if c.vertices.len() < 3 {
            err(format!("cell `{}` has fewer than three vertices", c.name));
        }
        for v in c.vertices.iter().filter(|v| !known(v)) {
            err(format!("cell `{}` names unknown vertex `{v}`", c.name));
        }
        if s.chart(&c.chart).is_err() {
            err(format!("cell `{}` names unknown chart `{}`", c.name, c.chart));
        }
    }
    for ch in &s.charts {
        for v in ch.coords.keys().chain(&ch.at).filter(|v| !known(v)) {
            err(format!("chart `{}` names unknown vertex `{v}`", ch.name));
        }
    }
    for e in &s.edges {
        for v in e.vertices.iter().filter(|v| !known(v)) {
            err(format!("edge `{}` names unknown vertex `{v}`", e.name));
        }
        for c in e.charts.iter().filter(|c| s.chart(c).is_err()) {
            err(format!("edge `{}` names unknown chart `{c}`", e.name));
        }
    }
    for v in s.boundary.iter().filter(|v| !known(v)) {
        err(format!("boundary names unknown vertex `{v}`"));
    }
    for a in &s.slabs {
        match s.edge(&a.edge) {
            Err(_) => err(format!("slab function names unknown edge `{}`", a.edge)),
            Ok(e) if !e.vertices.contains(&a.vertex) => {
                err(format!("slab function vertex `{}` is not on edge `{}`", a.vertex, a.edge))
            }
            Ok(_) => {}
        }
    }
}

fn check_charts(s: &TropicalSurface, out: &mut Vec<Finding>) {
    let mut err = |m: String| out.push(finding(Severity::Error, FindingKind::Chart, m));
    for c in &s.cells {
        let Ok(own) = s.chart(&c.chart) else { continue };
        let Some(p) = c.vertices.iter().map(|v| own.get(v)).collect::<Option<Vec<V2>>>() else {
            err(format!("chart `{}` does not realize cell `{}`", own.name, c.name));
            continue;
        };
        if !is_convex_ccw(&p) {
            err(format!("cell `{}` is not a counterclockwise convex polygon in `{}`", c.name, own.name));
        }
        for ch in s.charts.iter().filter(|ch| ch.name != own.name && ch.realizes(c)) {
            match s.cell_transition(c, own, ch) {
                Ok(t) if det(&t.lin) != 1 => {
                    err(format!("transition {}→{} reverses orientation on `{}`", own.name, ch.name, c.name))
                }
                Ok(_) => {}
                Err(e) => err(e.to_string()),
            }
        }
    }
    for e in &s.interior_edges() {
        let n = e.singular_count();
        if n > 0 && e.charts.len() != n + 1 {
            err(format!("edge `{}` has {n} singular points but {} gap charts", e.name, e.charts.len()));
            continue;
        }
        match s.gap_charts(e) {
            Ok(charts) => {
                for ch in charts {
                    if let Err(x) = s.sides(e, ch) {
                        err(x.to_string());
                    }
                }
            }
            Err(x) => err(x.to_string()),
        }
    }
}

fn check_singular(s: &TropicalSurface, out: &mut Vec<Finding>) {
    let mut err = |m: String| out.push(finding(Severity::Error, FindingKind::Singular, m));
    for e in &s.edges {
        let pos = match singular_positions(e) {
            Ok(p) => p,
            Err(x) => {
                err(x.to_string());
                continue;
            }
        };
        let Ok(charts) = s.gap_charts(e) else { continue };
        let (Some(a), Some(b)) = (charts[0].get(&e.vertices[0]), charts[0].get(&e.vertices[1])) else {
            continue;
        };
        let d = sub(b, a);
        let len = Rational::from_integer(gcd(d.0, d.1).into());
        for (i, p) in pos.iter().enumerate() {
            if *p <= Rational::zero() || *p >= Rational::one() {
                err(format!("singular point {p} on `{}` is not inside the edge", e.name));
            } else if (p * &len).is_integer() {
                err(format!("singular point {p} on `{}` is a lattice point", e.name));
            }
            if i > 0 && pos[i - 1] >= *p {
                err(format!("singular points on `{}` are not increasing", e.name));
            }
        }
    }
}

fn check_phi(s: &TropicalSurface, out: &mut Vec<Finding>) {
    for c in &s.cells {
        let Ok(ch) = s.chart(&c.chart) else { continue };
        if let Err(p) = s.phi_slope(c, ch) {
            out.push(finding(Severity::Error, FindingKind::Phi, format!("cell `{}`: {p}", c.name)));
        }
    }
    for e in &s.interior_edges() {
        let Ok(charts) = s.gap_charts(e) else { continue };
        let mut kinks = Vec::new();
        for ch in charts {
            match s.kink_in(e, ch) {
                Ok(k) => kinks.push(k),
                Err(_) => return,
            }
        }
        if kinks[0] < 1 {
            let m = format!("φ is not strictly convex across `{}` (kink {})", e.name, kinks[0]);
            out.push(finding(Severity::Error, FindingKind::Kink, m));
        } else if kinks.windows(2).any(|w| w[0] != w[1]) {
            let m = format!("kink across `{}` depends on the chart: {kinks:?}", e.name);
            out.push(finding(Severity::Error, FindingKind::Kink, m));
        }
    }
}

fn check_boundary(s: &TropicalSurface, out: &mut Vec<Finding>) {
    let n = s.boundary.len();
    for i in 0..n {
        let (prev, u, next) = (&s.boundary[(i + n - 1) % n], &s.boundary[i], &s.boundary[(i + 1) % n]);
        let Ok(ch) = s.vertex_chart(u) else { continue };
        let (Some(a), Some(b), Some(c)) = (ch.get(prev), ch.get(u), ch.get(next)) else {
            let m = format!("chart `{}` at `{u}` misses a boundary neighbour", ch.name);
            out.push(finding(Severity::Error, FindingKind::Chart, m));
            continue;
        };
        if cross(sub(b, a), sub(c, b)) < 0 {
            let m = format!("boundary is not locally convex at `{u}` (chart `{}`)", ch.name);
            out.push(finding(Severity::Error, FindingKind::Boundary, m));
        }
    }
}

/// Checks charts, φ, boundary convexity and singular point placement.
/// Returns no findings iff the surface is valid.
pub fn validate(s: &TropicalSurface) -> Vec<Finding> {
    let mut out = Vec::new();
    check_references(s, &mut out);
    if !out.is_empty() {
        return out;
    }
    check_charts(s, &mut out);
    check_singular(s, &mut out);
    check_phi(s, &mut out);
    check_boundary(s, &mut out);
    out
}

/// Monodromy around the `index`-th singular point of an edge, in the
/// coordinates of the edge's first gap chart.
pub fn monodromy(s: &TropicalSurface, edge: &str, index: usize) -> Result<Mat2, GeometryError> {
    let e = s.edge(edge)?;
    if index >= e.singular_count() {
        return Err(chart_err(format!("edge `{edge}` has no singular point {index}")));
    }
    let charts = s.gap_charts(e)?;
    if charts.len() != e.singular_count() + 1 {
        return Err(chart_err(format!("edge `{edge}` lacks gap charts")));
    }
    let (left, _) = s.sides(e, charts[0])?;
    let mut to_gap = IDENTITY;
    for j in 0..index {
        to_gap = mat_mul(&s.cell_transition(left, charts[j], charts[j + 1])?.lin, &to_gap);
    }
    let (l, r) = s.sides(e, charts[index])?;
    let tl = s.cell_transition(l, charts[index], charts[index + 1])?.lin;
    let tr = s.cell_transition(r, charts[index], charts[index + 1])?.lin;
    let local = mat_mul(&mat_inv(&tl).ok_or_else(|| chart_err("singular transition"))?, &tr);
    let back = mat_inv(&to_gap).ok_or_else(|| chart_err("singular transition"))?;
    Ok(mat_mul(&back, &mat_mul(&local, &to_gap)))
}

/// Monodromy around a loop enclosing every singular point of an edge.
pub fn edge_monodromy(s: &TropicalSurface, edge: &str) -> Result<Mat2, GeometryError> {
    let e = s.edge(edge)?;
    let mut m = IDENTITY;
    for j in 0..e.singular_count() {
        m = mat_mul(&monodromy(s, edge, j)?, &m);
    }
    Ok(m)
}

/// Monodromy around a small loop about the point at fraction `pos` of an
/// edge; the identity unless `pos` is a singular point.
pub fn monodromy_at(s: &TropicalSurface, edge: &str, pos: &Rational) -> Result<Mat2, GeometryError> {
    let e = s.edge(edge)?;
    match singular_positions(e)?.iter().position(|p| p == pos) {
        Some(j) => monodromy(s, edge, j),
        None => Ok(IDENTITY),
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// The exponent `k` with `f_{first} = w^k · f_{second}` on an edge.
pub fn change_of_vertex_exponent(s: &TropicalSurface, edge: &str) -> Result<i32, GeometryError> {
    let e = s.edge(edge)?;
    if e.singular_count() == 0 {
        return Ok(0);
    }
    let ch = s.gap_charts(e)?[0];
    let d = sub(s.coords(ch, &e.vertices[1])?, s.coords(ch, &e.vertices[0])?);
    let dir = primitive(d).ok_or_else(|| chart_err("zero-length edge"))?;
    let n = right_normal(dir);
    let (g, x, y) = ext_gcd(n.0, n.1);
    debug_assert_eq!(g, 1);
    let q = (x, y);
    let m = edge_monodromy(s, edge)?;
    let mq = mat_apply(&m, q);
    let diff = sub(mq, q);
    if cross(diff, dir) != 0 {
        return Err(chart_err(format!("monodromy of `{edge}` does not fix the edge direction")));
    }
    let k = if dir.0 != 0 { diff.0 / dir.0 } else { diff.1 / dir.1 };
    i32::try_from(k).map_err(|_| chart_err("monodromy exponent overflow"))
}

/// Transports a slab function on `edge` from vertex `from` to vertex `to`.
/// Variable 0 of `f` is the edge tangent `w`.
pub fn change_of_vertex(
    s: &TropicalSurface,
    edge: &str,
    f: &Poly,
    from: &str,
    to: &str,
) -> Result<Poly, GeometryError> {
    let e = s.edge(edge)?;
    for v in [from, to] {
        if !e.vertices.iter().any(|x| x == v) {
            return Err(GeometryError::NotOnEdge { vertex: v.into(), edge: edge.into() });
        }
    }
    if from == to {
        return Ok(f.clone());
    }
    let k = change_of_vertex_exponent(s, edge)?;
    let k = if to == e.vertices[0] { k } else { -k };
    let mut shift = vec![0; f.nvars()];
    shift[0] = k;
    Ok(f.shift(&shift))
}

/// Parses the surface's slab functions and fills in each missing endpoint
/// by change of vertex. Functions given at both endpoints must agree.
pub fn slab_assignment(s: &TropicalSurface) -> Result<SlabAssignment, GeometryError> {
    let names = SlabAssignment::names_for(&s.params);
    let mut functions = BTreeMap::new();
    for a in &s.slabs {
        let e = s.edge(&a.edge)?;
        if !e.vertices.contains(&a.vertex) {
            return Err(GeometryError::NotOnEdge { vertex: a.vertex.clone(), edge: a.edge.clone() });
        }
        let f: Poly = parse_laurent(&a.function, &names)?;
        functions.insert((a.edge.clone(), a.vertex.clone()), f);
    }
    for e in &s.edges {
        let [v0, v1] = &e.vertices;
        let f0 = functions.get(&(e.name.clone(), v0.clone())).cloned();
        let f1 = functions.get(&(e.name.clone(), v1.clone())).cloned();
        match (f0, f1) {
            (Some(f0), Some(f1)) => {
                if change_of_vertex(s, &e.name, &f1, v1, v0)? != f0 {
                    return Err(chart_err(format!("slab functions on `{}` violate change of vertex", e.name)));
                }
            }
            (Some(f0), None) => {
                let f1 = change_of_vertex(s, &e.name, &f0, v0, v1)?;
                functions.insert((e.name.clone(), v1.clone()), f1);
            }
            (None, Some(f1)) => {
                let f0 = change_of_vertex(s, &e.name, &f1, v1, v0)?;
                functions.insert((e.name.clone(), v0.clone()), f0);
            }
            (None, None) => {}
        }
    }
    Ok(SlabAssignment { names, functions })
}

/// `∏ cᵢ^{aᵢ} = 1` and `∏ cᵢ^{bᵢ} = 1` for normals `(aᵢ, bᵢ)` and nonzero
/// constants `cᵢ`.
pub fn multiplicative_condition(items: &[(V2, Poly)]) -> Result<bool, GeometryError> {
    let Some(nvars) = items.first().map(|(_, c)| c.nvars()) else {
        return Ok(true);
    };
    for (i, (_, c)) in items.iter().enumerate() {
        if c.is_zero() {
            return Err(GeometryError::DegenerateSlab(format!("#{i}")));
        }
    }
    for coord in 0..2 {
        let mut pos = Poly::one(nvars);
        let mut neg = Poly::one(nvars);
        for (n, c) in items {
            let a = if coord == 0 { n.0 } else { n.1 };
            let p = c.pow(a.unsigned_abs() as u32);
            if a >= 0 {
                pos = pos.mul(&p);
            } else {
                neg = neg.mul(&p);
            }
        }
        if pos != neg {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The constant part in `w` of a slab function, as a polynomial in the
/// remaining variables.
pub fn constant_in_w(f: &Poly) -> Poly {
    Poly::from_terms(f.nvars(), f.terms().iter().filter(|(e, _)| e[0] == 0).map(|(e, c)| (e.clone(), c.clone())))
}

/// The order-one multiplicative condition at an interior vertex.
pub fn order_one_check(s: &TropicalSurface, a: &SlabAssignment, tau: &str) -> Result<bool, GeometryError> {
    if s.boundary.iter().any(|b| b == tau) {
        return Err(chart_err(format!("`{tau}` is a boundary vertex")));
    }
    let ch = s.vertex_chart(tau)?;
    let p = s.coords(ch, tau)?;
    let mut items = Vec::new();
    for e in s.interior_edges().iter().filter(|e| e.vertices.iter().any(|v| v == tau)) {
        let other = if e.vertices[0] == tau { &e.vertices[1] } else { &e.vertices[0] };
        let d = primitive(sub(s.coords(ch, other)?, p)).ok_or_else(|| chart_err("zero-length edge"))?;
        let c = match a.get(&e.name, tau) {
            Some(f) => constant_in_w(f),
            None => Poly::one(a.names.len()),
        };
        if c.is_zero() {
            return Err(GeometryError::DegenerateSlab(e.name.clone()));
        }
        items.push(((d.1, -d.0), c));
    }
    multiplicative_condition(&items)
}
