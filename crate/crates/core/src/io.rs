//! Versioned JSON file formats.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use std::sync::Arc;

use crate::diagram::{Ray, RayKind, ScatteringDiagram};
use crate::error::FormatError;
use crate::expr::{parse_context, parse_element};
use crate::grading::{GradingCone, PLGrading};
use crate::lattice::V2;
use crate::scatter::CompletionReport;
use crate::tropical::TropicalSurface;
use crate::family::FamilyVars;
use crate::normalize::FamilyTemplate;
use crate::{Context, Element, Rational};

pub const VERSION: &str = "scatterforge-v1";

#[derive(Serialize)]
struct Versioned<'a, T> {
    version: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

/// Parses a JSON document, checking and removing its version header.
pub fn read_versioned<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    let mut v: Value = serde_json::from_str(text)?;
    let obj = v.as_object_mut().ok_or_else(|| FormatError::Version("<missing>".into()))?;
    match obj.remove("version") {
        Some(Value::String(s)) if s == VERSION => {}
        Some(other) => return Err(FormatError::Version(other.as_str().unwrap_or("<non-string>").into())),
        None => return Err(FormatError::Version("<missing>".into())),
    }
    Ok(serde_json::from_value(v)?)
}

/// Pretty JSON with the version header first.
pub fn write_versioned<T: Serialize>(body: &T) -> String {
    let mut s = serde_json::to_string_pretty(&Versioned { version: VERSION, body }).expect("serializable");
    s.push('\n');
    s
}

pub fn read_surface(text: &str) -> Result<TropicalSurface, FormatError> {
    read_versioned(text)
}

pub fn write_surface(s: &TropicalSurface) -> String {
    write_versioned(s)
}

/// A ray as stored in a diagram file. `degree` records the order at which
/// completion inserted it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayRecord {
    pub kind: RayKind,
    #[serde(rename = "dir")]
    pub direction: V2,
    pub function: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
}

/// The cones of a piecewise-linear grading.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingRecord {
    pub cones: Vec<GradingCone>,
}

/// A scattering diagram as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramFile {
    #[serde(default)]
    pub torus: Vec<String>,
    #[serde(default)]
    pub units: Vec<String>,
    pub grading: GradingRecord,
    pub reference: V2,
    #[serde(default)]
    pub rays: Vec<RayRecord>,
}

impl DiagramFile {
    /// Builds the diagram with functions truncated at `order`.
    pub fn build(&self, order: u32) -> Result<ScatteringDiagram<Rational>, FormatError> {
        let ctx: Arc<Context> = parse_context(&self.torus, &self.units)
            .map_err(|source| FormatError::Expr { field: "units".into(), source })?;
        let grading = PLGrading::new(self.grading.cones.clone())?;
        let mut d = ScatteringDiagram::empty(grading, ctx.clone(), self.reference);
        for (i, r) in self.rays.iter().enumerate() {
            let f = parse_element(&r.function, &ctx, order)
                .map_err(|source| FormatError::Expr { field: format!("rays[{i}].function"), source })?;
            d.push_ray(Ray::new(r.direction, r.kind, f)?)?;
        }
        Ok(d)
    }

    /// Records a diagram; `degrees` gives the insertion degree per ray.
    pub fn from_diagram(d: &ScatteringDiagram<Rational>, degrees: &[Option<u32>]) -> Self {
        let ctx = d.ctx();
        DiagramFile {
            torus: ctx.torus_names().iter().map(|s| s.to_string()).collect(),
            units: ctx.unit_texts(),
            grading: GradingRecord { cones: d.grading().cones.clone() },
            reference: d.reference(),
            rays: d
                .rays()
                .iter()
                .enumerate()
                .map(|(i, r)| RayRecord {
                    kind: r.kind(),
                    direction: r.direction(),
                    function: r.function().render(),
                    degree: degrees.get(i).copied().flatten(),
                })
                .collect(),
        }
    }

    /// The input diagram followed by the walls a completion inserted.
    pub fn completed(d: &ScatteringDiagram<Rational>, input: &DiagramFile, report: &CompletionReport<Rational>) -> Self {
        let mut degrees: Vec<Option<u32>> = input.rays.iter().map(|r| r.degree).collect();
        degrees.extend(report.inserted_walls.iter().map(|w| Some(w.degree)));
        Self::from_diagram(d, &degrees)
    }
}

pub fn read_diagram(text: &str) -> Result<DiagramFile, FormatError> {
    read_versioned(text)
}

pub fn write_diagram(d: &DiagramFile) -> String {
    write_versioned(d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallRecord {
    pub degree: u32,
    pub direction: V2,
    pub function: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlabCorrectionRecord {
    pub degree: u32,
    pub direction: V2,
    pub term: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PureTRecord {
    pub degree: u32,
    pub exponent: [u32; 3],
    pub triple: [String; 3],
}

/// A completion report as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub order: u32,
    pub inserted_walls: Vec<WallRecord>,
    pub slab_corrections: Vec<SlabCorrectionRecord>,
    pub residual_pure_t: Vec<PureTRecord>,
}

impl ReportFile {
    pub fn from_report(r: &CompletionReport<Rational>, ctx: &Context) -> Self {
        ReportFile {
            order: r.order,
            inserted_walls: r
                .inserted_walls
                .iter()
                .map(|w| WallRecord { degree: w.degree, direction: w.ray.direction(), function: w.ray.function().render() })
                .collect(),
            slab_corrections: r
                .slab_corrections
                .iter()
                .map(|s| SlabCorrectionRecord { degree: s.degree, direction: s.direction, term: s.term.render() })
                .collect(),
            residual_pure_t: r
                .residual_pure_t
                .iter()
                .map(|p| PureTRecord {
                    degree: p.degree,
                    exponent: [p.exponent.a, p.exponent.b, p.exponent.c],
                    triple: [0, 1, 2].map(|i| p.triple[i].render(ctx)),
                })
                .collect(),
        }
    }
}

pub fn read_report(text: &str) -> Result<ReportFile, FormatError> {
    read_versioned(text)
}

pub fn write_report(r: &ReportFile) -> String {
    write_versioned(r)
}

/// A family with a `@unit` slot, as stored in a slab-function file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateRecord {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub params: Vec<String>,
    pub generators: Vec<String>,
}

impl TemplateRecord {
    pub fn template(&self) -> FamilyTemplate {
        FamilyTemplate {
            vars: FamilyVars::new(self.vertices.clone(), self.params.clone()),
            generators: self.generators.clone(),
        }
    }
}

/// A slab function to normalize, optionally with the family it enters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlabFile {
    #[serde(default)]
    pub torus: Vec<String>,
    #[serde(default)]
    pub units: Vec<String>,
    pub function: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<TemplateRecord>,
}

impl SlabFile {
    pub fn element(&self, order: u32) -> Result<Element, FormatError> {
        let ctx: Arc<Context> = parse_context(&self.torus, &self.units)
            .map_err(|source| FormatError::Expr { field: "units".into(), source })?;
        parse_element(&self.function, &ctx, order).map_err(|source| FormatError::Expr { field: "function".into(), source })
    }
}

pub fn read_slab(text: &str) -> Result<SlabFile, FormatError> {
    read_versioned(text)
}

pub fn write_slab(s: &SlabFile) -> String {
    write_versioned(s)
}
