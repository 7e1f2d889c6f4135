//! `scatterforge`: scattering completion, slab normalization, degenerations and rendering.
//!
//! Exit codes: 0 success, 1 algorithm error, 2 residual pure-t term without
//! `--allow-pure-t`, 3 validation findings, 64 malformed input, 74 I/O error.

mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use scatterforge::catalog;
use scatterforge::degen::{build_family, chart_transition_report, ChartPresentation};
use scatterforge::error::{FormatError, ScatterError};
use scatterforge::io::{read_diagram, read_slab, read_surface, read_versioned, DiagramFile, ReportFile};
use scatterforge::lattice::V2;
use scatterforge::normalize::{apply_normalization, normalize_slab};
use scatterforge::scatter::complete;
use scatterforge::tropical::{slab_assignment, validate, Severity};

use svg::{Labels, RenderOptions};

const EXIT_ALGORITHM: u8 = 1;
const EXIT_PURE_T: u8 = 2;
const EXIT_FINDINGS: u8 = 3;
const EXIT_PARSE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Parser, Debug)]
#[command(name = "scatterforge", version, about = "Exact scattering diagrams and toric degenerations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for reports and families.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the primary artifact here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Complete a scattering diagram; prints the report, writes the diagram to --output.
    Scatter {
        input: String,
        #[arg(long, default_value_t = 10)]
        order: u32,
        #[arg(long)]
        allow_pure_t: bool,
        /// Reference direction "a,b" for the loop around the joint.
        #[arg(long, value_parser = parse_reference)]
        reference: Option<V2>,
    },
    /// Print g(t) making log(f + g(t)) free of pure t-powers.
    Normalize {
        input: String,
        #[arg(long, default_value_t = 5)]
        order: u32,
    },
    /// Validate a tropical surface and print its family of relations.
    Degenerate { input: String },
    /// Validate files by kind; with no inputs, every catalog entry.
    Validate { inputs: Vec<String> },
    /// Draw a diagram as SVG.
    Render {
        input: String,
        #[arg(long, default_value_t = 20)]
        order: u32,
        #[arg(long, default_value_t = 600)]
        size: u32,
        #[arg(long, value_enum, default_value_t = Labels::Leading)]
        labels: Labels,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::new(EXIT_PARSE, e.to_string())
    }
}

fn parse_reference(s: &str) -> Result<V2, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((a.parse().map_err(|_| format!("bad integer `{a}`"))?, b.parse().map_err(|_| format!("bad integer `{b}`"))?)),
        _ => Err(format!("expected \"a,b\", got `{s}`")),
    }
}

/// Reads a file, or a catalog entry written `catalog:KEY`.
fn load(input: &str) -> Result<String, Failure> {
    if let Some(key) = input.strip_prefix("catalog:") {
        return catalog_entries()
            .into_iter()
            .find(|(k, _)| *k == key)
            .map(|(_, text)| text.to_string())
            .ok_or_else(|| Failure::new(EXIT_IO, format!("no catalog entry `{key}`")));
    }
    fs::read_to_string(input).map_err(|e| Failure::new(EXIT_IO, format!("{input}: {e}")))
}

fn catalog_entries() -> Vec<(&'static str, &'static str)> {
    let mut all = Vec::new();
    all.extend(catalog::SURFACES);
    all.extend(catalog::PRESENTATIONS);
    all.extend(catalog::DIAGRAMS);
    all.extend(catalog::SLABS);
    all
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn monomial(e: [u32; 3]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(["x", "y", "z"])
        .filter(|(k, _)| **k > 0)
        .map(|(k, v)| if *k == 1 { v.to_string() } else { format!("{v}^{k}") })
        .collect();
    parts.join("*")
}

fn report_table(r: &ReportFile) -> String {
    if r.inserted_walls.is_empty() && r.slab_corrections.is_empty() && r.residual_pure_t.is_empty() {
        return format!("order {}: consistent, nothing inserted\n", r.order);
    }
    let mut rows: Vec<(u32, &str, String, String)> = Vec::new();
    for w in &r.inserted_walls {
        rows.push((w.degree, "wall", format!("({},{})", w.direction.0, w.direction.1), w.function.clone()));
    }
    for s in &r.slab_corrections {
        rows.push((s.degree, "slab", format!("({},{})", s.direction.0, s.direction.1), s.term.clone()));
    }
    for p in &r.residual_pure_t {
        rows.push((p.degree, "pure-t", monomial(p.exponent), p.triple.join(", ")));
    }
    rows.sort_by_key(|r| r.0);
    let mut out = format!(
        "order {}: consistent after {} walls, {} slab corrections, {} pure-t terms\n",
        r.order,
        r.inserted_walls.len(),
        r.slab_corrections.len(),
        r.residual_pure_t.len()
    );
    out.push_str(&format!("{:>6}  {:<6}  {:<10}  {}\n", "degree", "kind", "direction", "function"));
    for (d, kind, dir, f) in rows {
        out.push_str(&format!("{d:>6}  {kind:<6}  {dir:<10}  {f}\n"));
    }
    out
}

fn cmd_scatter(
    cli: &Cli,
    input: &str,
    order: u32,
    allow_pure_t: bool,
    reference: Option<V2>,
) -> Result<(), Failure> {
    let mut file = read_diagram(&load(input)?)?;
    if let Some(r) = reference {
        file.reference = r;
    }
    let d = file.build(order)?;
    let (c, rep) = complete(&d, order, allow_pure_t).map_err(|e| match e {
        ScatterError::NormalizationRequired { .. } => {
            Failure::new(EXIT_PURE_T, format!("{e}; rerun with --allow-pure-t to keep going"))
        }
        ScatterError::Diagram(_) => Failure::new(EXIT_PARSE, e.to_string()),
        _ => Failure::new(EXIT_ALGORITHM, e.to_string()),
    })?;
    if let Some(p) = &cli.output {
        emit(Some(p), &scatterforge::io::write_diagram(&DiagramFile::completed(&c, &file, &rep)))?;
    }
    let report = ReportFile::from_report(&rep, c.ctx());
    let text = match cli.format {
        Format::Text => report_table(&report),
        Format::Json => scatterforge::io::write_report(&report),
    };
    emit(None, &text)
}

fn cmd_normalize(cli: &Cli, input: &str, order: u32) -> Result<(), Failure> {
    let file = read_slab(&load(input)?)?;
    let f = file.element(3 * order)?;
    let g = normalize_slab(&f, order).map_err(|e| Failure::new(EXIT_ALGORITHM, e.to_string()))?;
    let family = match &file.template {
        Some(t) => Some(
            apply_normalization(&t.template(), &g, order)
                .map_err(|e| Failure::new(EXIT_PARSE, format!("template: {e}")))?,
        ),
        None => None,
    };
    let text = match cli.format {
        Format::Text => {
            let mut s = format!("{}\n", g.render_list());
            if let Some(fam) = &family {
                s.push_str(&fam.to_string());
            }
            s
        }
        Format::Json => {
            let series: Vec<String> = g.to_vec().iter().map(|c| c.to_string()).collect();
            let mut v = json!({ "order": order, "series": series });
            if let Some(fam) = &family {
                v["family"] = json!(fam.generators.iter().map(|p| fam.vars.render(p)).collect::<Vec<_>>());
            }
            json_text(&v)
        }
    };
    emit(cli.output.as_deref(), &text)
}

fn cmd_degenerate(cli: &Cli, input: &str) -> Result<(), Failure> {
    let s = read_surface(&load(input)?)?;
    let findings = validate(&s);
    for f in &findings {
        eprintln!("{}: {f}", s.name);
    }
    if findings.iter().any(|f| f.severity == Severity::Error) {
        return Err(Failure::new(EXIT_FINDINGS, format!("{}: refusing to degenerate an invalid surface", s.name)));
    }
    let fam = slab_assignment(&s)
        .and_then(|a| build_family(&s, &a))
        .map_err(|e| Failure::new(EXIT_ALGORITHM, e.to_string()))?;
    let text = match cli.format {
        Format::Text => fam.to_string(),
        Format::Json => json_text(&json!({
            "name": s.name,
            "variables": fam.vars.all(),
            "generators": fam.generators.iter().map(|p| fam.vars.render(p)).collect::<Vec<_>>(),
        })),
    };
    emit(cli.output.as_deref(), &text)
}

/// Problems found in one file, by kind of content.
fn check_text(text: &str) -> Result<Vec<String>, Failure> {
    let v: Value = serde_json::from_str(text).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
    let has = |k: &str| v.get(k).is_some();
    if has("edges") {
        let s = read_surface(text)?;
        return Ok(validate(&s).iter().map(|f| f.to_string()).collect());
    }
    if has("transitions") {
        let p: ChartPresentation = read_versioned(text)?;
        let outcomes = chart_transition_report(&p).map_err(|e| Failure::new(EXIT_ALGORITHM, e.to_string()))?;
        return Ok(outcomes
            .iter()
            .filter(|o| !o.holds)
            .map(|o| format!("error [Transition] {} -> {}: {} maps to {}", o.from, o.to, o.relation, o.image))
            .collect());
    }
    if has("rays") {
        let file = read_diagram(text)?;
        file.build(0)?;
        return Ok(Vec::new());
    }
    if has("function") {
        read_slab(text)?.element(0)?;
        return Ok(Vec::new());
    }
    Err(Failure::new(EXIT_PARSE, "unrecognized file: expected a surface, presentation, diagram or slab"))
}

fn cmd_validate(inputs: &[String]) -> Result<(), Failure> {
    let names: Vec<String> = if inputs.is_empty() {
        catalog_entries().iter().map(|(k, _)| format!("catalog:{k}")).collect()
    } else {
        inputs.to_vec()
    };
    let mut worst = 0u8;
    for name in &names {
        match load(name).and_then(|t| check_text(&t)) {
            Ok(problems) if problems.is_empty() => println!("{name}: ok"),
            Ok(problems) => {
                println!("{name}: {} findings", problems.len());
                for p in problems {
                    eprintln!("{name}: {p}");
                }
                worst = worst.max(EXIT_FINDINGS);
            }
            Err(f) => {
                println!("{name}: unreadable");
                eprintln!("{name}: {}", f.message);
                worst = worst.max(f.code);
            }
        }
    }
    match worst {
        0 => Ok(()),
        code => Err(Failure::new(code, format!("{} inputs checked", names.len()))),
    }
}

fn cmd_render(cli: &Cli, input: &str, order: u32, opts: RenderOptions) -> Result<(), Failure> {
    let file = read_diagram(&load(input)?)?;
    let d = file.build(order)?;
    let leading: Vec<String> = d.rays().iter().map(|r| r.function().leading_term()).collect();
    emit(cli.output.as_deref(), &svg::render(&file, &leading, opts))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Scatter { input, order, allow_pure_t, reference } => {
            cmd_scatter(cli, input, *order, *allow_pure_t, *reference)
        }
        Command::Normalize { input, order } => cmd_normalize(cli, input, *order),
        Command::Degenerate { input } => cmd_degenerate(cli, input),
        Command::Validate { inputs } => cmd_validate(inputs),
        Command::Render { input, order, size, labels } => {
            cmd_render(cli, input, *order, RenderOptions { size: *size, labels: *labels })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("scatterforge: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
