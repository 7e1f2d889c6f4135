//! Static SVG drawings of scattering diagrams.

use std::fmt::Write;

use scatterforge::diagram::RayKind;
use scatterforge::io::DiagramFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Labels {
    None,
    Leading,
    Full,
}

#[derive(Clone, Copy, Debug)]
pub struct RenderOptions {
    pub size: u32,
    pub labels: Labels,
}

struct Segment {
    kind: RayKind,
    direction: (i64, i64),
    label: String,
}

/// Draws each ray as a segment from the origin. Slabs are thick, walls thin.
pub fn render(file: &DiagramFile, leading: &[String], opts: RenderOptions) -> String {
    let segments: Vec<Segment> = file
        .rays
        .iter()
        .zip(leading)
        .map(|(r, lead)| {
            let text = match opts.labels {
                Labels::None => String::new(),
                Labels::Leading => lead.clone(),
                Labels::Full => r.function.clone(),
            };
            let label = match (opts.labels, r.degree) {
                (Labels::None, _) => String::new(),
                (_, Some(d)) => format!("{text} [{d}]"),
                (_, None) => text,
            };
            Segment { kind: r.kind, direction: r.direction, label }
        })
        .collect();
    let size = opts.size as f64;
    let c = size / 2.0;
    let len = size * 0.4;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        opts.size
    )
    .unwrap();
    writeln!(out, r#"<rect width="{0}" height="{0}" fill="white"/>"#, opts.size).unwrap();
    writeln!(out, r##"<g stroke="#bbbbbb" stroke-width="0.5" stroke-dasharray="4 4">"##).unwrap();
    writeln!(out, r#"<line x1="0" y1="{c:.2}" x2="{size:.2}" y2="{c:.2}"/>"#).unwrap();
    writeln!(out, r#"<line x1="{c:.2}" y1="0" x2="{c:.2}" y2="{size:.2}"/>"#).unwrap();
    writeln!(out, "</g>").unwrap();
    for s in &segments {
        let (dx, dy) = (s.direction.0 as f64, s.direction.1 as f64);
        let norm = (dx * dx + dy * dy).sqrt();
        let (ex, ey) = (c + len * dx / norm, c - len * dy / norm);
        let (width, colour) = match s.kind {
            RayKind::Slab => (3.0, "#1f3a93"),
            RayKind::Wall => (1.0, "#b03a2e"),
        };
        writeln!(
            out,
            r#"<line x1="{c:.2}" y1="{c:.2}" x2="{ex:.2}" y2="{ey:.2}" stroke="{colour}" stroke-width="{width}"/>"#
        )
        .unwrap();
        if !s.label.is_empty() {
            let anchor = if dx < 0.0 { "end" } else { "start" };
            let (lx, ly) = (ex + 6.0 * dx / norm, ey - 6.0 * dy / norm);
            writeln!(
                out,
                r#"<text x="{lx:.2}" y="{ly:.2}" font-family="monospace" font-size="10" text-anchor="{anchor}">{}</text>"#,
                escape(&s.label)
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

