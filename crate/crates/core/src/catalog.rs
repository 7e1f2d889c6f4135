//! Example surfaces and chart presentations shipped with the crate.

use crate::degen::ChartPresentation;
use crate::io::{read_diagram, read_surface, read_slab, read_versioned, DiagramFile, SlabFile};
use crate::tropical::TropicalSurface;

pub const SURFACES: [(&str, &str); 6] = [
    ("b1", include_str!("../catalog/b1.json")),
    ("b2", include_str!("../catalog/b2.json")),
    ("b3", include_str!("../catalog/b3.json")),
    ("parallel-lines", include_str!("../catalog/parallel-lines.json")),
    ("double-blowup", include_str!("../catalog/double-blowup.json")),
    ("cubic", include_str!("../catalog/cubic.json")),
];

/// The catalog surface with the given key.
pub fn surface(key: &str) -> Option<TropicalSurface> {
    SURFACES
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, text)| read_surface(text).expect("catalog surfaces parse"))
}

pub const PRESENTATIONS: [(&str, &str); 2] = [
    ("local-p2", include_str!("../catalog/local-p2.json")),
    ("mirror-local-p2", include_str!("../catalog/mirror-local-p2.json")),
];

/// The catalog chart presentation with the given key.
pub fn presentation(key: &str) -> Option<ChartPresentation> {
    PRESENTATIONS
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, text)| read_versioned(text).expect("catalog presentations parse"))
}

pub const DIAGRAMS: [(&str, &str); 2] = [
    ("four-slabs", include_str!("../catalog/four-slabs.json")),
    ("three-slabs-one-wall", include_str!("../catalog/three-slabs-one-wall.json")),
];

/// The catalog scattering diagram with the given key.
pub fn diagram(key: &str) -> Option<DiagramFile> {
    DIAGRAMS
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, text)| read_diagram(text).expect("catalog diagrams parse"))
}

pub const SLABS: [(&str, &str); 1] = [("mirror-local-p2-slab", include_str!("../catalog/mirror-local-p2-slab.json"))];

/// The catalog slab function with the given key.
pub fn slab(key: &str) -> Option<SlabFile> {
    SLABS.iter().find(|(k, _)| *k == key).map(|(_, text)| read_slab(text).expect("catalog slabs parse"))
}
