mod common;

use common::*;
use proptest::prelude::*;

use scatterforge::catalog;
use scatterforge::diagram::ScatteringDiagram;
use scatterforge::io::*;
use scatterforge::scatter::complete;
use scatterforge::FormatError;

#[test]
fn surfaces_round_trip() {
    for (key, text) in catalog::SURFACES {
        let s = read_surface(text).unwrap();
        let out = write_surface(&s);
        assert_eq!(read_surface(&out).unwrap(), s, "{key}");
        assert_eq!(write_surface(&read_surface(&out).unwrap()), out, "{key}");
        assert!(out.starts_with("{\n  \"version\": \"scatterforge-v1\""));
    }
}

#[test]
fn presentations_round_trip() {
    for (key, _) in catalog::PRESENTATIONS {
        let p = catalog::presentation(key).unwrap();
        let out = write_versioned(&p);
        assert_eq!(read_versioned::<scatterforge::degen::ChartPresentation>(&out).unwrap(), p);
    }
}

#[test]
fn diagrams_round_trip() {
    for (key, text) in catalog::DIAGRAMS {
        let file = read_diagram(text).unwrap();
        let out = write_diagram(&file);
        assert_eq!(read_diagram(&out).unwrap(), file, "{key}");
        let d = file.build(10).unwrap();
        let again = DiagramFile::from_diagram(&d, &[]);
        assert_eq!(again.build(10).unwrap(), d, "{key}");
        assert_eq!(write_diagram(&again), write_diagram(&read_diagram(&write_diagram(&again)).unwrap()));
    }
}

#[test]
fn completed_diagrams_and_reports_round_trip() {
    let file = catalog::diagram("three-slabs-one-wall").unwrap();
    let d = file.build(10).unwrap();
    let (c, rep) = complete(&d, 10, false).unwrap();
    let out = DiagramFile::completed(&c, &file, &rep);
    assert_eq!(out.rays.len(), 11);
    let degrees: Vec<Option<u32>> = out.rays.iter().map(|r| r.degree).collect();
    assert_eq!(degrees.iter().filter(|d| d.is_some()).count(), 7);
    let text = write_diagram(&out);
    assert_eq!(read_diagram(&text).unwrap().build(10).unwrap(), c);

    let report = ReportFile::from_report(&rep, c.ctx());
    let text = write_report(&report);
    assert_eq!(read_report(&text).unwrap(), report);
    assert_eq!(report.inserted_walls.len(), 7);
    assert_eq!(report.slab_corrections.len(), 3);
}

#[test]
fn slab_files_round_trip() {
    let s = catalog::slab("mirror-local-p2-slab").unwrap();
    let out = write_slab(&s);
    assert_eq!(read_slab(&out).unwrap(), s);
    assert_eq!(s.element(3).unwrap(), el("1 + x + y + z", &plain(), 3));
    assert_eq!(s.template.as_ref().unwrap().template().generators.len(), 2);
}

#[test]
fn versions_are_checked() {
    let bad = "{\"version\": \"scatterforge-v2\", \"function\": \"1\"}";
    assert!(matches!(read_slab(bad), Err(FormatError::Version(v)) if v == "scatterforge-v2"));
    assert!(matches!(read_slab("{\"function\": \"1\"}"), Err(FormatError::Version(_))));
    assert!(matches!(read_slab("[1, 2]"), Err(FormatError::Version(_))));
    assert!(matches!(read_slab("{"), Err(FormatError::Json(_))));
}

#[test]
fn bad_functions_name_their_field() {
    let mut file = catalog::diagram("four-slabs").unwrap();
    file.rays[2].function = "1 + y +".into();
    match file.build(4) {
        Err(FormatError::Expr { field, .. }) => assert_eq!(field, "rays[2].function"),
        other => panic!("unexpected {other:?}"),
    }
    let mut file = catalog::diagram("four-slabs").unwrap();
    file.rays[0].direction = (2, 0);
    assert!(matches!(file.build(4), Err(FormatError::Diagram(_))));
}

proptest! {
    #![proptest_config(config(0x10f1_0001))]

    #[test]
    fn random_diagrams_round_trip(walls in prop::collection::vec(wall(5), 0..4)) {
        let mut d = ScatteringDiagram::empty(grading_three_slabs(), ctx_w(), (0, 1));
        for w in walls {
            let _ = d.push_ray(w);
        }
        let file = DiagramFile::from_diagram(&d, &[]);
        let text = write_diagram(&file);
        let back = read_diagram(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(back.build(5).unwrap(), d);
    }
}
