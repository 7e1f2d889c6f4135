use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scatterforge"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scatterforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn drawn_rays(svg: &str) -> usize {
    svg.matches("<line").count() - 2
}

#[test]
fn scatter_four_slabs_inserts_one_wall() {
    let o = run(&["scatter", "catalog:four-slabs", "--order", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("order 20: consistent after 1 walls, 0 slab corrections"));
    assert!(out.contains("     2  wall    (1,1)       1 + x*y\n"));
}

#[test]
fn scatter_empty_diagram() {
    let o = run(&["scatter", "tests/fixtures/empty.json", "--order", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "order 7: consistent, nothing inserted\n");
}

#[test]
fn scatter_three_slabs_report_rows() {
    let o = run(&["scatter", "catalog:three-slabs-one-wall", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let walls = v["inserted_walls"].as_array().unwrap();
    let degrees: Vec<u64> = walls.iter().map(|w| w["degree"].as_u64().unwrap()).collect();
    assert_eq!(degrees, [4, 4, 4, 6, 10, 10, 10]);
    assert_eq!(v["slab_corrections"].as_array().unwrap().len(), 3);
    assert!(v["residual_pure_t"].as_array().unwrap().is_empty());
}

#[test]
fn residual_pure_t_needs_the_flag() {
    let o = run(&["scatter", "tests/fixtures/pure-t.json", "--order", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--allow-pure-t"));
    let o = run(&["scatter", "tests/fixtures/pure-t.json", "--order", "6", "--allow-pure-t"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pure-t  x*y*z"));
}

#[test]
fn scatter_output_round_trips() {
    let path = temp("completed.json");
    let o = run(&["scatter", "catalog:three-slabs-one-wall", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let file = scatterforge::io::read_diagram(&text).unwrap();
    assert_eq!(file.rays.len(), 11);
    assert_eq!(scatterforge::io::write_diagram(&file), text);
    let o = run(&["scatter", path.to_str().unwrap()]);
    assert_eq!(stdout(&o), "order 10: consistent, nothing inserted\n");
}

#[test]
fn reference_flag() {
    let o = run(&["scatter", "catalog:four-slabs", "--order", "6", "--reference", "2,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(1,1)       1 + x*y"));
    assert_eq!(run(&["scatter", "catalog:four-slabs", "--reference", "1,x"]).status.code(), Some(64));
    assert_eq!(run(&["scatter", "catalog:four-slabs", "--reference", "1,0"]).status.code(), Some(64));
}

#[test]
fn normalize_series() {
    let o = run(&["normalize", "catalog:mirror-local-p2-slab"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "-2, 5, -32, 286, -3038");
    assert_eq!(lines[1], "X*Y*Z - t*W^3");
    assert_eq!(
        lines[2],
        "U*V - t^2*X*W - t^2*Y*W - t^2*Z*W - t^2*W^2 + 2*t^3*W^2 - 5*t^4*W^2 + 32*t^5*W^2 - 286*t^6*W^2 + 3038*t^7*W^2"
    );
    let o = run(&["normalize", "catalog:mirror-local-p2-slab", "--order", "1"]);
    assert_eq!(stdout(&o).lines().next(), Some("-2"));
    let o = run(&["normalize", "tests/fixtures/unit.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "\n");
}

#[test]
fn degenerate_catalog_surfaces() {
    let o = run(&["degenerate", "catalog:b1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "X*Y - alpha*t*Z^2 - t*Z*W\n");
    let o = run(&["degenerate", "catalog:cubic"]);
    assert_eq!(stdout(&o), "X*Y*Z - t*X*U^2 - t*Y*U^2 - t*Z*U^2 - t*U^3 - t^2*U^3\n");
}

#[test]
fn degenerate_refuses_invalid_surfaces() {
    let o = run(&["degenerate", "tests/fixtures/non-convex.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("[Boundary]"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn validate_catalog_and_files() {
    let o = run(&["validate"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 11);
    let o = run(&["validate", "catalog:b2", "tests/fixtures/non-convex.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("catalog:b2: ok"));
}

#[test]
fn malformed_inputs() {
    let bad = temp("bad-version.json");
    std::fs::write(&bad, "{\"version\": \"scatterforge-v0\", \"function\": \"1\"}").unwrap();
    let o = run(&["normalize", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(64));
    assert!(stderr(&o).contains("scatterforge-v0"));
    let bad = temp("bad-expr.json");
    std::fs::write(&bad, "{\"version\": \"scatterforge-v1\", \"function\": \"1 + x +\"}").unwrap();
    let o = run(&["normalize", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(64));
    assert!(stderr(&o).contains("byte"));
    assert_eq!(run(&["normalize", "tests/fixtures/missing.json"]).status.code(), Some(74));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
}

#[test]
fn render_completed_diagram() {
    let path = temp("render-input.json");
    run(&["scatter", "catalog:three-slabs-one-wall", "--output", path.to_str().unwrap()]);
    let a = run(&["render", path.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    let svg = stdout(&a);
    assert_eq!(drawn_rays(&svg), 11);
    assert_eq!(svg.matches("<text").count(), 11);
    assert_eq!(svg.matches("stroke-width=\"3\"").count(), 3);
    assert!(svg.contains(">(5 + 10*w + 5*w^2)*x*z^3 [4]</text>"));
    assert_eq!(stdout(&run(&["render", path.to_str().unwrap()])), svg);
    let bare = stdout(&run(&["render", path.to_str().unwrap(), "--labels", "none"]));
    assert_eq!(bare.matches("<text").count(), 0);
}

#[test]
fn render_empty_diagram_draws_axes_only() {
    let svg = stdout(&run(&["render", "tests/fixtures/empty.json", "--size", "200"]));
    assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"200\""));
    assert_eq!(drawn_rays(&svg), 0);
    assert_eq!(svg.matches("<line").count(), 2);
}
