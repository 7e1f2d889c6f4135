mod common;

use common::*;
use proptest::prelude::*;
use proptest::test_runner::{TestCaseError, TestRunner};

use scatterforge::catalog;
use scatterforge::degen::{build_family, chart_transition_check, chart_transition_report, codim_one_local_model, gluing_relation};
use scatterforge::diagram::{cross_ray, Orientation, ScatteringDiagram};
use scatterforge::element::TruncatedElement;
use scatterforge::family::{two_by_two_minors, FamilyIdeal, FamilyVars};
use scatterforge::normalize::normalize_slab;
use scatterforge::scatter::{complete, complete_through};
use scatterforge::tropical::*;
use scatterforge::{Element, Poly};

type Outcome = Result<(), String>;

fn check(cond: bool, what: &str) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn family(key: &str) -> FamilyIdeal {
    let s = catalog::surface(key).unwrap();
    build_family(&s, &slab_assignment(&s).unwrap()).unwrap()
}

fn ideal(vars: &FamilyVars, texts: &[&str]) -> FamilyIdeal {
    FamilyIdeal::from_texts(vars.clone(), texts).unwrap()
}

fn minors(vars: &FamilyVars, top: &[&str], bottom: &[&str]) -> FamilyIdeal {
    let p = |t: &[&str]| t.iter().map(|x| vars.parse(x).unwrap()).collect::<Vec<Poly>>();
    let (a, b) = (p(top), p(bottom));
    let mut out = FamilyIdeal::new(vars.clone());
    for m in two_by_two_minors([&a, &b]) {
        out.push(&m);
    }
    out
}

fn criterion_1() -> Outcome {
    let names = vec!["w".to_string(), "alpha".to_string()];
    let f: Poly = scatterforge::expr::parse_laurent("alpha + w", &names).unwrap();
    let (vars, rel) = codim_one_local_model(&f, 1, &["alpha".to_string()]);
    check(rel == vars.parse("x*y - (alpha + w)*t").unwrap(), "local model")?;
    let s = catalog::surface("b1").unwrap();
    let asg = slab_assignment(&s).map_err(|e| e.to_string())?;
    let e = s.edge("ZW").unwrap();
    let at_z = gluing_relation(&s, &asg, e, "Z").map_err(|e| e.to_string())?;
    let at_w = gluing_relation(&s, &asg, e, "W").map_err(|e| e.to_string())?;
    check(at_z.is_some() && at_z == at_w, "the two charts disagree")
}

fn criterion_2() -> Outcome {
    let d = catalog::diagram("four-slabs").unwrap().build(20).map_err(|e| e.to_string())?;
    let (c, rep) = complete(&d, 20, false).map_err(|e| e.to_string())?;
    check(rep.inserted_walls.len() == 1, "wall count")?;
    let w = &rep.inserted_walls[0].ray;
    check(w.direction() == (1, 1), "direction")?;
    check(*w.function() == el("1 + x*y", &plain(), 20), "function")?;
    check(rep.slab_corrections.is_empty(), "slab corrections")?;
    check(c.is_consistent(20, false).map_err(|e| e.to_string())?.0, "consistency")
}

fn three_slabs_file(order: u32) -> ScatteringDiagram<scatterforge::Rational> {
    catalog::diagram("three-slabs-one-wall").unwrap().build(order).unwrap()
}

fn criterion_3() -> Outcome {
    let ctx = ctx_w();
    let (d9, _) = complete_through(&three_slabs_file(10), 10, 9, false).map_err(|e| e.to_string())?;
    let l = d9.loop_compose(10).map_err(|e| e.to_string())?;
    let e = |s: &str| el(s, &ctx, 10);
    check(l.image_x() == e("(1 - 700*x^4*y*z^5/(1 + w) - 14*x^5*y^2*z^3/(1 + w) - 56*(1 + w)^2*w*x^4*y^4*z^2)*x"), "image of x")?;
    check(l.image_y() == e("(1 + 175*x^4*y*z^5/(1 + w) - 28*x^5*y^2*z^3/(1 + w) + 56*(1 + w)^2*w*x^4*y^4*z^2)*y"), "image of y")?;
    check(l.image_z() == e("(1 + 525*x^4*y*z^5/(1 + w) + 42*x^5*y^2*z^3/(1 + w))*z"), "image of z")
}

fn criterion_4() -> Outcome {
    let ctx = ctx_w();
    let (c, rep) = complete(&three_slabs_file(10), 10, false).map_err(|e| e.to_string())?;
    let e = |s: &str| el(s, &ctx, 10);
    let walls: Vec<(u32, (i64, i64), Element)> =
        rep.inserted_walls.iter().map(|w| (w.degree, w.ray.direction(), w.ray.function().clone())).collect();
    let expected = vec![
        (4, (1, 0), e("1 + 2*(1 + w)^2*x^2*y*z")),
        (4, (1, 3), e("1 - (1 + w)^2*w*x*y^3")),
        (4, (-2, -3), e("1 + 5*(1 + w)^2*x*z^3")),
        (6, (1, -1), e("1 + 7*(1 + w)^5*t*x^2*z")),
        (10, (1, 1), e("1 - 56*(1 + w)^4*t^2*w*x^2*y^2")),
        (10, (-1, -4), e("1 + 175*(1 + w)^4*t*x^3*z^4")),
        (10, (2, -1), e("1 + 14*(1 + w)^7*t^2*x^3*z")),
    ];
    check(walls == expected, "inserted walls")?;
    let slabs: Vec<(u32, (i64, i64), Element)> =
        rep.slab_corrections.iter().map(|s| (s.degree, s.direction, s.term.clone())).collect();
    let expected = vec![
        (8, (2, 3), e("-6*(1 + w)^2*w*t*x^2*y^3")),
        (8, (-1, 0), e("-15*(1 + w)^2*t^2*w*y*z")),
        (8, (-1, -3), e("30*(1 + w)^2*t*x^2*z^3")),
    ];
    check(slabs == expected, "slab corrections")?;
    check(!rep.has_negative_unit_powers(), "negative unit powers")?;
    check(c.is_consistent(10, false).map_err(|e| e.to_string())?.0, "consistency")
}

fn criterion_5() -> Outcome {
    let g = normalize_slab(&el("1 + x + y + z", &plain(), 15), 5).map_err(|e| e.to_string())?;
    check(g.to_vec() == [-2, 5, -32, 286, -3038].map(q).to_vec(), "series")
}

fn criterion_6() -> Outcome {
    let b1 = family("b1");
    check(b1.same_generators(&ideal(&b1.vars, &["X*Y - t*Z*(alpha*Z + W)"])), "B1")?;
    let b2 = family("b2");
    check(b2.same_generators(&ideal(&b2.vars, &["W*Y - U*Z", "X*Y - t*(alpha*U + W)*U", "X*Z - t*(alpha*U + W)*W"])), "B2")?;
    check(b2.same_generators(&minors(&b2.vars, &["X", "U", "W"], &["t*(alpha*U + W)", "Y", "Z"])), "B2 minors")?;
    let b3 = family("b3");
    check(b3.same_generators(&ideal(&b3.vars, &["X*Y - t*(U + W)*U", "Z*W - t*(U + Y)*U"])), "B3")?;
    let pl = family("parallel-lines");
    let m = minors(&pl.vars, &["X", "U", "R", "t*(V + lambda*S)"], &["t*(U + R)", "V", "S", "Y"]);
    check(m.generators.len() == 6 && pl.same_generators(&m), "parallel lines")?;
    let xy = pl.vars.normalize(&pl.vars.parse("X*Y - t^2*(U + R)*(V + lambda*S)").unwrap());
    check(pl.generators.contains(&xy), "parallel lines edge path")?;
    let cubic = family("cubic");
    check(cubic.same_generators(&ideal(&cubic.vars, &["X*Y*Z - t*((1 + t)*U^3 + (X + Y + Z)*U^2)"])), "cubic")
}

fn criterion_7() -> Outcome {
    for key in ["local-p2", "mirror-local-p2"] {
        let p = catalog::presentation(key).unwrap();
        check(chart_transition_check(&p).map_err(|e| e.to_string())?, key)?;
    }
    let report = chart_transition_report(&catalog::presentation("local-p2").unwrap()).map_err(|e| e.to_string())?;
    let uv = report.iter().find(|o| o.from == "U" && o.to == "V").ok_or("missing U to V")?;
    check(uv.relation == "r*v*z*s - (1 + s)*t" && uv.image == "p*w*x*s - s*t - t" && uv.holds, "U to V")
}

fn run<S: Strategy>(seed: u64, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Outcome {
    let mut runner = TestRunner::new(config_with(seed, 100));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn fail(msg: &str) -> TestCaseError {
    TestCaseError::fail(msg.to_string())
}

fn ensure(cond: bool, msg: &str) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(fail(msg))
    }
}

fn criterion_8() -> Outcome {
    let e = || element(ctx_w(), 4, true);
    run(0xacce_0001, (e(), e(), e()), |(a, b, c)| {
        ensure(&(&a * &b) * &c == &a * &(&b * &c), "associativity")?;
        ensure(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), "distributivity")?;
        ensure(&a * &b == &b * &a && &a + &b == &b + &a, "commutativity")
    })?;
    run(0xacce_0002, unipotent(ctx_w(), 5, true), |f| {
        ensure((&f.invert().map_err(|e| fail(&e.to_string()))? * &f).is_one(), "inverse")
    })?;
    run(0xacce_0003, (wall(5), element(ctx_w(), 5, true), element(ctx_w(), 5, true)), |(r, f, g)| {
        let c = |h: &Element| cross_ray(&r, h, Orientation::Counterclockwise).unwrap();
        ensure(c(&(&f * &g)) == &c(&f) * &c(&g), "multiplicative")?;
        let t = TruncatedElement::t(&ctx_w(), 5);
        ensure(c(&t) == t, "fixes xyz")
    })?;
    run(0xacce_0004, prop::collection::vec(wall(6), 0..5), |walls| {
        let mut d = ScatteringDiagram::empty(grading_three_slabs(), ctx_w(), (2, 17));
        for w in walls {
            let _ = d.push_ray(w);
        }
        let l = d.loop_compose(6).unwrap();
        ensure(&(&l.image_x() * &l.image_y()) * &l.image_z() == TruncatedElement::t(&ctx_w(), 6), "t")
    })?;
    run(0xacce_0005, (prop::collection::vec(wall(4), 1..3), 2u32..=4), |(walls, k)| {
        let mut d = ScatteringDiagram::empty(grading_three_slabs(), ctx_w(), (0, 1));
        for w in walls {
            let _ = d.push_ray(w);
        }
        let Ok((c, _)) = complete(&d, k, true) else { return Ok(()) };
        ensure(c.is_consistent(k, true).unwrap().0, "consistent")?;
        let (again, _) = complete(&c, k, true).unwrap();
        ensure(again == c, "idempotent")?;
        let (step, _) = complete(&c, k + 1, true).unwrap();
        let (direct, _) = complete(&d, k + 1, true).unwrap();
        ensure(step.merge_parallel() == direct.merge_parallel(), "monotone")
    })?;
    run(0xacce_0006, (1i64..=2, sl2(), (-4i64..=4, -4i64..=4)), |(s, a, shift)| {
        let surf = blowup(s, a, shift);
        let dir = mat_apply(&a, (0, 1));
        for j in 0..s as usize {
            let m = monodromy(&surf, "ZW", j).unwrap();
            ensure(det(&m) == 1 && m[0][0] + m[1][1] == 2 && m != IDENTITY, "trace and det")?;
            ensure(mat_apply(&m, dir) == dir, "eigenvector")?;
        }
        ensure(edge_monodromy(&surf, "ZW").unwrap() == conjugate(&a, &[[1, 0], [s, 1]]), "conjugacy class")
    })?;
    let poly = |n: usize| {
        prop::collection::vec((prop::collection::vec(-3i32..=3, n), -5i64..=5), 1..5)
            .prop_map(move |t| Poly::from_terms(n, t.into_iter().map(|(e, c)| (e, q(c)))))
    };
    run(0xacce_0007, (prop::sample::select(vec!["b1", "b2", "double-blowup"]), poly(2)), |(key, f)| {
        let s = catalog::surface(key).unwrap();
        let n = 1 + s.params.len();
        let f = Poly::from_terms(n, f.terms().iter().map(|(e, c)| (e[..n].to_vec(), c.clone())));
        for e in &s.edges {
            let [v0, v1] = &e.vertices;
            let there = change_of_vertex(&s, &e.name, &f, v0, v1).unwrap();
            ensure(change_of_vertex(&s, &e.name, &there, v1, v0).unwrap() == f, "involution")?;
        }
        Ok(())
    })?;
    let normals = [(0, -1), (1, 0), (-1, 1)];
    run(0xacce_0008, (prop::collection::vec(prop::sample::select(vec![1i64, 1, 2, -1]), 3), poly(1)), |(c, tail)| {
        let lowest = tail.terms().keys().map(|e| e[0]).min().unwrap_or(0);
        let tail = tail.shift(&[1 - lowest]);
        let items: Vec<_> = (0..3).map(|i| (normals[i], constant_in_w(&Poly::constant(1, q(c[i])).add(&tail)))).collect();
        ensure(multiplicative_condition(&items).unwrap() == (c[0] == c[1] && c[1] == c[2]), "condition")
    })
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        let start = std::time::Instant::now();
        match f() {
            Ok(()) => println!("criterion {n}: PASS ({:.2}s)", start.elapsed().as_secs_f64()),
            Err(e) => {
                println!("criterion {n}: FAIL ({e})");
                failed += 1;
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
