mod common;

use common::*;
use proptest::prelude::*;

use scatterforge::element::{ScatterExponent, TruncatedElement};
use scatterforge::family::FamilyVars;
use scatterforge::normalize::{
    apply_normalization, exp_series, log_series, normalize_slab, pure_t_coefficient, FamilyTemplate, PureTSeries,
};
use scatterforge::{Element, Rational};

fn mirror_template() -> FamilyTemplate {
    FamilyTemplate {
        vars: FamilyVars::new(["X", "Y", "Z", "W", "U", "V"].map(String::from).to_vec(), vec![]),
        generators: vec!["X*Y*Z - t*W^3".into(), "U*V - t^2*(X + Y + Z + @unit*W)*W".into()],
    }
}

fn series(values: &[i64]) -> PureTSeries<Rational> {
    let mut g = PureTSeries::zero(values.len() as u32);
    for (i, v) in values.iter().enumerate() {
        if *v != 0 {
            g.coefficients.insert(i as u32 + 1, q(*v));
        }
    }
    g
}

#[test]
fn logarithm_examples() {
    let ctx = plain();
    assert_eq!(log_series(&el("1 + x", &ctx, 3), 3).unwrap(), el("x - 1/2*x^2 + 1/3*x^3", &ctx, 3));
    assert!(log_series(&el("1", &ctx, 3), 3).unwrap().is_zero());
    let l = log_series(&el("1 + x + y + z", &ctx, 3), 3).unwrap();
    assert_eq!(l.coeff(&ScatterExponent::new(1, 1, 1)).as_scalar(), Some(q(2)));
    assert!(log_series(&el("3 + x", &ctx, 3), 3).is_err());
}

#[test]
fn mirror_series_to_order_five() {
    let ctx = plain();
    let g = normalize_slab(&el("1 + x + y + z", &ctx, 15), 5).unwrap();
    assert_eq!(g.to_vec(), [-2, 5, -32, 286, -3038].map(q).to_vec());
    assert_eq!(g.render_list(), "-2, 5, -32, 286, -3038");
    assert_eq!(g.to_string(), "-2*t + 5*t^2 - 32*t^3 + 286*t^4 - 3038*t^5");
}

#[test]
fn trivial_and_first_order_series() {
    let ctx = plain();
    assert!(normalize_slab(&el("1", &ctx, 9), 3).unwrap().coefficients.is_empty());
    assert_eq!(normalize_slab(&el("1 + x + y + z", &ctx, 3), 1).unwrap().render_list(), "-2");
}

#[test]
fn first_coefficient_by_hand() {
    let ctx = plain();
    for a in [-3i64, -2, 0, 1, 7] {
        let f = el(&format!("1 + x + y + z + ({a})*x*y*z"), &ctx, 3);
        let c = pure_t_coefficient(&log_series(&f, 3).unwrap(), 1).unwrap();
        assert_eq!(c, q(2 + a));
    }
}

#[test]
fn directional_terms_leave_the_first_coefficient_alone() {
    let ctx = plain();
    let base = normalize_slab(&el("1 + x + y + z", &ctx, 3), 1).unwrap();
    let moved = normalize_slab(&el("1 + x + y + z + x^2*y", &ctx, 3), 1).unwrap();
    assert_eq!(base, moved);
}

#[test]
fn modified_mirror_family() {
    let fam = apply_normalization(&mirror_template(), &series(&[-2, 5, -32, 286, -3038]), 5).unwrap();
    let expected = scatterforge::family::FamilyIdeal::from_texts(
        mirror_template().vars,
        &["X*Y*Z - t*W^3", "U*V - t^2*(X + Y + Z + (1 - 2*t + 5*t^2 - 32*t^3 + 286*t^4 - 3038*t^5)*W)*W"],
    )
    .unwrap();
    assert!(fam.same_generators(&expected));
    let plain_family = apply_normalization(&mirror_template(), &series(&[]), 5).unwrap();
    let unmodified =
        scatterforge::family::FamilyIdeal::from_texts(mirror_template().vars, &["X*Y*Z - t*W^3", "U*V - t^2*(X + Y + Z + W)*W"])
            .unwrap();
    assert!(plain_family.same_generators(&unmodified));
}

#[test]
fn truncation_is_coherent() {
    let g = series(&[-2, 5, -32, 286, -3038]);
    assert_eq!(g.truncate(2).truncate(5), g.truncate(5).truncate(2));
    let a = apply_normalization(&mirror_template(), &g.truncate(2), 5).unwrap();
    let b = apply_normalization(&mirror_template(), &g, 2).unwrap();
    assert!(a.same_generators(&b));
}

fn slab(k: u32) -> impl Strategy<Value = Element> {
    unipotent(plain(), k, false)
}

proptest! {
    #![proptest_config(config(0x6e0e_0001))]

    #[test]
    fn exp_inverts_log(f in unipotent(ctx_w(), 6, true)) {
        let l = log_series(&f, 6).unwrap();
        prop_assert_eq!(exp_series(&l).unwrap(), f.clone());
        prop_assert_eq!(log_series(&exp_series(&l).unwrap(), 6).unwrap(), l);
    }

    #[test]
    fn series_kill_pure_t_terms(f in slab(6)) {
        let g = normalize_slab(&f, 2).unwrap();
        let h = &f + &g.to_element(&f);
        let l = log_series(&h, 6).unwrap();
        for j in 1..=2 {
            prop_assert_eq!(pure_t_coefficient(&l, j).unwrap(), q(0));
        }
    }

    #[test]
    fn perturbing_a_coefficient_breaks_the_condition(f in slab(6), j in 1u32..=2, delta in prop::sample::select(vec![-3i64, -1, 1, 2])) {
        let mut g = normalize_slab(&f, 2).unwrap();
        *g.coefficients.entry(j).or_insert_with(|| q(0)) += q(delta);
        let h = &f + &g.to_element(&f);
        let l = log_series(&h, 3 * j).unwrap();
        prop_assert_eq!(pure_t_coefficient(&l, j).unwrap(), q(delta));
    }

    #[test]
    fn adding_a_pure_t_shift_shifts_the_series(f in slab(3), a in -4i64..=4) {
        let t = TruncatedElement::t(&plain(), 3).scale_scalar(&q(a));
        let g = normalize_slab(&f, 1).unwrap();
        let shifted = normalize_slab(&(&f + &t), 1).unwrap();
        prop_assert_eq!(shifted.coeff(1), g.coeff(1) - q(a));
    }
}
