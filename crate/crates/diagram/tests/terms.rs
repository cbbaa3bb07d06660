use fincat::NatTrans;
use fincat_diagram::fixture::{fixture_env, interchange_variant, random_term, GOLDEN};
use fincat_diagram::normal::{flatten, normal_layers};
use fincat_diagram::{
    compare_terms, evaluate, normalization_check, normalize, parse_term, render_svg, typecheck, DiagramError, Term,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn t(s: &str) -> Term {
    parse_term(s).unwrap()
}

#[test]
fn identity_wire_has_equal_ends_and_evaluates_to_identity() {
    let env = fixture_env();
    let i = typecheck(&t("id(low)"), &env).unwrap();
    assert_eq!(i.bottom.functors, vec!["low"]);
    assert_eq!(i.bottom, i.top);
    let e = evaluate(&t("id(low)"), &env).unwrap();
    assert_eq!(e, NatTrans::identity(env.functor("low").unwrap()));
    let c = typecheck(&t("id(2)"), &env).unwrap();
    assert!(c.bottom.is_empty() && c.bottom == c.top);
}

#[test]
fn vertical_typing_follows_the_stacking_order() {
    let env = fixture_env();
    let i = typecheck(&t("counit ; unit"), &env).unwrap();
    assert_eq!(i.to_string(), "low => high");
    match typecheck(&t("unit ; counit"), &env) {
        Err(DiagramError::Vertical { node, .. }) => assert_eq!(node, "counit"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(typecheck(&t("nothing"), &env), Err(DiagramError::Unknown(n)) if n == "nothing"));
}

#[test]
fn whiskering_needs_matching_categories() {
    let env = fixture_env();
    // rise lives on functors out of 1, bang lands in 1
    let i = typecheck(&t("rise | id(bang)"), &env).unwrap();
    assert_eq!(i.to_string(), "at0.bang => at1.bang");
    match typecheck(&t("rise | id(low)"), &env) {
        Err(DiagramError::Horizontal { node, .. }) => assert_eq!(node, "id(low)"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn horizontal_composite_by_hand() {
    let env = fixture_env();
    let e = evaluate(&t("turn | twist"), &env).unwrap();
    let zz = env.category("Z2").unwrap();
    // s applied twice in Z/2
    assert_eq!(e.components(), &[zz.mor("e").unwrap(), zz.mor("e").unwrap()]);

    let e = evaluate(&t("lift | rise"), &env).unwrap();
    let two = env.category("2").unwrap();
    // lift_{at1 *} after low(rise_*) = a after id_0
    assert_eq!(e.components(), &[two.mor("a").unwrap()]);
}

#[test]
fn interchange_instance() {
    let env = fixture_env();
    for (lhs, rhs) in [
        ("(turn ; turn) | (twist ; twist)", "(turn | twist) ; (turn | twist)"),
        ("(counit ; unit) | id(at0)", "(counit | id(at0)) ; (unit | id(at0))"),
        (
            "(lift ; id(high)) | (id(at0) ; rise)",
            "(lift | id(at0)) ; (id(high) | rise)",
        ),
    ] {
        assert_eq!(
            evaluate(&t(lhs), &env).unwrap(),
            evaluate(&t(rhs), &env).unwrap(),
            "{lhs}"
        );
    }
}

#[test]
fn side_by_side_generators_normalize_left_first() {
    let env = fixture_env();
    let n = normalize(&t("(lift | rise)"), &env).unwrap();
    assert_eq!(n.to_string(), "lift | id(at0) ; id(high) | rise");
    let other = normalize(&t("(id(low) | rise) ; (lift | id(at1))"), &env).unwrap();
    assert_eq!(n, other);
    let c = compare_terms(&t("lift | rise"), &t("(id(low) | rise) ; (lift | id(at1))"), &env).unwrap();
    assert!(c.same_normal_form && c.same_evaluation && c.report.ok());
}

#[test]
fn layered_terms_are_fixed_points() {
    let env = fixture_env();
    for s in [
        "lift | id(at0) ; id(high) | rise",
        "dup ; counit | id(low)",
        "phase | id(spin) ; twist",
    ] {
        let n = normalize(&t(s), &env).unwrap();
        assert_eq!(n, t(s), "{s}");
    }
}

#[test]
fn scalars_and_units_keep_their_gaps() {
    let env = fixture_env();
    // phase floats in the Z2 region; its left/right position relative to
    // other empty-bottom generators is preserved by normalization
    for s in [
        "phase | phase",
        "id(spin) ; (phase | twist)",
        "unit | unit",
        "(unit | id(at0)) ; (id(high) | id(at0) | point)",
        "expand | collapse",
    ] {
        let r = normalization_check(&t(s), &env).unwrap();
        assert!(r.ok(), "{s}: {r}");
    }
}

#[test]
fn semantic_equality_can_exceed_interchange() {
    let env = fixture_env();
    // turn;turn is the identity on keep, but not by interchange alone
    let c = compare_terms(&t("turn ; turn"), &t("id(keep)"), &env).unwrap();
    assert!(!c.same_normal_form);
    assert!(c.same_evaluation);
    assert!(c.report.ok());
}

#[test]
fn svg_identity_is_one_wire() {
    let env = fixture_env();
    let svg = render_svg(&t("id(low)"), &env).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("version=\"1.1\""));
    assert_eq!(svg.matches("<line").count(), 1);
    assert_eq!(svg.matches("<circle").count(), 0);
}

#[test]
fn svg_places_horizontal_generators_apart() {
    let env = fixture_env();
    let svg = render_svg(&t("lift | rise"), &env).unwrap();
    let xs: Vec<f64> = svg
        .match_indices("<circle cx=\"")
        .map(|(i, m)| {
            let rest = &svg[i + m.len()..];
            rest[..rest.find('"').unwrap()].parse().unwrap()
        })
        .collect();
    assert_eq!(xs.len(), 2);
    assert!(xs[0] < xs[1], "{xs:?}");
}

#[test]
fn svg_matches_golden_files() {
    let env = fixture_env();
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for &(file, term) in GOLDEN {
        let out = render_svg(&t(term), &env);
        let svg = match out {
            Ok(s) => s,
            Err(e) => panic!("{term}: {e}"),
        };
        assert_eq!(svg, render_svg(&t(term), &env).unwrap());
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(dir.join(file), &svg).unwrap();
        }
        let golden = std::fs::read_to_string(dir.join(file)).unwrap_or_else(|_| panic!("missing golden file {file}"));
        assert_eq!(svg, golden, "{file} drifted");
    }
}

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn normalization_is_sound_and_idempotent(seed in any::<u64>()) {
        let env = fixture_env();
        let term = random_term(&mut seeded(seed), &env, 6);
        prop_assert!(term.size() <= 6);
        let r = normalization_check(&term, &env).unwrap();
        prop_assert!(r.ok(), "{}: {}", term, r);
    }

    #[test]
    fn interchange_variants_share_normal_forms(seed in any::<u64>()) {
        let env = fixture_env();
        let mut rng = seeded(seed);
        let term = random_term(&mut rng, &env, 6);
        let other = interchange_variant(&mut rng, &term, &env, 12).unwrap();
        let c = compare_terms(&term, &other, &env).unwrap();
        prop_assert!(c.same_normal_form, "{} vs {}", term, other);
        prop_assert!(c.same_evaluation);
    }

    #[test]
    fn printing_then_parsing_is_exact(seed in any::<u64>()) {
        let env = fixture_env();
        let term = random_term(&mut seeded(seed), &env, 6);
        prop_assert_eq!(parse_term(&term.to_string()).unwrap(), term);
    }

    #[test]
    fn normal_layers_are_stable(seed in any::<u64>()) {
        let env = fixture_env();
        let term = random_term(&mut seeded(seed), &env, 6);
        let flat = flatten(&term, &env).unwrap();
        let once = normal_layers(&flat.layers).unwrap();
        prop_assert_eq!(normal_layers(&once).unwrap(), once.clone());
        prop_assert_eq!(once.len(), term.size());
    }
}
