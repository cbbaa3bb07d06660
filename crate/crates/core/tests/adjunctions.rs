use std::sync::Arc;

use fincat::adjunction::{
    adjoint_from_universals, adjunction_comparison, replace_left, snake_check, Adjunction, Side as AdjSide,
};
use fincat::functor_category::enumerate_functors;
use fincat::kan::adjoint_as_kan;
use fincat::limits::{limit_functor, preservation_check, Side};
use fincat::random::{random_category, rng};
use fincat::{fixtures, FinCat, Functor, Guard, NatTrans, Outcome};
use proptest::prelude::*;

fn arc(c: FinCat) -> Arc<FinCat> {
    Arc::new(c)
}

fn codiscrete_pair() -> Arc<FinCat> {
    arc(FinCat::builder("iso")
        .objects(["x", "y"])
        .morphism("u", "x", "y")
        .morphism("v", "y", "x")
        .compose("v", "u", "id_x")
        .compose("u", "v", "id_y")
        .build()
        .unwrap())
}

fn point(c: &Arc<FinCat>, o: &str) -> Functor {
    Functor::from_ids(format!("at{o}"), arc(fixtures::terminal()), c.clone(), &[("*", o)], &[]).unwrap()
}

fn left_adjoint(g: &Functor) -> Option<Adjunction> {
    match adjoint_from_universals(g, AdjSide::Left).unwrap() {
        Outcome::Found(a) => Some(a),
        Outcome::Absent(_) => None,
    }
}

#[test]
fn isomorphic_left_adjoints_are_compared_by_a_unique_iso() {
    let iso = codiscrete_pair();
    let one = arc(fixtures::terminal());
    let collapse = Functor::from_ids(
        "!",
        iso.clone(),
        one,
        &[("x", "*"), ("y", "*")],
        &[("u", "id_*"), ("v", "id_*")],
    )
    .unwrap();
    let adj = left_adjoint(&collapse).expect("points are left adjoint to the collapse");
    assert!(adj.validate().unwrap().ok());
    let (f, other) = (adj.left.clone(), if adj.left.obj_map()[0] == 0 { "y" } else { "x" });
    let f2 = point(&iso, other);
    let to = if other == "y" { "u" } else { "v" };
    let alpha = NatTrans::from_ids("α", f, f2.clone(), &[("*", to)]).unwrap();
    let moved = replace_left(&adj, &alpha).unwrap();
    assert_eq!(moved.left, f2);
    assert!(moved.validate().unwrap().ok());
    assert!(snake_check(&moved.left, &moved.right, &moved.unit, &moved.counit)
        .unwrap()
        .ok());
    let (found, rep) = adjunction_comparison(&adj, &moved).unwrap();
    assert!(rep.ok(), "{rep}");
    assert_eq!(found.components(), alpha.components());
}

#[test]
fn adjoints_are_absolute_kan_extensions() {
    let g = Guard::default();
    let probes_into = arc(fixtures::arrow());
    for c in [fixtures::arrow(), fixtures::square(), fixtures::chain(3)].map(arc) {
        for d in [fixtures::terminal(), fixtures::arrow()].map(arc) {
            for right in enumerate_functors(&d, &c, &g).unwrap() {
                let Some(adj) = left_adjoint(&right) else { continue };
                let probes = enumerate_functors(adj.left.dom(), &probes_into, &g).unwrap();
                let (eps, rep) = adjoint_as_kan(&adj.left, &adj.right, &adj.unit, &probes, &g).unwrap();
                assert!(rep.ok(), "{rep}");
                assert_eq!(eps, adj.counit);
            }
        }
    }
}

#[test]
fn diagonal_adjunctions_preserve_limits() {
    let g = Guard::default();
    for j in [fixtures::arrow(), fixtures::discrete(2)].map(arc) {
        for c in [fixtures::chain(3), fixtures::square()].map(arc) {
            let Outcome::Found(lf) = limit_functor(&j, &c, &g).unwrap() else {
                panic!("{} is complete", c.name())
            };
            let adj = lf.adjunction;
            assert!(adj.validate().unwrap().ok());
            for d in enumerate_functors(&arc(fixtures::discrete(2)), adj.right.dom(), &g).unwrap() {
                if fincat::limits::limit(&d, Side::Limit, &g).unwrap().is_some() {
                    assert!(preservation_check(&adj.right, &d, Side::Limit, &g).unwrap().ok());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn synthesized_adjunctions_round_trip(seed in any::<u64>()) {
        let g = Guard::default();
        let mut r = rng(seed);
        let c = arc(random_category(&mut r, 3, 4));
        let d = arc(random_category(&mut r, 3, 4));
        let fs = enumerate_functors(&d, &c, &g).unwrap();
        for right in fs.iter().take(8) {
            if let Some(adj) = left_adjoint(right) {
                prop_assert!(adj.validate().unwrap().ok());
                let back = Adjunction::from_unit_counit(adj.left.clone(), adj.right.clone(), adj.unit.clone(), adj.counit.clone()).unwrap();
                prop_assert!(back.phi == adj.phi);
                let again = Adjunction::from_hom_iso(adj.left.clone(), adj.right.clone(), back.phi.clone()).unwrap();
                prop_assert!(again.unit == adj.unit && again.counit == adj.counit);
                let (alpha, rep) = adjunction_comparison(&adj, &adj).unwrap();
                prop_assert!(rep.ok());
                prop_assert_eq!(alpha, NatTrans::identity(&adj.left));
            }
        }
    }
}
