use std::sync::Arc;

use fincat::finset::{copower_power_bijections, hom_functor, validate_set_functor, yoneda_check, FinSetObj, Variance};
use fincat::functor_category::enumerate_functors;
use fincat::limits::{
    completeness_check, cone_transport_check, hom_preserves_limit, limit, limit_agreement, limit_finset,
    limit_uniqueness, Side,
};
use fincat::random::{random_category, random_functor, random_set_functor, rng};
use fincat::{fixtures, FinCat, Guard};
use proptest::prelude::*;

fn arc(c: FinCat) -> Arc<FinCat> {
    Arc::new(c)
}

#[test]
fn representables_validate_on_fixtures() {
    for c in fixtures::all().into_iter().map(arc) {
        for o in c.objects() {
            for v in [Variance::Covariant, Variance::Contravariant] {
                let y = hom_functor(&c, o, v).unwrap();
                assert!(validate_set_functor(&y).ok(), "{} at {o}", c.name());
            }
        }
    }
}

#[test]
fn copower_and_power_currying_on_small_sets() {
    for x in 0..=2 {
        for c in 0..=2 {
            for cp in 0..=3 {
                let (x, c, cp) = (FinSetObj::range(x), FinSetObj::range(c), FinSetObj::range(cp));
                let r = copower_power_bijections(&x, &c, &cp);
                assert!(r.ok(), "{r}");
            }
        }
    }
}

#[test]
fn equalizer_of_the_swap() {
    // Z/2 acting on {0, 1} by the swap has no fixed points and one orbit.
    let z2 = arc(fixtures::z2());
    let g = Guard::default();
    let x = fincat::finset::SetFunctor::from_ids(
        "swap",
        z2.clone(),
        &[("*", vec!["0", "1"])],
        &[("s", vec![("0", "1"), ("1", "0")])],
    )
    .unwrap();
    assert_eq!(limit_finset(&x, Side::Limit, &g).unwrap().object.len(), 0);
    assert_eq!(limit_finset(&x, Side::Colimit, &g).unwrap().object.len(), 1);
}

#[test]
fn hom_functors_preserve_poset_limits() {
    let g = Guard::default();
    let c = arc(fixtures::square());
    for j in [
        fixtures::arrow(),
        fixtures::discrete(2),
        fixtures::parallel(),
        fixtures::empty(),
    ]
    .map(arc)
    {
        for d in enumerate_functors(&j, &c, &g).unwrap() {
            assert!(limit(&d, Side::Limit, &g).unwrap().is_some());
            assert!(limit_uniqueness(&d, Side::Limit, &g).unwrap().ok());
            for o in 0..c.n_obj() {
                assert!(hom_preserves_limit(&d, o, &g).unwrap().ok());
                assert!(cone_transport_check(&d, o, &g).unwrap().ok());
            }
        }
    }
}

#[test]
fn completeness_is_reported_for_its_shapes() {
    let g = Guard::default();
    let shapes = [
        fixtures::empty(),
        fixtures::discrete(2),
        fixtures::arrow(),
        fixtures::parallel(),
    ]
    .map(arc);
    let square = arc(fixtures::square());
    for side in [Side::Limit, Side::Colimit] {
        let res = completeness_check(&square, &shapes, side, &g).unwrap();
        assert!(res.report.ok() && res.report.partial());
        assert_eq!(res.scope.len(), 4);
    }
    // The parallel pair has no terminal object and no products.
    let par = arc(fixtures::parallel());
    let res = completeness_check(&par, &shapes, Side::Limit, &g).unwrap();
    assert_eq!(res.report.counterexample().unwrap().law, "completeness");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn yoneda_bijection_is_natural(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = arc(random_category(&mut r, 3, 6));
        let x = random_set_functor(&mut r, &c, 3);
        prop_assert!(validate_set_functor(&x).ok());
        let rep = yoneda_check(&x, &Guard::default()).unwrap();
        prop_assert!(rep.ok(), "{}", rep);
    }

    #[test]
    fn set_limits_agree_with_search(seed in any::<u64>()) {
        let mut r = rng(seed);
        let j = arc(random_category(&mut r, 3, 3));
        let x = random_set_functor(&mut r, &j, 2);
        for side in [Side::Limit, Side::Colimit] {
            match limit_agreement(&x, side, &Guard::default()) {
                Ok(rep) => prop_assert!(rep.ok(), "{}", rep),
                Err(fincat::Error::GuardExceeded(_)) => {}
                Err(e) => prop_assert!(false, "{}", e),
            }
        }
    }

    #[test]
    fn limits_are_unique_up_to_unique_iso(seed in any::<u64>()) {
        let g = Guard::default();
        let mut r = rng(seed);
        let j = arc(random_category(&mut r, 2, 2));
        let c = arc(random_category(&mut r, 3, 5));
        if let Some(d) = random_functor(&mut r, &j, &c, &g) {
            for side in [Side::Limit, Side::Colimit] {
                if limit(&d, side, &g).unwrap().is_some() {
                    let rep = limit_uniqueness(&d, side, &g).unwrap();
                    prop_assert!(rep.ok(), "{}", rep);
                }
            }
        }
    }
}
