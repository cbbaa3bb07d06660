use std::sync::Arc;

use fincat::ends::{
    end_coend, end_finset, end_nat_check, fubini_check_finset, hom_bifunctor, hom_continuity, twisted_domain,
};
use fincat::finset::{hom_functor, Variance};
use fincat::functor_category::enumerate_functors;
use fincat::kan::{
    cocone_transposition, kan_finset, kan_pointwise, lan_via_coend, nerve_realization_check, pointwise_criterion,
    KanSide,
};
use fincat::limits::Side;
use fincat::random::{random_bifunctor, random_category, random_functor, random_set_functor, rng};
use fincat::{fixtures, product, FinCat, Functor, Guard, Outcome};
use proptest::prelude::*;

fn arc(c: FinCat) -> Arc<FinCat> {
    Arc::new(c)
}

#[test]
fn end_of_the_hom_bifunctor_counts_endo_transformations() {
    let g = Guard::default();
    for c in fixtures::all().into_iter().map(arc) {
        let h = hom_bifunctor(&c).unwrap();
        let end = end_finset(&h, &c, Side::Limit, &g).unwrap();
        let id = Functor::identity(&c);
        let nats = fincat::functor_category::enumerate_naturals(&id, &id, &g).unwrap();
        assert_eq!(end.object.len(), nats.len(), "{}", c.name());
        assert!(end_nat_check(&id, &id, &g).unwrap().ok());
    }
}

#[test]
fn hom_is_continuous_in_a_poset() {
    let g = Guard::default();
    let c = arc(fixtures::square());
    for j in [fixtures::arrow(), fixtures::discrete(2), fixtures::terminal()].map(arc) {
        let tw = arc(twisted_domain(&j));
        for d in enumerate_functors(&tw, &c, &g).unwrap() {
            for side in [Side::Limit, Side::Colimit] {
                if end_coend(&d, &j, side, &g).unwrap().is_none() {
                    continue;
                }
                for o in 0..c.n_obj() {
                    let r = hom_continuity(&d, &j, o, side, &g).unwrap();
                    assert!(r.ok(), "{}: {r}", d.obj_signature());
                }
            }
        }
    }
}

#[test]
fn realization_of_representables() {
    let g = Guard::default();
    for c in [fixtures::arrow(), fixtures::parallel(), fixtures::square()].map(arc) {
        let k = Functor::identity(&c);
        for o in c.objects() {
            let x = hom_functor(&c, o, Variance::Contravariant).unwrap();
            for d in 0..c.n_obj() {
                let probes: Vec<usize> = (0..c.n_mor()).filter(|&m| c.dom(m) == d).collect();
                let r = nerve_realization_check(&k, &x, d, &probes, &g).unwrap();
                assert!(r.ok(), "{} at {o}: {r}", c.name());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pointwise_lan_matches_the_coend_formula(seed in any::<u64>()) {
        let g = Guard::default();
        let mut r = rng(seed);
        let c = arc(random_category(&mut r, 2, 3));
        let d = arc(random_category(&mut r, 3, 4));
        let Some(k) = random_functor(&mut r, &c, &d, &g) else { return Ok(()) };
        let f = random_set_functor(&mut r, &c, 2);
        let via = lan_via_coend(&k, &f, &g).unwrap();
        prop_assert!(via.report.ok(), "{}", via.report);
        let iso = via.iso.expect("coend comparison is a bijection");
        prop_assert!(iso.is_iso());
        for side in [KanSide::Left, KanSide::Right] {
            let res = kan_finset(&k, &f, side, &g).unwrap();
            prop_assert!(res.certificate.ok(), "{}", res.certificate);
        }
    }

    #[test]
    fn extensions_into_finite_categories_are_pointwise(seed in any::<u64>()) {
        let g = Guard::default();
        let mut r = rng(seed);
        let c = arc(random_category(&mut r, 2, 2));
        let d = arc(random_category(&mut r, 2, 3));
        let e = arc([fixtures::chain(3), fixtures::square(), fixtures::arrow()][seed as usize % 3].clone());
        let (Some(k), Some(f)) = (random_functor(&mut r, &c, &d, &g), random_functor(&mut r, &c, &e, &g)) else {
            return Ok(());
        };
        if let Outcome::Found(res) = kan_pointwise(&k, &f, KanSide::Left, &g).unwrap() {
            prop_assert!(res.certificate.ok(), "{}", res.certificate);
            let crit = pointwise_criterion(&res, &k, &f, &g).unwrap();
            prop_assert!(crit.ok(), "{}", crit);
            for x in 0..d.n_obj() {
                for y in 0..e.n_obj() {
                    let t = cocone_transposition(&k, &f, x, y, &g).unwrap();
                    prop_assert!(t.ok(), "{}", t);
                }
            }
        }
    }

    #[test]
    fn iterated_ends_agree_with_the_end_over_the_product(seed in any::<u64>()) {
        let g = Guard::default();
        let mut r = rng(seed);
        let i = arc(random_category(&mut r, 2, 2));
        let j = arc(random_category(&mut r, 2, 2));
        let ij = arc(product(&i, &j));
        let b = random_bifunctor(&mut r, &ij, 2);
        let rep = fubini_check_finset(&b, &i, &j, &g).unwrap();
        prop_assert!(rep.ok(), "{}", rep);
    }

    #[test]
    fn ends_of_hom_bifunctors_are_natural_transformations(seed in any::<u64>()) {
        let g = Guard::default();
        let mut r = rng(seed);
        let c = arc(random_category(&mut r, 3, 4));
        let e = arc(random_category(&mut r, 3, 4));
        let (Some(f), Some(h)) = (random_functor(&mut r, &c, &e, &g), random_functor(&mut r, &c, &e, &g)) else {
            return Ok(());
        };
        let rep = end_nat_check(&f, &h, &g).unwrap();
        prop_assert!(rep.ok(), "{}", rep);
    }
}
