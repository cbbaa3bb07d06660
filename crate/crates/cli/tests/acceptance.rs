//! Acceptance run: one PASS/FAIL line per criterion. Every randomized
//! suite is driven by a fixed seed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use fincat::adjunction::{
    adjoint_from_universals, equivalence_to_adjunction, snake_check, validate_adjunction, Adjunction, Side as AdjSide,
};
use fincat::ends::{
    coyoneda_witness, end_agreement, end_as_weighted_limit, end_nat_check, fubini_check_finset, hom_bifunctor,
    weighted_limit, weighted_limit_finset,
};
use fincat::finset::{enumerate_set_naturals, hom_functor, validate_set_natural, yoneda_check, SetFunctor, Variance};
use fincat::fixtures;
use fincat::functor::CatRef;
use fincat::functor_category::enumerate_functors;
use fincat::kan::{
    codensity_monad, density_check, kan_agreement, kan_finset, kan_pointwise, kan_universal_check, lan_via_coend,
    validate_monad, KanSide, Monad,
};
use fincat::limits::{
    interchange_check, interchange_check_finset, limit, limit_agreement, limit_finset, limit_functor,
    preservation_check, Side,
};
use fincat::random::{random_bifunctor, random_category, random_functor, random_set_functor, rng, Rand};
use fincat::universal::comma_over;
use fincat::{product, Error, FinCat, Functor, Guard, NatTrans, Outcome, Report};
use fincat_diagram::fixture::{fixture_env, interchange_variant, random_term, GOLDEN};
use fincat_diagram::{evaluate, normalize, parse_term, render_svg};
use rand::Rng;

mod common;

struct Verdict {
    pass: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Verdict {
    Verdict {
        pass: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Verdict {
    Verdict {
        pass: false,
        detail: detail.into(),
    }
}

/// Collects failures; the first few are kept for the verdict line.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn report(&mut self, r: &Report, what: impl FnOnce() -> String) {
        let ok = r.ok();
        self.check(ok, || format!("{}: {r}", what()));
    }

    fn verdict(self, summary: String) -> Verdict {
        if self.failures.is_empty() {
            pass(format!("{summary}; {} checks", self.checks))
        } else {
            let n = self.failures.len();
            let shown: Vec<&str> = self.failures.iter().take(3).map(String::as_str).collect();
            fail(format!("{n} of {} checks failed: {}", self.checks, shown.join(" | ")))
        }
    }
}

fn arc(c: FinCat) -> CatRef {
    Arc::new(c)
}

fn guard() -> Guard {
    Guard::default()
}

/// A smaller budget for exhaustive `[D,E]` enumerations.
fn enumeration_guard() -> Guard {
    Guard {
        max_object_maps: 20_000,
        max_search_nodes: 2_000_000,
        ..Guard::default()
    }
}

fn is_guard(e: &Error) -> bool {
    matches!(e, Error::GuardExceeded(_))
}

fn pick(c: &CatRef, obj: &str) -> Functor {
    let one = arc(fixtures::terminal());
    Functor::from_ids(format!("at{obj}"), one, c.clone(), &[("*", obj)], &[]).unwrap()
}

// 1 -------------------------------------------------------------------------

fn yoneda_suite() -> Verdict {
    let start = Instant::now();
    let mut t = Tally::default();
    let mut cats: Vec<CatRef> = [
        fixtures::terminal(),
        fixtures::arrow(),
        fixtures::parallel(),
        fixtures::z2(),
        fixtures::square(),
    ]
    .into_iter()
    .map(arc)
    .collect();
    let mut r = rng(1);
    for _ in 0..50 {
        cats.push(arc(random_category(&mut r, 4, 10)));
    }
    let mut pairs = 0;
    for c in &cats {
        let mut xs: Vec<SetFunctor> = c
            .objects()
            .iter()
            .map(|o| hom_functor(c, o, Variance::Covariant).unwrap())
            .collect();
        for _ in 0..3 {
            xs.push(random_set_functor(&mut r, c, 3));
        }
        for x in &xs {
            match yoneda_check(x, &guard()) {
                Ok(rep) => t.report(&rep, || format!("{} on {}", x.name(), c.name())),
                Err(e) => t.check(false, || format!("{} on {}: {e}", x.name(), c.name())),
            }
            pairs += c.n_obj();
        }
    }
    let took = start.elapsed();
    t.check(took < Duration::from_secs(60), || format!("took {took:?}"));
    t.verdict(format!(
        "{} categories, {pairs} (c, X) pairs in {:.1}s",
        cats.len(),
        took.as_secs_f64()
    ))
}

// 2 and 3 ------------------------------------------------------------------

fn codiscrete_pair() -> FinCat {
    FinCat::builder("iso")
        .objects(["x", "y"])
        .morphism("u", "x", "y")
        .morphism("v", "y", "x")
        .compose("v", "u", "id_x")
        .compose("u", "v", "id_y")
        .build()
        .unwrap()
}

/// Fixture adjunctions from universal arrows, limit functors and
/// equivalences.
fn fixture_adjunctions() -> Vec<(String, Adjunction)> {
    let g = guard();
    let mut out = Vec::new();
    let cats: Vec<CatRef> = [
        fixtures::terminal(),
        fixtures::arrow(),
        fixtures::parallel(),
        fixtures::z2(),
        fixtures::discrete(2),
        fixtures::square(),
        fixtures::chain(3),
    ]
    .into_iter()
    .map(arc)
    .collect();
    for d in &cats {
        for c in &cats {
            let Ok(fs) = enumerate_functors(d, c, &g) else { continue };
            for gf in fs {
                for side in [AdjSide::Left, AdjSide::Right] {
                    if let Ok(Outcome::Found(adj)) = adjoint_from_universals(&gf, side) {
                        out.push((
                            format!(
                                "universal {:?} of {}: {} -> {}",
                                side,
                                gf.obj_signature(),
                                d.name(),
                                c.name()
                            ),
                            adj,
                        ));
                    }
                }
            }
        }
    }
    for j in [
        fixtures::terminal(),
        fixtures::arrow(),
        fixtures::discrete(2),
        fixtures::empty(),
    ] {
        let j = arc(j);
        for c in [fixtures::arrow(), fixtures::square(), fixtures::chain(3)] {
            let c = arc(c);
            if let Ok(Outcome::Found(lf)) = limit_functor(&j, &c, &g) {
                out.push((format!("lim over {} in {}", j.name(), c.name()), lf.adjunction));
            }
        }
    }
    for c in [fixtures::arrow(), fixtures::z2(), fixtures::square()] {
        let c = arc(c);
        let id = Functor::identity(&c);
        let n = NatTrans::identity(&id);
        out.push((
            format!("identity equivalence on {}", c.name()),
            equivalence_to_adjunction(&id, &id, &n, &n).unwrap(),
        ));
    }
    let (iso, one) = (arc(codiscrete_pair()), arc(fixtures::terminal()));
    let collapse = Functor::from_ids(
        "collapse",
        iso.clone(),
        one.clone(),
        &[("x", "*"), ("y", "*")],
        &[("u", "id_*"), ("v", "id_*")],
    )
    .unwrap();
    let at_x = pick(&iso, "x");
    let gf = collapse.after(&at_x).unwrap();
    let fg = at_x.after(&collapse).unwrap();
    // iso ≃ 1 in both directions.
    let eta = NatTrans::from_ids("η", Functor::identity(&iso), fg.clone(), &[("x", "id_x"), ("y", "v")]).unwrap();
    let tau = NatTrans::from_ids("τ", gf.clone(), Functor::identity(&one), &[("*", "id_*")]).unwrap();
    out.push((
        "equivalence iso -> 1".into(),
        equivalence_to_adjunction(&collapse, &at_x, &eta, &tau).unwrap(),
    ));
    let eta2 = NatTrans::from_ids("η", Functor::identity(&one), gf, &[("*", "id_*")]).unwrap();
    let tau2 = NatTrans::from_ids("τ", fg, Functor::identity(&iso), &[("x", "id_x"), ("y", "u")]).unwrap();
    out.push((
        "equivalence 1 -> iso".into(),
        equivalence_to_adjunction(&at_x, &collapse, &eta2, &tau2).unwrap(),
    ));
    out
}

enum Perturbation {
    Phi { c: usize, d: usize, k: usize, to: usize },
    Unit { c: usize, to: usize },
    Counit { d: usize, to: usize },
}

fn perturbations(adj: &Adjunction) -> Vec<Perturbation> {
    let (f, g) = (&adj.left, &adj.right);
    let (cc, dd) = (f.dom(), f.cod());
    let mut out = Vec::new();
    for c in 0..cc.n_obj() {
        for d in 0..dd.n_obj() {
            let table = adj.phi.table(c, d);
            for (k, &cur) in table.iter().enumerate() {
                for &to in cc.hom(c, g.ob(d)) {
                    if to != cur {
                        out.push(Perturbation::Phi { c, d, k, to });
                    }
                }
            }
        }
        for &to in cc.hom(c, g.ob(f.ob(c))) {
            if to != adj.unit.at(c) {
                out.push(Perturbation::Unit { c, to });
            }
        }
    }
    for d in 0..dd.n_obj() {
        for &to in dd.hom(f.ob(g.ob(d)), d) {
            if to != adj.counit.at(d) {
                out.push(Perturbation::Counit { d, to });
            }
        }
    }
    out
}

fn replaced(n: &NatTrans, at: usize, to: usize) -> NatTrans {
    let mut comps = n.components().to_vec();
    comps[at] = to;
    NatTrans::new(n.name(), n.src().clone(), n.tgt().clone(), comps).unwrap()
}

fn adjunction_suite() -> Verdict {
    let adjs = fixture_adjunctions();
    let mut t = Tally::default();
    for (name, adj) in &adjs {
        t.report(&adj.validate().unwrap(), || name.clone());
        t.report(&validate_adjunction(&adj.left, &adj.right, &adj.phi).unwrap(), || {
            name.clone()
        });
        t.report(
            &snake_check(&adj.left, &adj.right, &adj.unit, &adj.counit).unwrap(),
            || name.clone(),
        );
        let from_phi = Adjunction::from_hom_iso(adj.left.clone(), adj.right.clone(), adj.phi.clone()).unwrap();
        t.check(from_phi.unit == adj.unit && from_phi.counit == adj.counit, || {
            format!("{name}: φ -> (η, ε) round trip")
        });
        let from_units = Adjunction::from_unit_counit(
            adj.left.clone(),
            adj.right.clone(),
            adj.unit.clone(),
            adj.counit.clone(),
        )
        .unwrap();
        t.check(from_units.phi == adj.phi, || format!("{name}: (η, ε) -> φ round trip"));
    }
    let pool: Vec<(usize, Perturbation)> = adjs
        .iter()
        .enumerate()
        .flat_map(|(i, (_, a))| perturbations(a).into_iter().map(move |p| (i, p)))
        .collect();
    if pool.is_empty() {
        return fail("no perturbable fixture adjunction");
    }
    let mut r = rng(2);
    let mut located = 0;
    for _ in 0..20 {
        let (i, p) = &pool[r.gen_range(0..pool.len())];
        let (name, adj) = &adjs[*i];
        let rep = match *p {
            Perturbation::Phi { c, d, k, to } => {
                let mut phi = adj.phi.clone();
                phi.table_mut(c, d)[k] = to;
                validate_adjunction(&adj.left, &adj.right, &phi).unwrap()
            }
            Perturbation::Unit { c, to } => {
                snake_check(&adj.left, &adj.right, &replaced(&adj.unit, c, to), &adj.counit).unwrap()
            }
            Perturbation::Counit { d, to } => {
                snake_check(&adj.left, &adj.right, &adj.unit, &replaced(&adj.counit, d, to)).unwrap()
            }
        };
        let found = rep.counterexample().is_some_and(|cx| !cx.detail.is_empty());
        located += usize::from(found);
        t.check(found, || format!("perturbation of {name} went undetected"));
    }
    t.verdict(format!(
        "{} adjunctions; {located}/20 perturbations located",
        adjs.len()
    ))
}

fn rapl_suite() -> Verdict {
    let g = guard();
    let adjs = fixture_adjunctions();
    let shapes: Vec<CatRef> = [
        fixtures::arrow(),
        fixtures::parallel(),
        fixtures::discrete(2),
        fixtures::empty(),
    ]
    .into_iter()
    .map(arc)
    .collect();
    let mut t = Tally::default();
    let (mut limits, mut colimits) = (0, 0);
    for (name, adj) in &adjs {
        for j in &shapes {
            for d in enumerate_functors(j, adj.right.dom(), &g).unwrap() {
                if limit(&d, Side::Limit, &g).unwrap().is_some() {
                    limits += 1;
                    t.report(&preservation_check(&adj.right, &d, Side::Limit, &g).unwrap(), || {
                        format!("{name}: right adjoint on {} over {}", d.obj_signature(), j.name())
                    });
                }
            }
            for d in enumerate_functors(j, adj.left.dom(), &g).unwrap() {
                if limit(&d, Side::Colimit, &g).unwrap().is_some() {
                    colimits += 1;
                    t.report(&preservation_check(&adj.left, &d, Side::Colimit, &g).unwrap(), || {
                        format!("{name}: left adjoint on {} over {}", d.obj_signature(), j.name())
                    });
                }
            }
        }
    }
    t.verdict(format!(
        "{} adjunctions, {limits} limits and {colimits} colimits preserved",
        adjs.len()
    ))
}

// 4 -------------------------------------------------------------------------

fn limit_cross_oracle() -> Verdict {
    let g = guard();
    let mut t = Tally::default();
    let mut r = rng(4);
    let (mut done, mut rejected) = (0, 0);
    while done < 100 {
        let j = arc(random_category(&mut r, 3, 4));
        let x = random_set_functor(&mut r, &j, 4);
        let res: Vec<Result<Report, Error>> = [Side::Limit, Side::Colimit]
            .iter()
            .map(|&s| limit_agreement(&x, s, &g))
            .collect();
        if res.iter().any(|e| e.as_ref().is_err_and(is_guard)) {
            rejected += 1;
            continue;
        }
        for (s, rep) in ["limit", "colimit"].iter().zip(res) {
            match rep {
                Ok(rep) => t.report(&rep, || format!("{s} of a diagram on {}", j.name())),
                Err(e) => t.check(false, || format!("{s}: {e}")),
            }
        }
        done += 1;
    }
    let mut sets = 0;
    while sets < 20 {
        let (i, j) = (arc(random_category(&mut r, 2, 2)), arc(random_category(&mut r, 2, 2)));
        let ij = arc(product(&i, &j));
        let b = random_set_functor(&mut r, &ij, 3);
        match interchange_check_finset(&b, &i, &j, &g) {
            Ok(res) => t.report(&res.report, || format!("interchange of sets over {}", ij.name())),
            Err(e) if is_guard(&e) => {
                rejected += 1;
                continue;
            }
            Err(e) => t.check(false, || format!("interchange: {e}")),
        }
        sets += 1;
    }
    let mut searched = 0;
    let complete: Vec<CatRef> = [fixtures::chain(3), fixtures::square(), fixtures::arrow()]
        .into_iter()
        .map(arc)
        .collect();
    while searched < 20 {
        let (i, j) = (arc(random_category(&mut r, 2, 2)), arc(random_category(&mut r, 2, 2)));
        let ij = arc(product(&i, &j));
        let c = &complete[r.gen_range(0..complete.len())];
        let Some(d) = random_functor(&mut r, &ij, c, &g) else {
            rejected += 1;
            continue;
        };
        match interchange_check(&d, &i, &j, &g) {
            Ok(res) => t.report(&res.report, || {
                format!("interchange in {} over {}", c.name(), ij.name())
            }),
            Err(e) => t.check(false, || format!("interchange in {}: {e}", c.name())),
        }
        searched += 1;
    }
    t.verdict(format!(
        "100 diagrams both sides, 20 set and 20 poset interchanges; {rejected} oversized samples redrawn"
    ))
}

// 5 -------------------------------------------------------------------------

fn kan_suite() -> Verdict {
    let g = guard();
    let eg = enumeration_guard();
    let mut t = Tally::default();
    let mut r = rng(5);
    let (mut done, mut rejected, mut universal, mut unenumerable) = (0, 0, 0, 0);
    while done < 30 {
        let c = arc(random_category(&mut r, 2, 3));
        let d = arc(random_category(&mut r, 3, 4));
        let Some(k) = random_functor(&mut r, &c, &d, &g) else {
            rejected += 1;
            continue;
        };
        let f = random_set_functor(&mut r, &c, 2);
        let agreement = match kan_agreement(&k, &f, KanSide::Left, &g) {
            Ok(Outcome::Found(a)) => a,
            Ok(Outcome::Absent(why)) => {
                t.check(false, || format!("no Lan in the skeleton: {why}"));
                done += 1;
                continue;
            }
            Err(e) if is_guard(&e) => {
                rejected += 1;
                continue;
            }
            Err(e) => {
                t.check(false, || format!("kan_agreement: {e}"));
                done += 1;
                continue;
            }
        };
        done += 1;
        t.report(&agreement.report, || format!("Lan along {}", k.obj_signature()));
        let via = lan_via_coend(&k, &f, &g).unwrap();
        t.report(&via.report, || "coend formula".into());
        // Explicit iso: skeletal Lan -> direct Lan -> coend formula.
        match (&agreement.comparison, via.iso.as_ref().and_then(|i| i.inverse())) {
            (Some(sigma), Some(tau_inv)) => {
                let composite = tau_inv.after(sigma).unwrap();
                t.check(composite.is_iso(), || "composite comparison is not invertible".into());
                t.report(&validate_set_natural(&composite), || "composite comparison".into());
            }
            _ => t.check(false, || "missing comparison isomorphism".into()),
        }
        let p = &agreement.pointwise;
        // μ^d recovered as L(p) ∘ η_c at ⟨c, p⟩.
        let e = p.extension.cod();
        for x in 0..d.n_obj() {
            let comma = comma_over(&k, x);
            for (o, &(cc, m)) in comma.pairs.iter().enumerate() {
                let rebuilt = e.comp(p.extension.mor(m), p.unit_or_counit.at(cc));
                t.check(rebuilt == p.per_object[x].cone.leg(o), || {
                    format!("recovered cocone at {} over {}", comma.cat.obj_id(o), d.obj_id(x))
                });
            }
        }
        match kan_universal_check(
            &p.extension,
            &p.unit_or_counit,
            &k,
            &agreement.skeletal,
            KanSide::Left,
            &eg,
        ) {
            Ok(rep) => {
                universal += 1;
                t.report(&rep, || "universality in the skeleton".into());
            }
            Err(e) if is_guard(&e) => unenumerable += 1,
            Err(e) => t.check(false, || format!("kan_universal_check: {e}")),
        }
        // The same pair into a small finite category.
        let target = arc(random_category(&mut r, 2, 3));
        if let Some(ff) = random_functor(&mut r, &c, &target, &g) {
            if let Ok(Outcome::Found(res)) = kan_pointwise(&k, &ff, KanSide::Left, &g) {
                match kan_universal_check(&res.extension, &res.unit_or_counit, &k, &ff, KanSide::Left, &eg) {
                    Ok(rep) => {
                        universal += 1;
                        t.report(&rep, || "universality in a finite target".into());
                    }
                    Err(e) if is_guard(&e) => unenumerable += 1,
                    Err(e) => t.check(false, || format!("kan_universal_check: {e}")),
                }
            }
        }
        // Along C -> 1 the extension is the colimit.
        let one = arc(fixtures::terminal());
        let bang = Functor::new("!", c.clone(), one.clone(), vec![0; c.n_obj()], vec![0; c.n_mor()]).unwrap();
        let lan = kan_finset(&bang, &f, KanSide::Left, &g).unwrap();
        let colim = limit_finset(&f, Side::Colimit, &g).unwrap();
        let mut table = vec![None; colim.object.len()];
        let mut consistent = true;
        for a in 0..c.n_obj() {
            let o = lan.commas[0].object_at(a, one.id(0)).unwrap();
            for x in 0..f.size(a) {
                let (q, v) = (colim.legs[a][x], lan.per_object[0].legs[o][x]);
                consistent &= table[q].is_none_or(|w| w == v);
                table[q] = Some(v);
            }
        }
        let bijective =
            consistent && colim.object.len() == lan.extension.size(0) && table.iter().all(Option::is_some) && {
                let mut seen: Vec<usize> = table.iter().flatten().copied().collect();
                seen.sort();
                seen.dedup();
                seen.len() == table.len()
            };
        t.check(bijective, || {
            format!("Lan along C -> 1 differs from the colimit on {}", c.name())
        });
    }
    t.verdict(format!(
        "30 pairs ({rejected} redrawn); universality on {universal} pairs, {unenumerable} with [D,E] beyond the enumeration budget"
    ))
}

// 6 -------------------------------------------------------------------------

fn end_suite() -> Verdict {
    let g = guard();
    let mut t = Tally::default();
    let mut r = rng(6);
    let (mut done, mut rejected) = (0, 0);
    while done < 30 {
        let j = arc(random_category(&mut r, 3, 4));
        let b = random_bifunctor(&mut r, &j, 2);
        let res: Vec<Result<Report, Error>> = [Side::Limit, Side::Colimit]
            .iter()
            .map(|&s| end_agreement(&b, &j, s, &g))
            .collect();
        if res.iter().any(|e| e.as_ref().is_err_and(is_guard)) {
            rejected += 1;
            continue;
        }
        for (s, rep) in ["end", "coend"].iter().zip(res) {
            match rep {
                Ok(rep) => t.report(&rep, || format!("{s} over {}", j.name())),
                Err(e) => t.check(false, || format!("{s}: {e}")),
            }
        }
        done += 1;
    }
    let small: Vec<CatRef> = [
        fixtures::terminal(),
        fixtures::arrow(),
        fixtures::parallel(),
        fixtures::discrete(2),
        fixtures::z2(),
    ]
    .into_iter()
    .map(arc)
    .collect();
    let mut nat_pairs = 0;
    for c in &small {
        for e in &small {
            let fs = enumerate_functors(c, e, &g).unwrap();
            for f in fs.iter().take(6) {
                for h in fs.iter().take(6) {
                    nat_pairs += 1;
                    t.report(&end_nat_check(f, h, &g).unwrap(), || {
                        format!("{} vs {} into {}", f.obj_signature(), h.obj_signature(), e.name())
                    });
                }
            }
        }
    }
    let factors: Vec<CatRef> = [
        fixtures::terminal(),
        fixtures::arrow(),
        fixtures::discrete(2),
        fixtures::parallel(),
        fixtures::chain(3),
    ]
    .into_iter()
    .map(arc)
    .collect();
    let mut fubini = 0;
    for i in &factors {
        for j in &factors {
            let ij = arc(product(i, j));
            let hom = hom_bifunctor(&ij).unwrap();
            t.report(&fubini_check_finset(&hom, i, j, &g).unwrap(), || {
                format!("Fubini for the hom of {}", ij.name())
            });
            fubini += 1;
            if ij.n_obj() <= 4 {
                let b = random_bifunctor(&mut r, &ij, 2);
                t.report(&fubini_check_finset(&b, i, j, &g).unwrap(), || {
                    format!("Fubini over {}", ij.name())
                });
                fubini += 1;
            }
        }
    }
    let mut coyoneda = 0;
    for c in fixtures::all().into_iter().map(arc) {
        let mut xs: Vec<SetFunctor> = c
            .objects()
            .iter()
            .map(|o| hom_functor(&c, o, Variance::Covariant).unwrap())
            .collect();
        xs.push(random_set_functor(&mut r, &c, 3));
        xs.push(random_set_functor(&mut r, &c, 3));
        for x in &xs {
            for d in 0..c.n_obj() {
                coyoneda += 1;
                t.report(&coyoneda_witness(x, d, &g).unwrap(), || {
                    format!("co-Yoneda for {} at {}", x.name(), c.obj_id(d))
                });
            }
        }
    }
    t.verdict(format!(
        "30 bifunctors ({rejected} redrawn), {nat_pairs} end/Nat pairs, {fubini} Fubini squares, {coyoneda} co-Yoneda witnesses"
    ))
}

// 7 -------------------------------------------------------------------------

fn weighted_suite() -> Verdict {
    let g = guard();
    let mut t = Tally::default();
    let mut r = rng(7);
    let mut shapes: Vec<CatRef> = [
        fixtures::arrow(),
        fixtures::parallel(),
        fixtures::discrete(2),
        fixtures::z2(),
    ]
    .into_iter()
    .map(arc)
    .collect();
    for _ in 0..10 {
        shapes.push(arc(random_category(&mut r, 3, 4)));
    }
    for j in &shapes {
        let f = random_set_functor(&mut r, j, 3);
        let point = SetFunctor::terminal(j);
        let w = weighted_limit_finset(&point, &f, Side::Limit, &g).unwrap();
        t.report(&w.report, || format!("Δ1-weighted limit over {}", j.name()));
        let lim = limit_finset(&f, Side::Limit, &g).unwrap();
        let idx = lim.tuple_index();
        let nats = enumerate_set_naturals(&point, &f, &g).unwrap();
        let table: Vec<Option<usize>> = nats
            .iter()
            .map(|n| {
                idx.get(&(0..j.n_obj()).map(|a| n.at(a, 0)).collect::<Vec<_>>())
                    .copied()
            })
            .collect();
        let mut image: Vec<usize> = table.iter().flatten().copied().collect();
        image.sort();
        image.dedup();
        t.check(
            table.iter().all(Option::is_some) && image.len() == lim.object.len() && w.object.len() == lim.object.len(),
            || format!("Δ1-weighted limit over {} is not the limit", j.name()),
        );
        let wr = random_set_functor(&mut r, j, 2);
        let wl = weighted_limit_finset(&wr, &f, Side::Limit, &g).unwrap();
        t.report(&wl.report, || format!("weighted limit over {}", j.name()));
        let n = enumerate_set_naturals(&wr, &f, &g).unwrap().len();
        t.check(wl.object.len() == n, || {
            format!("|lim^W F| = {} but |Nat(W,F)| = {n}", wl.object.len())
        });
    }
    for c in [fixtures::chain(3), fixtures::square()].into_iter().map(arc) {
        for j in [fixtures::arrow(), fixtures::discrete(2), fixtures::parallel()]
            .into_iter()
            .map(arc)
        {
            for f in enumerate_functors(&j, &c, &g).unwrap() {
                let point = SetFunctor::terminal(&j);
                let (Some(w), Some(l)) = (
                    weighted_limit(&point, &f, Side::Limit, &g).unwrap(),
                    limit(&f, Side::Limit, &g).unwrap(),
                ) else {
                    t.check(false, || {
                        format!("missing limit of {} in {}", f.obj_signature(), c.name())
                    });
                    continue;
                };
                t.report(&w.report, || {
                    format!("Δ1-weighted limit of {} in {}", f.obj_signature(), c.name())
                });
                let iso = c.hom(w.object, l.object()).iter().any(|&m| c.inverse(m).is_some());
                t.check(iso, || {
                    format!(
                        "Δ1-weighted limit of {} is not isomorphic to the limit",
                        f.obj_signature()
                    )
                });
            }
        }
    }
    let mut ends = 0;
    for c in [fixtures::arrow(), fixtures::parallel(), fixtures::discrete(2)]
        .into_iter()
        .map(arc)
    {
        let mut bs = vec![hom_bifunctor(&c).unwrap()];
        for _ in 0..5 {
            bs.push(random_bifunctor(&mut r, &c, 2));
        }
        for b in &bs {
            ends += 1;
            t.report(&end_as_weighted_limit(b, &c, &g).unwrap(), || {
                format!("end of {} as a weighted limit", b.name())
            });
        }
    }
    t.verdict(format!(
        "{} shapes, {ends} end/weighted-limit comparisons",
        shapes.len()
    ))
}

// 8 -------------------------------------------------------------------------

fn codensity_suite() -> Verdict {
    let g = guard();
    let mut t = Tally::default();
    let mut monads: Vec<(String, Monad)> = Vec::new();
    for c in fixtures::all().into_iter().map(arc) {
        let id = Functor::identity(&c);
        match codensity_monad(&id, &g).unwrap() {
            Outcome::Found((m, rep)) => {
                t.report(&rep, || format!("codensity of id on {}", c.name()));
                t.check(m.endofunctor.is_identity(), || format!("T ≠ id on {}", c.name()));
                let ids: Vec<usize> = (0..c.n_obj()).map(|o| c.id(o)).collect();
                t.check(m.unit.components() == ids && m.mult.components() == ids, || {
                    format!("η, μ not identities on {}", c.name())
                });
                monads.push((format!("id on {}", c.name()), m));
            }
            Outcome::Absent(why) => t.check(false, || format!("id on {}: {why}", c.name())),
        }
    }
    let two = arc(fixtures::arrow());
    for o in ["0", "1"] {
        let k = pick(&two, o);
        match codensity_monad(&k, &g).unwrap() {
            Outcome::Found((m, rep)) => {
                t.report(&rep, || format!("codensity of 1 -> 2 at {o}"));
                if o == "0" {
                    t.check(m.endofunctor.obj_map() == [0, 1], || "T(0)=0, T(1)=1 expected".into());
                }
                monads.push((format!("1 -> 2 at {o}"), m));
            }
            Outcome::Absent(why) => t.check(false, || format!("1 -> 2 at {o}: {why}")),
        }
    }
    let mut r = rng(8);
    let mut attempts = 0;
    while monads.len() < 20 && attempts < 200 {
        attempts += 1;
        let c = arc(random_category(&mut r, 2, 3));
        let d = arc(random_category(&mut r, 3, 4));
        let Some(k) = random_functor(&mut r, &c, &d, &g) else {
            continue;
        };
        if let Ok(Outcome::Found((m, rep))) = codensity_monad(&k, &g) {
            t.report(&rep, || format!("codensity of {}", k.obj_signature()));
            monads.push((format!("random {}", k.obj_signature()), m));
        }
    }
    for (name, m) in &monads {
        t.report(&validate_monad(m).unwrap(), || name.clone());
    }
    let pool: Vec<(usize, usize, usize)> = monads
        .iter()
        .enumerate()
        .flat_map(|(i, (_, m))| {
            let tt = &m.endofunctor;
            let c = tt.dom().clone();
            (0..c.n_obj())
                .flat_map(move |d| {
                    let cur = m.mult.at(d);
                    c.hom(tt.ob(tt.ob(d)), tt.ob(d))
                        .iter()
                        .copied()
                        .filter(move |&x| x != cur)
                        .map(move |x| (i, d, x))
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        })
        .collect();
    if pool.is_empty() {
        return fail("no monad admits a perturbation of μ");
    }
    let mut rejected = 0;
    for _ in 0..10 {
        let (i, d, x) = pool[r.gen_range(0..pool.len())];
        let (name, m) = &monads[i];
        let bad = Monad {
            endofunctor: m.endofunctor.clone(),
            unit: m.unit.clone(),
            mult: replaced(&m.mult, d, x),
        };
        let ok = validate_monad(&bad).unwrap().ok();
        rejected += usize::from(!ok);
        t.check(!ok, || {
            format!("perturbed μ of {name} at {} accepted", m.endofunctor.dom().obj_id(d))
        });
    }
    t.verdict(format!(
        "{} monads; {rejected}/10 perturbations of μ rejected",
        monads.len()
    ))
}

// 9 -------------------------------------------------------------------------

fn density_suite() -> Verdict {
    let g = guard();
    let mut t = Tally::default();
    for c in fixtures::all().into_iter().map(arc) {
        let res = density_check(&Functor::identity(&c), &g).unwrap();
        t.check(res.dense(), || format!("id on {} not dense: {}", c.name(), res.report));
        let n = c.n_obj() * c.n_obj();
        t.check(res.report.checked() as usize >= n, || {
            format!("{} hom bijections on {}", res.report.checked(), c.name())
        });
    }
    let two = arc(fixtures::arrow());
    let square = arc(fixtures::square());
    let mut cases: Vec<(Functor, bool)> = vec![(pick(&two, "0"), false), (pick(&two, "1"), true)];
    // Every element of the square is a join of the two middle ones.
    let mid = Functor::from_ids(
        "mid",
        arc(fixtures::discrete(2)),
        square.clone(),
        &[("0", "(0,1)"), ("1", "(1,0)")],
        &[],
    )
    .unwrap();
    cases.push((mid, true));
    let top = pick(&square, "(1,1)");
    cases.push((top, false));
    let mut non_dense = 0;
    for (k, expected) in &cases {
        let res = density_check(k, &g).unwrap();
        let n = k.cod().n_obj() * k.cod().n_obj();
        t.check(res.report.checked() as usize >= n, || {
            format!("{}: only {} checks", k.name(), res.report.checked())
        });
        t.check(res.dense() == *expected, || {
            format!("{} on {}: dense = {}", k.obj_signature(), k.cod().name(), res.dense())
        });
        if !res.dense() {
            let reason = res
                .report
                .counterexample()
                .map(|c| c.detail.clone())
                .unwrap_or_default();
            t.check(!reason.is_empty(), || {
                format!("{} non-dense without a reason", k.name())
            });
            non_dense += 1;
        }
    }
    t.verdict(format!(
        "{} identities dense, {non_dense} fixtures non-dense with reasons",
        fixtures::all().len()
    ))
}

// 10 ------------------------------------------------------------------------

fn diagram_suite() -> Verdict {
    let env = fixture_env();
    let mut t = Tally::default();
    let mut r: Rand = rng(10);
    let mut normals = Vec::new();
    for _ in 0..100 {
        let term = random_term(&mut r, &env, 6);
        let n = normalize(&term, &env).unwrap();
        let (e, en) = (evaluate(&term, &env).unwrap(), evaluate(&n, &env).unwrap());
        t.check(e == en, || format!("evaluation changed by normalizing {term}"));
        t.check(normalize(&n, &env).unwrap() == n, || {
            format!("normalize not idempotent on {term}")
        });
        let variant = interchange_variant(&mut r, &term, &env, 4).unwrap();
        let nv = normalize(&variant, &env).unwrap();
        t.check(nv == n, || format!("{variant} and {term} normalize differently"));
        t.check(evaluate(&variant, &env).unwrap() == e, || {
            format!("{variant} evaluates differently from {term}")
        });
        normals.push((n, e));
    }
    let mut shared = 0;
    for a in 0..normals.len() {
        for b in a + 1..normals.len() {
            if normals[a].0 == normals[b].0 {
                shared += 1;
                t.check(normals[a].1 == normals[b].1, || {
                    format!("{} has two evaluations", normals[a].0)
                });
            }
        }
    }
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../diagram/tests/golden");
    for &(file, text) in GOLDEN {
        let svg = render_svg(&parse_term(text).unwrap(), &env).unwrap();
        let golden = std::fs::read_to_string(dir.join(file)).unwrap_or_default();
        t.check(svg == golden, || format!("{file} differs from its golden file"));
    }
    t.verdict(format!(
        "100 terms, {shared} pairs sharing a normal form, {} golden SVGs",
        GOLDEN.len()
    ))
}

// 11 ------------------------------------------------------------------------

fn cli_suite() -> Verdict {
    let dir = common::corpus();
    let mut t = Tally::default();
    let files = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "cat"))
        .count();
    t.check(files >= 12, || format!("only {files} corpus files"));
    for (args, code) in common::CASES {
        let argv = |json: bool| {
            let mut v = vec!["fincat"];
            if json {
                v.extend(["--json", "--seed", "11"]);
            }
            v.extend_from_slice(args);
            v
        };
        let run = fincat_cli::run_args(argv(false), &dir);
        t.check(run.code == *code, || {
            format!("{args:?} exited {} instead of {code}: {}", run.code, run.stderr.trim())
        });
        let a = fincat_cli::run_args(argv(true), &dir);
        let b = fincat_cli::run_args(argv(true), &dir);
        t.check(a.code == *code, || format!("{args:?} --json exited {}", a.code));
        t.check(a.stdout == b.stdout && !a.stdout.is_empty(), || {
            format!("{args:?} --json is not byte-stable")
        });
    }
    let out = std::env::temp_dir().join(format!("fincat-acceptance-{}.svg", std::process::id()));
    let path = out.to_str().unwrap();
    let first = fincat_cli::run_args(["fincat", "-f", "diagrams.cat", "render", "whisker", "-o", path], &dir);
    let svg1 = std::fs::read(&out).unwrap_or_default();
    let second = fincat_cli::run_args(["fincat", "-f", "diagrams.cat", "render", "whisker", "-o", path], &dir);
    let svg2 = std::fs::read(&out).unwrap_or_default();
    let _ = std::fs::remove_file(&out);
    t.check(
        first.code == 0 && second.code == 0 && !svg1.is_empty() && svg1 == svg2,
        || "render is not stable".into(),
    );
    t.verdict(format!("{files} corpus files, {} invocations", common::CASES.len() + 1))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 11] = [
        ("Yoneda suite", yoneda_suite),
        ("Adjunction suite", adjunction_suite),
        ("Right adjoints preserve limits", rapl_suite),
        ("Limit engine cross-oracle", limit_cross_oracle),
        ("Kan suite", kan_suite),
        ("End/coend suite", end_suite),
        ("Weighted limits", weighted_suite),
        ("Codensity", codensity_suite),
        ("Density", density_suite),
        ("Diagram calculus", diagram_suite),
        ("CLI", cli_suite),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|n| n != i + 1) {
            continue;
        }
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            fail(format!("panicked: {msg}"))
        });
        let word = if verdict.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!verdict.pass);
        println!(
            "{word} {:>2}. {name}: {} [{:.1}s]",
            i + 1,
            verdict.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
