//! Cones, limits and colimits.
//!
//! Over a finite category, limits are found by enumerating all cones and
//! looking for a terminal one. Over finite sets they are built directly
//! (tuples for limits, union-find quotients for colimits) and certified
//! against probe cones.

use std::collections::HashMap;
use std::sync::Arc;

use crate::adjunction::Adjunction;
use crate::cat::{pair_id, product, FinCat};
use crate::config::{Budget, Guard};
use crate::finset::{
    enumerate_set_naturals, hom_functor_at, is_injective, skeleton_guard, FinSetObj, SetFunctor, Variance,
};
use crate::fixtures::{finset_skeleton, skeleton_table};
use crate::functor::{same_cat, CatRef, Functor, NatTrans};
use crate::functor_category::{delta_functor, enumerate_naturals, functor_category, FunctorCategory};
use crate::report::{Error, Outcome, Report, Result};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Limit,
    Colimit,
}

impl Side {
    fn word(self) -> &'static str {
        match self {
            Side::Limit => "limit",
            Side::Colimit => "colimit",
        }
    }
}

/// A cone `Δapex ⇒ D` or a cocone `D ⇒ Δapex`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeData {
    pub apex: usize,
    pub legs: NatTrans,
    pub side: Side,
}

impl ConeData {
    pub fn leg(&self, j: usize) -> usize {
        self.legs.at(j)
    }
}

#[derive(Debug, Clone)]
pub struct LimitResult {
    pub cone: ConeData,
    pub certificate: Report,
}

impl LimitResult {
    pub fn object(&self) -> usize {
        self.cone.apex
    }
}

/// Every (co)cone over `D`, by apex then component tables.
pub fn cones(d: &Functor, side: Side, guard: &Guard) -> Result<Vec<ConeData>> {
    let (j, c) = (d.dom(), d.cod());
    let mut out = Vec::new();
    for apex in 0..c.n_obj() {
        let k = Functor::constant(apex, j, c);
        let legs = match side {
            Side::Limit => enumerate_naturals(&k, d, guard)?,
            Side::Colimit => enumerate_naturals(d, &k, guard)?,
        };
        out.extend(legs.into_iter().map(|legs| ConeData { apex, legs, side }));
    }
    Ok(out)
}

/// Morphisms between apexes mediating from `other` to `univ` (for
/// cocones, from `univ` to `other`).
pub fn mediating(univ: &ConeData, other: &ConeData, c: &FinCat) -> Vec<usize> {
    let n = univ.legs.dom_cat().n_obj();
    match univ.side {
        Side::Limit => c
            .hom(other.apex, univ.apex)
            .iter()
            .copied()
            .filter(|&h| (0..n).all(|j| c.comp(univ.leg(j), h) == other.leg(j)))
            .collect(),
        Side::Colimit => c
            .hom(univ.apex, other.apex)
            .iter()
            .copied()
            .filter(|&h| (0..n).all(|j| c.comp(h, univ.leg(j)) == other.leg(j)))
            .collect(),
    }
}

/// Unique factorization of every cone in `all` through `candidate`.
pub fn certify_cone(candidate: &ConeData, all: &[ConeData], c: &FinCat) -> Report {
    let mut r = Report::new();
    let law = format!("{}-universal", candidate.side.word());
    for other in all {
        let n = mediating(candidate, other, c).len();
        r.check(n == 1, &law, || {
            format!(
                "cone {} at apex {}: {n} mediating morphisms",
                other.legs.signature(),
                c.obj_id(other.apex)
            )
        });
    }
    r
}

/// (Co)cones over `D` grouped by apex.
pub fn cones_by_apex(d: &Functor, side: Side, guard: &Guard) -> Result<Vec<Vec<ConeData>>> {
    let mut out = vec![Vec::new(); d.cod().n_obj()];
    for cone in cones(d, side, guard)? {
        let a = cone.apex;
        out[a].push(cone);
    }
    Ok(out)
}

/// Unique factorization of every (co)cone through `candidate`, checked as
/// bijectivity of `h ↦ κ∘h` from `C(x, apex)` to `Cone(x, D)` (dually
/// `C(apex, x)` to `Cocone(D, x)`) at every object `x`. Stops at the first
/// failure.
pub fn certify_by_hom(candidate: &ConeData, by_apex: &[Vec<ConeData>], c: &FinCat) -> Report {
    let law = format!("{}-universal", candidate.side.word());
    let n = candidate.legs.dom_cat().n_obj();
    let mut r = Report::new();
    for (x, at_x) in by_apex.iter().enumerate() {
        let homs = match candidate.side {
            Side::Limit => c.hom(x, candidate.apex),
            Side::Colimit => c.hom(candidate.apex, x),
        };
        if homs.len() != at_x.len() {
            r.fail(
                &law,
                format!(
                    "{} morphisms against {} cones at {}",
                    homs.len(),
                    at_x.len(),
                    c.obj_id(x)
                ),
            );
            return r;
        }
        let mut seen = std::collections::HashSet::with_capacity(homs.len());
        for &h in homs {
            let image: Vec<usize> = (0..n)
                .map(|j| match candidate.side {
                    Side::Limit => c.comp(candidate.leg(j), h),
                    Side::Colimit => c.comp(h, candidate.leg(j)),
                })
                .collect();
            if !seen.insert(image) {
                r.fail(&law, format!("two morphisms at {} induce the same cone", c.obj_id(x)));
                return r;
            }
        }
        r.check(true, &law, String::new);
    }
    r
}

/// The canonical (first terminal, resp. initial) (co)cone, if any.
pub fn limit(d: &Functor, side: Side, guard: &Guard) -> Result<Option<LimitResult>> {
    let by_apex = cones_by_apex(d, side, guard)?;
    let c = d.cod();
    for cand in by_apex.iter().flatten() {
        let certificate = certify_by_hom(cand, &by_apex, c);
        if certificate.ok() {
            return Ok(Some(LimitResult {
                cone: cand.clone(),
                certificate,
            }));
        }
    }
    Ok(None)
}

/// Every limiting (co)cone, for essential-uniqueness checks.
pub fn all_limits(d: &Functor, side: Side, guard: &Guard) -> Result<Vec<LimitResult>> {
    let by_apex = cones_by_apex(d, side, guard)?;
    let c = d.cod();
    Ok(by_apex
        .iter()
        .flatten()
        .filter_map(|cand| {
            let certificate = certify_by_hom(cand, &by_apex, c);
            certificate.ok().then(|| LimitResult {
                cone: cand.clone(),
                certificate,
            })
        })
        .collect())
}

/// Any two limits are related by a unique mediating isomorphism.
pub fn limit_uniqueness(d: &Functor, side: Side, guard: &Guard) -> Result<Report> {
    let all = all_limits(d, side, guard)?;
    let c = d.cod();
    let mut r = Report::new();
    for a in &all {
        for b in &all {
            let m = mediating(&a.cone, &b.cone, c);
            r.check(m.len() == 1, "limit-comparison-unique", || {
                format!("{} comparisons", m.len())
            });
            if let Some(&h) = m.first() {
                r.check(c.inverse(h).is_some(), "limit-comparison-iso", || {
                    format!("{} is not invertible", c.mor_id(h))
                });
            }
        }
    }
    Ok(r)
}

/// A (co)limit of a set-valued diagram, built directly.
///
/// For limits `legs[j]` maps each element to its `j`-th coordinate; for
/// colimits it maps each element of `D(j)` to its class.
#[derive(Debug, Clone)]
pub struct SetLimit {
    pub object: FinSetObj,
    pub legs: Vec<Vec<usize>>,
    pub side: Side,
    pub certificate: Report,
}

impl SetLimit {
    /// For limits: the element with the given coordinates.
    pub fn tuple_index(&self) -> HashMap<Vec<usize>, usize> {
        (0..self.object.len())
            .map(|k| (self.legs.iter().map(|l| l[k]).collect(), k))
            .collect()
    }
}

/// All tuples `t` with `t[a] < sizes[a]` such that `ok(a, t)` holds
/// for every prefix ending at `a`.
pub(crate) fn search_tuples(
    sizes: &[usize],
    budget: &mut Budget,
    ok: &mut dyn FnMut(usize, &[usize]) -> bool,
) -> Result<Vec<Vec<usize>>> {
    fn go(
        a: usize,
        sizes: &[usize],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        budget: &mut Budget,
        ok: &mut dyn FnMut(usize, &[usize]) -> bool,
    ) -> Result<()> {
        if a == sizes.len() {
            out.push(cur.clone());
            return Ok(());
        }
        for x in 0..sizes[a] {
            budget.spend()?;
            cur[a] = x;
            if ok(a, cur) {
                go(a + 1, sizes, cur, out, budget, ok)?;
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(0, sizes, &mut vec![0; sizes.len()], &mut out, budget, ok)?;
    Ok(out)
}

pub(crate) fn tuple_id(parts: &[&str]) -> String {
    format!("({})", parts.join(","))
}

/// Limits as compatible tuples, colimits as classes of the disjoint union
/// `(j,x)` under `x ~ D(h)(x)`, named by their least member id.
pub fn limit_finset(d: &SetFunctor, side: Side, guard: &Guard) -> Result<SetLimit> {
    let j = d.dom();
    let (object, legs) = match side {
        Side::Limit => {
            let mut checks: Vec<Vec<usize>> = vec![Vec::new(); j.n_obj()];
            for h in j.non_identities() {
                checks[j.dom(h).max(j.cod(h))].push(h);
            }
            let sizes: Vec<usize> = (0..j.n_obj()).map(|a| d.size(a)).collect();
            let mut budget = guard.budget(&format!("tuples of {}", d.name()));
            let tuples = search_tuples(&sizes, &mut budget, &mut |a, cur| {
                checks[a].iter().all(|&h| d.apply(h, cur[j.dom(h)]) == cur[j.cod(h)])
            })?;
            let object = FinSetObj::new(tuples.iter().map(|t| {
                let parts: Vec<&str> = t.iter().enumerate().map(|(a, &x)| d.at(a).elem(x)).collect();
                tuple_id(&parts)
            }))?;
            let legs = (0..j.n_obj()).map(|a| tuples.iter().map(|t| t[a]).collect()).collect();
            (object, legs)
        }
        Side::Colimit => {
            let mut offset = vec![0; j.n_obj() + 1];
            for a in 0..j.n_obj() {
                offset[a + 1] = offset[a] + d.size(a);
            }
            let mut uf = UnionFind::new(offset[j.n_obj()]);
            for h in j.non_identities() {
                let (a, b) = (j.dom(h), j.cod(h));
                for x in 0..d.size(a) {
                    uf.union(offset[a] + x, offset[b] + d.apply(h, x));
                }
            }
            let names: Vec<String> = (0..j.n_obj())
                .flat_map(|a| (0..d.size(a)).map(move |x| pair_id(j.obj_id(a), d.at(a).elem(x))))
                .collect();
            let mut classes: Vec<(String, Vec<usize>)> = uf
                .classes()
                .into_iter()
                .map(|members| {
                    let rep = members.iter().map(|&m| names[m].clone()).min().unwrap();
                    (rep, members)
                })
                .collect();
            classes.sort();
            let mut class_of = vec![0; offset[j.n_obj()]];
            for (k, (_, members)) in classes.iter().enumerate() {
                for &m in members {
                    class_of[m] = k;
                }
            }
            let object = FinSetObj::new(classes.iter().map(|c| c.0.clone()))?;
            let legs = (0..j.n_obj())
                .map(|a| (0..d.size(a)).map(|x| class_of[offset[a] + x]).collect())
                .collect();
            (object, legs)
        }
    };
    let mut out = SetLimit {
        object,
        legs,
        side,
        certificate: Report::new(),
    };
    out.certificate = certify_set_limit(d, &out, &[FinSetObj::point(), FinSetObj::range(2)], guard)?;
    Ok(out)
}

/// Check the universal property against every (co)cone with apex in
/// `probes`, the cones being found by an independent search.
pub fn certify_set_limit(d: &SetFunctor, lim: &SetLimit, probes: &[FinSetObj], guard: &Guard) -> Result<Report> {
    let j = d.dom();
    let mut r = Report::new();
    r.mark_partial();
    for p in probes {
        let k = SetFunctor::constant(j, p);
        match lim.side {
            Side::Limit => {
                for cone in enumerate_set_naturals(&k, d, guard)? {
                    for e in 0..p.len() {
                        let n = (0..lim.object.len())
                            .filter(|&t| (0..j.n_obj()).all(|a| lim.legs[a][t] == cone.at(a, e)))
                            .count();
                        r.check(n == 1, "limit-universal", || {
                            format!("probe element {}: {n} factorizations", p.elem(e))
                        });
                    }
                }
            }
            Side::Colimit => {
                for cocone in enumerate_set_naturals(d, &k, guard)? {
                    let mut value: Vec<Option<usize>> = vec![None; lim.object.len()];
                    let mut consistent = true;
                    for a in 0..j.n_obj() {
                        for x in 0..d.size(a) {
                            let q = lim.legs[a][x];
                            let v = cocone.at(a, x);
                            match value[q] {
                                None => value[q] = Some(v),
                                Some(w) => consistent &= w == v,
                            }
                        }
                    }
                    // Classes are never empty, so a consistent cocone has
                    // exactly one mediating map.
                    let unique = consistent && value.iter().all(Option::is_some);
                    r.check(unique, "colimit-universal", || {
                        format!("cocone into {} elements does not factor uniquely", p.len())
                    });
                }
            }
        }
    }
    Ok(r)
}

/// Compare [`limit_finset`] with [`limit`] run over a finite skeleton of
/// finite sets containing the diagram's values and the computed
/// cardinality, through an explicit bijection.
pub fn limit_agreement(d: &SetFunctor, side: Side, guard: &Guard) -> Result<Report> {
    let direct = limit_finset(d, side, guard)?;
    let j = d.dom();
    let mut sizes: Vec<usize> = (0..j.n_obj()).map(|a| d.size(a)).collect();
    sizes.extend([direct.object.len(), 1, 2]);
    sizes.sort();
    sizes.dedup();
    skeleton_guard(&sizes, guard)?;
    let skel = Arc::new(finset_skeleton(&sizes));
    let dk = d.to_skeleton(&skel)?;
    let mut r = Report::new();
    let Some(found) = limit(&dk, side, guard)? else {
        r.fail("agreement", "search found no (co)limit in the skeleton");
        return Ok(r);
    };
    let n = skel.obj_id(found.object()).parse::<usize>().unwrap();
    r.check(n == direct.object.len(), "agreement-size", || {
        format!("search gives {n} elements, direct construction {}", direct.object.len())
    });
    if !r.ok() {
        return Ok(r);
    }
    let leg: Vec<Vec<usize>> = (0..j.n_obj())
        .map(|a| skeleton_table(skel.mor_id(found.cone.leg(a))))
        .collect();
    let table: Vec<usize> = match side {
        Side::Limit => {
            let idx = direct.tuple_index();
            let mut t = Vec::with_capacity(n);
            for k in 0..n {
                let coords: Vec<usize> = (0..j.n_obj()).map(|a| leg[a][k]).collect();
                match idx.get(&coords) {
                    Some(&e) => t.push(e),
                    None => {
                        r.fail("agreement-map", format!("apex element {k} is not a compatible tuple"));
                        return Ok(r);
                    }
                }
            }
            t
        }
        Side::Colimit => {
            let mut t = vec![usize::MAX; n];
            for a in 0..j.n_obj() {
                for x in 0..d.size(a) {
                    let (q, v) = (direct.legs[a][x], leg[a][x]);
                    if t[q] != usize::MAX && t[q] != v {
                        r.fail("agreement-map", format!("class {} is split", direct.object.elem(q)));
                        return Ok(r);
                    }
                    t[q] = v;
                }
            }
            t
        }
    };
    r.check(
        !table.contains(&usize::MAX) && is_injective(&table, n),
        "agreement-bijective",
        || "comparison map is not a bijection".into(),
    );
    Ok(r)
}

/// Completeness of a category relative to a finite family of shapes.
#[derive(Debug, Clone)]
pub struct Completeness {
    /// Names of the shapes quantified over; nothing is claimed outside them.
    pub scope: Vec<String>,
    pub report: Report,
}

/// Every diagram `J -> C`, for each `J` in `shapes`, has a (co)limit. The
/// report is partial: it speaks only for the listed shapes.
pub fn completeness_check(c: &CatRef, shapes: &[CatRef], side: Side, guard: &Guard) -> Result<Completeness> {
    let mut report = Report::new();
    report.mark_partial();
    for j in shapes {
        for d in crate::functor_category::enumerate_functors(j, c, guard)? {
            let found = limit(&d, side, guard)?.is_some();
            report.check(found, "completeness", || {
                format!("{} over {} has no {}", d.obj_signature(), j.name(), side.word())
            });
        }
    }
    Ok(Completeness {
        scope: shapes.iter().map(|j| j.name().to_string()).collect(),
        report,
    })
}

/// `lim: [J,C] -> C` with its adjunction `Δ ⊣ lim`.
#[derive(Debug, Clone)]
pub struct LimitFunctor {
    pub category: FunctorCategory,
    pub functor: Functor,
    pub limits: Vec<LimitResult>,
    pub adjunction: Adjunction,
    pub report: Report,
}

pub fn limit_functor(j: &CatRef, c: &CatRef, guard: &Guard) -> Result<Outcome<LimitFunctor>> {
    let fc = functor_category(j, c, guard)?;
    let mut limits = Vec::with_capacity(fc.cat.n_obj());
    for (o, d) in fc.functors().iter().enumerate() {
        match limit(d, Side::Limit, guard)? {
            Some(l) => limits.push(l),
            None => return Ok(Outcome::Absent(format!("diagram {} has no limit", fc.cat.obj_id(o)))),
        }
    }
    let obj_map: Vec<usize> = limits.iter().map(LimitResult::object).collect();
    let mut mor_map = Vec::with_capacity(fc.cat.n_mor());
    for m in 0..fc.cat.n_mor() {
        let tau = fc.nat(m);
        let (s, t) = (fc.cat.dom(m), fc.cat.cod(m));
        let (ls, lt) = (&limits[s].cone, &limits[t].cone);
        let h = c
            .hom(ls.apex, lt.apex)
            .iter()
            .copied()
            .find(|&h| (0..j.n_obj()).all(|a| c.comp(lt.leg(a), h) == c.comp(tau.at(a), ls.leg(a))))
            .expect("limits factor");
        mor_map.push(h);
    }
    let lim = Functor::new("lim", fc.cat.clone(), c.clone(), obj_map, mor_map)?;
    let delta = delta_functor(j, c, &fc)?;
    let mut counit = Vec::with_capacity(fc.cat.n_obj());
    for l in &limits {
        counit.push(
            fc.morphism_of(&l.cone.legs)
                .ok_or_else(|| Error::Structural("limit cone missing from the functor category".into()))?,
        );
    }
    let mut unit = Vec::with_capacity(c.n_obj());
    for x in 0..c.n_obj() {
        let l = &limits[delta.ob(x)].cone;
        let h = c
            .hom(x, l.apex)
            .iter()
            .copied()
            .find(|&h| (0..j.n_obj()).all(|a| c.comp(l.leg(a), h) == c.id(x)))
            .expect("limits factor");
        unit.push(h);
    }
    let unit = NatTrans::new("η", Functor::identity(c), lim.after(&delta)?, unit)?;
    let counit = NatTrans::new("ε", delta.after(&lim)?, Functor::identity(&fc.cat), counit)?;
    let adjunction = Adjunction::from_unit_counit(delta, lim.clone(), unit, counit)?;
    let mut report = crate::functor::validate_functor(&lim);
    report.merge(adjunction.validate()?);
    Ok(Outcome::Found(LimitFunctor {
        category: fc,
        functor: lim,
        limits,
        adjunction,
        report,
    }))
}

/// Whether `G` sends the canonical (co)limit of `D` to a (co)limit of
/// `G•D`.
pub fn preservation_check(g: &Functor, d: &Functor, side: Side, guard: &Guard) -> Result<Report> {
    let l =
        limit(d, side, guard)?.ok_or_else(|| Error::Precondition(format!("{} has no {}", d.name(), side.word())))?;
    let gd = g.after(d)?;
    let legs = NatTrans::new(
        "Gκ",
        match side {
            Side::Limit => Functor::constant(g.ob(l.object()), d.dom(), g.cod()),
            Side::Colimit => gd.clone(),
        },
        match side {
            Side::Limit => gd.clone(),
            Side::Colimit => Functor::constant(g.ob(l.object()), d.dom(), g.cod()),
        },
        l.cone.legs.components().iter().map(|&u| g.mor(u)).collect(),
    )?;
    let image = ConeData {
        apex: g.ob(l.object()),
        legs,
        side,
    };
    let by_apex = cones_by_apex(&gd, side, guard)?;
    Ok(certify_by_hom(&image, &by_apex, g.cod()))
}

/// `C(c, lim D) ≅ lim C(c, D−)` through `h ↦ (κ_j ∘ h)_j`.
pub fn hom_preserves_limit(d: &Functor, c: usize, guard: &Guard) -> Result<Report> {
    let cat = d.cod();
    let l = limit(d, Side::Limit, guard)?.ok_or_else(|| Error::Precondition(format!("{} has no limit", d.name())))?;
    let x = hom_functor_at(cat, c, Variance::Covariant).restrict_along(d)?;
    let sl = limit_finset(&x, Side::Limit, guard)?;
    let idx = sl.tuple_index();
    let j = d.dom();
    let mut table = Vec::new();
    let mut r = Report::new();
    for &h in cat.hom(c, l.object()) {
        let coords: Vec<usize> = (0..j.n_obj())
            .map(|a| {
                let u = cat.comp(l.cone.leg(a), h);
                cat.hom(c, d.ob(a)).iter().position(|&v| v == u).unwrap()
            })
            .collect();
        match idx.get(&coords) {
            Some(&k) => table.push(k),
            None => r.fail("hom-limit", format!("{} gives an incompatible tuple", cat.mor_id(h))),
        }
    }
    r.check(
        table.len() == sl.object.len() && is_injective(&table, sl.object.len()),
        "hom-limit-bijective",
        || format!("|C(c, lim D)| = {}, |lim C(c,D-)| = {}", table.len(), sl.object.len()),
    );
    Ok(r)
}

/// `Cone(c, D) = Cone({*}, C(c, D−))` elementwise.
pub fn cone_transport_check(d: &Functor, c: usize, guard: &Guard) -> Result<Report> {
    let cat = d.cod();
    let j = d.dom();
    let direct = enumerate_naturals(&Functor::constant(c, j, cat), d, guard)?;
    let x = hom_functor_at(cat, c, Variance::Covariant).restrict_along(d)?;
    let point = SetFunctor::terminal(j);
    let via_sets = enumerate_set_naturals(&point, &x, guard)?;
    let mut r = Report::new();
    r.check(direct.len() == via_sets.len(), "cone-transport", || {
        format!("{} cones vs {} elements", direct.len(), via_sets.len())
    });
    for (a, b) in direct.iter().zip(&via_sets) {
        let same = (0..j.n_obj()).all(|o| cat.hom(c, d.ob(o))[b.at(o, 0)] == a.at(o));
        r.check(same, "cone-transport", || a.signature());
    }
    Ok(r)
}

/// The inclusion `J -> I × J`, `j ↦ (i, j)`, or `I -> I × J` at a fixed `j`.
pub fn slice_inclusion(i: &CatRef, j: &CatRef, prod: &CatRef, fixed: usize, fix_first: bool) -> Result<Functor> {
    let (free, other) = if fix_first { (j, i) } else { (i, j) };
    let pid = |x: &str, y: &str| if fix_first { pair_id(y, x) } else { pair_id(x, y) };
    let fixed_obj = other.obj_id(fixed);
    let fixed_id = other.mor_id(other.id(fixed));
    let obj_map = (0..free.n_obj())
        .map(|a| prod.obj(&pid(free.obj_id(a), fixed_obj)))
        .collect::<Result<Vec<_>>>()?;
    let mor_map = (0..free.n_mor())
        .map(|f| prod.mor(&pid(free.mor_id(f), fixed_id)))
        .collect::<Result<Vec<_>>>()?;
    Functor::new(format!("ι{}", fixed_obj), free.clone(), prod.clone(), obj_map, mor_map)
}

/// The three objects `lim_i lim_j D`, `lim_j lim_i D`, `lim_{(i,j)} D` and
/// the comparison isomorphisms from the first two to the third.
#[derive(Debug, Clone)]
pub struct Interchange {
    pub objects: [usize; 3],
    pub report: Report,
}

pub fn interchange_check(d: &Functor, i: &CatRef, j: &CatRef, guard: &Guard) -> Result<Interchange> {
    let prod = d.dom();
    if **prod != product(i, j) {
        return Err(Error::Boundary(format!(
            "{} is not defined on {} x {}",
            d.name(),
            i.name(),
            j.name()
        )));
    }
    let c = d.cod();
    let whole =
        limit(d, Side::Limit, guard)?.ok_or_else(|| Error::Precondition(format!("{} has no limit", d.name())))?;
    let mut report = Report::new();
    let mut objects = [0; 3];
    for (slot, fix_first) in [(0, true), (1, false)] {
        let (outer, inner) = if fix_first { (i, j) } else { (j, i) };
        let mut rows = Vec::with_capacity(outer.n_obj());
        for o in 0..outer.n_obj() {
            let inc = slice_inclusion(i, j, prod, o, fix_first)?;
            let row = d.after(&inc)?;
            let l = limit(&row, Side::Limit, guard)?
                .ok_or_else(|| Error::Precondition(format!("inner diagram at {} has no limit", outer.obj_id(o))))?;
            rows.push((inc, l));
        }
        let mut mor_map = Vec::with_capacity(outer.n_mor());
        for f in 0..outer.n_mor() {
            let (a, b) = (outer.dom(f), outer.cod(f));
            let (la, lb) = (&rows[a].1.cone, &rows[b].1.cone);
            let h = c
                .hom(la.apex, lb.apex)
                .iter()
                .copied()
                .find(|&h| {
                    (0..inner.n_obj()).all(|x| {
                        let pf = prod
                            .mor(&if fix_first {
                                pair_id(outer.mor_id(f), inner.mor_id(inner.id(x)))
                            } else {
                                pair_id(inner.mor_id(inner.id(x)), outer.mor_id(f))
                            })
                            .unwrap();
                        c.comp(lb.leg(x), h) == c.comp(d.mor(pf), la.leg(x))
                    })
                })
                .expect("limits factor");
            mor_map.push(h);
        }
        let outer_diagram = Functor::new(
            "lim_inner",
            outer.clone(),
            c.clone(),
            rows.iter().map(|r| r.1.object()).collect(),
            mor_map,
        )?;
        let m = limit(&outer_diagram, Side::Limit, guard)?
            .ok_or_else(|| Error::Precondition("outer diagram has no limit".into()))?;
        objects[slot] = m.object();
        // The composite legs form a cone over D; factor it through the
        // limit over the product.
        let comps: Vec<usize> = (0..prod.n_obj())
            .map(|p| {
                let (o, x) = (0..outer.n_obj())
                    .flat_map(|o| (0..inner.n_obj()).map(move |x| (o, x)))
                    .find(|&(o, x)| rows[o].0.ob(x) == p)
                    .unwrap();
                c.comp(rows[o].1.cone.leg(x), m.cone.leg(o))
            })
            .collect();
        let cone = ConeData {
            apex: m.object(),
            legs: NatTrans::new("ρ", Functor::constant(m.object(), prod, c), d.clone(), comps)?,
            side: Side::Limit,
        };
        let med = mediating(&whole.cone, &cone, c);
        report.check(med.len() == 1, "interchange-comparison", || {
            format!("{} comparison morphisms", med.len())
        });
        if let Some(&h) = med.first() {
            report.check(c.inverse(h).is_some(), "interchange-iso", || {
                format!("{} is not invertible", c.mor_id(h))
            });
        }
    }
    objects[2] = whole.object();
    Ok(Interchange { objects, report })
}

/// Interchange over finite sets, with the nested-tuple flattening as the
/// explicit isomorphism.
#[derive(Debug, Clone)]
pub struct InterchangeSets {
    pub sizes: [usize; 3],
    pub report: Report,
}

pub fn interchange_check_finset(d: &SetFunctor, i: &CatRef, j: &CatRef, guard: &Guard) -> Result<InterchangeSets> {
    let prod = d.dom();
    if **prod != product(i, j) {
        return Err(Error::Boundary(format!(
            "{} is not a bifunctor on {} x {}",
            d.name(),
            i.name(),
            j.name()
        )));
    }
    let whole = limit_finset(d, Side::Limit, guard)?;
    let whole_idx = whole.tuple_index();
    let mut report = Report::new();
    let mut sizes = [0; 3];
    for (slot, fix_first) in [(0, true), (1, false)] {
        let (outer, inner) = if fix_first { (i, j) } else { (j, i) };
        let mut rows = Vec::with_capacity(outer.n_obj());
        for o in 0..outer.n_obj() {
            let inc = slice_inclusion(i, j, prod, o, fix_first)?;
            let row = d.restrict_along(&inc)?;
            let l = limit_finset(&row, Side::Limit, guard)?;
            rows.push((inc, l));
        }
        let idx: Vec<HashMap<Vec<usize>, usize>> = rows.iter().map(|r| r.1.tuple_index()).collect();
        let mut maps = Vec::with_capacity(outer.n_mor());
        for f in 0..outer.n_mor() {
            let (a, b) = (outer.dom(f), outer.cod(f));
            let la = &rows[a].1;
            let t: Vec<usize> = (0..la.object.len())
                .map(|e| {
                    let coords: Vec<usize> = (0..inner.n_obj())
                        .map(|x| {
                            let pf = prod
                                .mor(&if fix_first {
                                    pair_id(outer.mor_id(f), inner.mor_id(inner.id(x)))
                                } else {
                                    pair_id(inner.mor_id(inner.id(x)), outer.mor_id(f))
                                })
                                .unwrap();
                            d.apply(pf, la.legs[x][e])
                        })
                        .collect();
                    idx[b][&coords]
                })
                .collect();
            maps.push(t);
        }
        let outer_d = SetFunctor::new(
            "lim_inner",
            outer.clone(),
            rows.iter().map(|r| r.1.object.clone()).collect(),
            maps,
        )?;
        let m = limit_finset(&outer_d, Side::Limit, guard)?;
        sizes[slot] = m.object.len();
        let table: Vec<Option<usize>> = (0..m.object.len())
            .map(|e| {
                let coords: Vec<usize> = (0..prod.n_obj())
                    .map(|p| {
                        let (o, x) = (0..outer.n_obj())
                            .flat_map(|o| (0..inner.n_obj()).map(move |x| (o, x)))
                            .find(|&(o, x)| rows[o].0.ob(x) == p)
                            .unwrap();
                        rows[o].1.legs[x][m.legs[o][e]]
                    })
                    .collect();
                whole_idx.get(&coords).copied()
            })
            .collect();
        let total: Option<Vec<usize>> = table.into_iter().collect();
        report.check(
            total
                .as_ref()
                .is_some_and(|t| t.len() == whole.object.len() && is_injective(t, whole.object.len())),
            "interchange-iso",
            || format!("flattening is not a bijection (slot {slot})"),
        );
    }
    sizes[2] = whole.object.len();
    Ok(InterchangeSets { sizes, report })
}

/// Tensor `X ⊗ c` (coproduct of `|X|` copies of `c`) or cotensor `X ⋔ c`
/// (product) in a finite category, with the bijections
/// `E(X⊗c, c') ≅ Set(X, E(c,c'))` (resp. `E(c', X⋔c) ≅ Set(X, E(c',c))`)
/// checked for every `c'`.
pub fn tensor_in(
    e: &CatRef,
    copies: usize,
    c: usize,
    mode: crate::finset::TensorMode,
    guard: &Guard,
) -> Result<(usize, Report)> {
    use crate::finset::TensorMode;
    let disc = Arc::new(crate::fixtures::discrete(copies));
    let d = Functor::constant(c, &disc, e);
    let side = match mode {
        TensorMode::Tensor => Side::Colimit,
        TensorMode::Cotensor => Side::Limit,
    };
    let l = limit(&d, side, guard)?.ok_or_else(|| {
        Error::Precondition(format!(
            "{} lacks the {} of {copies} copies of {}",
            e.name(),
            match side {
                Side::Limit => "product",
                Side::Colimit => "coproduct",
            },
            e.obj_id(c)
        ))
    })?;
    let mut r = Report::new();
    let x = l.object();
    for cp in 0..e.n_obj() {
        let (homs, inner) = match side {
            Side::Colimit => (e.hom(x, cp), e.hom(c, cp)),
            Side::Limit => (e.hom(cp, x), e.hom(cp, c)),
        };
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for &h in homs {
            let family: Vec<usize> = (0..copies)
                .map(|k| match side {
                    Side::Colimit => e.comp(h, l.cone.leg(k)),
                    Side::Limit => e.comp(l.cone.leg(k), h),
                })
                .collect();
            *seen.entry(family).or_default() += 1;
        }
        let expected = inner.len().pow(copies as u32);
        r.check(
            seen.len() == expected && seen.values().all(|&n| n == 1),
            "tensor-bijection",
            || format!("at {}: {} families hit of {expected}", e.obj_id(cp), seen.len()),
        );
    }
    Ok((x, r))
}

/// `ev_i: [I, C] -> C`.
pub fn evaluation(fc: &FunctorCategory, i: usize) -> Result<Functor> {
    let obj_map = fc.functors().iter().map(|f| f.ob(i)).collect();
    let mor_map = fc.nats().iter().map(|n| n.at(i)).collect();
    let cod = fc
        .functors()
        .first()
        .map(|f| f.cod().clone())
        .ok_or_else(|| Error::Precondition("empty functor category".into()))?;
    if let Some(f) = fc.functors().first() {
        if !same_cat(&cod, f.cod()) {
            return Err(Error::Boundary("mixed codomains".into()));
        }
    }
    Functor::new(format!("ev_{i}"), fc.cat.clone(), cod, obj_map, mor_map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn arc(c: FinCat) -> CatRef {
        Arc::new(c)
    }

    #[test]
    fn meets_and_joins_in_arrow() {
        let g = Guard::default();
        let (disc, two) = (arc(fixtures::discrete(2)), arc(fixtures::arrow()));
        let d = Functor::from_ids("D", disc, two.clone(), &[("0", "0"), ("1", "1")], &[]).unwrap();
        assert_eq!(limit(&d, Side::Limit, &g).unwrap().unwrap().object(), 0);
        assert_eq!(limit(&d, Side::Colimit, &g).unwrap().unwrap().object(), 1);
    }

    #[test]
    fn equalizer_and_coequalizer_of_swap() {
        let g = Guard::default();
        let par = arc(fixtures::parallel());
        let d = SetFunctor::from_ids(
            "D",
            par,
            &[("0", vec!["1", "2", "3"]), ("1", vec!["1", "2", "3"])],
            &[
                ("f", vec![("1", "1"), ("2", "2"), ("3", "3")]),
                ("g", vec![("1", "2"), ("2", "1"), ("3", "3")]),
            ],
        )
        .unwrap();
        let eq = limit_finset(&d, Side::Limit, &g).unwrap();
        assert_eq!(eq.object.elements(), ["(3,3)"]);
        assert!(eq.certificate.ok());
        let co = limit_finset(&d, Side::Colimit, &g).unwrap();
        assert_eq!(co.object.elements(), ["(0,1)", "(0,3)"]);
        assert!(co.certificate.ok());
        assert!(limit_agreement(&d, Side::Limit, &g).unwrap().ok());
        assert!(limit_agreement(&d, Side::Colimit, &g).unwrap().ok());
    }

    #[test]
    fn empty_diagram_gives_extremal_objects() {
        let g = Guard::default();
        let (empty, two) = (arc(fixtures::empty()), arc(fixtures::arrow()));
        let d = Functor::new("∅", empty, two.clone(), vec![], vec![]).unwrap();
        assert_eq!(limit(&d, Side::Limit, &g).unwrap().unwrap().object(), 1);
        assert_eq!(limit(&d, Side::Colimit, &g).unwrap().unwrap().object(), 0);
        let collapse = Functor::constant(1, &two, &two);
        let r = preservation_check(&collapse, &d, Side::Colimit, &g).unwrap();
        assert!(!r.ok());
        assert!(preservation_check(&Functor::identity(&two), &d, Side::Colimit, &g)
            .unwrap()
            .ok());
    }

    #[test]
    fn limit_functor_on_arrow_is_adjoint() {
        let g = Guard::default();
        let two = arc(fixtures::arrow());
        let lf = limit_functor(&two, &two, &g).unwrap().found().unwrap();
        assert!(lf.report.ok(), "{}", lf.report);
        // the limit of a diagram in a poset is the meet of its image
        for (o, f) in lf.category.functors().iter().enumerate() {
            assert_eq!(lf.functor.ob(o), f.ob(0).min(f.ob(1)));
        }
    }
}
