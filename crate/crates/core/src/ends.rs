//! Ends, coends and weighted (co)limits.
//!
//! A bifunctor here is a functor on `op(J) × J` whose objects are the pair
//! ids `(i,j)`. Coends in a finite category are ends in the opposite
//! category; over finite sets they are union-find quotients.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cat::{opposite, pair_id, product, FinCat};
use crate::config::Guard;
use crate::finset::{
    enumerate_set_naturals, hom_functor_at, is_injective, skeleton_guard, FinSetObj, SetFunctor, SetNat, Variance,
};
use crate::fixtures::{finset_skeleton, skeleton_table};
use crate::functor::{same_cat, CatRef, Functor, NatTrans};
use crate::functor_category::enumerate_naturals;
use crate::limits::{search_tuples, tuple_id, SetLimit, Side};
use crate::report::{Error, Report, Result};
use crate::union_find::UnionFind;

/// A wedge `apex -> D(j,j)` (`Side::Limit`) or a cowedge
/// `D(j,j) -> apex` (`Side::Colimit`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeData {
    pub apex: usize,
    pub components: Vec<usize>,
    pub side: Side,
}

#[derive(Debug, Clone)]
pub struct EndResult {
    pub wedge: WedgeData,
    pub certificate: Report,
}

impl EndResult {
    pub fn object(&self) -> usize {
        self.wedge.apex
    }
}

/// `op(J) × J`.
pub fn twisted_domain(j: &FinCat) -> FinCat {
    product(&opposite(j), j)
}

fn check_domain(dom: &FinCat, j: &FinCat) -> Result<()> {
    if !same_cat(dom, &twisted_domain(j)) {
        return Err(Error::Boundary(format!(
            "bifunctor is not defined on op({0}) x {0}",
            j.name()
        )));
    }
    Ok(())
}

/// For `h: i -> j` in `J`, the morphisms `(id_i, h): (i,i) -> (i,j)` and
/// `(h, id_j): (j,j) -> (i,j)` of `op(J) × J`.
fn wedge_legs(j: &FinCat, prod: &FinCat, h: usize) -> (usize, usize) {
    let (a, b) = (j.dom(h), j.cod(h));
    let left = prod
        .mor(&pair_id(j.mor_id(j.id(a)), j.mor_id(h)))
        .expect("product morphism");
    let right = prod
        .mor(&pair_id(j.mor_id(h), j.mor_id(j.id(b))))
        .expect("product morphism");
    (left, right)
}

fn diagonal(j: &FinCat, prod: &FinCat, a: usize) -> usize {
    prod.obj(&pair_id(j.obj_id(a), j.obj_id(a))).expect("diagonal object")
}

/// Every wedge over `D: op(J) × J -> C`.
pub fn wedges(d: &Functor, j: &CatRef, guard: &Guard) -> Result<Vec<WedgeData>> {
    check_domain(d.dom(), j)?;
    let (prod, c) = (d.dom(), d.cod());
    let diag: Vec<usize> = (0..j.n_obj()).map(|a| d.ob(diagonal(j, prod, a))).collect();
    let mut checks: Vec<Vec<(usize, usize, usize, usize)>> = vec![Vec::new(); j.n_obj()];
    for h in j.non_identities() {
        let (l, r) = wedge_legs(j, prod, h);
        let (a, b) = (j.dom(h), j.cod(h));
        checks[a.max(b)].push((a, d.mor(l), b, d.mor(r)));
    }
    let mut budget = guard.budget(&format!("wedges over {}", d.name()));
    let mut out = Vec::new();
    for apex in 0..c.n_obj() {
        let homs: Vec<&[usize]> = diag.iter().map(|&x| c.hom(apex, x)).collect();
        let sizes: Vec<usize> = homs.iter().map(|h| h.len()).collect();
        let found = search_tuples(&sizes, &mut budget, &mut |a, cur| {
            checks[a]
                .iter()
                .all(|&(i, dl, k, dr)| c.comp(dl, homs[i][cur[i]]) == c.comp(dr, homs[k][cur[k]]))
        })?;
        out.extend(found.into_iter().map(|t| WedgeData {
            apex,
            components: t.iter().enumerate().map(|(a, &x)| homs[a][x]).collect(),
            side: Side::Limit,
        }));
    }
    Ok(out)
}

/// The end (terminal wedge) or coend (initial cowedge) of `D`, found by
/// search. Coends are ends of `D^op` over `op(J)`.
pub fn end_coend(d: &Functor, j: &CatRef, side: Side, guard: &Guard) -> Result<Option<EndResult>> {
    if side == Side::Colimit {
        check_domain(d.dom(), j)?;
        let jo: CatRef = Arc::new(opposite(j));
        return Ok(end_coend(&d.op(), &jo, Side::Limit, guard)?.map(|mut r| {
            r.wedge.side = Side::Colimit;
            r
        }));
    }
    let c = d.cod();
    let mut by_apex: Vec<Vec<WedgeData>> = vec![Vec::new(); c.n_obj()];
    for w in wedges(d, j, guard)? {
        let a = w.apex;
        by_apex[a].push(w);
    }
    'candidates: for cand in by_apex.iter().flatten() {
        // Unique factorization of every wedge through the candidate, as
        // bijectivity of h ↦ (α_j ∘ h)_j from C(x, apex) to Wedge(x, D).
        let mut certificate = Report::new();
        for (x, at_x) in by_apex.iter().enumerate() {
            let homs = c.hom(x, cand.apex);
            if homs.len() != at_x.len() {
                continue 'candidates;
            }
            let mut seen = std::collections::HashSet::with_capacity(homs.len());
            for &h in homs {
                let image: Vec<usize> = cand.components.iter().map(|&u| c.comp(u, h)).collect();
                if !seen.insert(image) {
                    continue 'candidates;
                }
            }
            certificate.check(true, "end-universal", String::new);
        }
        return Ok(Some(EndResult {
            wedge: cand.clone(),
            certificate,
        }));
    }
    Ok(None)
}

/// Ends over finite sets as wedge-compatible tuples, coends as classes of
/// the disjoint union of the diagonal under the generating pairs
/// `D(h,i)(x) ~ D(j,h)(x)`. Legs follow [`SetLimit`].
pub fn end_finset(d: &SetFunctor, j: &CatRef, side: Side, guard: &Guard) -> Result<SetLimit> {
    check_domain(d.dom(), j)?;
    let prod = d.dom();
    let diag: Vec<usize> = (0..j.n_obj()).map(|a| diagonal(j, prod, a)).collect();
    let (object, legs): (FinSetObj, Vec<Vec<usize>>) = match side {
        Side::Limit => {
            let mut checks: Vec<Vec<(usize, usize, usize, usize)>> = vec![Vec::new(); j.n_obj()];
            for h in j.non_identities() {
                let (l, r) = wedge_legs(j, prod, h);
                let (a, b) = (j.dom(h), j.cod(h));
                checks[a.max(b)].push((a, l, b, r));
            }
            let sizes: Vec<usize> = diag.iter().map(|&x| d.size(x)).collect();
            let mut budget = guard.budget(&format!("end of {}", d.name()));
            let tuples = search_tuples(&sizes, &mut budget, &mut |a, cur| {
                checks[a]
                    .iter()
                    .all(|&(i, l, k, r)| d.apply(l, cur[i]) == d.apply(r, cur[k]))
            })?;
            let object = FinSetObj::new(tuples.iter().map(|t| {
                let parts: Vec<&str> = t.iter().enumerate().map(|(a, &x)| d.at(diag[a]).elem(x)).collect();
                tuple_id(&parts)
            }))?;
            let legs = (0..j.n_obj()).map(|a| tuples.iter().map(|t| t[a]).collect()).collect();
            (object, legs)
        }
        Side::Colimit => {
            let mut offset = vec![0; j.n_obj() + 1];
            for a in 0..j.n_obj() {
                offset[a + 1] = offset[a] + d.size(diag[a]);
            }
            let mut uf = UnionFind::new(offset[j.n_obj()]);
            for h in j.non_identities() {
                let (i, k) = (j.dom(h), j.cod(h));
                // x ∈ D(k,i), pushed to D(i,i) by (h, id_i) and to D(k,k)
                // by (id_k, h).
                let src = prod.obj(&pair_id(j.obj_id(k), j.obj_id(i)))?;
                let to_i = prod.mor(&pair_id(j.mor_id(h), j.mor_id(j.id(i))))?;
                let to_k = prod.mor(&pair_id(j.mor_id(j.id(k)), j.mor_id(h)))?;
                for x in 0..d.size(src) {
                    uf.union(offset[i] + d.apply(to_i, x), offset[k] + d.apply(to_k, x));
                }
            }
            let names: Vec<String> = (0..j.n_obj())
                .flat_map(|a| {
                    let set = d.at(diag[a]);
                    (0..set.len()).map(move |x| pair_id(j.obj_id(a), set.elem(x)))
                })
                .collect();
            let mut classes: Vec<(String, Vec<usize>)> = uf
                .classes()
                .into_iter()
                .map(|m| (m.iter().map(|&x| names[x].clone()).min().unwrap(), m))
                .collect();
            classes.sort();
            let mut class_of = vec![0; offset[j.n_obj()]];
            for (q, (_, members)) in classes.iter().enumerate() {
                for &m in members {
                    class_of[m] = q;
                }
            }
            let object = FinSetObj::new(classes.iter().map(|c| c.0.clone()))?;
            let legs = (0..j.n_obj())
                .map(|a| (0..d.size(diag[a])).map(|x| class_of[offset[a] + x]).collect())
                .collect();
            (object, legs)
        }
    };
    let certificate = wedge_certificate(d, j, side, &legs);
    Ok(SetLimit {
        object,
        legs,
        side,
        certificate,
    })
}

/// Every element of an end is a wedge; every generating pair of a coend
/// lands in one class.
fn wedge_certificate(d: &SetFunctor, j: &CatRef, side: Side, legs: &[Vec<usize>]) -> Report {
    let prod = d.dom();
    let mut r = Report::new();
    for h in j.non_identities() {
        let (i, k) = (j.dom(h), j.cod(h));
        let (l, rr) = wedge_legs(j, prod, h);
        match side {
            Side::Limit => {
                let n = legs.first().map_or(0, Vec::len);
                for t in 0..n {
                    r.check(d.apply(l, legs[i][t]) == d.apply(rr, legs[k][t]), "wedge", || {
                        format!("element {t} along {}", j.mor_id(h))
                    });
                }
            }
            Side::Colimit => {
                let src = prod.obj(&pair_id(j.obj_id(k), j.obj_id(i))).expect("pair object");
                let to_i = prod
                    .mor(&pair_id(j.mor_id(h), j.mor_id(j.id(i))))
                    .expect("pair morphism");
                let to_k = prod
                    .mor(&pair_id(j.mor_id(j.id(k)), j.mor_id(h)))
                    .expect("pair morphism");
                for x in 0..d.size(src) {
                    r.check(
                        legs[i][d.apply(to_i, x)] == legs[k][d.apply(to_k, x)],
                        "cowedge",
                        || format!("{} along {}", d.at(src).elem(x), j.mor_id(h)),
                    );
                }
            }
        }
    }
    r
}

/// Cross-check [`end_finset`] against [`end_coend`] run over a finite
/// skeleton of finite sets, with an explicit bijection.
pub fn end_agreement(d: &SetFunctor, j: &CatRef, side: Side, guard: &Guard) -> Result<Report> {
    let direct = end_finset(d, j, side, guard)?;
    let mut sizes: Vec<usize> = (0..d.dom().n_obj()).map(|a| d.size(a)).collect();
    sizes.extend([direct.object.len(), 1, 2]);
    sizes.sort();
    sizes.dedup();
    skeleton_guard(&sizes, guard)?;
    let skel: CatRef = Arc::new(finset_skeleton(&sizes));
    let dk = d.to_skeleton(&skel)?;
    let mut r = Report::new();
    let Some(found) = end_coend(&dk, j, side, guard)? else {
        r.fail("end-agreement", "search found no (co)end in the skeleton");
        return Ok(r);
    };
    let n: usize = skel.obj_id(found.object()).parse().unwrap();
    r.check(n == direct.object.len(), "end-agreement-size", || {
        format!("search gives {n} elements, direct construction {}", direct.object.len())
    });
    if !r.ok() {
        return Ok(r);
    }
    let legs: Vec<Vec<usize>> = found
        .wedge
        .components
        .iter()
        .map(|&m| skeleton_table(skel.mor_id(m)))
        .collect();
    let table = match side {
        Side::Limit => {
            let idx = direct.tuple_index();
            (0..n)
                .map(|k| idx.get(&legs.iter().map(|l| l[k]).collect::<Vec<_>>()).copied())
                .collect::<Option<Vec<_>>>()
        }
        Side::Colimit => {
            let mut t = vec![None; n];
            let mut ok = true;
            for (a, leg) in legs.iter().enumerate() {
                for (x, &v) in leg.iter().enumerate() {
                    let q = direct.legs[a][x];
                    ok &= t[q].is_none_or(|w| w == v);
                    t[q] = Some(v);
                }
            }
            if ok {
                t.into_iter().collect()
            } else {
                None
            }
        }
    };
    r.check(
        table.is_some_and(|t| is_injective(&t, n)),
        "end-agreement-bijective",
        || "comparison is not a bijection".into(),
    );
    Ok(r)
}

/// `(i,j) ↦ E(F i, G j)` on `op(J) × J` for `F, G: J -> E`.
pub fn hom_bifunctor_along(f: &Functor, g: &Functor) -> Result<SetFunctor> {
    if !same_cat(f.dom(), g.dom()) || !same_cat(f.cod(), g.cod()) {
        return Err(Error::Boundary("functors are not parallel".into()));
    }
    let (j, e) = (f.dom(), f.cod());
    let prod: CatRef = Arc::new(twisted_domain(j));
    let ids = |v: &[usize]| FinSetObj::new(v.iter().map(|&m| e.mor_id(m)));
    let mut sets = Vec::with_capacity(prod.n_obj());
    let mut ends = Vec::with_capacity(prod.n_obj());
    for p in 0..prod.n_obj() {
        let (a, b) = crate::finset::split_pair_id(prod.obj_id(p)).unwrap();
        let (a, b) = (j.obj(a)?, j.obj(b)?);
        sets.push(ids(e.hom(f.ob(a), g.ob(b)))?);
        ends.push((a, b));
    }
    let mut maps = Vec::with_capacity(prod.n_mor());
    for m in 0..prod.n_mor() {
        let (u, v) = crate::finset::split_pair_id(prod.mor_id(m)).unwrap();
        let (u, v) = (j.mor(u)?, j.mor(v)?);
        let (a, b) = ends[prod.dom(m)];
        let (a2, b2) = ends[prod.cod(m)];
        // u: a2 -> a in J, v: b -> b2.
        let target = e.hom(f.ob(a2), g.ob(b2));
        maps.push(
            e.hom(f.ob(a), g.ob(b))
                .iter()
                .map(|&p| {
                    let q = e.comp_all(&[g.mor(v), p, f.mor(u)]);
                    target.iter().position(|&t| t == q).unwrap()
                })
                .collect(),
        );
    }
    SetFunctor::new(format!("{}({},{})", e.name(), f.name(), g.name()), prod, sets, maps)
}

/// The hom bifunctor `C(−,=)`.
pub fn hom_bifunctor(c: &CatRef) -> Result<SetFunctor> {
    let id = Functor::identity(c);
    Ok(hom_bifunctor_along(&id, &id)?.with_name(format!("{}(-,=)", c.name())))
}

/// `|∫ E(F−,G−)| = |Nat(F,G)|`, through `α ↦ (α_j)_j`.
pub fn end_nat_check(f: &Functor, g: &Functor, guard: &Guard) -> Result<Report> {
    let b = hom_bifunctor_along(f, g)?;
    let j = f.dom();
    let end = end_finset(&b, j, Side::Limit, guard)?;
    let idx = end.tuple_index();
    let nats = enumerate_naturals(f, g, guard)?;
    let e = f.cod();
    let table: Option<Vec<usize>> = nats
        .iter()
        .map(|n| {
            let t: Vec<usize> = (0..j.n_obj())
                .map(|a| e.hom(f.ob(a), g.ob(a)).iter().position(|&m| m == n.at(a)).unwrap())
                .collect();
            idx.get(&t).copied()
        })
        .collect();
    let mut r = Report::new();
    r.check(
        table.is_some_and(|t| t.len() == end.object.len() && is_injective(&t, t.len())),
        "end-nat",
        || format!("{} naturals vs end of size {}", nats.len(), end.object.len()),
    );
    Ok(r)
}

/// Co-Yoneda: `∫^c C(c,d) × F c ≅ F d` via `[p, x] ↦ F(p)(x)`, inverse
/// `x ↦ [id_d, x]`, checked in both directions on every element.
pub fn coyoneda_witness(f: &SetFunctor, d: usize, guard: &Guard) -> Result<Report> {
    let c = f.dom();
    let prod: CatRef = Arc::new(twisted_domain(c));
    let y = hom_functor_at(c, d, Variance::Contravariant);
    let b = y.external_product(f, &prod)?;
    let co = end_finset(&b, c, Side::Colimit, guard)?;
    let mut r = Report::new();
    let mut forward: Vec<Option<usize>> = vec![None; co.object.len()];
    for a in 0..c.n_obj() {
        let w = f.size(a);
        for (pi, &p) in c.hom(a, d).iter().enumerate() {
            for x in 0..w {
                let q = co.legs[a][pi * w + x];
                let v = f.apply(p, x);
                r.check(forward[q].is_none_or(|u| u == v), "coyoneda-well-defined", || {
                    format!("class {} has two images", co.object.elem(q))
                });
                forward[q] = Some(v);
            }
        }
    }
    let id_pos = c.hom(d, d).iter().position(|&m| m == c.id(d)).unwrap();
    let wd = f.size(d);
    for x in 0..wd {
        let q = co.legs[d][id_pos * wd + x];
        r.check(forward[q] == Some(x), "coyoneda-roundtrip", || {
            format!("{} does not return to itself", f.at(d).elem(x))
        });
    }
    for (q, v) in forward.iter().enumerate() {
        let back = v.map(|v| co.legs[d][id_pos * wd + v]);
        r.check(back == Some(q), "coyoneda-roundtrip", || {
            format!("class {} does not return to itself", co.object.elem(q))
        });
    }
    Ok(r)
}

fn table_index(t: &[usize], m: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * m + x)
}

fn table_at(index: usize, n: usize, m: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    let mut k = index;
    for slot in t.iter_mut().rev() {
        *slot = k % m.max(1);
        k /= m.max(1);
    }
    t
}

/// `(a,b) ↦ F(b)^{W(a)}` on `op(C) × C`, acting by `φ ↦ F(v) ∘ φ ∘ W(u)`.
fn cotensor_bifunctor(w: &SetFunctor, f: &SetFunctor, prod: &CatRef) -> Result<SetFunctor> {
    let c = f.dom();
    let mut sets = Vec::with_capacity(prod.n_obj());
    let mut ends = Vec::with_capacity(prod.n_obj());
    for p in 0..prod.n_obj() {
        let (a, b) = crate::finset::split_pair_id(prod.obj_id(p)).unwrap();
        let (a, b) = (c.obj(a)?, c.obj(b)?);
        sets.push(w.at(a).exponential(f.at(b)));
        ends.push((a, b));
    }
    let mut maps = Vec::with_capacity(prod.n_mor());
    for m in 0..prod.n_mor() {
        let (u, v) = crate::finset::split_pair_id(prod.mor_id(m)).unwrap();
        let (u, v) = (c.mor(u)?, c.mor(v)?);
        let (a, b) = ends[prod.dom(m)];
        let (a2, b2) = ends[prod.cod(m)];
        let (n, k) = (w.size(a), f.size(b));
        let (n2, k2) = (w.size(a2), f.size(b2));
        let count = sets[prod.dom(m)].len();
        maps.push(
            (0..count)
                .map(|i| {
                    let phi = table_at(i, n, k);
                    let out: Vec<usize> = (0..n2).map(|x| f.apply(v, phi[w.apply(u, x)])).collect();
                    table_index(&out, k2)
                })
                .collect(),
        );
    }
    SetFunctor::new(format!("{}^{}", f.name(), w.name()), prod.clone(), sets, maps)
}

/// `c ↦ Set(e, F c)` (`Covariant`) or `c ↦ Set(F c, e)` on `op(C)`
/// (`Contravariant`).
pub fn power_functor(e: &FinSetObj, f: &SetFunctor, variance: Variance) -> Result<SetFunctor> {
    let c = f.dom();
    match variance {
        Variance::Covariant => {
            let sets = (0..c.n_obj()).map(|a| e.exponential(f.at(a))).collect();
            let maps = (0..c.n_mor())
                .map(|h| {
                    let (a, b) = (c.dom(h), c.cod(h));
                    (0..e.exponential(f.at(a)).len())
                        .map(|i| {
                            let t = table_at(i, e.len(), f.size(a));
                            let out: Vec<usize> = t.iter().map(|&x| f.apply(h, x)).collect();
                            table_index(&out, f.size(b))
                        })
                        .collect()
                })
                .collect();
            SetFunctor::new(format!("{}^{}", f.name(), e.len()), c.clone(), sets, maps)
        }
        Variance::Contravariant => {
            let op: CatRef = Arc::new(opposite(c));
            let sets = (0..c.n_obj()).map(|a| f.at(a).exponential(e)).collect();
            // h: a -> b in C acts Set(F b, e) -> Set(F a, e).
            let maps = (0..c.n_mor())
                .map(|h| {
                    let (a, b) = (c.dom(h), c.cod(h));
                    (0..f.at(b).exponential(e).len())
                        .map(|i| {
                            let t = table_at(i, f.size(b), e.len());
                            let out: Vec<usize> = (0..f.size(a)).map(|x| t[f.apply(h, x)]).collect();
                            table_index(&out, e.len())
                        })
                        .collect()
                })
                .collect();
            SetFunctor::new(format!("{}->{}", f.name(), e.len()), op, sets, maps)
        }
    }
}

/// A weighted (co)limit of finite sets with its certificates.
#[derive(Debug, Clone)]
pub struct WeightedSet {
    pub object: FinSetObj,
    pub report: Report,
}

fn probe_sets() -> Vec<FinSetObj> {
    vec![FinSetObj::range(0), FinSetObj::point(), FinSetObj::range(2)]
}

/// `lim^W F = ∫_c F(c)^{W(c)}` for `W, F: C -> Set`, or
/// `colim^W F = ∫^c W(c) × F(c)` for `W: C^op -> Set`, `F: C -> Set`.
///
/// For limits, the end is matched with `Nat(W, F)`; for both, the
/// defining bijection is checked against every probe set in a small
/// family (the report is marked partial).
pub fn weighted_limit_finset(w: &SetFunctor, f: &SetFunctor, side: Side, guard: &Guard) -> Result<WeightedSet> {
    let c = f.dom();
    let prod: CatRef = Arc::new(twisted_domain(c));
    let mut report = Report::new();
    report.mark_partial();
    match side {
        Side::Limit => {
            if !same_cat(w.dom(), c) {
                return Err(Error::Boundary("weight and diagram differ in domain".into()));
            }
            let b = cotensor_bifunctor(w, f, &prod)?;
            let end = end_finset(&b, c, Side::Limit, guard)?;
            let idx = end.tuple_index();
            let nats = enumerate_set_naturals(w, f, guard)?;
            let table: Option<Vec<usize>> = nats
                .iter()
                .map(|n| {
                    let t: Vec<usize> = (0..c.n_obj())
                        .map(|a| {
                            let comp: Vec<usize> = (0..w.size(a)).map(|x| n.at(a, x)).collect();
                            table_index(&comp, f.size(a))
                        })
                        .collect();
                    idx.get(&t).copied()
                })
                .collect();
            report.check(
                table.is_some_and(|t| t.len() == end.object.len() && is_injective(&t, t.len())),
                "weighted-nat",
                || format!("{} naturals vs {} end elements", nats.len(), end.object.len()),
            );
            for e in probe_sets() {
                let fe = power_functor(&e, f, Variance::Covariant)?;
                let target: HashMap<String, ()> = enumerate_set_naturals(w, &fe, guard)?
                    .iter()
                    .map(|n| (n.signature(), ()))
                    .collect();
                let mut images = Vec::new();
                for g in e.functions_to(&end.object) {
                    let comps: Vec<Vec<usize>> = (0..c.n_obj())
                        .map(|a| {
                            (0..w.size(a))
                                .map(|x| {
                                    let out: Vec<usize> = g
                                        .iter()
                                        .map(|&t| table_at(end.legs[a][t], w.size(a), f.size(a))[x])
                                        .collect();
                                    table_index(&out, f.size(a))
                                })
                                .collect()
                        })
                        .collect();
                    images.push(SetNat::new(w.clone(), fe.clone(), comps)?.signature());
                }
                let distinct: std::collections::HashSet<&String> = images.iter().collect();
                report.check(
                    distinct.len() == images.len()
                        && images.len() == target.len()
                        && images.iter().all(|s| target.contains_key(s)),
                    "weighted-universal",
                    || {
                        format!(
                            "probe of size {}: {} maps vs {} naturals",
                            e.len(),
                            images.len(),
                            target.len()
                        )
                    },
                );
            }
            Ok(WeightedSet {
                object: end.object,
                report,
            })
        }
        Side::Colimit => {
            if !same_cat(w.dom(), &opposite(c)) {
                return Err(Error::Boundary(
                    "weight must be a presheaf on the diagram's domain".into(),
                ));
            }
            let b = w.external_product(f, &prod)?;
            let co = end_finset(&b, c, Side::Colimit, guard)?;
            for e in probe_sets() {
                let fe = power_functor(&e, f, Variance::Contravariant)?;
                let target: HashMap<String, ()> = enumerate_set_naturals(w, &fe, guard)?
                    .iter()
                    .map(|n| (n.signature(), ()))
                    .collect();
                let mut images = Vec::new();
                for g in co.object.functions_to(&e) {
                    let comps: Vec<Vec<usize>> = (0..c.n_obj())
                        .map(|a| {
                            let k = f.size(a);
                            (0..w.size(a))
                                .map(|x| {
                                    let out: Vec<usize> = (0..k).map(|y| g[co.legs[a][x * k + y]]).collect();
                                    table_index(&out, e.len())
                                })
                                .collect()
                        })
                        .collect();
                    images.push(SetNat::new(w.clone(), fe.clone(), comps)?.signature());
                }
                let distinct: std::collections::HashSet<&String> = images.iter().collect();
                report.check(
                    distinct.len() == images.len()
                        && images.len() == target.len()
                        && images.iter().all(|s| target.contains_key(s)),
                    "weighted-universal",
                    || {
                        format!(
                            "probe of size {}: {} maps vs {} naturals",
                            e.len(),
                            images.len(),
                            target.len()
                        )
                    },
                );
            }
            Ok(WeightedSet {
                object: co.object,
                report,
            })
        }
    }
}

/// A weighted (co)limit in a finite category: the object and the
/// universal family `λ: W ⇒ E(l, F−)` (resp. `W ⇒ E(F−, l)`).
#[derive(Debug, Clone)]
pub struct Weighted {
    pub object: usize,
    pub universal: SetNat,
    pub report: Report,
}

/// Search for `l` and `λ` such that `h ↦ E(h, F−) ∘ λ` is a bijection
/// `E(e, l) ≅ Nat(W, E(e, F−))` for every object `e` (colimits dually).
pub fn weighted_limit(w: &SetFunctor, f: &Functor, side: Side, guard: &Guard) -> Result<Option<Weighted>> {
    let (c, e) = (f.dom(), f.cod());
    let (variance, along) = match side {
        Side::Limit => (Variance::Covariant, f.clone()),
        Side::Colimit => (Variance::Contravariant, f.op()),
    };
    let expected_dom = along.dom();
    if !same_cat(w.dom(), expected_dom) {
        return Err(Error::Boundary(format!(
            "weight {} is not defined on {}",
            w.name(),
            expected_dom.name()
        )));
    }
    let rep = |x: usize| hom_functor_at(e, x, variance).restrict_along(&along);
    let targets: Vec<(SetFunctor, HashMap<String, ()>)> = (0..e.n_obj())
        .map(|x| {
            let y = rep(x)?;
            let sigs = enumerate_set_naturals(w, &y, guard)?
                .iter()
                .map(|n| (n.signature(), ()))
                .collect();
            Ok((y, sigs))
        })
        .collect::<Result<_>>()?;
    for l in 0..e.n_obj() {
        let yl = &targets[l].0;
        for lambda in enumerate_set_naturals(w, yl, guard)? {
            let mut report = Report::new();
            for (x, (yx, sigs)) in targets.iter().enumerate() {
                let homs = match side {
                    Side::Limit => e.hom(x, l),
                    Side::Colimit => e.hom(l, x),
                };
                let mut images = Vec::with_capacity(homs.len());
                for &h in homs {
                    let comps: Vec<Vec<usize>> = (0..c.n_obj())
                        .map(|a| {
                            let (src_list, dst_list) = match side {
                                Side::Limit => (e.hom(l, f.ob(a)), e.hom(x, f.ob(a))),
                                Side::Colimit => (e.hom(f.ob(a), l), e.hom(f.ob(a), x)),
                            };
                            (0..w.size(a))
                                .map(|k| {
                                    let m = src_list[lambda.at(a, k)];
                                    let q = match side {
                                        Side::Limit => e.comp(m, h),
                                        Side::Colimit => e.comp(h, m),
                                    };
                                    dst_list.iter().position(|&t| t == q).unwrap()
                                })
                                .collect()
                        })
                        .collect();
                    images.push(SetNat::new(w.clone(), yx.clone(), comps)?.signature());
                }
                let distinct: std::collections::HashSet<&String> = images.iter().collect();
                report.check(
                    distinct.len() == images.len()
                        && images.len() == sigs.len()
                        && images.iter().all(|s| sigs.contains_key(s)),
                    "weighted-universal",
                    || {
                        format!(
                            "probe {}: {} maps vs {} naturals",
                            e.obj_id(x),
                            images.len(),
                            sigs.len()
                        )
                    },
                );
                if !report.ok() {
                    break;
                }
            }
            if report.ok() {
                return Ok(Some(Weighted {
                    object: l,
                    universal: lambda,
                    report,
                }));
            }
        }
    }
    Ok(None)
}

/// `∫_c F(c,c) ≅ lim^{C(−,=)} F`, comparing the end with `Nat(C(−,=), F)`
/// through `(x_c) ↦ (p ↦ F(id, p)(x_a))`.
pub fn end_as_weighted_limit(f: &SetFunctor, c: &CatRef, guard: &Guard) -> Result<Report> {
    let end = end_finset(f, c, Side::Limit, guard)?;
    let hom = hom_bifunctor(c)?;
    let prod = f.dom();
    let hom = SetFunctor::new(
        hom.name().to_string(),
        prod.clone(),
        (0..prod.n_obj()).map(|p| hom.at(p).clone()).collect(),
        (0..prod.n_mor()).map(|m| hom.map(m).to_vec()).collect(),
    )?;
    let nats = enumerate_set_naturals(&hom, f, guard)?;
    let sigs: HashMap<String, ()> = nats.iter().map(|n| (n.signature(), ())).collect();
    let mut images = Vec::new();
    for t in 0..end.object.len() {
        let comps: Vec<Vec<usize>> = (0..prod.n_obj())
            .map(|p| {
                let (a, b) = crate::finset::split_pair_id(prod.obj_id(p)).unwrap();
                let (a, b) = (c.obj(a).unwrap(), c.obj(b).unwrap());
                let x = end.legs[a][t];
                c.hom(a, b)
                    .iter()
                    .map(|&h| {
                        let m = prod.mor(&pair_id(c.mor_id(c.id(a)), c.mor_id(h))).unwrap();
                        f.apply(m, x)
                    })
                    .collect()
            })
            .collect();
        images.push(SetNat::new(hom.clone(), f.clone(), comps)?.signature());
    }
    let distinct: std::collections::HashSet<&String> = images.iter().collect();
    let mut r = Report::new();
    r.check(
        distinct.len() == images.len() && images.len() == sigs.len() && images.iter().all(|s| sigs.contains_key(s)),
        "end-weighted",
        || format!("end of size {} vs {} naturals", images.len(), sigs.len()),
    );
    Ok(r)
}

/// Hom continuity: `C(c, ∫ D) ≅ ∫ C(c, D)` (`Side::Limit`) or
/// `C(∫^ D, c) ≅ ∫ C(D, c)` (`Side::Colimit`), elementwise.
pub fn hom_continuity(d: &Functor, j: &CatRef, c: usize, side: Side, guard: &Guard) -> Result<Report> {
    let cat = d.cod();
    let found =
        end_coend(d, j, side, guard)?.ok_or_else(|| Error::Precondition(format!("{} has no (co)end", d.name())))?;
    let (x, jj, homs) = match side {
        Side::Limit => (
            hom_functor_at(cat, c, Variance::Covariant).restrict_along(d)?,
            j.clone(),
            cat.hom(c, found.object()),
        ),
        Side::Colimit => {
            let jo: CatRef = Arc::new(opposite(j));
            (
                hom_functor_at(cat, c, Variance::Contravariant).restrict_along(&d.op())?,
                jo,
                cat.hom(found.object(), c),
            )
        }
    };
    let end = end_finset(&x, &jj, Side::Limit, guard)?;
    let idx = end.tuple_index();
    let prod = x.dom();
    let table: Option<Vec<usize>> = homs
        .iter()
        .map(|&h| {
            let t: Vec<usize> = found
                .wedge
                .components
                .iter()
                .enumerate()
                .map(|(a, &k)| {
                    let dg = d.ob(diagonal(&jj, prod, a));
                    match side {
                        Side::Limit => pos(cat.hom(c, dg), cat.comp(k, h)),
                        Side::Colimit => pos(cat.hom(dg, c), cat.comp(h, k)),
                    }
                })
                .collect();
            idx.get(&t).copied()
        })
        .collect();
    let mut r = Report::new();
    r.check(
        table.is_some_and(|t| t.len() == end.object.len() && is_injective(&t, t.len())),
        "hom-continuity",
        || format!("{} morphisms vs end of size {}", homs.len(), end.object.len()),
    );
    Ok(r)
}

fn pos(list: &[usize], x: usize) -> usize {
    list.iter().position(|&y| y == x).expect("closed hom lists")
}

/// Fubini for ends of finite sets: for `D` on `op(I×J) × (I×J)`,
/// `∫_j ∫_i D((i,j),(i,j)) ≅ ∫_{(i,j)} D` through tuple flattening.
pub fn fubini_check_finset(d: &SetFunctor, i: &CatRef, j: &CatRef, guard: &Guard) -> Result<Report> {
    let ij: CatRef = Arc::new(product(i, j));
    check_domain(d.dom(), &ij)?;
    let whole = end_finset(d, &ij, Side::Limit, guard)?;
    let whole_idx = whole.tuple_index();
    let big = d.dom();
    let inner_dom: CatRef = Arc::new(twisted_domain(i));
    let outer_dom: CatRef = Arc::new(twisted_domain(j));
    // D((u,s),(v,t)) for u, v in I and s, t in J.
    let big_mor = |u: &str, s: &str, v: &str, t: &str| big.mor(&pair_id(&pair_id(u, s), &pair_id(v, t)));
    let big_obj = |a: &str, s: &str, b: &str, t: &str| big.obj(&pair_id(&pair_id(a, s), &pair_id(b, t)));
    // Inner ends E(s,t) = ∫_i D((i,s),(i,t)).
    let mut inner: HashMap<(usize, usize), SetLimit> = HashMap::new();
    for s in 0..j.n_obj() {
        for t in 0..j.n_obj() {
            let (sid, tid) = (j.obj_id(s), j.obj_id(t));
            let (ids_s, ids_t) = (j.mor_id(j.id(s)), j.mor_id(j.id(t)));
            let sets = (0..inner_dom.n_obj())
                .map(|p| {
                    let (a, b) = crate::finset::split_pair_id(inner_dom.obj_id(p)).unwrap();
                    Ok(d.at(big_obj(a, sid, b, tid)?).clone())
                })
                .collect::<Result<Vec<_>>>()?;
            let maps = (0..inner_dom.n_mor())
                .map(|m| {
                    let (u, v) = crate::finset::split_pair_id(inner_dom.mor_id(m)).unwrap();
                    Ok(d.map(big_mor(u, ids_s, v, ids_t)?).to_vec())
                })
                .collect::<Result<Vec<_>>>()?;
            let row = SetFunctor::new("row", inner_dom.clone(), sets, maps)?;
            inner.insert((s, t), end_finset(&row, i, Side::Limit, guard)?);
        }
    }
    let index: HashMap<(usize, usize), HashMap<Vec<usize>, usize>> =
        inner.iter().map(|(k, v)| (*k, v.tuple_index())).collect();
    let mut sets = Vec::with_capacity(outer_dom.n_obj());
    let mut pairs = Vec::with_capacity(outer_dom.n_obj());
    for p in 0..outer_dom.n_obj() {
        let (s, t) = crate::finset::split_pair_id(outer_dom.obj_id(p)).unwrap();
        let (s, t) = (j.obj(s)?, j.obj(t)?);
        sets.push(inner[&(s, t)].object.clone());
        pairs.push((s, t));
    }
    let mut maps = Vec::with_capacity(outer_dom.n_mor());
    for m in 0..outer_dom.n_mor() {
        let (u, v) = crate::finset::split_pair_id(outer_dom.mor_id(m)).unwrap();
        let src = &inner[&pairs[outer_dom.dom(m)]];
        let tgt = pairs[outer_dom.cod(m)];
        let mut t = Vec::with_capacity(src.object.len());
        for e in 0..src.object.len() {
            let coords = (0..i.n_obj())
                .map(|a| {
                    let ida = i.mor_id(i.id(a));
                    Ok(d.apply(big_mor(ida, u, ida, v)?, src.legs[a][e]))
                })
                .collect::<Result<Vec<_>>>()?;
            t.push(
                *index[&tgt]
                    .get(&coords)
                    .ok_or_else(|| Error::Structural("inner ends are not functorial".into()))?,
            );
        }
        maps.push(t);
    }
    let outer = SetFunctor::new("inner-end", outer_dom.clone(), sets, maps)?;
    let iterated = end_finset(&outer, j, Side::Limit, guard)?;
    let table = (0..iterated.object.len())
        .map(|e| {
            let coords = (0..ij.n_obj())
                .map(|p| {
                    let (a, s) = crate::finset::split_pair_id(ij.obj_id(p)).unwrap();
                    let (a, s) = (i.obj(a)?, j.obj(s)?);
                    Ok(inner[&(s, s)].legs[a][iterated.legs[s][e]])
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(whole_idx.get(&coords).copied())
        })
        .collect::<Result<Option<Vec<usize>>>>()?;
    let mut r = Report::new();
    r.check(
        table.is_some_and(|t| t.len() == whole.object.len() && is_injective(&t, t.len())),
        "fubini",
        || {
            format!(
                "iterated end {} vs joint end {}",
                iterated.object.len(),
                whole.object.len()
            )
        },
    );
    Ok(r)
}

/// Ends of functor-valued hom bifunctors agree with natural
/// transformations listed as nat-trans records.
pub fn nat_from_end_tuple(f: &Functor, g: &Functor, tuple: &[usize]) -> Result<NatTrans> {
    let e = f.cod();
    let comps = tuple
        .iter()
        .enumerate()
        .map(|(a, &k)| e.hom(f.ob(a), g.ob(a))[k])
        .collect();
    NatTrans::new("α", f.clone(), g.clone(), comps)
}
