//! Pointwise Kan extensions, density, codensity monads and the
//! nerve/realization adjunction on finite witnesses.
//!
//! Left extensions are colimits over comma categories `K ↓ d`. Right
//! extensions into a finite category are left extensions between the
//! opposite categories.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cat::opposite;
use crate::config::Guard;
use crate::ends::{end_finset, twisted_domain};
use crate::finset::{
    enumerate_set_naturals, hom_functor_at, is_injective, skeleton_guard, validate_set_functor, validate_set_natural,
    FinSetObj, SetFunctor, SetNat, Variance,
};
use crate::fixtures::{finset_skeleton, skeleton_table};
use crate::functor::{
    same_cat, validate_functor, validate_natural, vertical, whisker_left, whisker_right, CatRef, Functor, NatTrans,
};
use crate::functor_category::{enumerate_functors, enumerate_naturals};
use crate::limits::{limit, limit_finset, ConeData, LimitResult, SetLimit, Side};
use crate::report::{Error, Outcome, Report, Result};
use crate::universal::{comma_over, comma_under, elements, CommaData};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KanSide {
    Left,
    Right,
}

/// `extension` is `Lan_K F` with unit `F ⇒ L•K`, or `Ran_K F` with counit
/// `R•K ⇒ F`. `per_object[d]` is the comma (co)limit at `d`.
#[derive(Debug, Clone)]
pub struct KanResult {
    pub extension: Functor,
    pub unit_or_counit: NatTrans,
    pub per_object: Vec<LimitResult>,
    pub certificate: Report,
}

pub fn kan_pointwise(k: &Functor, f: &Functor, side: KanSide, guard: &Guard) -> Result<Outcome<KanResult>> {
    match side {
        KanSide::Left => lan(k, f, guard),
        KanSide::Right => {
            let res = match lan(&k.op(), &f.op(), guard)? {
                Outcome::Found(r) => r,
                Outcome::Absent(why) => return Ok(Outcome::Absent(why)),
            };
            let ext = res.extension.op().rebase(k.cod(), f.cod())?.with_name("Ran");
            let counit = NatTrans::new("ε", ext.after(k)?, f.clone(), res.unit_or_counit.components().to_vec())?;
            let per_object = res
                .per_object
                .into_iter()
                .map(|l| LimitResult {
                    cone: ConeData {
                        apex: l.cone.apex,
                        legs: l.cone.legs.op(),
                        side: Side::Limit,
                    },
                    certificate: l.certificate,
                })
                .collect();
            let mut certificate = validate_functor(&ext);
            certificate.merge(validate_natural(&counit)?);
            certificate.merge(res.certificate);
            Ok(Outcome::Found(KanResult {
                extension: ext,
                unit_or_counit: counit,
                per_object,
                certificate,
            }))
        }
    }
}

fn lan(k: &Functor, f: &Functor, guard: &Guard) -> Result<Outcome<KanResult>> {
    if !same_cat(k.dom(), f.dom()) {
        return Err(Error::Boundary(format!(
            "{} and {} have different domains",
            k.name(),
            f.name()
        )));
    }
    let (c, d, e) = (k.dom(), k.cod(), f.cod());
    let commas: Vec<CommaData> = (0..d.n_obj()).map(|x| comma_over(k, x)).collect();
    let mut per_object = Vec::with_capacity(d.n_obj());
    for (x, comma) in commas.iter().enumerate() {
        let diag = f.after(&comma.forgetful)?;
        match limit(&diag, Side::Colimit, guard)? {
            Some(l) => per_object.push(l),
            None => {
                return Ok(Outcome::Absent(format!(
                    "F•P has no colimit over {}↓{}",
                    k.name(),
                    d.obj_id(x)
                )))
            }
        }
    }
    let obj_map: Vec<usize> = per_object.iter().map(LimitResult::object).collect();
    let mut mor_map = Vec::with_capacity(d.n_mor());
    for g in 0..d.n_mor() {
        let (x, y) = (d.dom(g), d.cod(g));
        let (mx, my) = (&per_object[x].cone, &per_object[y].cone);
        // The cocone at y restricted along g∘−: K↓x -> K↓y.
        let pushed: Vec<usize> = commas[x]
            .pairs
            .iter()
            .map(|&(cc, p)| {
                let o = commas[y].object_at(cc, d.comp(g, p)).expect("comma closed");
                my.leg(o)
            })
            .collect();
        let h = e
            .hom(mx.apex, my.apex)
            .iter()
            .copied()
            .find(|&h| (0..pushed.len()).all(|o| e.comp(h, mx.leg(o)) == pushed[o]))
            .expect("colimits factor");
        mor_map.push(h);
    }
    let ext = Functor::new("Lan", d.clone(), e.clone(), obj_map, mor_map)?;
    let comps: Vec<usize> = (0..c.n_obj())
        .map(|a| {
            let kx = k.ob(a);
            let o = commas[kx].object_at(a, d.id(kx)).expect("identity in comma");
            per_object[kx].cone.leg(o)
        })
        .collect();
    let unit = NatTrans::new("η", f.clone(), ext.after(k)?, comps)?;
    let mut certificate = validate_functor(&ext);
    certificate.merge(validate_natural(&unit)?);
    for (x, comma) in commas.iter().enumerate() {
        certificate.merge(per_object[x].certificate.clone());
        // μ^x recovered as L(p) ∘ η_c at ⟨c, p⟩.
        for (o, &(cc, p)) in comma.pairs.iter().enumerate() {
            let rebuilt = e.comp(ext.mor(p), unit.at(cc));
            certificate.check(rebuilt == per_object[x].cone.leg(o), "recovered-cocone", || {
                format!("at {} over {}", comma.cat.obj_id(o), d.obj_id(x))
            });
        }
    }
    Ok(Outcome::Found(KanResult {
        extension: ext,
        unit_or_counit: unit,
        per_object,
        certificate,
    }))
}

/// For every `H: D -> E` in `hs` and every `σ: F ⇒ H•K`, exactly one
/// `σ̄: L ⇒ H` with `σ = (σ̄•K) ∘ η` (right extensions dually).
pub fn kan_universal_probes(
    l: &Functor,
    eta: &NatTrans,
    k: &Functor,
    f: &Functor,
    side: KanSide,
    hs: &[Functor],
    guard: &Guard,
) -> Result<Report> {
    if side == KanSide::Right {
        let hs: Vec<Functor> = hs.iter().map(Functor::op).collect();
        return kan_universal_probes(&l.op(), &eta.op(), &k.op(), &f.op(), KanSide::Left, &hs, guard);
    }
    let lk = l.after(k)?;
    if eta.src() != f || eta.tgt() != &lk {
        return Err(Error::Boundary(format!(
            "{} is not a transformation {} ⇒ {}",
            eta.name(),
            f.name(),
            lk.name()
        )));
    }
    let mut r = Report::new();
    for h in hs {
        let hk = h.after(k)?;
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for bar in enumerate_naturals(l, h, guard)? {
            let composite = vertical(&whisker_right(&bar, k)?, eta)?;
            *counts.entry(composite.components().to_vec()).or_default() += 1;
        }
        for sigma in enumerate_naturals(f, &hk, guard)? {
            let n = counts.get(sigma.components()).copied().unwrap_or(0);
            r.check(n == 1, "kan-universal", || {
                format!(
                    "H = {}, σ = {}: {n} factorizations",
                    h.obj_signature(),
                    sigma.signature()
                )
            });
        }
    }
    Ok(r)
}

/// [`kan_universal_probes`] over every functor `D -> E`.
pub fn kan_universal_check(
    l: &Functor,
    eta: &NatTrans,
    k: &Functor,
    f: &Functor,
    side: KanSide,
    guard: &Guard,
) -> Result<Report> {
    let hs = enumerate_functors(k.cod(), f.cod(), guard)?;
    kan_universal_probes(l, eta, k, f, side, &hs, guard)
}

/// A Kan extension into finite sets. Left: colimits over `K ↓ d`, unit
/// `F ⇒ L•K`. Right: limits over `d ↓ K`, counit `R•K ⇒ F`.
#[derive(Debug, Clone)]
pub struct SetKan {
    pub extension: SetFunctor,
    pub unit_or_counit: SetNat,
    pub per_object: Vec<SetLimit>,
    pub commas: Vec<CommaData>,
    pub certificate: Report,
}

pub fn kan_finset(k: &Functor, f: &SetFunctor, side: KanSide, guard: &Guard) -> Result<SetKan> {
    if !same_cat(k.dom(), f.dom()) {
        return Err(Error::Boundary(format!(
            "{} and {} have different domains",
            k.name(),
            f.name()
        )));
    }
    let (c, d) = (k.dom(), k.cod());
    let (commas, lside): (Vec<CommaData>, Side) = match side {
        KanSide::Left => ((0..d.n_obj()).map(|x| comma_over(k, x)).collect(), Side::Colimit),
        KanSide::Right => ((0..d.n_obj()).map(|x| comma_under(x, k)).collect(), Side::Limit),
    };
    let per_object = commas
        .iter()
        .map(|cm| limit_finset(&f.restrict_along(&cm.forgetful)?, lside, guard))
        .collect::<Result<Vec<_>>>()?;
    let mut maps = Vec::with_capacity(d.n_mor());
    for g in 0..d.n_mor() {
        let (x, y) = (d.dom(g), d.cod(g));
        let (lx, ly) = (&per_object[x], &per_object[y]);
        let table = match side {
            KanSide::Left => {
                let mut t = vec![usize::MAX; lx.object.len()];
                for (o, &(cc, p)) in commas[x].pairs.iter().enumerate() {
                    let o2 = commas[y].object_at(cc, d.comp(g, p)).expect("comma closed");
                    for e in 0..f.size(cc) {
                        t[lx.legs[o][e]] = ly.legs[o2][e];
                    }
                }
                t
            }
            KanSide::Right => {
                let idx = ly.tuple_index();
                (0..lx.object.len())
                    .map(|e| {
                        let coords: Vec<usize> = commas[y]
                            .pairs
                            .iter()
                            .map(|&(cc, p)| {
                                let o = commas[x].object_at(cc, d.comp(p, g)).expect("comma closed");
                                lx.legs[o][e]
                            })
                            .collect();
                        idx[&coords]
                    })
                    .collect()
            }
        };
        maps.push(table);
    }
    let name = match side {
        KanSide::Left => "Lan",
        KanSide::Right => "Ran",
    };
    let ext = SetFunctor::new(
        name,
        d.clone(),
        per_object.iter().map(|l| l.object.clone()).collect(),
        maps,
    )?;
    let ek = ext.restrict_along(k)?;
    let comps: Vec<Vec<usize>> = (0..c.n_obj())
        .map(|a| {
            let kx = k.ob(a);
            let o = commas[kx].object_at(a, d.id(kx)).expect("identity in comma");
            match side {
                KanSide::Left => per_object[kx].legs[o].clone(),
                KanSide::Right => (0..ek.size(a)).map(|e| per_object[kx].legs[o][e]).collect(),
            }
        })
        .collect();
    let unit_or_counit = match side {
        KanSide::Left => SetNat::new(f.clone(), ek, comps)?,
        KanSide::Right => SetNat::new(ek, f.clone(), comps)?,
    };
    let mut certificate = validate_set_functor(&ext);
    certificate.merge(validate_set_natural(&unit_or_counit));
    for l in &per_object {
        certificate.merge(l.certificate.clone());
    }
    Ok(SetKan {
        extension: ext,
        unit_or_counit,
        per_object,
        commas,
        certificate,
    })
}

/// [`kan_pointwise`] run in a finite skeleton of finite sets, next to
/// [`kan_finset`], with the comparison between them.
#[derive(Debug, Clone)]
pub struct KanAgreement {
    pub pointwise: KanResult,
    /// `F` as a functor into `skeleton`.
    pub skeletal: Functor,
    pub skeleton: CatRef,
    /// The unique isomorphism from the skeletal extension to the direct one
    /// that is compatible with the units (counits).
    pub comparison: Option<SetNat>,
    pub report: Report,
}

/// A skeleton-valued functor read back as a set functor.
pub fn skeleton_values(f: &Functor) -> Result<SetFunctor> {
    let (c, skel) = (f.dom(), f.cod());
    let sets = (0..c.n_obj())
        .map(|a| {
            let n: usize = skel
                .obj_id(f.ob(a))
                .parse()
                .map_err(|_| Error::Precondition(format!("{} is not a finite-set skeleton", skel.name())))?;
            Ok(FinSetObj::range(n))
        })
        .collect::<Result<Vec<_>>>()?;
    let maps = (0..c.n_mor()).map(|m| skeleton_table(skel.mor_id(f.mor(m)))).collect();
    SetFunctor::new(f.name(), c.clone(), sets, maps)
}

pub fn kan_agreement(k: &Functor, f: &SetFunctor, side: KanSide, guard: &Guard) -> Result<Outcome<KanAgreement>> {
    let direct = kan_finset(k, f, side, guard)?;
    let (c, d) = (k.dom(), k.cod());
    let mut sizes: Vec<usize> = (0..c.n_obj()).map(|a| f.size(a)).collect();
    sizes.extend((0..d.n_obj()).map(|x| direct.extension.size(x)));
    sizes.extend([1, 2]);
    sizes.sort();
    sizes.dedup();
    skeleton_guard(&sizes, guard)?;
    let skeleton: CatRef = Arc::new(finset_skeleton(&sizes));
    let skeletal = f.to_skeleton(&skeleton)?;
    let pointwise = match kan_pointwise(k, &skeletal, side, guard)? {
        Outcome::Found(p) => p,
        Outcome::Absent(why) => return Ok(Outcome::Absent(why)),
    };
    let mut report = pointwise.certificate.clone();
    report.merge(direct.certificate.clone());
    let lp = skeleton_values(&pointwise.extension)?;
    let units: Vec<Vec<usize>> = (0..c.n_obj())
        .map(|a| skeleton_table(skeleton.mor_id(pointwise.unit_or_counit.at(a))))
        .collect();
    let compatible = |sigma: &SetNat| {
        (0..c.n_obj()).all(|a| {
            let kx = k.ob(a);
            match side {
                KanSide::Left => (0..f.size(a)).all(|x| sigma.at(kx, units[a][x]) == direct.unit_or_counit.at(a, x)),
                KanSide::Right => (0..lp.size(kx)).all(|y| direct.unit_or_counit.at(a, sigma.at(kx, y)) == units[a][y]),
            }
        })
    };
    let found: Vec<SetNat> = enumerate_set_naturals(&lp, &direct.extension, guard)?
        .into_iter()
        .filter(|s| s.is_iso() && compatible(s))
        .collect();
    report.check(found.len() == 1, "kan-agreement", || {
        format!(
            "{} unit-compatible isomorphisms between the two extensions",
            found.len()
        )
    });
    let comparison = found.into_iter().next();
    Ok(Outcome::Found(KanAgreement {
        pointwise,
        skeletal,
        skeleton,
        comparison,
        report,
    }))
}

/// The coend formula for a left Kan extension and its comparison with
/// [`kan_finset`].
#[derive(Debug, Clone)]
pub struct LanCoend {
    pub extension: SetFunctor,
    /// `[p, x] ↦ class of (⟨c,p⟩, x)`, present when it is a bijection.
    pub iso: Option<SetNat>,
    pub report: Report,
}

/// `Lan_K F(d) ≅ ∫^c D(Kc, d) × F c`, per `d`, with the explicit natural
/// isomorphism `[p, x] ↦ class of (⟨c,p⟩, x)` to [`kan_finset`].
pub fn lan_via_coend(k: &Functor, f: &SetFunctor, guard: &Guard) -> Result<LanCoend> {
    let (c, d) = (k.dom(), k.cod());
    let pointwise = kan_finset(k, f, KanSide::Left, guard)?;
    let prod: CatRef = Arc::new(twisted_domain(c));
    let kop = k.op();
    let mut coends = Vec::with_capacity(d.n_obj());
    for x in 0..d.n_obj() {
        let w = hom_functor_at(d, x, Variance::Contravariant).restrict_along(&kop)?;
        let b = w.external_product(f, &prod)?;
        coends.push(end_finset(&b, c, Side::Colimit, guard)?);
    }
    let mut r = Report::new();
    // Action on g: d -> d' sends [p, x] to [g∘p, x].
    let mut maps = Vec::with_capacity(d.n_mor());
    for g in 0..d.n_mor() {
        let (x, y) = (d.dom(g), d.cod(g));
        let mut t = vec![usize::MAX; coends[x].object.len()];
        for a in 0..c.n_obj() {
            let w = f.size(a);
            let (from, to) = (d.hom(k.ob(a), x), d.hom(k.ob(a), y));
            for (pi, &p) in from.iter().enumerate() {
                let qi = to.iter().position(|&q| q == d.comp(g, p)).unwrap();
                for e in 0..w {
                    let src = coends[x].legs[a][pi * w + e];
                    let dst = coends[y].legs[a][qi * w + e];
                    r.check(t[src] == usize::MAX || t[src] == dst, "coend-functorial", || {
                        format!("class {} at {}", coends[x].object.elem(src), d.obj_id(x))
                    });
                    t[src] = dst;
                }
            }
        }
        maps.push(t);
    }
    let via = SetFunctor::new(
        "Lan∫",
        d.clone(),
        coends.iter().map(|c| c.object.clone()).collect(),
        maps,
    )?;
    r.merge(validate_set_functor(&via));
    let mut comps = Vec::with_capacity(d.n_obj());
    for x in 0..d.n_obj() {
        let mut t = vec![usize::MAX; coends[x].object.len()];
        for a in 0..c.n_obj() {
            let w = f.size(a);
            for (pi, &p) in d.hom(k.ob(a), x).iter().enumerate() {
                let o = pointwise.commas[x].object_at(a, p).expect("comma object");
                for e in 0..w {
                    let src = coends[x].legs[a][pi * w + e];
                    let dst = pointwise.per_object[x].legs[o][e];
                    r.check(t[src] == usize::MAX || t[src] == dst, "lan-coend-iso", || {
                        format!("class {} has two images", coends[x].object.elem(src))
                    });
                    t[src] = dst;
                }
            }
        }
        r.check(
            !t.contains(&usize::MAX) && t.len() == pointwise.extension.size(x) && is_injective(&t, t.len()),
            "lan-coend-iso",
            || format!("comparison at {} is not a bijection", d.obj_id(x)),
        );
        comps.push(t);
    }
    let mut iso = None;
    if r.ok() {
        let n = SetNat::new(via.clone(), pointwise.extension.clone(), comps)?;
        r.merge(validate_set_natural(&n));
        iso = Some(n);
    }
    Ok(LanCoend {
        extension: via,
        iso,
        report: r,
    })
}

/// Cocones of `F•P_d` with apex `e` against `Nat(D(K−,d), E(F−,e))`,
/// through `β ↦ (p ↦ β_⟨c,p⟩)`.
pub fn cocone_transposition(k: &Functor, f: &Functor, d: usize, e: usize, guard: &Guard) -> Result<Report> {
    let (dd, ee) = (k.cod(), f.cod());
    let comma = comma_over(k, d);
    let diag = f.after(&comma.forgetful)?;
    let cocones = enumerate_naturals(&diag, &Functor::constant(e, &comma.cat, ee), guard)?;
    let (kop, fop) = (k.op(), f.op());
    let src = hom_functor_at(dd, d, Variance::Contravariant).restrict_along(&kop)?;
    let tgt = hom_functor_at(ee, e, Variance::Contravariant).restrict_along(&fop)?;
    let sigs: HashMap<String, ()> = enumerate_set_naturals(&src, &tgt, guard)?
        .iter()
        .map(|n| (n.signature(), ()))
        .collect();
    let mut images = Vec::new();
    for beta in &cocones {
        let comps: Vec<Vec<usize>> = (0..k.dom().n_obj())
            .map(|a| {
                dd.hom(k.ob(a), d)
                    .iter()
                    .map(|&p| {
                        let o = comma.object_at(a, p).unwrap();
                        ee.hom(f.ob(a), e).iter().position(|&m| m == beta.at(o)).unwrap()
                    })
                    .collect()
            })
            .collect();
        images.push(SetNat::new(src.clone(), tgt.clone(), comps)?.signature());
    }
    let mut r = Report::new();
    r.check(bijective_onto(&images, &sigs), "cocone-transposition", || {
        format!("{} cocones vs {} transformations", images.len(), sigs.len())
    });
    Ok(r)
}

/// The pointwise criterion `E(Ld, e) ≅ Nat(D(K−,d), E(F−,e))` through
/// `h ↦ (p ↦ h ∘ L(p) ∘ η_c)`, for every `d` and `e`.
pub fn pointwise_criterion(res: &KanResult, k: &Functor, f: &Functor, guard: &Guard) -> Result<Report> {
    let (dd, ee) = (k.cod(), f.cod());
    let (l, eta) = (&res.extension, &res.unit_or_counit);
    let (kop, fop) = (k.op(), f.op());
    let mut r = Report::new();
    for d in 0..dd.n_obj() {
        let src = hom_functor_at(dd, d, Variance::Contravariant).restrict_along(&kop)?;
        for e in 0..ee.n_obj() {
            let tgt = hom_functor_at(ee, e, Variance::Contravariant).restrict_along(&fop)?;
            let sigs: HashMap<String, ()> = enumerate_set_naturals(&src, &tgt, guard)?
                .iter()
                .map(|n| (n.signature(), ()))
                .collect();
            let mut images = Vec::new();
            for &h in ee.hom(l.ob(d), e) {
                let comps: Vec<Vec<usize>> = (0..k.dom().n_obj())
                    .map(|a| {
                        dd.hom(k.ob(a), d)
                            .iter()
                            .map(|&p| {
                                let m = ee.comp_all(&[h, l.mor(p), eta.at(a)]);
                                ee.hom(f.ob(a), e).iter().position(|&q| q == m).unwrap()
                            })
                            .collect()
                    })
                    .collect();
                images.push(SetNat::new(src.clone(), tgt.clone(), comps)?.signature());
            }
            r.check(bijective_onto(&images, &sigs), "pointwise-criterion", || {
                format!("at d = {}, e = {}", dd.obj_id(d), ee.obj_id(e))
            });
        }
    }
    Ok(r)
}

fn bijective_onto(images: &[String], target: &HashMap<String, ()>) -> bool {
    let distinct: std::collections::HashSet<&String> = images.iter().collect();
    distinct.len() == images.len() && images.len() == target.len() && images.iter().all(|s| target.contains_key(s))
}

/// For `F ⊣ G` with unit `η`, `⟨G, η⟩` is a left Kan extension of the
/// identity along `F`, preserved by every functor in `probes`; `ε` is
/// recovered as the unique `σ̄: F•G ⇒ id` with `(σ̄•F) ∘ (F•η) = id_F`
/// and checked with the snake equations.
pub fn adjoint_as_kan(
    f: &Functor,
    g: &Functor,
    eta: &NatTrans,
    probes: &[Functor],
    guard: &Guard,
) -> Result<(NatTrans, Report)> {
    let c = f.dom();
    let id_c = Functor::identity(c);
    let mut r = kan_universal_check(g, eta, f, &id_c, KanSide::Left, guard)?;
    for h in probes {
        let hg = h.after(g)?;
        let heta = whisker_left(h, eta)?;
        r.merge(kan_universal_check(&hg, &heta, f, h, KanSide::Left, guard)?);
    }
    let fg = f.after(g)?;
    let id_d = Functor::identity(f.cod());
    let f_eta = whisker_left(f, eta)?;
    let target = NatTrans::identity(f);
    let mut found = None;
    let mut n = 0;
    for cand in enumerate_naturals(&fg, &id_d, guard)? {
        if vertical(&whisker_right(&cand, f)?, &f_eta)? == target {
            n += 1;
            found.get_or_insert(cand);
        }
    }
    r.check(n == 1, "kan-counit", || format!("{n} candidate counits"));
    let eps = found.ok_or_else(|| Error::Precondition("no counit factors through the unit".into()))?;
    r.merge(crate::adjunction::snake_check(f, g, eta, &eps)?);
    Ok((eps.with_name("ε"), r))
}

#[derive(Debug, Clone)]
pub struct Density {
    pub lan_is_identity: bool,
    pub hom_criterion: bool,
    pub report: Report,
}

impl Density {
    pub fn dense(&self) -> bool {
        self.lan_is_identity && self.hom_criterion
    }
}

/// `K` is dense when `Lan_K K ≅ id`; independently, `g ↦ g∘−` must be a
/// bijection `D(d,d') ≅ Nat(D(K−,d), D(K−,d'))` for all `d, d'`.
pub fn density_check(k: &Functor, guard: &Guard) -> Result<Density> {
    let d = k.cod();
    let mut report = Report::new();
    let lan_is_identity = match kan_pointwise(k, k, KanSide::Left, guard)? {
        Outcome::Absent(why) => {
            report.fail("density-lan", why);
            false
        }
        Outcome::Found(res) => {
            let id = Functor::identity(d);
            let iso = enumerate_naturals(&res.extension, &id, guard)?
                .into_iter()
                .any(|n| n.is_iso());
            report.check(iso, "density-lan", || {
                format!(
                    "Lan_K K = {} is not isomorphic to the identity",
                    res.extension.obj_signature()
                )
            });
            iso
        }
    };
    let kop = k.op();
    let presheaves = (0..d.n_obj())
        .map(|x| hom_functor_at(d, x, Variance::Contravariant).restrict_along(&kop))
        .collect::<Result<Vec<_>>>()?;
    let mut hom_criterion = true;
    for x in 0..d.n_obj() {
        for y in 0..d.n_obj() {
            let sigs: HashMap<String, ()> = enumerate_set_naturals(&presheaves[x], &presheaves[y], guard)?
                .iter()
                .map(|n| (n.signature(), ()))
                .collect();
            let mut images = Vec::new();
            for &g in d.hom(x, y) {
                let comps: Vec<Vec<usize>> = (0..k.dom().n_obj())
                    .map(|a| {
                        d.hom(k.ob(a), x)
                            .iter()
                            .map(|&p| {
                                let q = d.comp(g, p);
                                d.hom(k.ob(a), y).iter().position(|&t| t == q).unwrap()
                            })
                            .collect()
                    })
                    .collect();
                images.push(SetNat::new(presheaves[x].clone(), presheaves[y].clone(), comps)?.signature());
            }
            let ok = bijective_onto(&images, &sigs);
            hom_criterion &= ok;
            report.check(ok, "density-hom", || {
                format!(
                    "{}({},{}) has {} elements, Nat has {}",
                    d.name(),
                    d.obj_id(x),
                    d.obj_id(y),
                    images.len(),
                    sigs.len()
                )
            });
        }
    }
    Ok(Density {
        lan_is_identity,
        hom_criterion,
        report,
    })
}

#[derive(Debug, Clone)]
pub struct Monad {
    pub endofunctor: Functor,
    pub mult: NatTrans,
    pub unit: NatTrans,
}

/// Associativity `μ(T•μ) = μ(μ•T)` and units `μ(T•η) = id = μ(η•T)`.
pub fn validate_monad(m: &Monad) -> Result<Report> {
    let t = &m.endofunctor;
    let mut r = Report::new();
    let left = vertical(&m.mult, &whisker_left(t, &m.mult)?)?;
    let right = vertical(&m.mult, &whisker_right(&m.mult, t)?)?;
    r.check(left == right, "monad-associativity", || {
        format!("{} vs {}", left.signature(), right.signature())
    });
    let id = NatTrans::identity(t);
    let lu = vertical(&m.mult, &whisker_left(t, &m.unit)?)?;
    r.check(lu == id, "monad-unit", || format!("μ∘(T•η) = {}", lu.signature()));
    let ru = vertical(&m.mult, &whisker_right(&m.unit, t)?)?;
    r.check(ru == id, "monad-unit", || format!("μ∘(η•T) = {}", ru.signature()));
    Ok(r)
}

/// The codensity monad `T = Ran_K K`: `η` and `μ` are the unique
/// factorizations of `id_K` and `ε ∘ (T•ε)` through the counit.
pub fn codensity_monad(k: &Functor, guard: &Guard) -> Result<Outcome<(Monad, Report)>> {
    let res = match kan_pointwise(k, k, KanSide::Right, guard)? {
        Outcome::Found(r) => r,
        Outcome::Absent(why) => return Ok(Outcome::Absent(why)),
    };
    let t = res.extension.clone();
    let eps = &res.unit_or_counit;
    let d = k.cod();
    let mut report = res.certificate.clone();
    let factor = |h: &Functor, sigma: &NatTrans, law: &str, report: &mut Report| -> Result<Option<NatTrans>> {
        let mut hits = Vec::new();
        for cand in enumerate_naturals(h, &t, guard)? {
            if vertical(eps, &whisker_right(&cand, k)?)? == *sigma {
                hits.push(cand);
            }
        }
        report.check(hits.len() == 1, law, || format!("{} factorizations", hits.len()));
        Ok(hits.into_iter().next())
    };
    let id_d = Functor::identity(d);
    let unit = factor(&id_d, &NatTrans::identity(k), "codensity-unit", &mut report)?;
    let tt = t.after(&t)?;
    let sigma = vertical(eps, &whisker_left(&t, eps)?)?;
    let sigma = NatTrans::new("σ", tt.after(k)?, k.clone(), sigma.components().to_vec())?;
    let mult = factor(&tt, &sigma, "codensity-mult", &mut report)?;
    let (Some(unit), Some(mult)) = (unit, mult) else {
        return Ok(Outcome::Absent("unit or multiplication does not factor".into()));
    };
    let m = Monad {
        endofunctor: t,
        mult: mult.with_name("μ"),
        unit: unit.with_name("η"),
    };
    report.merge(validate_monad(&m)?);
    Ok(Outcome::Found((m, report)))
}

/// The realization `FX = colim (K • P)` over the category of elements of
/// a presheaf `X` on `C` (the opposite of the category of elements of `X`
/// viewed as a functor on `op(C)`).
pub fn realization(k: &Functor, x: &SetFunctor, guard: &Guard) -> Result<(CommaData, Option<LimitResult>)> {
    if !same_cat(x.dom(), &opposite(k.dom())) {
        return Err(Error::Boundary(format!(
            "{} is not a presheaf on {}",
            x.name(),
            k.dom().name()
        )));
    }
    let el = elements(x);
    let p = el.forgetful.op().rebase(&Arc::new(opposite(&el.cat)), k.dom())?;
    let diag = k.after(&p)?;
    Ok((el, limit(&diag, Side::Colimit, guard)?))
}

/// `D(FX, d) ≅ Nat(X, D(K−, d))` through `h ↦ (x ↦ h ∘ μ_⟨c,x⟩)`, and its
/// naturality along each probe `g: d -> d'`.
pub fn nerve_realization_check(
    k: &Functor,
    x: &SetFunctor,
    d: usize,
    probes: &[usize],
    guard: &Guard,
) -> Result<Report> {
    let dd = k.cod();
    let (el, colim) = realization(k, x, guard)?;
    let colim = colim.ok_or_else(|| Error::Precondition(format!("K•P has no colimit over el({})", x.name())))?;
    let fx = colim.object();
    let kop = k.op();
    let transpose = |h: usize, target: usize| -> Result<SetNat> {
        let gd = hom_functor_at(dd, target, Variance::Contravariant).restrict_along(&kop)?;
        let comps = (0..k.dom().n_obj())
            .map(|a| {
                (0..x.size(a))
                    .map(|e| {
                        let o = el.object_at(a, e).unwrap();
                        let m = dd.comp(h, colim.cone.leg(o));
                        dd.hom(k.ob(a), target).iter().position(|&t| t == m).unwrap()
                    })
                    .collect()
            })
            .collect();
        SetNat::new(x.clone(), gd, comps)
    };
    let gd = hom_functor_at(dd, d, Variance::Contravariant).restrict_along(&kop)?;
    let sigs: HashMap<String, ()> = enumerate_set_naturals(x, &gd, guard)?
        .iter()
        .map(|n| (n.signature(), ()))
        .collect();
    let images = dd
        .hom(fx, d)
        .iter()
        .map(|&h| Ok(transpose(h, d)?.signature()))
        .collect::<Result<Vec<_>>>()?;
    let mut r = Report::new();
    r.check(bijective_onto(&images, &sigs), "nerve-realization", || {
        format!("|D(FX,d)| = {}, |Nat(X, D(K-,d))| = {}", images.len(), sigs.len())
    });
    for &g in probes {
        if dd.dom(g) != d {
            return Err(Error::Boundary(format!(
                "probe {} does not start at {}",
                dd.mor_id(g),
                dd.obj_id(d)
            )));
        }
        let t = dd.cod(g);
        let gt = hom_functor_at(dd, t, Variance::Contravariant).restrict_along(&kop)?;
        for &h in dd.hom(fx, d) {
            let lhs = transpose(dd.comp(g, h), t)?;
            let base = transpose(h, d)?;
            let comps = (0..k.dom().n_obj())
                .map(|a| {
                    (0..x.size(a))
                        .map(|e| {
                            let p = dd.hom(k.ob(a), d)[base.at(a, e)];
                            let m = dd.comp(g, p);
                            dd.hom(k.ob(a), t).iter().position(|&q| q == m).unwrap()
                        })
                        .collect()
                })
                .collect();
            let rhs = SetNat::new(x.clone(), gt.clone(), comps)?;
            r.check(lhs == rhs, "nerve-naturality", || {
                format!("along {} at {}", dd.mor_id(g), dd.mor_id(h))
            });
        }
    }
    Ok(r)
}

/// The empty presheaf on `C`.
pub fn empty_presheaf(c: &CatRef) -> SetFunctor {
    SetFunctor::constant(&Arc::new(opposite(c)), &FinSetObj::range(0))
}
