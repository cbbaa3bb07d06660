//! Comma categories, categories of elements, initial and terminal objects,
//! universal morphisms and representations.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cat::FinCat;
use crate::config::Guard;
use crate::finset::{enumerate_set_naturals, hom_functor_at, SetFunctor, SetNat, Variance};
use crate::functor::{CatRef, Functor, NatTrans};
use crate::report::{Error, Report, Result};

/// A comma category with its projection and canonical transformation.
///
/// `pairs[o] = (d, p)` gives the coordinates of object `o`: an object of
/// the projected-to category and a morphism (or, for categories of
/// elements, an element index).
#[derive(Debug, Clone)]
pub struct CommaData {
    pub cat: CatRef,
    pub forgetful: Functor,
    pub canonical: Option<NatTrans>,
    pub pairs: Vec<(usize, usize)>,
}

impl CommaData {
    /// Object position of `⟨d, p⟩`.
    pub fn object_at(&self, d: usize, p: usize) -> Option<usize> {
        self.pairs.iter().position(|&q| q == (d, p))
    }
}

pub fn comma_obj_id(d: &str, p: &str) -> String {
    format!("⟨{d},{p}⟩")
}

#[derive(Debug, Clone)]
pub enum CommaKind<'a> {
    /// `c ↓ G` for `G: D -> C`.
    Under(usize, &'a Functor),
    /// `G ↓ c` for `G: D -> C`.
    Over(&'a Functor, usize),
    /// The category of elements of a set-valued functor.
    Elements(&'a SetFunctor),
}

pub fn comma_category(kind: CommaKind) -> CommaData {
    match kind {
        CommaKind::Under(c, g) => comma_under(c, g),
        CommaKind::Over(g, c) => comma_over(g, c),
        CommaKind::Elements(x) => elements(x),
    }
}

struct Raw {
    objects: Vec<(String, usize, usize)>,
    morphisms: Vec<(String, usize, usize, usize)>, // id, dom pos, cod pos, base morphism
}

fn assemble(name: String, base: &CatRef, raw: Raw) -> CommaData {
    let Raw { objects, morphisms } = raw;
    let ids: Vec<String> = objects.iter().map(|o| o.0.clone()).collect();
    let mut identity = Vec::new();
    let mut base_of: HashMap<String, usize> = HashMap::new();
    let mut ends: HashMap<String, (usize, usize)> = HashMap::new();
    for (id, s, t, h) in &morphisms {
        base_of.insert(id.clone(), *h);
        ends.insert(id.clone(), (*s, *t));
        if s == t && base.is_identity(*h) {
            identity.push((ids[*s].clone(), id.clone()));
        }
    }
    let mut by_end: HashMap<(usize, usize, usize), &str> = HashMap::new();
    for (id, s, t, h) in &morphisms {
        by_end.insert((*s, *t, *h), id);
    }
    let mut compose = Vec::new();
    for (gid, gs, gt, gh) in &morphisms {
        for (fid, fs, ft, fh) in &morphisms {
            if ft != gs {
                continue;
            }
            let h = base.comp(*gh, *fh);
            let hid = by_end[&(*fs, *gt, h)];
            compose.push((gid.clone(), fid.clone(), hid.to_string()));
        }
    }
    let cat = FinCat::from_tables(
        name,
        ids.clone(),
        morphisms
            .iter()
            .map(|(id, s, t, _)| (id.clone(), ids[*s].clone(), ids[*t].clone()))
            .collect(),
        identity,
        compose,
    )
    .expect("comma tables are closed under composition");
    let cat = Arc::new(cat);
    let coord: HashMap<&str, (usize, usize)> = objects.iter().map(|(id, d, p)| (id.as_str(), (*d, *p))).collect();
    let pairs: Vec<(usize, usize)> = cat.objects().iter().map(|o| coord[o.as_str()]).collect();
    let obj_map = pairs.iter().map(|p| p.0).collect();
    let mor_map = cat.morphisms().iter().map(|m| base_of[&m.id]).collect();
    let forgetful = Functor::new("P", cat.clone(), base.clone(), obj_map, mor_map).expect("projection is total");
    CommaData {
        cat,
        forgetful,
        canonical: None,
        pairs,
    }
}

/// `c ↓ G`: objects `⟨d, p: c -> Gd⟩`, morphisms `h: d -> d'` with
/// `Gh ∘ p = p'`. The canonical transformation is `Δc ⇒ G•P`.
pub fn comma_under(c: usize, g: &Functor) -> CommaData {
    let (d, cc) = (g.dom(), g.cod());
    let mut objects = Vec::new();
    for x in 0..d.n_obj() {
        for &p in cc.hom(c, g.ob(x)) {
            objects.push((comma_obj_id(d.obj_id(x), cc.mor_id(p)), x, p));
        }
    }
    let mut morphisms = Vec::new();
    for (s, (sid, x, p)) in objects.iter().enumerate() {
        for (t, (tid, y, q)) in objects.iter().enumerate() {
            for &h in d.hom(*x, *y) {
                if cc.comp(g.mor(h), *p) == *q {
                    morphisms.push((format!("{}:{sid}→{tid}", d.mor_id(h)), s, t, h));
                }
            }
        }
    }
    let name = format!("{}↓{}", cc.obj_id(c), g.name());
    let mut data = assemble(name, d, Raw { objects, morphisms });
    let src = Functor::constant(c, &data.cat, cc);
    let tgt = g.after(&data.forgetful).expect("projection lands in dom G");
    let comps = data.pairs.iter().map(|&(_, p)| p).collect();
    data.canonical = Some(NatTrans::new("θ", src, tgt, comps).expect("canonical family"));
    data
}

/// `G ↓ c`: objects `⟨d, p: Gd -> c⟩`, morphisms `h: d -> d'` with
/// `p' ∘ Gh = p`. The canonical transformation is `G•P ⇒ Δc`.
pub fn comma_over(g: &Functor, c: usize) -> CommaData {
    let (d, cc) = (g.dom(), g.cod());
    let mut objects = Vec::new();
    for x in 0..d.n_obj() {
        for &p in cc.hom(g.ob(x), c) {
            objects.push((comma_obj_id(d.obj_id(x), cc.mor_id(p)), x, p));
        }
    }
    let mut morphisms = Vec::new();
    for (s, (sid, x, p)) in objects.iter().enumerate() {
        for (t, (tid, y, q)) in objects.iter().enumerate() {
            for &h in d.hom(*x, *y) {
                if cc.comp(*q, g.mor(h)) == *p {
                    morphisms.push((format!("{}:{sid}→{tid}", d.mor_id(h)), s, t, h));
                }
            }
        }
    }
    let name = format!("{}↓{}", g.name(), cc.obj_id(c));
    let mut data = assemble(name, d, Raw { objects, morphisms });
    let src = g.after(&data.forgetful).expect("projection lands in dom G");
    let tgt = Functor::constant(c, &data.cat, cc);
    let comps = data.pairs.iter().map(|&(_, p)| p).collect();
    data.canonical = Some(NatTrans::new("θ", src, tgt, comps).expect("canonical family"));
    data
}

/// The category of elements: objects `⟨c, x⟩` with `x ∈ X(c)`, morphisms
/// `f: c -> c'` with `X(f)(x) = x'`. This is `{*} ↓ X`.
pub fn elements(x: &SetFunctor) -> CommaData {
    let c = x.dom();
    let mut objects = Vec::new();
    for a in 0..c.n_obj() {
        for e in 0..x.size(a) {
            objects.push((comma_obj_id(c.obj_id(a), x.at(a).elem(e)), a, e));
        }
    }
    let mut morphisms = Vec::new();
    for (s, (sid, a, e)) in objects.iter().enumerate() {
        for (t, (tid, b, e2)) in objects.iter().enumerate() {
            for &f in c.hom(*a, *b) {
                if x.apply(f, *e) == *e2 {
                    morphisms.push((format!("{}:{sid}→{tid}", c.mor_id(f)), s, t, f));
                }
            }
        }
    }
    assemble(format!("el({})", x.name()), c, Raw { objects, morphisms })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremity {
    Initial,
    Terminal,
}

/// An initial or terminal object with its unique connecting morphisms,
/// `connecting[x]` being the morphism to (or from) `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremal {
    pub object: usize,
    pub connecting: Vec<usize>,
}

/// Every qualifying object, in id order.
pub fn extremal_objects(c: &FinCat, which: Extremity) -> Vec<Extremal> {
    (0..c.n_obj())
        .filter_map(|o| {
            let homs: Vec<&[usize]> = (0..c.n_obj())
                .map(|x| match which {
                    Extremity::Initial => c.hom(o, x),
                    Extremity::Terminal => c.hom(x, o),
                })
                .collect();
            homs.iter().all(|h| h.len() == 1).then(|| Extremal {
                object: o,
                connecting: homs.iter().map(|h| h[0]).collect(),
            })
        })
        .collect()
}

/// The least qualifying object, if any.
pub fn extremal_object(c: &FinCat, which: Extremity) -> Option<Extremal> {
    extremal_objects(c, which).into_iter().next()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `⟨u, η: c -> Gu⟩`, initial in `c ↓ G`.
    FromObject,
    /// `⟨u, ε: Gu -> c⟩`, terminal in `G ↓ c`.
    ToObject,
}

#[derive(Debug, Clone)]
pub struct UniversalWitness {
    pub vertex: usize,
    pub arrow: usize,
    pub direction: Direction,
    pub report: Report,
}

/// All universal morphisms between `c` and `G`, by extremal objects of the
/// appropriate comma category.
pub fn universal_morphisms(c: usize, g: &Functor, direction: Direction) -> Vec<UniversalWitness> {
    let (comma, which) = match direction {
        Direction::FromObject => (comma_under(c, g), Extremity::Initial),
        Direction::ToObject => (comma_over(g, c), Extremity::Terminal),
    };
    extremal_objects(&comma.cat, which)
        .into_iter()
        .map(|e| {
            let (vertex, arrow) = comma.pairs[e.object];
            let mut w = UniversalWitness {
                vertex,
                arrow,
                direction,
                report: Report::new(),
            };
            w.report = verify_universal(&w, c, g);
            w
        })
        .collect()
}

pub fn universal_morphism(c: usize, g: &Functor, direction: Direction) -> Option<UniversalWitness> {
    universal_morphisms(c, g, direction).into_iter().next()
}

/// Exactly one factorization `a = Gā ∘ η` (or `a = ε ∘ Gā`) for every
/// `⟨x, a⟩`.
pub fn verify_universal(w: &UniversalWitness, c: usize, g: &Functor) -> Report {
    let (d, cc) = (g.dom(), g.cod());
    let mut r = Report::new();
    let u = w.vertex;
    for x in 0..d.n_obj() {
        let arrows = match w.direction {
            Direction::FromObject => cc.hom(c, g.ob(x)),
            Direction::ToObject => cc.hom(g.ob(x), c),
        };
        for &a in arrows {
            let count = match w.direction {
                Direction::FromObject => d.hom(u, x).iter().filter(|&&h| cc.comp(g.mor(h), w.arrow) == a).count(),
                Direction::ToObject => d.hom(x, u).iter().filter(|&&h| cc.comp(w.arrow, g.mor(h)) == a).count(),
            };
            r.check(count == 1, "universal", || {
                format!("a = {} at {} has {count} factorizations", cc.mor_id(a), d.obj_id(x))
            });
        }
    }
    r
}

/// The comparison `ψ: u -> u'` with `η' = Gψ ∘ η` between two universal
/// morphisms from `c`, certified to be the unique such morphism and an
/// isomorphism (for `ToObject`, `ψ: u -> u'` with `ε = ε' ∘ Gψ`).
pub fn comparison(w1: &UniversalWitness, w2: &UniversalWitness, g: &Functor) -> (Option<usize>, Report) {
    let (d, cc) = (g.dom(), g.cod());
    let cands: Vec<usize> = d
        .hom(w1.vertex, w2.vertex)
        .iter()
        .copied()
        .filter(|&h| match w1.direction {
            Direction::FromObject => cc.comp(g.mor(h), w1.arrow) == w2.arrow,
            Direction::ToObject => cc.comp(w2.arrow, g.mor(h)) == w1.arrow,
        })
        .collect();
    let mut r = Report::new();
    r.check(cands.len() == 1, "comparison-unique", || {
        format!("{} comparison morphisms", cands.len())
    });
    let psi = cands.first().copied();
    if let Some(h) = psi {
        r.check(d.inverse(h).is_some(), "comparison-iso", || {
            format!("{} is not invertible", d.mor_id(h))
        });
    }
    (psi, r)
}

/// Pairwise comparisons between all universal morphisms found.
pub fn essential_uniqueness(c: usize, g: &Functor, direction: Direction) -> Report {
    let all = universal_morphisms(c, g, direction);
    let mut r = Report::new();
    for w1 in &all {
        for w2 in &all {
            r.merge(comparison(w1, w2, g).1);
        }
    }
    r
}

/// A representation `σ: C(u,−) ≅ X`, with `element = σ_u(id_u)`.
#[derive(Debug, Clone)]
pub struct Representation {
    pub object: usize,
    pub sigma: SetNat,
    pub element: usize,
}

/// The first representation in canonical order (least object, then least
/// transformation), if `X` is representable.
pub fn representability(x: &SetFunctor, guard: &Guard) -> Result<Option<Representation>> {
    let c = x.dom();
    for u in 0..c.n_obj() {
        let yu = hom_functor_at(c, u, Variance::Covariant);
        if (0..c.n_obj()).any(|a| yu.size(a) != x.size(a)) {
            continue;
        }
        for sigma in enumerate_set_naturals(&yu, x, guard)? {
            if sigma.is_iso() {
                let id = c.hom(u, u).iter().position(|&m| m == c.id(u)).unwrap();
                let element = sigma.at(u, id);
                return Ok(Some(Representation {
                    object: u,
                    sigma,
                    element,
                }));
            }
        }
    }
    Ok(None)
}

/// A representation of `X` gives an initial object `⟨u, x⟩` of `el(X)`.
pub fn representation_is_initial_element(x: &SetFunctor, rep: &Representation) -> Result<Report> {
    let el = elements(x);
    let o = el
        .object_at(rep.object, rep.element)
        .ok_or_else(|| Error::Structural("represented element missing from el(X)".into()))?;
    let mut r = Report::new();
    for t in 0..el.cat.n_obj() {
        r.check(el.cat.hom_size(o, t) == 1, "initial-element", || {
            format!("{} -> {}", el.cat.obj_id(o), el.cat.obj_id(t))
        });
    }
    Ok(r)
}
