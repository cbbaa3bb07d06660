//! Functors, natural transformations and their composites.
//!
//! Horizontal composition follows the convention `(β • α)_a = β_{F'a} ∘ Gα_a`
//! for `α: F ⇒ F'` and `β: G ⇒ G'`; `G • F` is "G after F".

use std::sync::Arc;

use crate::cat::FinCat;
use crate::report::{Error, Report, Result};

pub type CatRef = Arc<FinCat>;

/// Two category references denote the same category (structurally).
pub fn same_cat(a: &FinCat, b: &FinCat) -> bool {
    std::ptr::eq(a, b) || a == b
}

#[derive(Debug, Clone)]
pub struct Functor {
    name: String,
    dom: CatRef,
    cod: CatRef,
    obj_map: Vec<usize>,
    mor_map: Vec<usize>,
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        self.obj_map == other.obj_map
            && self.mor_map == other.mor_map
            && same_cat(&self.dom, &other.dom)
            && same_cat(&self.cod, &other.cod)
    }
}

impl Eq for Functor {}

impl Functor {
    pub fn new(
        name: impl Into<String>,
        dom: CatRef,
        cod: CatRef,
        obj_map: Vec<usize>,
        mor_map: Vec<usize>,
    ) -> Result<Functor> {
        let name = name.into();
        if obj_map.len() != dom.n_obj() || mor_map.len() != dom.n_mor() {
            return Err(Error::Structural(format!(
                "functor `{name}`: object or morphism map is not total"
            )));
        }
        if obj_map.iter().any(|&o| o >= cod.n_obj()) || mor_map.iter().any(|&f| f >= cod.n_mor()) {
            return Err(Error::Structural(format!("functor `{name}`: map leaves the codomain")));
        }
        Ok(Functor {
            name,
            dom,
            cod,
            obj_map,
            mor_map,
        })
    }

    /// Build from id pairs. Identity morphisms may be omitted and then map
    /// to the identity of the image object; every other morphism must be
    /// listed.
    pub fn from_ids(
        name: impl Into<String>,
        dom: CatRef,
        cod: CatRef,
        objects: &[(&str, &str)],
        morphisms: &[(&str, &str)],
    ) -> Result<Functor> {
        let name = name.into();
        let mut obj_map = vec![usize::MAX; dom.n_obj()];
        for (a, x) in objects {
            obj_map[dom.obj(a)?] = cod.obj(x)?;
        }
        if let Some(o) = obj_map.iter().position(|&x| x == usize::MAX) {
            return Err(Error::Structural(format!(
                "functor `{name}`: object map is not total (missing `{}`)",
                dom.obj_id(o)
            )));
        }
        let mut mor_map = vec![usize::MAX; dom.n_mor()];
        for (f, u) in morphisms {
            mor_map[dom.mor(f)?] = cod.mor(u)?;
        }
        for f in 0..dom.n_mor() {
            if mor_map[f] == usize::MAX {
                if dom.is_identity(f) {
                    mor_map[f] = cod.id(obj_map[dom.dom(f)]);
                } else {
                    return Err(Error::Structural(format!(
                        "functor `{name}`: morphism map is not total (missing `{}`)",
                        dom.mor_id(f)
                    )));
                }
            }
        }
        Functor::new(name, dom, cod, obj_map, mor_map)
    }

    pub fn identity(c: &CatRef) -> Functor {
        Functor {
            name: format!("id_{}", c.name()),
            dom: c.clone(),
            cod: c.clone(),
            obj_map: (0..c.n_obj()).collect(),
            mor_map: (0..c.n_mor()).collect(),
        }
    }

    /// The constant functor `J -> C` at object `c` (every morphism goes to
    /// `id_c`).
    pub fn constant(c: usize, j: &CatRef, cat: &CatRef) -> Functor {
        Functor {
            name: format!("Δ{}", cat.obj_id(c)),
            dom: j.clone(),
            cod: cat.clone(),
            obj_map: vec![c; j.n_obj()],
            mor_map: vec![cat.id(c); j.n_mor()],
        }
    }

    /// The functor `1 -> C` picking object `c`.
    pub fn pick(c: usize, cat: &CatRef) -> Functor {
        let one = Arc::new(crate::fixtures::terminal());
        let mut f = Functor::constant(c, &one, cat);
        f.name = cat.obj_id(c).to_string();
        f
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Functor {
        self.name = name.into();
        self
    }

    pub fn dom(&self) -> &CatRef {
        &self.dom
    }

    pub fn cod(&self) -> &CatRef {
        &self.cod
    }

    pub fn ob(&self, a: usize) -> usize {
        self.obj_map[a]
    }

    pub fn mor(&self, f: usize) -> usize {
        self.mor_map[f]
    }

    pub fn obj_map(&self) -> &[usize] {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &[usize] {
        &self.mor_map
    }

    /// `G • F`, i.e. `self` after `f`.
    pub fn after(&self, f: &Functor) -> Result<Functor> {
        if !same_cat(f.cod(), self.dom()) {
            return Err(Error::Boundary(format!(
                "cannot compose {} after {}: codomain {} is not domain {}",
                self.name,
                f.name,
                f.cod.name(),
                self.dom.name()
            )));
        }
        Ok(Functor {
            name: format!("{}.{}", self.name, f.name),
            dom: f.dom.clone(),
            cod: self.cod.clone(),
            obj_map: f.obj_map.iter().map(|&o| self.obj_map[o]).collect(),
            mor_map: f.mor_map.iter().map(|&m| self.mor_map[m]).collect(),
        })
    }

    /// The same tables viewed between opposite categories.
    pub fn op(&self) -> Functor {
        Functor {
            name: format!("{}^op", self.name),
            dom: Arc::new(crate::cat::opposite(&self.dom)),
            cod: Arc::new(crate::cat::opposite(&self.cod)),
            obj_map: self.obj_map.clone(),
            mor_map: self.mor_map.clone(),
        }
    }

    /// Same tables, retargeted at a structurally equal category value.
    pub fn rebase(&self, dom: &CatRef, cod: &CatRef) -> Result<Functor> {
        if !same_cat(dom, &self.dom) || !same_cat(cod, &self.cod) {
            return Err(Error::Boundary(format!(
                "functor {} cannot be rebased onto {} -> {}",
                self.name,
                dom.name(),
                cod.name()
            )));
        }
        Ok(Functor {
            name: self.name.clone(),
            dom: dom.clone(),
            cod: cod.clone(),
            obj_map: self.obj_map.clone(),
            mor_map: self.mor_map.clone(),
        })
    }

    pub fn is_identity(&self) -> bool {
        same_cat(&self.dom, &self.cod)
            && self.obj_map.iter().enumerate().all(|(i, &o)| i == o)
            && self.mor_map.iter().enumerate().all(|(i, &f)| i == f)
    }

    /// Canonical serialization of the object map, `a↦x;b↦y`.
    pub fn obj_signature(&self) -> String {
        (0..self.dom.n_obj())
            .map(|a| format!("{}↦{}", self.dom.obj_id(a), self.cod.obj_id(self.obj_map[a])))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Serialization of the non-identity part of the morphism map.
    pub fn mor_signature(&self) -> String {
        self.dom
            .non_identities()
            .map(|f| format!("{}↦{}", self.dom.mor_id(f), self.cod.mor_id(self.mor_map[f])))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Exhaustive check of functoriality: typing, identities, composites.
pub fn validate_functor(f: &Functor) -> Report {
    let (c, d) = (f.dom(), f.cod());
    let mut r = Report::new();
    for m in 0..c.n_mor() {
        let fm = f.mor(m);
        r.check(
            d.dom(fm) == f.ob(c.dom(m)) && d.cod(fm) == f.ob(c.cod(m)),
            "functor-typing",
            || format!("F({}) = {} does not go F(dom) -> F(cod)", c.mor_id(m), d.mor_id(fm)),
        );
    }
    if !r.ok() {
        return r;
    }
    for a in 0..c.n_obj() {
        let got = f.mor(c.id(a));
        r.check(got == d.id(f.ob(a)), "functor-identity", || {
            format!("F(id_{}) = {}", c.obj_id(a), d.mor_id(got))
        });
    }
    for (g, h) in c.composable_pairs() {
        let lhs = f.mor(c.comp(g, h));
        let rhs = d.comp(f.mor(g), f.mor(h));
        r.check(lhs == rhs, "functor-composition", || {
            format!(
                "F({}.{}) = {} but F{}.F{} = {}",
                c.mor_id(g),
                c.mor_id(h),
                d.mor_id(lhs),
                c.mor_id(g),
                c.mor_id(h),
                d.mor_id(rhs)
            )
        });
    }
    r
}

#[derive(Debug, Clone)]
pub struct NatTrans {
    name: String,
    src: Functor,
    tgt: Functor,
    components: Vec<usize>,
}

impl PartialEq for NatTrans {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components && self.src == other.src && self.tgt == other.tgt
    }
}

impl Eq for NatTrans {}

impl NatTrans {
    /// Shape checks only; component typing and naturality are left to
    /// [`validate_natural`].
    pub fn new(name: impl Into<String>, src: Functor, tgt: Functor, components: Vec<usize>) -> Result<NatTrans> {
        let name = name.into();
        if !same_cat(src.dom(), tgt.dom()) || !same_cat(src.cod(), tgt.cod()) {
            return Err(Error::Boundary(format!(
                "natural transformation `{name}`: {} and {} do not share domain and codomain",
                src.name(),
                tgt.name()
            )));
        }
        if components.len() != src.dom().n_obj() || components.iter().any(|&c| c >= src.cod().n_mor()) {
            return Err(Error::Structural(format!(
                "natural transformation `{name}`: component family is not total"
            )));
        }
        Ok(NatTrans {
            name,
            src,
            tgt,
            components,
        })
    }

    pub fn from_ids(
        name: impl Into<String>,
        src: Functor,
        tgt: Functor,
        components: &[(&str, &str)],
    ) -> Result<NatTrans> {
        let name = name.into();
        let (c, d) = (src.dom().clone(), src.cod().clone());
        let mut comps = vec![usize::MAX; c.n_obj()];
        for (a, u) in components {
            comps[c.obj(a)?] = d.mor(u)?;
        }
        if let Some(a) = comps.iter().position(|&x| x == usize::MAX) {
            return Err(Error::Structural(format!(
                "natural transformation `{name}`: no component at `{}`",
                c.obj_id(a)
            )));
        }
        NatTrans::new(name, src, tgt, comps)
    }

    pub fn identity(f: &Functor) -> NatTrans {
        let d = f.cod();
        NatTrans {
            name: format!("id_{}", f.name()),
            src: f.clone(),
            tgt: f.clone(),
            components: (0..f.dom().n_obj()).map(|a| d.id(f.ob(a))).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> NatTrans {
        self.name = name.into();
        self
    }

    pub fn src(&self) -> &Functor {
        &self.src
    }

    pub fn tgt(&self) -> &Functor {
        &self.tgt
    }

    pub fn at(&self, a: usize) -> usize {
        self.components[a]
    }

    pub fn components(&self) -> &[usize] {
        &self.components
    }

    pub fn dom_cat(&self) -> &CatRef {
        self.src.dom()
    }

    pub fn cod_cat(&self) -> &CatRef {
        self.src.cod()
    }

    /// `α^op: G^op ⇒ F^op` with the same components.
    pub fn op(&self) -> NatTrans {
        NatTrans {
            name: format!("{}^op", self.name),
            src: self.tgt.op(),
            tgt: self.src.op(),
            components: self.components.clone(),
        }
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(|&c| self.cod_cat().inverse(c).is_some())
    }

    pub fn inverse(&self) -> Option<NatTrans> {
        let d = self.cod_cat();
        let comps = self
            .components
            .iter()
            .map(|&c| d.inverse(c))
            .collect::<Option<Vec<_>>>()?;
        Some(NatTrans {
            name: format!("{}^-1", self.name),
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            components: comps,
        })
    }

    /// Canonical component serialization `[a↦u;b↦v]`.
    pub fn signature(&self) -> String {
        let (c, d) = (self.dom_cat(), self.cod_cat());
        format!(
            "[{}]",
            (0..c.n_obj())
                .map(|a| format!("{}↦{}", c.obj_id(a), d.mor_id(self.components[a])))
                .collect::<Vec<_>>()
                .join(";")
        )
    }
}

/// Naturality of every square `Gf ∘ α_a = α_b ∘ Ff`. A component outside
/// `hom(Fa, Ga)` is a structural error.
pub fn validate_natural(alpha: &NatTrans) -> Result<Report> {
    let (c, d) = (alpha.dom_cat(), alpha.cod_cat());
    let (f, g) = (alpha.src(), alpha.tgt());
    for a in 0..c.n_obj() {
        let u = alpha.at(a);
        if d.dom(u) != f.ob(a) || d.cod(u) != g.ob(a) {
            return Err(Error::Structural(format!(
                "component of {} at {} is {}, which is not in hom({}, {})",
                alpha.name(),
                c.obj_id(a),
                d.mor_id(u),
                d.obj_id(f.ob(a)),
                d.obj_id(g.ob(a))
            )));
        }
    }
    let mut r = Report::new();
    for m in 0..c.n_mor() {
        let (a, b) = (c.dom(m), c.cod(m));
        let lhs = d.comp(g.mor(m), alpha.at(a));
        let rhs = d.comp(alpha.at(b), f.mor(m));
        r.check(lhs == rhs, "naturality", || {
            format!("square at {}: {} vs {}", c.mor_id(m), d.mor_id(lhs), d.mor_id(rhs))
        });
    }
    Ok(r)
}

/// `β ∘ α` for `α: F ⇒ G`, `β: G ⇒ H`.
pub fn vertical(beta: &NatTrans, alpha: &NatTrans) -> Result<NatTrans> {
    if alpha.tgt() != beta.src() {
        return Err(Error::Boundary(format!(
            "vertical composite {}∘{}: target {} is not source {}",
            beta.name(),
            alpha.name(),
            alpha.tgt().name(),
            beta.src().name()
        )));
    }
    let d = alpha.cod_cat();
    let comps = (0..alpha.dom_cat().n_obj())
        .map(|a| d.comp(beta.at(a), alpha.at(a)))
        .collect();
    NatTrans::new(
        format!("{}∘{}", beta.name(), alpha.name()),
        alpha.src().clone(),
        beta.tgt().clone(),
        comps,
    )
}

/// `G • α` (left whiskering by a functor).
pub fn whisker_left(g: &Functor, alpha: &NatTrans) -> Result<NatTrans> {
    let src = g.after(alpha.src())?;
    let tgt = g.after(alpha.tgt())?;
    let comps = alpha.components().iter().map(|&u| g.mor(u)).collect();
    NatTrans::new(format!("{}•{}", g.name(), alpha.name()), src, tgt, comps)
}

/// `β • F` (right whiskering by a functor).
pub fn whisker_right(beta: &NatTrans, f: &Functor) -> Result<NatTrans> {
    let src = beta.src().after(f)?;
    let tgt = beta.tgt().after(f)?;
    let comps = (0..f.dom().n_obj()).map(|a| beta.at(f.ob(a))).collect();
    NatTrans::new(format!("{}•{}", beta.name(), f.name()), src, tgt, comps)
}

/// `β • α` computed both ways round the sliding square; the two orders
/// must agree.
pub fn horizontal(beta: &NatTrans, alpha: &NatTrans) -> Result<NatTrans> {
    let (f, f2) = (alpha.src(), alpha.tgt());
    let (g, g2) = (beta.src(), beta.tgt());
    let src = g.after(f)?;
    let tgt = g2.after(f2)?;
    let e = beta.cod_cat();
    let mut comps = Vec::with_capacity(f.dom().n_obj());
    for a in 0..f.dom().n_obj() {
        let one = e.comp(beta.at(f2.ob(a)), g.mor(alpha.at(a)));
        let other = e.comp(g2.mor(alpha.at(a)), beta.at(f.ob(a)));
        if one != other {
            return Err(Error::Precondition(format!(
                "sliding rule fails for {}•{} at {}: {} vs {} (inputs are not natural)",
                beta.name(),
                alpha.name(),
                f.dom().obj_id(a),
                e.mor_id(one),
                e.mor_id(other)
            )));
        }
        comps.push(one);
    }
    NatTrans::new(format!("{}•{}", beta.name(), alpha.name()), src, tgt, comps)
}

/// A 0-cell-free piece of 2-categorical data: a functor or a natural
/// transformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Functor(Functor),
    Nat(NatTrans),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositionMode {
    /// `G • F`
    FunctorFunctor,
    /// `β ∘ α`
    Vertical,
    /// `β • α`
    Horizontal,
    /// `β • F`
    NatFunctor,
    /// `G • α`
    FunctorNat,
}

/// Dispatch on composition mode; `x` is the outer/later argument.
pub fn compose(x: &Cell, y: &Cell, mode: CompositionMode) -> Result<Cell> {
    use CompositionMode::*;
    match (mode, x, y) {
        (FunctorFunctor, Cell::Functor(g), Cell::Functor(f)) => Ok(Cell::Functor(g.after(f)?)),
        (Vertical, Cell::Nat(b), Cell::Nat(a)) => Ok(Cell::Nat(vertical(b, a)?)),
        (Horizontal, Cell::Nat(b), Cell::Nat(a)) => Ok(Cell::Nat(horizontal(b, a)?)),
        (NatFunctor, Cell::Nat(b), Cell::Functor(f)) => Ok(Cell::Nat(whisker_right(b, f)?)),
        (FunctorNat, Cell::Functor(g), Cell::Nat(a)) => Ok(Cell::Nat(whisker_left(g, a)?)),
        _ => Err(Error::Boundary(format!(
            "composition mode {mode:?} does not accept these arguments"
        ))),
    }
}
