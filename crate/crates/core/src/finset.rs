//! Functors into finite sets.
//!
//! Finite sets are never collected into a category; they exist on demand as
//! element lists. Elements of constructed sets carry canonical ids such as
//! `(x,e)` or `[x↦e;y↦e']`, so independently built isomorphic sets can be
//! compared through explicit bijections.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cat::{opposite, pair_id};
use crate::config::{Budget, Guard};
use crate::fixtures::all_tables;
use crate::functor::{same_cat, CatRef, Functor};
use crate::report::{Error, Report, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSetObj {
    elements: Vec<String>,
    index: HashMap<String, usize>,
}

impl FinSetObj {
    pub fn new<I, S>(elements: I) -> Result<FinSetObj>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::Structural(format!("duplicate element `{e}`")));
            }
        }
        Ok(FinSetObj { elements, index })
    }

    /// `{0, ..., n-1}`.
    pub fn range(n: usize) -> FinSetObj {
        FinSetObj::new((0..n).map(|i| i.to_string())).unwrap()
    }

    /// `{*}`.
    pub fn point() -> FinSetObj {
        FinSetObj::new(["*"]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn elem(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn position(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::Precondition(format!("`{id}` is not an element")))
    }

    /// Cartesian product with elements `(x,y)`, first factor major.
    pub fn product(&self, other: &FinSetObj) -> FinSetObj {
        FinSetObj::new(
            self.elements
                .iter()
                .flat_map(|x| other.elements.iter().map(move |y| pair_id(x, y))),
        )
        .unwrap()
    }

    /// All functions `self -> other` as tables, in lexicographic order.
    pub fn functions_to(&self, other: &FinSetObj) -> Vec<Vec<usize>> {
        all_tables(self.len(), other.len())
    }

    /// The canonical id `[x1↦e1;x2↦e2]` of a table.
    pub fn table_id(&self, other: &FinSetObj, table: &[usize]) -> String {
        format!(
            "[{}]",
            table
                .iter()
                .enumerate()
                .map(|(i, &j)| format!("{}↦{}", self.elements[i], other.elements[j]))
                .collect::<Vec<_>>()
                .join(";")
        )
    }

    /// The set of all functions `self -> other`, elements named by
    /// [`FinSetObj::table_id`].
    pub fn exponential(&self, other: &FinSetObj) -> FinSetObj {
        FinSetObj::new(self.functions_to(other).iter().map(|t| self.table_id(other, t))).unwrap()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSetMap {
    pub dom: FinSetObj,
    pub cod: FinSetObj,
    pub table: Vec<usize>,
}

impl FinSetMap {
    pub fn new(dom: FinSetObj, cod: FinSetObj, table: Vec<usize>) -> Result<FinSetMap> {
        if table.len() != dom.len() || table.iter().any(|&y| y >= cod.len()) {
            return Err(Error::Structural("map is not total into its codomain".into()));
        }
        Ok(FinSetMap { dom, cod, table })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && is_injective(&self.table, self.cod.len())
    }
}

pub(crate) fn is_injective(table: &[usize], cod: usize) -> bool {
    let mut seen = vec![false; cod];
    table.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
}

/// A functor `C -> FinSet`. Contravariant functors are those whose domain
/// is an opposite category.
#[derive(Debug, Clone)]
pub struct SetFunctor {
    name: String,
    dom: CatRef,
    sets: Vec<FinSetObj>,
    maps: Vec<Vec<usize>>,
}

impl PartialEq for SetFunctor {
    fn eq(&self, other: &Self) -> bool {
        same_cat(&self.dom, &other.dom) && self.sets == other.sets && self.maps == other.maps
    }
}

impl SetFunctor {
    pub fn new(
        name: impl Into<String>,
        dom: CatRef,
        sets: Vec<FinSetObj>,
        maps: Vec<Vec<usize>>,
    ) -> Result<SetFunctor> {
        let name = name.into();
        if sets.len() != dom.n_obj() || maps.len() != dom.n_mor() {
            return Err(Error::Structural(format!(
                "set functor `{name}`: not total on objects or morphisms"
            )));
        }
        for f in 0..dom.n_mor() {
            let (a, b) = (dom.dom(f), dom.cod(f));
            if maps[f].len() != sets[a].len() || maps[f].iter().any(|&y| y >= sets[b].len()) {
                return Err(Error::Structural(format!(
                    "set functor `{name}`: map at `{}` is not a function {} -> {}",
                    dom.mor_id(f),
                    dom.obj_id(a),
                    dom.obj_id(b)
                )));
            }
        }
        Ok(SetFunctor { name, dom, sets, maps })
    }

    /// Build from ids. Maps at identities may be omitted.
    pub fn from_ids(
        name: impl Into<String>,
        dom: CatRef,
        sets: &[(&str, Vec<&str>)],
        maps: &[(&str, Vec<(&str, &str)>)],
    ) -> Result<SetFunctor> {
        let name = name.into();
        let mut s: Vec<Option<FinSetObj>> = vec![None; dom.n_obj()];
        for (a, els) in sets {
            s[dom.obj(a)?] = Some(FinSetObj::new(els.iter().copied())?);
        }
        let s: Vec<FinSetObj> = s
            .into_iter()
            .enumerate()
            .map(|(a, x)| {
                x.ok_or_else(|| Error::Structural(format!("set functor `{name}`: no set at `{}`", dom.obj_id(a))))
            })
            .collect::<Result<_>>()?;
        let mut m: Vec<Option<Vec<usize>>> = vec![None; dom.n_mor()];
        for (f, pairs) in maps {
            let fi = dom.mor(f)?;
            let (a, b) = (dom.dom(fi), dom.cod(fi));
            let mut t = vec![usize::MAX; s[a].len()];
            for (x, y) in pairs {
                t[s[a].position(x)?] = s[b].position(y)?;
            }
            if t.contains(&usize::MAX) {
                return Err(Error::Structural(format!(
                    "set functor `{name}`: map at `{f}` is not total"
                )));
            }
            m[fi] = Some(t);
        }
        let m = m
            .into_iter()
            .enumerate()
            .map(|(f, t)| match t {
                Some(t) => Ok(t),
                None if dom.is_identity(f) => Ok((0..s[dom.dom(f)].len()).collect()),
                None => Err(Error::Structural(format!(
                    "set functor `{name}`: no map at `{}`",
                    dom.mor_id(f)
                ))),
            })
            .collect::<Result<_>>()?;
        SetFunctor::new(name, dom, s, m)
    }

    /// The terminal functor: `{*}` everywhere.
    pub fn terminal(dom: &CatRef) -> SetFunctor {
        SetFunctor {
            name: "1".into(),
            dom: dom.clone(),
            sets: vec![FinSetObj::point(); dom.n_obj()],
            maps: vec![vec![0]; dom.n_mor()],
        }
    }

    /// The constant functor at a set.
    pub fn constant(dom: &CatRef, x: &FinSetObj) -> SetFunctor {
        SetFunctor {
            name: "Δ".into(),
            dom: dom.clone(),
            sets: vec![x.clone(); dom.n_obj()],
            maps: vec![(0..x.len()).collect(); dom.n_mor()],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> SetFunctor {
        self.name = name.into();
        self
    }

    pub fn dom(&self) -> &CatRef {
        &self.dom
    }

    pub fn at(&self, a: usize) -> &FinSetObj {
        &self.sets[a]
    }

    pub fn size(&self, a: usize) -> usize {
        self.sets[a].len()
    }

    pub fn apply(&self, f: usize, x: usize) -> usize {
        self.maps[f][x]
    }

    pub fn map(&self, f: usize) -> &[usize] {
        &self.maps[f]
    }

    pub fn finset_map(&self, f: usize) -> FinSetMap {
        FinSetMap {
            dom: self.sets[self.dom.dom(f)].clone(),
            cod: self.sets[self.dom.cod(f)].clone(),
            table: self.maps[f].clone(),
        }
    }

    /// Total number of elements over all objects.
    pub fn total(&self) -> usize {
        self.sets.iter().map(FinSetObj::len).sum()
    }

    /// `X ∘ K` for `K: D -> C`.
    pub fn restrict_along(&self, k: &Functor) -> Result<SetFunctor> {
        if !same_cat(k.cod(), &self.dom) {
            return Err(Error::Boundary(format!(
                "cannot restrict {} along {}",
                self.name,
                k.name()
            )));
        }
        let d = k.dom();
        Ok(SetFunctor {
            name: format!("{}.{}", self.name, k.name()),
            dom: d.clone(),
            sets: (0..d.n_obj()).map(|a| self.sets[k.ob(a)].clone()).collect(),
            maps: (0..d.n_mor()).map(|f| self.maps[k.mor(f)].clone()).collect(),
        })
    }

    /// Pointwise product, elements `(x,y)`.
    pub fn product(&self, other: &SetFunctor) -> Result<SetFunctor> {
        if !same_cat(&self.dom, &other.dom) {
            return Err(Error::Boundary("product of functors on different domains".into()));
        }
        let c = &self.dom;
        let sets = (0..c.n_obj()).map(|a| self.sets[a].product(&other.sets[a])).collect();
        let maps = (0..c.n_mor())
            .map(|f| {
                let m = other.size(c.cod(f));
                let mut t = Vec::new();
                for x in 0..self.size(c.dom(f)) {
                    for y in 0..other.size(c.dom(f)) {
                        t.push(self.apply(f, x) * m + other.apply(f, y));
                    }
                }
                t
            })
            .collect();
        Ok(SetFunctor {
            name: format!("{}×{}", self.name, other.name),
            dom: c.clone(),
            sets,
            maps,
        })
    }

    /// `X ⊠ Y: C × D -> FinSet`, `(c,d) ↦ X(c) × Y(d)`, over the given
    /// product category.
    pub fn external_product(&self, other: &SetFunctor, prod: &CatRef) -> Result<SetFunctor> {
        let (c, d) = (&self.dom, &other.dom);
        let mut sets = Vec::with_capacity(prod.n_obj());
        for p in 0..prod.n_obj() {
            let (x, y) =
                split_pair_id(prod.obj_id(p)).ok_or_else(|| Error::Boundary("not a product category".into()))?;
            sets.push(self.sets[c.obj(x)?].product(&other.sets[d.obj(y)?]));
        }
        let mut maps = Vec::with_capacity(prod.n_mor());
        for m in 0..prod.n_mor() {
            let (f, g) =
                split_pair_id(prod.mor_id(m)).ok_or_else(|| Error::Boundary("not a product category".into()))?;
            let (f, g) = (c.mor(f)?, d.mor(g)?);
            let w = other.size(d.cod(g));
            let mut t = Vec::new();
            for x in 0..self.size(c.dom(f)) {
                for y in 0..other.size(d.dom(g)) {
                    t.push(self.apply(f, x) * w + other.apply(g, y));
                }
            }
            maps.push(t);
        }
        SetFunctor::new(format!("{}⊠{}", self.name, other.name), prod.clone(), sets, maps)
    }

    /// The same data viewed as a functor into a skeleton of finite sets
    /// (objects named by size, morphisms `n>m:digits`), by element
    /// position.
    pub fn to_skeleton(&self, skeleton: &CatRef) -> Result<Functor> {
        let c = &self.dom;
        let obj: Vec<(String, String)> = (0..c.n_obj())
            .map(|a| (c.obj_id(a).to_string(), self.size(a).to_string()))
            .collect();
        let mor: Vec<(String, String)> = (0..c.n_mor())
            .map(|f| {
                let digits: String = self.maps[f]
                    .iter()
                    .map(|&d| char::from_digit(d as u32, 10).unwrap_or('?'))
                    .collect();
                (
                    c.mor_id(f).to_string(),
                    format!("{}>{}:{}", self.size(c.dom(f)), self.size(c.cod(f)), digits),
                )
            })
            .collect();
        let objs: Vec<(&str, &str)> = obj.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let mors: Vec<(&str, &str)> = mor.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Functor::from_ids(self.name.clone(), c.clone(), skeleton.clone(), &objs, &mors)
    }
}

pub(crate) fn split_pair_id(id: &str) -> Option<(&str, &str)> {
    let inner = id.strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0i32;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => return Some((&inner[..i], &inner[i + 1..])),
            _ => {}
        }
    }
    None
}

/// Functoriality of a set-valued functor, checked elementwise.
pub fn validate_set_functor(x: &SetFunctor) -> Report {
    let c = x.dom();
    let mut r = Report::new();
    for a in 0..c.n_obj() {
        let ida = x.map(c.id(a));
        r.check(ida.iter().enumerate().all(|(i, &j)| i == j), "identity", || {
            format!("{}({}) is not the identity", x.name(), c.mor_id(c.id(a)))
        });
    }
    for (g, f) in c.composable_pairs() {
        let h = c.comp(g, f);
        let holds = (0..x.size(c.dom(f))).all(|e| x.apply(h, e) == x.apply(g, x.apply(f, e)));
        r.check(holds, "composition", || {
            format!(
                "{}({}.{}) differs from {}({}).{}({})",
                x.name(),
                c.mor_id(g),
                c.mor_id(f),
                x.name(),
                c.mor_id(g),
                x.name(),
                c.mor_id(f)
            )
        });
    }
    r
}

/// A natural transformation between set-valued functors, one table per
/// object.
#[derive(Debug, Clone, PartialEq)]
pub struct SetNat {
    pub src: SetFunctor,
    pub tgt: SetFunctor,
    pub components: Vec<Vec<usize>>,
}

impl SetNat {
    pub fn new(src: SetFunctor, tgt: SetFunctor, components: Vec<Vec<usize>>) -> Result<SetNat> {
        if !same_cat(src.dom(), tgt.dom()) {
            return Err(Error::Boundary(format!(
                "{} and {} have different domains",
                src.name(),
                tgt.name()
            )));
        }
        let c = src.dom();
        if components.len() != c.n_obj()
            || (0..c.n_obj())
                .any(|a| components[a].len() != src.size(a) || components[a].iter().any(|&y| y >= tgt.size(a)))
        {
            return Err(Error::Structural(format!(
                "components {} => {} are not functions",
                src.name(),
                tgt.name()
            )));
        }
        Ok(SetNat { src, tgt, components })
    }

    pub fn identity(x: &SetFunctor) -> SetNat {
        SetNat {
            src: x.clone(),
            tgt: x.clone(),
            components: x.sets.iter().map(|s| (0..s.len()).collect()).collect(),
        }
    }

    pub fn at(&self, a: usize, x: usize) -> usize {
        self.components[a][x]
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &SetNat) -> Result<SetNat> {
        if other.tgt != self.src {
            return Err(Error::Boundary("set transformations do not compose".into()));
        }
        let components = other
            .components
            .iter()
            .enumerate()
            .map(|(a, t)| t.iter().map(|&x| self.components[a][x]).collect())
            .collect();
        Ok(SetNat {
            src: other.src.clone(),
            tgt: self.tgt.clone(),
            components,
        })
    }

    /// Canonical id: per object, the component table.
    pub fn signature(&self) -> String {
        let c = self.src.dom();
        (0..c.n_obj())
            .map(|a| {
                format!(
                    "{}:{}",
                    c.obj_id(a),
                    self.src.at(a).table_id(self.tgt.at(a), &self.components[a])
                )
            })
            .collect::<Vec<_>>()
            .join("|")
    }

    pub fn is_iso(&self) -> bool {
        (0..self.src.dom().n_obj())
            .all(|a| self.src.size(a) == self.tgt.size(a) && is_injective(&self.components[a], self.tgt.size(a)))
    }

    pub fn inverse(&self) -> Option<SetNat> {
        if !self.is_iso() {
            return None;
        }
        let components = self
            .components
            .iter()
            .map(|t| {
                let mut inv = vec![0; t.len()];
                for (x, &y) in t.iter().enumerate() {
                    inv[y] = x;
                }
                inv
            })
            .collect();
        Some(SetNat {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            components,
        })
    }
}

pub fn validate_set_natural(alpha: &SetNat) -> Report {
    let c = alpha.src.dom();
    let (x, y) = (&alpha.src, &alpha.tgt);
    let mut r = Report::new();
    for f in 0..c.n_mor() {
        let (a, b) = (c.dom(f), c.cod(f));
        for e in 0..x.size(a) {
            let lhs = y.apply(f, alpha.at(a, e));
            let rhs = alpha.at(b, x.apply(f, e));
            r.check(lhs == rhs, "naturality", || {
                format!("square at {} on element {}", c.mor_id(f), x.at(a).elem(e))
            });
        }
    }
    r
}

/// All natural transformations `X ⇒ Y`, by element-level backtracking.
/// Sorted by component tables.
pub fn enumerate_set_naturals(x: &SetFunctor, y: &SetFunctor, guard: &Guard) -> Result<Vec<SetNat>> {
    if !same_cat(x.dom(), y.dom()) {
        return Err(Error::Boundary(format!(
            "{} and {} have different domains",
            x.name(),
            y.name()
        )));
    }
    let c = x.dom().clone();
    // Variables are (object, element) pairs in order; constraint
    // `Y(f)(α_a e) = α_b (X(f) e)` attaches to whichever side comes last.
    let mut offset = vec![0; c.n_obj() + 1];
    for a in 0..c.n_obj() {
        offset[a + 1] = offset[a] + x.size(a);
    }
    let n = offset[c.n_obj()];
    let mut var_obj = vec![0; n];
    for a in 0..c.n_obj() {
        for v in offset[a]..offset[a + 1] {
            var_obj[v] = a;
        }
    }
    let mut cons: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
    for f in c.non_identities() {
        let (a, b) = (c.dom(f), c.cod(f));
        for e in 0..x.size(a) {
            let v = offset[a] + e;
            let w = offset[b] + x.apply(f, e);
            cons[v.max(w)].push((f, v, w));
        }
    }
    for a in 0..c.n_obj() {
        if x.size(a) > 0 && y.size(a) == 0 {
            return Ok(Vec::new());
        }
    }
    let mut budget = guard.budget(&format!("transformations {} => {}", x.name(), y.name()));
    let mut assign = vec![0usize; n];
    let mut out = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn go(
        v: usize,
        n: usize,
        var_obj: &[usize],
        cons: &[Vec<(usize, usize, usize)>],
        y: &SetFunctor,
        assign: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        budget: &mut Budget,
    ) -> Result<()> {
        if v == n {
            out.push(assign.clone());
            return Ok(());
        }
        for t in 0..y.size(var_obj[v]) {
            budget.spend()?;
            assign[v] = t;
            if cons[v].iter().all(|&(f, a, b)| y.apply(f, assign[a]) == assign[b]) {
                go(v + 1, n, var_obj, cons, y, assign, out, budget)?;
            }
        }
        Ok(())
    }

    go(0, n, &var_obj, &cons, y, &mut assign, &mut out, &mut budget)?;
    Ok(out
        .into_iter()
        .map(|flat| {
            let components = (0..c.n_obj())
                .map(|a| flat[offset[a]..offset[a + 1]].to_vec())
                .collect();
            SetNat {
                src: x.clone(),
                tgt: y.clone(),
                components,
            }
        })
        .collect())
}

/// Certify that `maps` (one table per object) is a natural isomorphism
/// `X ≅ Y`: each table bijective, every naturality square commuting.
pub fn certify_set_iso(x: &SetFunctor, y: &SetFunctor, maps: Vec<Vec<usize>>) -> Result<Report> {
    let n = SetNat::new(x.clone(), y.clone(), maps)?;
    let c = x.dom();
    let mut r = Report::new();
    for a in 0..c.n_obj() {
        r.check(
            x.size(a) == y.size(a) && is_injective(&n.components[a], y.size(a)),
            "bijective",
            || format!("component at {} is not a bijection", c.obj_id(a)),
        );
    }
    r.merge(validate_set_natural(&n));
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// `C(c,−)` on `C`, or `C(−,c)` on `C^op`. Elements are morphism ids.
pub fn hom_functor(cat: &CatRef, c: &str, variance: Variance) -> Result<SetFunctor> {
    let o = cat.obj(c)?;
    Ok(hom_functor_at(cat, o, variance))
}

pub(crate) fn hom_functor_at(cat: &CatRef, o: usize, variance: Variance) -> SetFunctor {
    let ids = |v: &[usize]| FinSetObj::new(v.iter().map(|&m| cat.mor_id(m))).unwrap();
    match variance {
        Variance::Covariant => {
            let sets: Vec<FinSetObj> = (0..cat.n_obj()).map(|a| ids(cat.hom(o, a))).collect();
            let maps = (0..cat.n_mor())
                .map(|f| {
                    let (a, b) = (cat.dom(f), cat.cod(f));
                    cat.hom(o, a)
                        .iter()
                        .map(|&p| pos(cat.hom(o, b), cat.comp(f, p)))
                        .collect()
                })
                .collect();
            SetFunctor {
                name: format!("y^{}", cat.obj_id(o)),
                dom: cat.clone(),
                sets,
                maps,
            }
        }
        Variance::Contravariant => {
            let op = Arc::new(opposite(cat));
            let sets: Vec<FinSetObj> = (0..cat.n_obj()).map(|a| ids(cat.hom(a, o))).collect();
            // f: b -> a in C is a -> b in C^op, acting by p ↦ p ∘ f.
            let maps = (0..cat.n_mor())
                .map(|f| {
                    let (b, a) = (cat.dom(f), cat.cod(f));
                    cat.hom(a, o)
                        .iter()
                        .map(|&p| pos(cat.hom(b, o), cat.comp(p, f)))
                        .collect()
                })
                .collect();
            SetFunctor {
                name: format!("y_{}", cat.obj_id(o)),
                dom: op,
                sets,
                maps,
            }
        }
    }
}

fn pos(list: &[usize], x: usize) -> usize {
    list.iter()
        .position(|&y| y == x)
        .expect("hom lists are closed under composition")
}

/// `α_{X,c}`: send `τ: C(c,−) ⇒ X` to `τ_c(id_c)`.
pub fn yoneda_alpha(cat: &CatRef, c: &str, x: &SetFunctor, tau: &SetNat) -> Result<usize> {
    let o = cat.obj(c)?;
    let yc = hom_functor_at(cat, o, Variance::Covariant);
    if tau.src != yc || tau.tgt != *x {
        return Err(Error::Precondition(format!(
            "argument is not a transformation {} => {}",
            yc.name(),
            x.name()
        )));
    }
    let r = validate_set_natural(tau);
    if !r.ok() {
        return Err(Error::Precondition(format!("argument is not natural: {r}")));
    }
    Ok(tau.at(o, pos(cat.hom(o, o), cat.id(o))))
}

/// `β_{X,c}`: send `x ∈ X(c)` to the transformation `p ↦ X(p)(x)`.
pub fn yoneda_beta(cat: &CatRef, c: &str, x: &SetFunctor, elem: usize) -> Result<SetNat> {
    let o = cat.obj(c)?;
    if !same_cat(x.dom(), cat) {
        return Err(Error::Boundary(format!(
            "{} is not a functor on {}",
            x.name(),
            cat.name()
        )));
    }
    if elem >= x.size(o) {
        return Err(Error::Precondition(format!(
            "element {elem} is not in {}({c})",
            x.name()
        )));
    }
    let yc = hom_functor_at(cat, o, Variance::Covariant);
    let components = (0..cat.n_obj())
        .map(|a| cat.hom(o, a).iter().map(|&p| x.apply(p, elem)).collect())
        .collect();
    SetNat::new(yc, x.clone(), components)
}

/// Both Yoneda round trips at every object `c` of `X`'s domain, plus the
/// count `|Nat(y^c, X)| = |X(c)|`.
pub fn yoneda_check(x: &SetFunctor, guard: &Guard) -> Result<Report> {
    let cat = x.dom().clone();
    let mut r = Report::new();
    for o in 0..cat.n_obj() {
        let c = cat.obj_id(o).to_string();
        let yc = hom_functor_at(&cat, o, Variance::Covariant);
        let nats = enumerate_set_naturals(&yc, x, guard)?;
        r.check(nats.len() == x.size(o), "yoneda-count", || {
            format!(
                "|Nat(y^{c}, {})| = {} but |{}({c})| = {}",
                x.name(),
                nats.len(),
                x.name(),
                x.size(o)
            )
        });
        for tau in &nats {
            let e = yoneda_alpha(&cat, &c, x, tau)?;
            let back = yoneda_beta(&cat, &c, x, e)?;
            r.check(back == *tau, "yoneda-roundtrip", || {
                format!("beta(alpha({})) differs at {c}", tau.signature())
            });
        }
        for e in 0..x.size(o) {
            let tau = yoneda_beta(&cat, &c, x, e)?;
            let back = yoneda_alpha(&cat, &c, x, &tau)?;
            r.check(back == e, "yoneda-roundtrip", || {
                format!("alpha(beta({})) = {} at {c}", x.at(o).elem(e), x.at(o).elem(back))
            });
        }
    }
    Ok(r)
}

/// `y_f: y_c ⇒ y_d` for `f: c -> d`, components `q ↦ f ∘ q`.
pub fn yoneda_on_morphism(cat: &CatRef, f: usize) -> SetNat {
    let (c, d) = (cat.dom(f), cat.cod(f));
    let yc = hom_functor_at(cat, c, Variance::Contravariant);
    let yd = hom_functor_at(cat, d, Variance::Contravariant);
    let components = (0..cat.n_obj())
        .map(|a| {
            cat.hom(a, c)
                .iter()
                .map(|&q| pos(cat.hom(a, d), cat.comp(f, q)))
                .collect()
        })
        .collect();
    SetNat {
        src: yc,
        tgt: yd,
        components,
    }
}

/// The Yoneda embedding into the full subcategory of
/// `[C^op, skeleton]` spanned by the representables.
#[derive(Debug, Clone)]
pub struct YonedaEmbedding {
    pub functor: Functor,
    pub image: crate::functor_category::FunctorCategory,
    pub presheaves: Vec<SetFunctor>,
}

pub fn yoneda_embedding(cat: &CatRef, guard: &Guard) -> Result<YonedaEmbedding> {
    let presheaves: Vec<SetFunctor> = (0..cat.n_obj())
        .map(|o| hom_functor_at(cat, o, Variance::Contravariant))
        .collect();
    let mut sizes: Vec<usize> = presheaves
        .iter()
        .flat_map(|p| p.sets.iter().map(FinSetObj::len))
        .collect();
    sizes.sort();
    sizes.dedup();
    if sizes.iter().any(|&s| s > 9) {
        return Err(Error::GuardExceeded(
            "hom-sets larger than 9 elements do not fit the skeleton".into(),
        ));
    }
    skeleton_guard(&sizes, guard)?;
    let skeleton = Arc::new(crate::fixtures::finset_skeleton(&sizes));
    let mut functors = Vec::new();
    for p in &presheaves {
        let f = p.to_skeleton(&skeleton)?;
        if !functors.contains(&f) {
            functors.push(f);
        }
    }
    let image = crate::functor_category::full_subcategory(format!("y({})", cat.name()), functors, guard)?;
    let mut obj_map = Vec::with_capacity(cat.n_obj());
    for p in &presheaves {
        obj_map.push(image.object_of(&p.to_skeleton(&skeleton)?).unwrap());
    }
    let mut mor_map = Vec::with_capacity(cat.n_mor());
    for f in 0..cat.n_mor() {
        let yf = yoneda_on_morphism(cat, f);
        let (s, t) = (obj_map[cat.dom(f)], obj_map[cat.cod(f)]);
        let m = image
            .cat
            .hom(s, t)
            .iter()
            .copied()
            .find(|&m| {
                let n = image.nat(m);
                (0..cat.n_obj()).all(|a| crate::fixtures::skeleton_table(skeleton.mor_id(n.at(a))) == yf.components[a])
            })
            .ok_or_else(|| Error::Structural(format!("y_{} not found in the image", cat.mor_id(f))))?;
        mor_map.push(m);
    }
    let functor = Functor::new(
        format!("y_{}", cat.name()),
        cat.clone(),
        image.cat.clone(),
        obj_map,
        mor_map,
    )?;
    Ok(YonedaEmbedding {
        functor,
        image,
        presheaves,
    })
}

pub(crate) fn skeleton_guard(sizes: &[usize], guard: &Guard) -> Result<()> {
    let n = crate::fixtures::skeleton_morphism_count(sizes);
    if sizes.iter().any(|&s| s > 9) || n > guard.max_skeleton_morphisms {
        return Err(Error::GuardExceeded(format!(
            "finite-set skeleton on sizes {sizes:?} has {n} morphisms (limit {})",
            guard.max_skeleton_morphisms
        )));
    }
    Ok(())
}

/// The bijection witnesses behind a tensor or cotensor of finite sets.
#[derive(Debug, Clone)]
pub struct TensorWitness {
    pub object: FinSetObj,
    pub report: Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorMode {
    Tensor,
    Cotensor,
}

/// `X ⊗ c = X × c` or `X ⋔ c = Set(X, c)` in finite sets, together with
/// the currying bijections `Set(X⊗c, c') ≅ Set(X, Set(c,c')) ≅ Set(c, X⋔c')`
/// checked against every `c'` in `probes`.
pub fn tensor_cotensor(x: &FinSetObj, c: &FinSetObj, mode: TensorMode, probes: &[FinSetObj]) -> TensorWitness {
    let object = match mode {
        TensorMode::Tensor => x.product(c),
        TensorMode::Cotensor => x.exponential(c),
    };
    let mut report = Report::new();
    for cp in probes {
        report.merge(copower_power_bijections(x, c, cp));
    }
    TensorWitness { object, report }
}

/// The three-way currying correspondence for one probe `c'`, by explicit
/// maps. Each composite round trip must be the identity.
pub fn copower_power_bijections(x: &FinSetObj, c: &FinSetObj, cp: &FinSetObj) -> Report {
    let (nx, nc, ncp) = (x.len(), c.len(), cp.len());
    let mut r = Report::new();
    let left = all_tables(nx * nc, ncp); // Set(X×c, c')
    let inner = all_tables(nc, ncp); // Set(c, c')
    let middle = all_tables(nx, inner.len()); // Set(X, Set(c,c'))
    let power = all_tables(nx, ncp); // X ⋔ c' as tables
    let right = all_tables(nc, power.len()); // Set(c, X⋔c')
    let inner_idx: HashMap<&Vec<usize>, usize> = inner.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let power_idx: HashMap<&Vec<usize>, usize> = power.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let middle_idx: HashMap<&Vec<usize>, usize> = middle.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let right_idx: HashMap<&Vec<usize>, usize> = right.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let left_idx: HashMap<&Vec<usize>, usize> = left.iter().enumerate().map(|(i, t)| (t, i)).collect();

    r.check(
        left.len() == middle.len() && middle.len() == right.len(),
        "copower-power-cardinality",
        || format!("{} / {} / {}", left.len(), middle.len(), right.len()),
    );
    // h ↦ (x ↦ (e ↦ h(x,e))) and h ↦ (e ↦ (x ↦ h(x,e))).
    let curry = |h: &Vec<usize>| -> usize {
        let t: Vec<usize> = (0..nx)
            .map(|i| inner_idx[&(0..nc).map(|e| h[i * nc + e]).collect::<Vec<_>>()])
            .collect();
        middle_idx[&t]
    };
    let transpose = |h: &Vec<usize>| -> usize {
        let t: Vec<usize> = (0..nc)
            .map(|e| power_idx[&(0..nx).map(|i| h[i * nc + e]).collect::<Vec<_>>()])
            .collect();
        right_idx[&t]
    };
    let uncurry = |m: &Vec<usize>| -> usize {
        let mut h = vec![0; nx * nc];
        for i in 0..nx {
            for e in 0..nc {
                h[i * nc + e] = inner[m[i]][e];
            }
        }
        left_idx[&h]
    };
    let untranspose = |m: &Vec<usize>| -> usize {
        let mut h = vec![0; nx * nc];
        for e in 0..nc {
            for i in 0..nx {
                h[i * nc + e] = power[m[e]][i];
            }
        }
        left_idx[&h]
    };
    for (k, h) in left.iter().enumerate() {
        r.check(uncurry(&middle[curry(h)]) == k, "copower-roundtrip", || {
            format!("element {k} of Set(X×c, c')")
        });
        r.check(untranspose(&right[transpose(h)]) == k, "power-roundtrip", || {
            format!("element {k} of Set(X×c, c')")
        });
    }
    for (k, m) in middle.iter().enumerate() {
        r.check(curry(&left[uncurry(m)]) == k, "copower-roundtrip", || {
            format!("element {k} of Set(X, Set(c,c'))")
        });
    }
    for (k, m) in right.iter().enumerate() {
        r.check(transpose(&left[untranspose(m)]) == k, "power-roundtrip", || {
            format!("element {k} of Set(c, X⋔c')")
        });
    }
    r
}

/// The exponential `G^F` of presheaves and the adjunction bijections
/// `Nat(H, G^F) ≅ Nat(H × F, G)` over the supplied test family.
#[derive(Debug, Clone)]
pub struct Exponential {
    pub functor: SetFunctor,
    pub report: Report,
}

/// `G^F(c) = Nat(y_c × F, G)`, acting by precomposition with `y_f × F`.
/// `F` and `G` must live on `C^op`.
pub fn presheaf_exponential(
    f: &SetFunctor,
    g: &SetFunctor,
    family: &[SetFunctor],
    guard: &Guard,
) -> Result<Exponential> {
    if !same_cat(f.dom(), g.dom()) {
        return Err(Error::Boundary("F and G have different domains".into()));
    }
    let p = f.dom().clone();
    let cat = Arc::new(opposite(&p));
    let reps: Vec<SetFunctor> = (0..cat.n_obj())
        .map(|o| rebase(hom_functor_at(&cat, o, Variance::Contravariant), &p))
        .collect();
    let mut values: Vec<Vec<SetNat>> = Vec::with_capacity(cat.n_obj());
    for y in &reps {
        values.push(enumerate_set_naturals(&y.product(f)?, g, guard)?);
    }
    let index: Vec<HashMap<Vec<Vec<usize>>, usize>> = values
        .iter()
        .map(|vs| vs.iter().enumerate().map(|(i, v)| (v.components.clone(), i)).collect())
        .collect();
    let sets = values
        .iter()
        .map(|vs| FinSetObj::new(vs.iter().map(SetNat::signature)))
        .collect::<Result<Vec<_>>>()?;
    // A morphism m: a -> b of C^op is f: b -> a in C; G^F(m) precomposes
    // with y_f × F: y_b × F ⇒ y_a × F.
    let mut maps = Vec::with_capacity(p.n_mor());
    for m in 0..p.n_mor() {
        let (a, b) = (p.dom(m), p.cod(m));
        let yf = rebase_nat(yoneda_on_morphism(&cat, m), &reps[b], &reps[a]);
        let yf_f = nat_times_identity(&yf, f)?;
        let mut t = Vec::with_capacity(values[a].len());
        for sigma in &values[a] {
            let pre = sigma.after(&yf_f)?;
            t.push(index[b][&pre.components]);
        }
        maps.push(t);
    }
    let exp = SetFunctor::new(format!("{}^{}", g.name(), f.name()), p.clone(), sets, maps)?;
    let mut report = validate_set_functor(&exp);
    for h in family {
        report.merge(exponential_adjunction(h, f, g, &exp, &values, &cat, guard)?);
    }
    Ok(Exponential { functor: exp, report })
}

fn rebase(x: SetFunctor, dom: &CatRef) -> SetFunctor {
    debug_assert!(same_cat(&x.dom, dom));
    SetFunctor { dom: dom.clone(), ..x }
}

fn rebase_nat(n: SetNat, src: &SetFunctor, tgt: &SetFunctor) -> SetNat {
    SetNat {
        src: src.clone(),
        tgt: tgt.clone(),
        components: n.components,
    }
}

/// `σ × F: X × F ⇒ Y × F`.
fn nat_times_identity(sigma: &SetNat, f: &SetFunctor) -> Result<SetNat> {
    let src = sigma.src.product(f)?;
    let tgt = sigma.tgt.product(f)?;
    let c = f.dom();
    let components = (0..c.n_obj())
        .map(|a| {
            let k = f.size(a);
            let mut t = Vec::new();
            for x in 0..sigma.src.size(a) {
                for e in 0..k {
                    t.push(sigma.at(a, x) * k + e);
                }
            }
            t
        })
        .collect();
    SetNat::new(src, tgt, components)
}

/// Check `Nat(H, G^F) ≅ Nat(H × F, G)` by the explicit transposition
/// `θ ↦ ((h, x) ↦ θ_c(h)_c(id_c, x))` and its inverse
/// `σ ↦ (h ↦ ((q, x) ↦ σ_d(H(q)(h), x)))`.
fn exponential_adjunction(
    h: &SetFunctor,
    f: &SetFunctor,
    g: &SetFunctor,
    exp: &SetFunctor,
    values: &[Vec<SetNat>],
    cat: &CatRef,
    guard: &Guard,
) -> Result<Report> {
    let p = f.dom();
    let left = enumerate_set_naturals(h, exp, guard)?;
    let hf = h.product(f)?;
    let right = enumerate_set_naturals(&hf, g, guard)?;
    let right_idx: HashMap<&Vec<Vec<usize>>, usize> =
        right.iter().enumerate().map(|(i, s)| (&s.components, i)).collect();
    let left_idx: HashMap<&Vec<Vec<usize>>, usize> = left.iter().enumerate().map(|(i, s)| (&s.components, i)).collect();
    let mut r = Report::new();
    r.check(left.len() == right.len(), "exponential-cardinality", || {
        format!("|Nat(H, G^F)| = {} but |Nat(H×F, G)| = {}", left.len(), right.len())
    });
    let id_pos = |c: usize| pos(cat.hom(c, c), cat.id(c));
    let forward = |theta: &SetNat| -> Vec<Vec<usize>> {
        (0..p.n_obj())
            .map(|c| {
                let k = f.size(c);
                let mut t = Vec::new();
                for e in 0..h.size(c) {
                    let sigma = &values[c][theta.at(c, e)];
                    for x in 0..k {
                        t.push(sigma.at(c, id_pos(c) * k + x));
                    }
                }
                t
            })
            .collect()
    };
    let backward = |sigma: &SetNat| -> Result<Vec<Vec<usize>>> {
        let mut comps = Vec::with_capacity(p.n_obj());
        for c in 0..p.n_obj() {
            let mut t = Vec::with_capacity(h.size(c));
            for e in 0..h.size(c) {
                // components at d: (q: d -> c in C, x) ↦ σ_d(H(q)(e), x)
                let inner: Vec<Vec<usize>> = (0..p.n_obj())
                    .map(|d| {
                        let k = f.size(d);
                        let mut u = Vec::new();
                        for &q in cat.hom(d, c) {
                            for x in 0..k {
                                u.push(sigma.at(d, h.apply(q, e) * k + x));
                            }
                        }
                        u
                    })
                    .collect();
                let i = values[c]
                    .iter()
                    .position(|v| v.components == inner)
                    .ok_or_else(|| Error::Structural("transpose is not natural".into()))?;
                t.push(i);
            }
            comps.push(t);
        }
        Ok(comps)
    };
    for (k, theta) in left.iter().enumerate() {
        let fw = forward(theta);
        match right_idx.get(&fw) {
            Some(&j) => {
                let back = backward(&right[j])?;
                r.check(left_idx.get(&back) == Some(&k), "exponential-roundtrip", || {
                    format!("θ #{k} does not return")
                });
            }
            None => {
                r.check(false, "exponential-transpose", || {
                    format!("transpose of θ #{k} is not natural")
                });
            }
        }
    }
    for (k, sigma) in right.iter().enumerate() {
        let back = backward(sigma)?;
        match left_idx.get(&back) {
            Some(&j) => {
                r.check(
                    right_idx.get(&forward(&left[j])) == Some(&k),
                    "exponential-roundtrip",
                    || format!("σ #{k} does not return"),
                );
            }
            None => {
                r.check(false, "exponential-transpose", || {
                    format!("transpose of σ #{k} is not natural")
                });
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::functor_category::fully_faithful_check;

    fn arc(c: crate::cat::FinCat) -> CatRef {
        Arc::new(c)
    }

    #[test]
    fn hom_functors_on_arrow() {
        let two = arc(fixtures::arrow());
        let y0 = hom_functor(&two, "0", Variance::Covariant).unwrap();
        assert_eq!(y0.at(0).elements(), ["id_0"]);
        assert_eq!(y0.at(1).elements(), ["a"]);
        assert!(validate_set_functor(&y0).ok());
        let y1 = hom_functor(&two, "1", Variance::Contravariant).unwrap();
        assert_eq!(y1.at(0).elements(), ["a"]);
        assert_eq!(y1.at(1).elements(), ["id_1"]);
        assert_eq!(y1.dom().name(), "2^op");
        assert!(validate_set_functor(&y1).ok());
    }

    #[test]
    fn yoneda_round_trip_on_arrow() {
        let two = arc(fixtures::arrow());
        let y0 = hom_functor(&two, "0", Variance::Covariant).unwrap();
        let nats = enumerate_set_naturals(&y0, &y0, &Guard::default()).unwrap();
        assert_eq!(nats.len(), 1);
        assert_eq!(yoneda_alpha(&two, "0", &y0, &SetNat::identity(&y0)).unwrap(), 0);
        let b = yoneda_beta(&two, "0", &y0, 0).unwrap();
        assert_eq!(b, SetNat::identity(&y0));
    }

    #[test]
    fn yoneda_embedding_is_fully_faithful() {
        let g = Guard::default();
        for c in [
            fixtures::terminal(),
            fixtures::arrow(),
            fixtures::z2(),
            fixtures::chain(3),
        ] {
            let c = arc(c);
            let y = yoneda_embedding(&c, &g).unwrap();
            assert!(crate::functor::validate_functor(&y.functor).ok());
            assert!(fully_faithful_check(&y.functor).ok(), "{}", c.name());
        }
        let two = arc(fixtures::arrow());
        let y = yoneda_embedding(&two, &g).unwrap();
        let (a, b) = (y.functor.ob(0), y.functor.ob(1));
        assert_eq!(y.image.cat.hom_size(a, b), 1);
    }

    #[test]
    fn tensor_counts() {
        let x = FinSetObj::range(2);
        let c = FinSetObj::range(3);
        let probes = [FinSetObj::range(0), FinSetObj::range(1), FinSetObj::range(2)];
        let t = tensor_cotensor(&x, &c, TensorMode::Tensor, &probes);
        assert_eq!(t.object.len(), 6);
        assert!(t.report.ok());
        let p = tensor_cotensor(&x, &c, TensorMode::Cotensor, &probes);
        assert_eq!(p.object.len(), 9);
        assert!(p.object.elements().contains(&"[0↦2;1↦0]".to_string()));
    }

    #[test]
    fn exponential_over_terminal_is_function_set() {
        let one = arc(fixtures::terminal());
        let p = arc(opposite(&one));
        let f = SetFunctor::constant(&p, &FinSetObj::range(2));
        let g = SetFunctor::constant(&p, &FinSetObj::range(3));
        let e = presheaf_exponential(&f, &g, &[SetFunctor::terminal(&p)], &Guard::default()).unwrap();
        assert_eq!(e.functor.size(0), 9);
        assert!(e.report.ok(), "{}", e.report);
    }

    #[test]
    fn pair_ids_split_at_top_level() {
        assert_eq!(split_pair_id("((a,b),c)"), Some(("(a,b)", "c")));
        assert_eq!(split_pair_id("(x,[a↦b;c↦d])"), Some(("x", "[a↦b;c↦d]")));
        assert_eq!(split_pair_id("abc"), None);
    }
}
