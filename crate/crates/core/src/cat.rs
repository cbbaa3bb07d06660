//! Finite categories.
//!
//! Objects and morphisms are identified by string ids and stored sorted by
//! id, so every index-order iteration is also lexicographic-id order. The
//! composition table is dense over composable pairs.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::report::{Error, Report, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub id: String,
    pub dom: usize,
    pub cod: usize,
}

#[derive(Clone)]
pub struct FinCat {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identity: Vec<usize>,
    /// `compose[g * m + f]` is `g ∘ f` when `cod f = dom g`.
    compose: Vec<Option<usize>>,
    hom: Vec<Vec<usize>>,
    obj_index: HashMap<String, usize>,
    mor_index: HashMap<String, usize>,
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat")
            .field("name", &self.name)
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms.len())
            .finish()
    }
}

/// Structural equality: same objects, morphisms and tables. Names are
/// ignored.
impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms.len() == other.morphisms.len()
            && self.morphisms.iter().zip(&other.morphisms).all(|(a, b)| a == b)
            && self.identity == other.identity
            && self.compose == other.compose
    }
}

impl Eq for FinCat {}

impl FinCat {
    /// Build a category from raw tables. Every composable pair must have a
    /// composite, including pairs involving identities.
    pub fn from_tables(
        name: impl Into<String>,
        objects: Vec<String>,
        morphisms: Vec<(String, String, String)>,
        identity: Vec<(String, String)>,
        compose: Vec<(String, String, String)>,
    ) -> Result<FinCat> {
        let mut objects = objects;
        objects.sort();
        for w in objects.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Structural(format!("duplicate object `{}`", w[0])));
            }
        }
        let obj_index: HashMap<String, usize> = objects.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        let lookup_obj = |id: &str| {
            obj_index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownObject(id.to_string()))
        };

        let mut mors = Vec::with_capacity(morphisms.len());
        for (id, dom, cod) in morphisms {
            let dom = lookup_obj(&dom)?;
            let cod = lookup_obj(&cod)?;
            mors.push(Morphism { id, dom, cod });
        }
        mors.sort_by(|a, b| a.id.cmp(&b.id));
        for w in mors.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::Structural(format!("duplicate morphism `{}`", w[0].id)));
            }
        }
        let mor_index: HashMap<String, usize> = mors.iter().enumerate().map(|(i, m)| (m.id.clone(), i)).collect();
        let lookup_mor = |id: &str| {
            mor_index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownMorphism(id.to_string()))
        };

        let n = objects.len();
        let m = mors.len();
        let mut ident = vec![usize::MAX; n];
        for (o, i) in identity {
            let o = lookup_obj(&o)?;
            let i = lookup_mor(&i)?;
            if mors[i].dom != o || mors[i].cod != o {
                return Err(Error::Structural(format!(
                    "identity `{}` of `{}` is not an endomorphism of it",
                    mors[i].id, objects[o]
                )));
            }
            if ident[o] != usize::MAX && ident[o] != i {
                return Err(Error::Structural(format!("object `{}` has two identities", objects[o])));
            }
            ident[o] = i;
        }
        if let Some(o) = ident.iter().position(|&i| i == usize::MAX) {
            return Err(Error::Structural(format!("object `{}` has no identity", objects[o])));
        }

        let mut table = vec![None; m * m];
        for (g, f, h) in compose {
            let gi = lookup_mor(&g)?;
            let fi = lookup_mor(&f)?;
            let hi = lookup_mor(&h)?;
            if mors[fi].cod != mors[gi].dom {
                return Err(Error::Structural(format!(
                    "composite {g}.{f} given for a non-composable pair"
                )));
            }
            if mors[hi].dom != mors[fi].dom || mors[hi].cod != mors[gi].cod {
                return Err(Error::Structural(format!("composite {g}.{f} = {h} has the wrong type")));
            }
            match table[gi * m + fi] {
                Some(prev) if prev != hi => {
                    return Err(Error::Structural(format!(
                        "composite {g}.{f} given twice with different values"
                    )))
                }
                _ => table[gi * m + fi] = Some(hi),
            }
        }
        for g in 0..m {
            for f in 0..m {
                if mors[f].cod == mors[g].dom && table[g * m + f].is_none() {
                    return Err(Error::MissingComposite {
                        g: mors[g].id.clone(),
                        f: mors[f].id.clone(),
                    });
                }
            }
        }

        let mut hom = vec![Vec::new(); n * n];
        for (i, mo) in mors.iter().enumerate() {
            hom[mo.dom * n + mo.cod].push(i);
        }

        Ok(FinCat {
            name: name.into(),
            objects,
            morphisms: mors,
            identity: ident,
            compose: table,
            hom,
            obj_index,
            mor_index,
        })
    }

    pub fn builder(name: impl Into<String>) -> FinCatBuilder {
        FinCatBuilder::new(name)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> FinCat {
        self.name = name.into();
        self
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn n_obj(&self) -> usize {
        self.objects.len()
    }

    pub fn n_mor(&self) -> usize {
        self.morphisms.len()
    }

    pub fn obj(&self, id: &str) -> Result<usize> {
        self.obj_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownObject(id.to_string()))
    }

    pub fn mor(&self, id: &str) -> Result<usize> {
        self.mor_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownMorphism(id.to_string()))
    }

    pub fn obj_id(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn mor_id(&self, f: usize) -> &str {
        &self.morphisms[f].id
    }

    pub fn dom(&self, f: usize) -> usize {
        self.morphisms[f].dom
    }

    pub fn cod(&self, f: usize) -> usize {
        self.morphisms[f].cod
    }

    pub fn id(&self, o: usize) -> usize {
        self.identity[o]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identity[self.morphisms[f].dom] == f
    }

    /// `g ∘ f`, if composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose[g * self.morphisms.len() + f]
    }

    /// `g ∘ f` for a pair known to be composable.
    ///
    /// Panics on a non-composable pair; callers only use it after typing.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.compose(g, f).unwrap_or_else(|| {
            panic!(
                "{}: {} and {} are not composable",
                self.name,
                self.mor_id(g),
                self.mor_id(f)
            )
        })
    }

    /// Composite of a path given in diagrammatic-reverse order
    /// (`[h, g, f]` is `h ∘ g ∘ f`).
    pub fn comp_all(&self, path: &[usize]) -> usize {
        let mut it = path.iter().rev();
        let mut acc = *it.next().expect("empty path");
        for &g in it {
            acc = self.comp(g, acc);
        }
        acc
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.hom[a * self.objects.len() + b]
    }

    pub fn hom_size(&self, a: usize, b: usize) -> usize {
        self.hom(a, b).len()
    }

    /// Whether `f` has a two-sided inverse; returns it.
    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (a, b) = (self.dom(f), self.cod(f));
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&g| self.comp(g, f) == self.id(a) && self.comp(f, g) == self.id(b))
    }

    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.n_mor();
        (0..m).flat_map(move |g| (0..m).filter(move |&f| self.cod(f) == self.dom(g)).map(move |f| (g, f)))
    }

    pub fn non_identities(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_mor()).filter(move |&f| !self.is_identity(f))
    }

    /// Tables as strings, in the shape accepted by [`FinCat::from_tables`].
    #[allow(clippy::type_complexity)]
    pub fn to_tables(
        &self,
    ) -> (
        Vec<String>,
        Vec<(String, String, String)>,
        Vec<(String, String)>,
        Vec<(String, String, String)>,
    ) {
        let mors = self
            .morphisms
            .iter()
            .map(|m| (m.id.clone(), self.objects[m.dom].clone(), self.objects[m.cod].clone()))
            .collect();
        let ident = (0..self.n_obj())
            .map(|o| (self.objects[o].clone(), self.mor_id(self.id(o)).to_string()))
            .collect();
        let comp = self
            .composable_pairs()
            .map(|(g, f)| {
                (
                    self.mor_id(g).to_string(),
                    self.mor_id(f).to_string(),
                    self.mor_id(self.comp(g, f)).to_string(),
                )
            })
            .collect();
        (self.objects.clone(), mors, ident, comp)
    }
}

/// Exhaustive check of the unit and associativity laws.
///
/// `checked` counts composable pairs plus composable triples. Each pair is
/// one unit-law instance (trivially true when neither side is an identity).
pub fn validate_category(c: &FinCat) -> Report {
    let mut r = Report::new();
    for (g, f) in c.composable_pairs() {
        let gf = c.comp(g, f);
        let expected = if c.is_identity(g) {
            Some(f)
        } else if c.is_identity(f) {
            Some(g)
        } else {
            None
        };
        r.check(expected.is_none_or(|e| e == gf), "unit", || {
            format!("{}.{} = {}", c.mor_id(g), c.mor_id(f), c.mor_id(gf))
        });
    }
    for h in 0..c.n_mor() {
        for g in 0..c.n_mor() {
            if c.cod(g) != c.dom(h) {
                continue;
            }
            let hg = c.comp(h, g);
            for f in 0..c.n_mor() {
                if c.cod(f) != c.dom(g) {
                    continue;
                }
                let lhs = c.comp(h, c.comp(g, f));
                let rhs = c.comp(hg, f);
                r.check(lhs == rhs, "associativity", || {
                    format!(
                        "h={}, g={}, f={}: h.(g.f) = {} but (h.g).f = {}",
                        c.mor_id(h),
                        c.mor_id(g),
                        c.mor_id(f),
                        c.mor_id(lhs),
                        c.mor_id(rhs)
                    )
                });
            }
        }
    }
    r
}

fn op_name(name: &str) -> String {
    match name.strip_suffix("^op") {
        Some(base) => base.to_string(),
        None => format!("{name}^op"),
    }
}

/// The opposite category. Ids are preserved, so indices coincide with the
/// original's.
pub fn opposite(c: &FinCat) -> FinCat {
    let m = c.n_mor();
    let morphisms = c
        .morphisms
        .iter()
        .map(|mo| Morphism {
            id: mo.id.clone(),
            dom: mo.cod,
            cod: mo.dom,
        })
        .collect::<Vec<_>>();
    let mut compose = vec![None; m * m];
    for g in 0..m {
        for f in 0..m {
            compose[g * m + f] = c.compose[f * m + g];
        }
    }
    let n = c.n_obj();
    let mut hom = vec![Vec::new(); n * n];
    for (i, mo) in morphisms.iter().enumerate() {
        hom[mo.dom * n + mo.cod].push(i);
    }
    FinCat {
        name: op_name(&c.name),
        objects: c.objects.clone(),
        morphisms,
        identity: c.identity.clone(),
        compose,
        hom,
        obj_index: c.obj_index.clone(),
        mor_index: c.mor_index.clone(),
    }
}

pub fn pair_id(x: &str, y: &str) -> String {
    format!("({x},{y})")
}

/// The product category with componentwise composition. Object and
/// morphism ids are `"(x,y)"`.
pub fn product(c: &FinCat, d: &FinCat) -> FinCat {
    let objects = c
        .objects
        .iter()
        .flat_map(|x| d.objects.iter().map(move |y| pair_id(x, y)))
        .collect();
    let mut morphisms = Vec::with_capacity(c.n_mor() * d.n_mor());
    for f in &c.morphisms {
        for g in &d.morphisms {
            morphisms.push((
                pair_id(&f.id, &g.id),
                pair_id(&c.objects[f.dom], &d.objects[g.dom]),
                pair_id(&c.objects[f.cod], &d.objects[g.cod]),
            ));
        }
    }
    let identity = (0..c.n_obj())
        .flat_map(|x| {
            (0..d.n_obj()).map(move |y| {
                (
                    pair_id(c.obj_id(x), d.obj_id(y)),
                    pair_id(c.mor_id(c.id(x)), d.mor_id(d.id(y))),
                )
            })
        })
        .collect();
    let mut compose = Vec::new();
    for (g1, f1) in c.composable_pairs() {
        for (g2, f2) in d.composable_pairs() {
            compose.push((
                pair_id(c.mor_id(g1), d.mor_id(g2)),
                pair_id(c.mor_id(f1), d.mor_id(f2)),
                pair_id(c.mor_id(c.comp(g1, f1)), d.mor_id(d.comp(g2, f2))),
            ));
        }
    }
    FinCat::from_tables(format!("{}x{}", c.name, d.name), objects, morphisms, identity, compose)
        .expect("product of valid categories is well formed")
}

/// Incremental construction with implicit identities.
#[derive(Debug, Clone)]
pub struct FinCatBuilder {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<(String, String, String)>,
    identity_names: HashMap<String, String>,
    compose: Vec<(String, String, String)>,
}

impl FinCatBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        FinCatBuilder {
            name: name.into(),
            objects: Vec::new(),
            morphisms: Vec::new(),
            identity_names: HashMap::new(),
            compose: Vec::new(),
        }
    }

    pub fn object(mut self, id: impl Into<String>) -> Self {
        self.objects.push(id.into());
        self
    }

    pub fn objects<I, S>(mut self, ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.objects.extend(ids.into_iter().map(Into::into));
        self
    }

    pub fn morphism(mut self, id: impl Into<String>, dom: impl Into<String>, cod: impl Into<String>) -> Self {
        self.morphisms.push((id.into(), dom.into(), cod.into()));
        self
    }

    /// Override the default `id_<object>` name of an identity.
    pub fn identity(mut self, object: impl Into<String>, id: impl Into<String>) -> Self {
        self.identity_names.insert(object.into(), id.into());
        self
    }

    pub fn compose(mut self, g: impl Into<String>, f: impl Into<String>, gf: impl Into<String>) -> Self {
        self.compose.push((g.into(), f.into(), gf.into()));
        self
    }

    pub fn identity_name(&self, object: &str) -> String {
        self.identity_names
            .get(object)
            .cloned()
            .unwrap_or_else(|| format!("id_{object}"))
    }

    pub fn build(self) -> Result<FinCat> {
        let mut morphisms = self.morphisms.clone();
        let mut identity = Vec::new();
        for o in &self.objects {
            let i = self.identity_name(o);
            identity.push((o.clone(), i.clone()));
            morphisms.push((i.clone(), o.clone(), o.clone()));
        }
        let ids: HashSet<String> = identity.iter().map(|(_, i)| i.clone()).collect();
        let mut compose = self.compose.clone();
        for (id, d, c) in &morphisms {
            let (id_d, id_c) = (self.identity_name(d), self.identity_name(c));
            compose.push((id.clone(), id_d, id.clone()));
            if !ids.contains(id) {
                compose.push((id_c, id.clone(), id.clone()));
            }
        }
        FinCat::from_tables(self.name, self.objects, morphisms, identity, compose)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn walking_arrow_validates() {
        let c = fixtures::arrow();
        let r = validate_category(&c);
        assert!(r.ok(), "{r}");
        // pairs: id0.id0, a.id0, id1.a, id1.id1; triples: id0^3, a.id0.id0, id1.a.id0, id1.id1.a, id1^3
        assert_eq!(r.checked(), 4 + 5);
    }

    #[test]
    fn z2_validates_with_hand_counts() {
        let c = fixtures::z2();
        let r = validate_category(&c);
        assert!(r.ok());
        assert_eq!(r.checked(), 4 + 8);
    }

    #[test]
    fn idempotent_table_is_a_lawful_monoid() {
        // s.s = s with unit e is the two-element semilattice.
        let c = FinCat::builder("I2")
            .object("*")
            .identity("*", "e")
            .morphism("s", "*", "*")
            .compose("s", "s", "s")
            .build()
            .unwrap();
        assert!(validate_category(&c).ok());
    }

    #[test]
    fn broken_unit_is_located() {
        let c = FinCat::from_tables(
            "bad",
            vec!["*".into()],
            vec![
                ("e".into(), "*".into(), "*".into()),
                ("s".into(), "*".into(), "*".into()),
            ],
            vec![("*".into(), "e".into())],
            vec![
                ("e".into(), "e".into(), "e".into()),
                ("e".into(), "s".into(), "s".into()),
                ("s".into(), "e".into(), "e".into()),
                ("s".into(), "s".into(), "e".into()),
            ],
        )
        .unwrap();
        let r = validate_category(&c);
        assert!(!r.ok());
        assert_eq!(r.law(), Some("unit"));
        assert_eq!(r.counterexample().unwrap().detail, "s.e = e");
    }

    #[test]
    fn missing_composite_is_structural() {
        let err = FinCat::builder("C")
            .objects(["a", "b", "c"])
            .morphism("f", "a", "b")
            .morphism("g", "b", "c")
            .build()
            .unwrap_err();
        assert_eq!(
            err,
            Error::MissingComposite {
                g: "g".into(),
                f: "f".into()
            }
        );
    }

    #[test]
    fn unresolved_ids_are_structural() {
        let err = FinCat::builder("C")
            .object("a")
            .morphism("f", "a", "zz")
            .build()
            .unwrap_err();
        assert_eq!(err, Error::UnknownObject("zz".into()));
    }

    #[test]
    fn opposite_is_an_involution() {
        for c in fixtures::all() {
            let op = opposite(&c);
            assert!(validate_category(&op).ok());
            let back = opposite(&op);
            assert_eq!(back, c);
            assert_eq!(back.name(), c.name());
        }
    }

    #[test]
    fn opposite_of_arrow_reverses() {
        let op = opposite(&fixtures::arrow());
        let a = op.mor("a").unwrap();
        assert_eq!(op.obj_id(op.dom(a)), "1");
        assert_eq!(op.obj_id(op.cod(a)), "0");
        assert_eq!(opposite(&fixtures::terminal()), fixtures::terminal());
    }

    #[test]
    fn opposite_of_commutative_monoid_has_same_table() {
        let z = fixtures::z2();
        assert_eq!(opposite(&z), z);
    }

    #[test]
    fn products_count_and_validate() {
        let two = fixtures::arrow();
        let p = product(&two, &two);
        assert_eq!(p.n_obj(), 4);
        assert_eq!(p.n_mor(), 9);
        assert_eq!(p.non_identities().count(), 5);
        assert!(validate_category(&p).ok());

        let one = fixtures::terminal();
        for c in fixtures::all() {
            let q = product(&one, &c);
            assert_eq!(q.n_obj(), c.n_obj());
            assert_eq!(q.n_mor(), c.n_mor());
            assert!(validate_category(&q).ok());
        }
    }
}
