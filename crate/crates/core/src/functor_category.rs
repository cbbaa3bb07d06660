//! Enumeration of functors and natural transformations, functor categories,
//! diagonal functors and full faithfulness.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cat::{pair_id, FinCat};
use crate::config::Guard;
use crate::functor::{same_cat, vertical, CatRef, Functor, NatTrans};
use crate::report::{Error, Report, Result};

/// All functors `C -> D`, sorted by (object map, morphism map).
pub fn enumerate_functors(c: &CatRef, d: &CatRef, guard: &Guard) -> Result<Vec<Functor>> {
    let maps = (d.n_obj() as f64).powi(c.n_obj() as i32);
    if maps > guard.max_object_maps as f64 {
        return Err(Error::GuardExceeded(format!(
            "{}^{} candidate object maps for functors {} -> {} (limit {})",
            d.n_obj(),
            c.n_obj(),
            c.name(),
            d.name(),
            guard.max_object_maps
        )));
    }
    // Non-identity morphisms grouped by the later of their endpoints, so
    // they are assigned as soon as both endpoints are.
    let mut by_obj: Vec<Vec<usize>> = vec![Vec::new(); c.n_obj()];
    for f in c.non_identities() {
        by_obj[c.dom(f).max(c.cod(f))].push(f);
    }
    let order: Vec<usize> = by_obj.iter().flatten().copied().collect();
    let mut pos = vec![usize::MAX; c.n_mor()];
    for (i, &f) in order.iter().enumerate() {
        pos[f] = i;
    }
    for a in 0..c.n_obj() {
        pos[c.id(a)] = usize::MAX; // identities are fixed once objects are
    }
    // Composition constraints, attached to the step that completes them.
    let mut constraints: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); order.len()];
    for (g, f) in c.composable_pairs() {
        if c.is_identity(g) || c.is_identity(f) {
            continue;
        }
        let h = c.comp(g, f);
        let step = [g, f, h]
            .iter()
            .filter(|&&x| !c.is_identity(x))
            .map(|&x| pos[x])
            .max()
            .unwrap();
        constraints[step].push((g, f, h));
    }

    struct St<'a> {
        c: &'a FinCat,
        d: &'a FinCat,
        by_obj: &'a [Vec<usize>],
        constraints: &'a [Vec<(usize, usize, usize)>],
        pos: &'a [usize],
        obj: Vec<usize>,
        mor: Vec<usize>,
        out: Vec<(Vec<usize>, Vec<usize>)>,
    }

    fn image(st: &St, x: usize) -> usize {
        if st.c.is_identity(x) {
            st.d.id(st.obj[st.c.dom(x)])
        } else {
            st.mor[x]
        }
    }

    fn objects(st: &mut St, a: usize, budget: &mut crate::config::Budget) -> Result<()> {
        if a == st.c.n_obj() {
            let mut mor = st.mor.clone();
            for x in 0..st.c.n_obj() {
                mor[st.c.id(x)] = st.d.id(st.obj[x]);
            }
            st.out.push((st.obj.clone(), mor));
            return Ok(());
        }
        for x in 0..st.d.n_obj() {
            budget.spend()?;
            st.obj[a] = x;
            morphisms(st, a, 0, budget)?;
        }
        Ok(())
    }

    fn morphisms(st: &mut St, a: usize, i: usize, budget: &mut crate::config::Budget) -> Result<()> {
        if i == st.by_obj[a].len() {
            return objects(st, a + 1, budget);
        }
        let f = st.by_obj[a][i];
        let (x, y) = (st.obj[st.c.dom(f)], st.obj[st.c.cod(f)]);
        let cands = st.d.hom(x, y).to_vec();
        for u in cands {
            budget.spend()?;
            st.mor[f] = u;
            let ok = st.constraints[st.pos[f]]
                .iter()
                .all(|&(g, h, gh)| st.d.compose(image(st, g), image(st, h)) == Some(image(st, gh)));
            if ok {
                morphisms(st, a, i + 1, budget)?;
            }
        }
        st.mor[f] = usize::MAX;
        Ok(())
    }

    let mut budget = guard.budget(&format!("functors {} -> {}", c.name(), d.name()));
    let mut st = St {
        c,
        d,
        by_obj: &by_obj,
        constraints: &constraints,
        pos: &pos,
        obj: vec![0; c.n_obj()],
        mor: vec![usize::MAX; c.n_mor()],
        out: Vec::new(),
    };
    objects(&mut st, 0, &mut budget)?;
    let mut out = st.out;
    out.sort();
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(i, (o, m))| {
            Functor::new(format!("F{i}"), c.clone(), d.clone(), o, m).expect("enumerated maps are total")
        })
        .collect())
}

/// All natural transformations `F ⇒ G`, sorted by component vector.
pub fn enumerate_naturals(f: &Functor, g: &Functor, guard: &Guard) -> Result<Vec<NatTrans>> {
    if !same_cat(f.dom(), g.dom()) || !same_cat(f.cod(), g.cod()) {
        return Err(Error::Boundary(format!(
            "{} and {} are not parallel",
            f.name(),
            g.name()
        )));
    }
    let (c, d) = (f.dom().clone(), f.cod().clone());
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); c.n_obj()];
    for m in c.non_identities() {
        checks[c.dom(m).max(c.cod(m))].push(m);
    }
    let mut budget = guard.budget(&format!("transformations {} => {}", f.name(), g.name()));
    let mut comps = vec![0; c.n_obj()];
    let mut out = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn go(
        a: usize,
        c: &FinCat,
        d: &FinCat,
        f: &Functor,
        g: &Functor,
        checks: &[Vec<usize>],
        comps: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        budget: &mut crate::config::Budget,
    ) -> Result<()> {
        if a == c.n_obj() {
            out.push(comps.clone());
            return Ok(());
        }
        for &u in d.hom(f.ob(a), g.ob(a)) {
            budget.spend()?;
            comps[a] = u;
            let natural = checks[a]
                .iter()
                .all(|&m| d.comp(g.mor(m), comps[c.dom(m)]) == d.comp(comps[c.cod(m)], f.mor(m)));
            if natural {
                go(a + 1, c, d, f, g, checks, comps, out, budget)?;
            }
        }
        Ok(())
    }

    go(0, &c, &d, f, g, &checks, &mut comps, &mut out, &mut budget)?;
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(i, cs)| {
            NatTrans::new(format!("{}⇒{}#{i}", f.name(), g.name()), f.clone(), g.clone(), cs)
                .expect("enumerated components are well shaped")
        })
        .collect())
}

/// A functor category together with the index from its object and
/// morphism positions back to functor and transformation values.
#[derive(Debug, Clone)]
pub struct FunctorCategory {
    pub cat: CatRef,
    functors: Vec<Functor>,
    nats: Vec<NatTrans>,
    lookup: HashMap<(Vec<usize>, Vec<usize>), usize>,
}

impl FunctorCategory {
    /// Assemble from a list of functors (objects) and, for each ordered
    /// pair, all transformations between them. Ids are canonical
    /// serializations.
    pub fn assemble(name: impl Into<String>, functors: Vec<Functor>, nats: Vec<NatTrans>) -> Result<FunctorCategory> {
        let ids = functor_ids(&functors);
        let mut objs: Vec<(String, Functor)> = ids.into_iter().zip(functors).collect();
        objs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut fidx: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::new();
        for (i, (_, f)) in objs.iter().enumerate() {
            fidx.insert((f.obj_map().to_vec(), f.mor_map().to_vec()), i);
        }
        let key = |f: &Functor| -> Result<usize> {
            fidx.get(&(f.obj_map().to_vec(), f.mor_map().to_vec()))
                .copied()
                .ok_or_else(|| Error::Structural(format!("{} is not an object here", f.name())))
        };
        let mut mors: Vec<(String, usize, usize, NatTrans)> = Vec::with_capacity(nats.len());
        for n in nats {
            let (s, t) = (key(n.src())?, key(n.tgt())?);
            let id = format!("{}⇒{}:{}", objs[s].0, objs[t].0, n.signature());
            mors.push((id, s, t, n));
        }
        mors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut nidx: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
        for (i, (_, s, t, n)) in mors.iter().enumerate() {
            nidx.insert((*s, *t, n.components().to_vec()), i);
        }
        let mut identity = Vec::new();
        for (i, (oid, f)) in objs.iter().enumerate() {
            let idn = NatTrans::identity(f);
            let j = nidx
                .get(&(i, i, idn.components().to_vec()))
                .ok_or_else(|| Error::Structural(format!("identity on {oid} is missing")))?;
            identity.push((oid.clone(), mors[*j].0.clone()));
        }
        let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); objs.len()];
        for (i, m) in mors.iter().enumerate() {
            by_src[m.1].push(i);
        }
        let mut compose = Vec::new();
        for (fid, fs, ft, fnat) in &mors {
            for &gi in &by_src[*ft] {
                let (gid, _, gt, gnat) = &mors[gi];
                let comp = vertical(gnat, fnat)?;
                let hi = nidx
                    .get(&(*fs, *gt, comp.components().to_vec()))
                    .copied()
                    .ok_or_else(|| Error::Structural(format!("composite {gid}.{fid} is not listed")))?;
                compose.push((gid.clone(), fid.clone(), mors[hi].0.clone()));
            }
        }
        let cat = FinCat::from_tables(
            name,
            objs.iter().map(|o| o.0.clone()).collect(),
            mors.iter()
                .map(|(id, s, t, _)| (id.clone(), objs[*s].0.clone(), objs[*t].0.clone()))
                .collect(),
            identity,
            compose,
        )?;
        let cat = Arc::new(cat);
        Ok(FunctorCategory {
            functors: objs.into_iter().map(|(id, f)| f.with_name(id)).collect(),
            nats: mors.into_iter().map(|m| m.3).collect(),
            cat,
            lookup: fidx,
        })
    }

    pub fn functor(&self, o: usize) -> &Functor {
        &self.functors[o]
    }

    pub fn nat(&self, m: usize) -> &NatTrans {
        &self.nats[m]
    }

    pub fn functors(&self) -> &[Functor] {
        &self.functors
    }

    pub fn nats(&self) -> &[NatTrans] {
        &self.nats
    }

    /// Object position of a functor value, if present.
    pub fn object_of(&self, f: &Functor) -> Option<usize> {
        self.lookup.get(&(f.obj_map().to_vec(), f.mor_map().to_vec())).copied()
    }

    /// Morphism position of a transformation value, if present.
    pub fn morphism_of(&self, n: &NatTrans) -> Option<usize> {
        let (s, t) = (self.object_of(n.src())?, self.object_of(n.tgt())?);
        self.cat
            .hom(s, t)
            .iter()
            .copied()
            .find(|&m| self.nats[m].components() == n.components())
    }
}

/// Canonical ids `a↦x;b↦y`, extended by the morphism map when two
/// functors share an object map.
fn functor_ids(functors: &[Functor]) -> Vec<String> {
    let base: Vec<String> = functors.iter().map(|f| f.obj_signature()).collect();
    let mut count: HashMap<&str, usize> = HashMap::new();
    for b in &base {
        *count.entry(b.as_str()).or_default() += 1;
    }
    functors
        .iter()
        .zip(&base)
        .map(|(f, b)| {
            if count[b.as_str()] > 1 {
                format!("{b}|{}", f.mor_signature())
            } else {
                b.clone()
            }
        })
        .collect()
}

/// The functor category `[C, D]`.
pub fn functor_category(c: &CatRef, d: &CatRef, guard: &Guard) -> Result<FunctorCategory> {
    let functors = enumerate_functors(c, d, guard)?;
    let mut nats = Vec::new();
    for f in &functors {
        for g in &functors {
            nats.extend(enumerate_naturals(f, g, guard)?);
        }
    }
    FunctorCategory::assemble(format!("[{},{}]", c.name(), d.name()), functors, nats)
}

/// The full subcategory of `[C, D]` on the given functors.
pub fn full_subcategory(name: impl Into<String>, functors: Vec<Functor>, guard: &Guard) -> Result<FunctorCategory> {
    let mut nats = Vec::new();
    for f in &functors {
        for g in &functors {
            nats.extend(enumerate_naturals(f, g, guard)?);
        }
    }
    FunctorCategory::assemble(name, functors, nats)
}

/// The constant diagram `Δ_J c`.
pub fn const_diagram(c: &str, j: &CatRef, cat: &CatRef) -> Result<Functor> {
    let o = cat.obj(c)?;
    Ok(Functor::constant(o, j, cat))
}

/// `Δ f`: the transformation `Δc ⇒ Δc'` with every component `f`.
pub fn const_nat(f: usize, j: &CatRef, cat: &CatRef) -> NatTrans {
    let src = Functor::constant(cat.dom(f), j, cat);
    let tgt = Functor::constant(cat.cod(f), j, cat);
    NatTrans::new(format!("Δ{}", cat.mor_id(f)), src, tgt, vec![f; j.n_obj()]).expect("constant family is well shaped")
}

/// The diagonal functor `C -> [J, C]` into the given functor category.
pub fn delta_functor(j: &CatRef, cat: &CatRef, fc: &FunctorCategory) -> Result<Functor> {
    let mut obj_map = Vec::with_capacity(cat.n_obj());
    for c in 0..cat.n_obj() {
        let k = Functor::constant(c, j, cat);
        obj_map.push(
            fc.object_of(&k)
                .ok_or_else(|| Error::Structural(format!("Δ{} missing from {}", cat.obj_id(c), fc.cat.name())))?,
        );
    }
    let mut mor_map = Vec::with_capacity(cat.n_mor());
    for f in 0..cat.n_mor() {
        let n = const_nat(f, j, cat);
        mor_map.push(
            fc.morphism_of(&n)
                .ok_or_else(|| Error::Structural(format!("Δ{} missing from {}", cat.mor_id(f), fc.cat.name())))?,
        );
    }
    Functor::new(format!("Δ_{}", j.name()), cat.clone(), fc.cat.clone(), obj_map, mor_map)
}

/// Whether every hom-set map `C(a,b) -> D(Fa,Fb)` is a bijection. A
/// failure of injectivity is reported under `faithful`, of surjectivity
/// under `full`.
pub fn fully_faithful_check(f: &Functor) -> Report {
    let (c, d) = (f.dom(), f.cod());
    let mut r = Report::new();
    for a in 0..c.n_obj() {
        for b in 0..c.n_obj() {
            let (x, y) = (f.ob(a), f.ob(b));
            let mut hit = vec![false; d.n_mor()];
            let mut injective = true;
            for &m in c.hom(a, b) {
                let u = f.mor(m);
                injective &= !hit[u];
                hit[u] = true;
            }
            let pair = || {
                format!(
                    "hom({},{}) -> hom({},{})",
                    c.obj_id(a),
                    c.obj_id(b),
                    d.obj_id(x),
                    d.obj_id(y)
                )
            };
            r.check(injective, "faithful", || format!("{}: not injective", pair()));
            let surjective = d.hom(x, y).iter().all(|&u| hit[u]);
            r.check(surjective, "full", || format!("{}: not surjective", pair()));
        }
    }
    r
}

/// Naturality of a family over a product category `C × D`, checked
/// separately in each variable: squares at `(f, id)` and `(id, g)` only.
pub fn natural_in_each_variable(alpha: &NatTrans, c: &FinCat, d: &FinCat) -> Result<Report> {
    let p = alpha.dom_cat();
    let e = alpha.cod_cat();
    let (s, t) = (alpha.src(), alpha.tgt());
    let mut r = Report::new();
    let square = |m: usize, r: &mut Report| {
        let lhs = e.comp(t.mor(m), alpha.at(p.dom(m)));
        let rhs = e.comp(alpha.at(p.cod(m)), s.mor(m));
        r.check(lhs == rhs, "naturality", || p.mor_id(m).to_string());
    };
    for f in 0..c.n_mor() {
        for y in 0..d.n_obj() {
            let m = p.mor(&pair_id(c.mor_id(f), d.mor_id(d.id(y))))?;
            square(m, &mut r);
        }
    }
    for x in 0..c.n_obj() {
        for g in 0..d.n_mor() {
            let m = p.mor(&pair_id(c.mor_id(c.id(x)), d.mor_id(g)))?;
            square(m, &mut r);
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::validate_category;
    use crate::fixtures;
    use crate::functor::{validate_functor, validate_natural};

    fn arc(c: FinCat) -> CatRef {
        Arc::new(c)
    }

    #[test]
    fn small_functor_categories() {
        let g = Guard::default();
        let (one, two) = (arc(fixtures::terminal()), arc(fixtures::arrow()));
        let fc = functor_category(&one, &two, &g).unwrap();
        assert_eq!((fc.cat.n_obj(), fc.cat.n_mor()), (2, 3));
        let fc = functor_category(&two, &one, &g).unwrap();
        assert_eq!((fc.cat.n_obj(), fc.cat.n_mor()), (1, 1));
        let fc = functor_category(&two, &two, &g).unwrap();
        assert_eq!(fc.cat.n_obj(), 3);
        let ids: Vec<&str> = fc.cat.objects().iter().map(|s| s.as_str()).collect();
        assert_eq!(ids, ["0↦0;1↦0", "0↦0;1↦1", "0↦1;1↦1"]);
        assert!(validate_category(&fc.cat).ok());
    }

    #[test]
    fn colliding_object_maps_get_morphism_suffix() {
        let z = arc(fixtures::z2());
        let fc = functor_category(&z, &z, &Guard::default()).unwrap();
        assert_eq!(fc.cat.n_obj(), 2);
        assert!(fc.cat.objects().iter().all(|id| id.contains('|')));
        assert!(validate_category(&fc.cat).ok());
    }

    #[test]
    fn enumerated_values_validate() {
        let g = Guard::default();
        let c = arc(fixtures::parallel());
        let d = arc(fixtures::square());
        for f in enumerate_functors(&c, &d, &g).unwrap() {
            assert!(validate_functor(&f).ok());
        }
    }

    #[test]
    fn guard_is_enforced() {
        let c = arc(fixtures::discrete(4));
        let d = arc(fixtures::discrete(4));
        let err = enumerate_functors(&c, &d, &Guard::with_budget(100)).unwrap_err();
        assert!(matches!(err, Error::GuardExceeded(_)));
        assert_eq!(enumerate_functors(&c, &d, &Guard::with_budget(256)).unwrap().len(), 256);
    }

    #[test]
    fn collapse_is_not_full() {
        let (one, two) = (arc(fixtures::terminal()), arc(fixtures::arrow()));
        let bang = Functor::constant(0, &two, &one);
        let r = fully_faithful_check(&bang);
        assert_eq!(r.law(), Some("full"));
        assert!(r.counterexample().unwrap().detail.starts_with("hom(1,0)"));
        assert!(fully_faithful_check(&Functor::identity(&two)).ok());
    }

    #[test]
    fn delta_sends_morphisms_to_constant_families() {
        let g = Guard::default();
        let (j, c) = (arc(fixtures::arrow()), arc(fixtures::chain(3)));
        let fc = functor_category(&j, &c, &g).unwrap();
        let delta = delta_functor(&j, &c, &fc).unwrap();
        assert!(validate_functor(&delta).ok());
        let f = c.mor("0<2").unwrap();
        let n = fc.nat(delta.mor(f));
        assert!(n.components().iter().all(|&u| u == f));
        assert!(validate_natural(n).unwrap().ok());
        let k = const_diagram("1", &j, &c).unwrap();
        assert!(k.mor_map().iter().all(|&u| u == c.id(1)));
    }
}
