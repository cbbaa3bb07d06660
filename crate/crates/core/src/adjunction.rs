//! Adjunctions `F ⊣ G` between finite categories.
//!
//! The hom-set bijection `φ_{c,d}: D(Fc, d) -> C(c, Gd)` is stored as one
//! table per pair, aligned with `D.hom(Fc, d)`. Unit and counit are derived
//! from it (or it from them) and kept consistent.

use crate::finset::is_injective;
use crate::functor::{same_cat, vertical, whisker_left, whisker_right, Functor, NatTrans};
use crate::report::{Error, Outcome, Report, Result};
use crate::universal::{universal_morphism, Direction};

/// `tables[c * |D| + d][k]` is `φ` of the `k`-th morphism of `D(Fc, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomIso {
    tables: Vec<Vec<usize>>,
    n_d: usize,
}

impl HomIso {
    pub fn new(tables: Vec<Vec<usize>>, n_d: usize) -> HomIso {
        HomIso { tables, n_d }
    }

    pub fn table(&self, c: usize, d: usize) -> &[usize] {
        &self.tables[c * self.n_d + d]
    }

    pub fn table_mut(&mut self, c: usize, d: usize) -> &mut Vec<usize> {
        &mut self.tables[c * self.n_d + d]
    }
}

#[derive(Debug, Clone)]
pub struct Adjunction {
    pub left: Functor,
    pub right: Functor,
    pub phi: HomIso,
    pub unit: NatTrans,
    pub counit: NatTrans,
}

fn check_pair(f: &Functor, g: &Functor) -> Result<()> {
    if !same_cat(f.dom(), g.cod()) || !same_cat(f.cod(), g.dom()) {
        return Err(Error::Boundary(format!(
            "{} and {} do not go back and forth between the same categories",
            f.name(),
            g.name()
        )));
    }
    Ok(())
}

/// `φ(f)` for `f ∈ D(Fc, d)`.
pub fn phi_apply(f: &Functor, phi: &HomIso, c: usize, d: usize, m: usize) -> usize {
    let k = f.cod().hom(f.ob(c), d).iter().position(|&x| x == m).unwrap();
    phi.table(c, d)[k]
}

/// `φ⁻¹(h)` for `h ∈ C(c, Gd)`, if `φ_{c,d}` hits it.
pub fn phi_inverse(f: &Functor, phi: &HomIso, c: usize, d: usize, h: usize) -> Option<usize> {
    let k = phi.table(c, d).iter().position(|&x| x == h)?;
    Some(f.cod().hom(f.ob(c), d)[k])
}

/// Bijectivity of each `φ_{c,d}` and naturality
/// `φ(h ∘ f ∘ Fg) = Gh ∘ φ(f) ∘ g` for all `g: c' -> c`, `h: d -> d'`.
pub fn validate_adjunction(f: &Functor, g: &Functor, phi: &HomIso) -> Result<Report> {
    check_pair(f, g)?;
    let (cc, dd) = (f.dom(), f.cod());
    let mut r = Report::new();
    for c in 0..cc.n_obj() {
        for d in 0..dd.n_obj() {
            let t = phi.table(c, d);
            let src = dd.hom(f.ob(c), d);
            let tgt = cc.hom(c, g.ob(d));
            if t.len() != src.len() || t.iter().any(|&h| !tgt.contains(&h)) {
                return Err(Error::Structural(format!(
                    "φ at ({}, {}) is not a map D(F{}, {}) -> C({}, G{})",
                    cc.obj_id(c),
                    dd.obj_id(d),
                    cc.obj_id(c),
                    dd.obj_id(d),
                    cc.obj_id(c),
                    dd.obj_id(d)
                )));
            }
            r.check(
                src.len() == tgt.len() && is_injective(t, cc.n_mor()),
                "phi-bijective",
                || format!("φ at ({}, {})", cc.obj_id(c), dd.obj_id(d)),
            );
        }
    }
    if !r.ok() {
        return Ok(r);
    }
    for c in 0..cc.n_obj() {
        for d in 0..dd.n_obj() {
            for &m in dd.hom(f.ob(c), d) {
                let pm = phi_apply(f, phi, c, d, m);
                for c2 in 0..cc.n_obj() {
                    for &gm in cc.hom(c2, c) {
                        for d2 in 0..dd.n_obj() {
                            for &hm in dd.hom(d, d2) {
                                let lhs = phi_apply(f, phi, c2, d2, dd.comp_all(&[hm, m, f.mor(gm)]));
                                let rhs = cc.comp_all(&[g.mor(hm), pm, gm]);
                                r.check(lhs == rhs, "phi-naturality", || {
                                    format!("f = {}, g = {}, h = {}", dd.mor_id(m), cc.mor_id(gm), dd.mor_id(hm))
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(r)
}

/// The triangle identities `(ε•F)∘(F•η) = id_F` (`snake-left`) and
/// `(G•ε)∘(η•G) = id_G` (`snake-right`), componentwise.
pub fn snake_check(f: &Functor, g: &Functor, eta: &NatTrans, eps: &NatTrans) -> Result<Report> {
    check_pair(f, g)?;
    let idc = Functor::identity(f.dom());
    let idd = Functor::identity(f.cod());
    if eta.src() != &idc || eta.tgt() != &g.after(f)? {
        return Err(Error::Boundary(format!("{} is not id ⇒ G•F", eta.name())));
    }
    if eps.src() != &f.after(g)? || eps.tgt() != &idd {
        return Err(Error::Boundary(format!("{} is not F•G ⇒ id", eps.name())));
    }
    let left = vertical(&whisker_right(eps, f)?, &whisker_left(f, eta)?)?;
    let right = vertical(&whisker_left(g, eps)?, &whisker_right(eta, g)?)?;
    let (cc, dd) = (f.dom(), f.cod());
    let mut r = Report::new();
    for c in 0..cc.n_obj() {
        r.check(left.at(c) == dd.id(f.ob(c)), "snake-left", || {
            format!(
                "component at {}: {} instead of the identity",
                cc.obj_id(c),
                dd.mor_id(left.at(c))
            )
        });
    }
    for d in 0..dd.n_obj() {
        r.check(right.at(d) == cc.id(g.ob(d)), "snake-right", || {
            format!(
                "component at {}: {} instead of the identity",
                dd.obj_id(d),
                cc.mor_id(right.at(d))
            )
        });
    }
    Ok(r)
}

/// `φ(f) = Gf ∘ η_c`.
pub fn phi_from_unit(f: &Functor, g: &Functor, eta: &NatTrans) -> HomIso {
    let (cc, dd) = (f.dom(), f.cod());
    let mut tables = Vec::with_capacity(cc.n_obj() * dd.n_obj());
    for c in 0..cc.n_obj() {
        for d in 0..dd.n_obj() {
            tables.push(
                dd.hom(f.ob(c), d)
                    .iter()
                    .map(|&m| cc.comp(g.mor(m), eta.at(c)))
                    .collect(),
            );
        }
    }
    HomIso::new(tables, dd.n_obj())
}

impl Adjunction {
    /// Complete from `φ`: `η_c = φ(id_Fc)`, `ε_d = φ⁻¹(id_Gd)`.
    pub fn from_hom_iso(f: Functor, g: Functor, phi: HomIso) -> Result<Adjunction> {
        let r = validate_adjunction(&f, &g, &phi)?;
        if r.law() == Some("phi-bijective") {
            return Err(Error::Precondition(format!("φ is not bijective: {r}")));
        }
        let (cc, dd) = (f.dom().clone(), f.cod().clone());
        let unit_comps = (0..cc.n_obj())
            .map(|c| phi_apply(&f, &phi, c, f.ob(c), dd.id(f.ob(c))))
            .collect();
        let counit_comps = (0..dd.n_obj())
            .map(|d| phi_inverse(&f, &phi, g.ob(d), d, cc.id(g.ob(d))).unwrap())
            .collect();
        let unit = NatTrans::new("η", Functor::identity(&cc), g.after(&f)?, unit_comps)?;
        let counit = NatTrans::new("ε", f.after(&g)?, Functor::identity(&dd), counit_comps)?;
        Ok(Adjunction {
            left: f,
            right: g,
            phi,
            unit,
            counit,
        })
    }

    /// Complete from unit and counit: `φ(f) = Gf ∘ η_c`.
    pub fn from_unit_counit(f: Functor, g: Functor, unit: NatTrans, counit: NatTrans) -> Result<Adjunction> {
        check_pair(&f, &g)?;
        let phi = phi_from_unit(&f, &g, &unit);
        Ok(Adjunction {
            left: f,
            right: g,
            phi,
            unit,
            counit,
        })
    }

    /// Full certificate: `φ` bijective and natural, unit and counit
    /// natural and re-derivable from `φ`, snake equations.
    pub fn validate(&self) -> Result<Report> {
        let mut r = validate_adjunction(&self.left, &self.right, &self.phi)?;
        r.merge(crate::functor::validate_natural(&self.unit)?);
        r.merge(crate::functor::validate_natural(&self.counit)?);
        if r.ok() {
            let again = Adjunction::from_hom_iso(self.left.clone(), self.right.clone(), self.phi.clone())?;
            r.check(again.unit == self.unit, "unit-consistency", || {
                "η differs from φ(id_F)".into()
            });
            r.check(again.counit == self.counit, "counit-consistency", || {
                "ε differs from φ⁻¹(id_G)".into()
            });
        }
        r.merge(snake_check(&self.left, &self.right, &self.unit, &self.counit)?);
        Ok(r)
    }

    pub fn identity(c: &crate::functor::CatRef) -> Adjunction {
        let id = Functor::identity(c);
        let n = NatTrans::identity(&id);
        Adjunction::from_unit_counit(id.clone(), id, n.clone(), n).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Find `F` with `F ⊣ G`.
    Left,
    /// Find `H` with `G ⊣ H`.
    Right,
}

/// Build the missing adjoint of `G` from universal morphisms, one per
/// object. Absent (naming the object) when one does not exist.
pub fn adjoint_from_universals(g: &Functor, side: Side) -> Result<Outcome<Adjunction>> {
    let (dd, cc) = (g.dom().clone(), g.cod().clone());
    let direction = match side {
        Side::Left => Direction::FromObject,
        Side::Right => Direction::ToObject,
    };
    let mut witnesses = Vec::with_capacity(cc.n_obj());
    for c in 0..cc.n_obj() {
        match universal_morphism(c, g, direction) {
            Some(w) => witnesses.push(w),
            None => {
                return Ok(Outcome::Absent(format!(
                    "no universal morphism {} {} to {}",
                    match side {
                        Side::Left => "from",
                        Side::Right => "into",
                    },
                    cc.obj_id(c),
                    g.name()
                )))
            }
        }
    }
    let obj_map: Vec<usize> = witnesses.iter().map(|w| w.vertex).collect();
    // On morphisms: the unique factorization of η_{c'} ∘ f through η_c (or
    // of f ∘ ε_c through ε_{c'}).
    let mut mor_map = Vec::with_capacity(cc.n_mor());
    for f in 0..cc.n_mor() {
        let (c, c2) = (cc.dom(f), cc.cod(f));
        let (w, w2) = (&witnesses[c], &witnesses[c2]);
        let h = dd
            .hom(w.vertex, w2.vertex)
            .iter()
            .copied()
            .find(|&h| match side {
                Side::Left => cc.comp(g.mor(h), w.arrow) == cc.comp(w2.arrow, f),
                Side::Right => cc.comp(w2.arrow, g.mor(h)) == cc.comp(f, w.arrow),
            })
            .expect("universal morphisms factor");
        mor_map.push(h);
    }
    let adj = Functor::new(
        match side {
            Side::Left => format!("{}^L", g.name()),
            Side::Right => format!("{}^R", g.name()),
        },
        cc.clone(),
        dd.clone(),
        obj_map,
        mor_map,
    )?;
    let arrows: Vec<usize> = witnesses.iter().map(|w| w.arrow).collect();
    Ok(Outcome::Found(match side {
        Side::Left => {
            let unit = NatTrans::new("η", Functor::identity(&cc), g.after(&adj)?, arrows)?;
            let counit_comps = (0..dd.n_obj())
                .map(|d| {
                    // ε_d: F G d -> d, the factorization of id_Gd.
                    let gd = g.ob(d);
                    dd.hom(adj.ob(gd), d)
                        .iter()
                        .copied()
                        .find(|&h| cc.comp(g.mor(h), unit.at(gd)) == cc.id(gd))
                        .expect("universal morphisms factor")
                })
                .collect();
            let counit = NatTrans::new("ε", adj.after(g)?, Functor::identity(&dd), counit_comps)?;
            Adjunction::from_unit_counit(adj, g.clone(), unit, counit)?
        }
        Side::Right => {
            let counit = NatTrans::new("ε", g.after(&adj)?, Functor::identity(&cc), arrows)?;
            let unit_comps = (0..dd.n_obj())
                .map(|d| {
                    let gd = g.ob(d);
                    dd.hom(d, adj.ob(gd))
                        .iter()
                        .copied()
                        .find(|&h| cc.comp(counit.at(gd), g.mor(h)) == cc.id(gd))
                        .expect("universal morphisms factor")
                })
                .collect();
            let unit = NatTrans::new("η", Functor::identity(&dd), adj.after(g)?, unit_comps)?;
            Adjunction::from_unit_counit(g.clone(), adj, unit, counit)?
        }
    }))
}

/// From an adjoint equivalence's data `η: id ≅ G•F`, `τ: F•G ≅ id`, the
/// adjunction with unit `η` and counit
/// `ε_d = τ_d ∘ F(η⁻¹_{Gd}) ∘ τ⁻¹_{FGd}`.
pub fn equivalence_to_adjunction(f: &Functor, g: &Functor, eta: &NatTrans, tau: &NatTrans) -> Result<Adjunction> {
    check_pair(f, g)?;
    let eta_inv = eta
        .inverse()
        .ok_or_else(|| Error::Precondition(format!("{} is not invertible", eta.name())))?;
    let tau_inv = tau
        .inverse()
        .ok_or_else(|| Error::Precondition(format!("{} is not invertible", tau.name())))?;
    let dd = f.cod();
    let comps = (0..dd.n_obj())
        .map(|d| {
            let gd = g.ob(d);
            dd.comp_all(&[tau.at(d), f.mor(eta_inv.at(gd)), tau_inv.at(f.ob(gd))])
        })
        .collect();
    let counit = NatTrans::new("ε", f.after(g)?, Functor::identity(dd), comps)?;
    Adjunction::from_unit_counit(f.clone(), g.clone(), eta.clone(), counit)
}

/// For `F ⊣ G` and `F' ⊣ G` with units `η`, `η'`: the unique
/// `α: F ⇒ F'` with `Gα ∘ η = η'`, certified natural, invertible and
/// compatible with the counits (`ε = ε' ∘ (α•G)`).
pub fn adjunction_comparison(a: &Adjunction, b: &Adjunction) -> Result<(NatTrans, Report)> {
    if a.right != b.right {
        return Err(Error::Boundary("adjunctions do not share a right adjoint".into()));
    }
    let (f, f2, g) = (&a.left, &b.left, &a.right);
    let (cc, dd) = (f.dom(), f.cod());
    let mut r = Report::new();
    let mut comps = Vec::with_capacity(cc.n_obj());
    for c in 0..cc.n_obj() {
        let cands: Vec<usize> = dd
            .hom(f.ob(c), f2.ob(c))
            .iter()
            .copied()
            .filter(|&h| cc.comp(g.mor(h), a.unit.at(c)) == b.unit.at(c))
            .collect();
        r.check(cands.len() == 1, "comparison-unique", || {
            format!("{} candidates at {}", cands.len(), cc.obj_id(c))
        });
        comps.push(*cands.first().unwrap_or(&dd.id(f.ob(c))));
    }
    let alpha = NatTrans::new("α", f.clone(), f2.clone(), comps)?;
    if !r.ok() {
        return Ok((alpha, r));
    }
    r.merge(crate::functor::validate_natural(&alpha)?);
    r.check(alpha.is_iso(), "comparison-iso", || "α is not invertible".into());
    let rebuilt = vertical(&b.counit, &whisker_right(&alpha, g)?)?;
    r.check(
        rebuilt.components() == a.counit.components(),
        "comparison-counit",
        || "ε ≠ ε' ∘ (α•G)".into(),
    );
    Ok((alpha, r))
}

/// Replace the left adjoint by an isomorphic functor along `α: F ≅ F'`:
/// unit `(G•α)∘η`, counit `ε ∘ (α⁻¹•G)`.
pub fn replace_left(adj: &Adjunction, alpha: &NatTrans) -> Result<Adjunction> {
    let inv = alpha
        .inverse()
        .ok_or_else(|| Error::Precondition(format!("{} is not invertible", alpha.name())))?;
    let g = &adj.right;
    let unit = vertical(&whisker_left(g, alpha)?, &adj.unit)?.with_name("η'");
    let counit = vertical(&adj.counit, &whisker_right(&inv, g)?)?.with_name("ε'");
    Adjunction::from_unit_counit(alpha.tgt().clone(), g.clone(), unit, counit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::functor::CatRef;
    use std::sync::Arc;

    fn arc(c: crate::cat::FinCat) -> CatRef {
        Arc::new(c)
    }

    fn bang_terminal() -> (Functor, Functor) {
        let (two, one) = (arc(fixtures::arrow()), arc(fixtures::terminal()));
        (Functor::constant(0, &two, &one), Functor::pick(1, &two))
    }

    #[test]
    fn bang_left_adjoint_to_terminal_pick() {
        let (bang, t) = bang_terminal();
        let two = t.cod().clone();
        let phi = HomIso::new((0..2).map(|c| vec![two.hom(c, 1)[0]]).collect(), 1);
        assert!(validate_adjunction(&bang, &t, &phi).unwrap().ok());
        let adj = Adjunction::from_hom_iso(bang, t, phi.clone()).unwrap();
        assert_eq!(adj.unit.components(), &[two.mor("a").unwrap(), two.id(1)]);
        assert!(adj.validate().unwrap().ok());
        let back = phi_from_unit(&adj.left, &adj.right, &adj.unit);
        assert_eq!(back, phi);
    }

    #[test]
    fn synthesized_left_adjoint_of_terminal_pick() {
        let (bang, t) = bang_terminal();
        let adj = adjoint_from_universals(&t, Side::Left).unwrap().found().unwrap();
        assert_eq!(adj.left, bang);
        assert!(adj.validate().unwrap().ok());
        let disc = arc(fixtures::discrete(2));
        let p = Functor::pick(0, &disc);
        assert!(!adjoint_from_universals(&p, Side::Left).unwrap().is_found());
    }

    #[test]
    fn identity_adjunction() {
        let z = arc(fixtures::z2());
        let adj = Adjunction::identity(&z);
        assert!(adj.validate().unwrap().ok());
        let id = Functor::identity(&z);
        let eta = NatTrans::identity(&id);
        let e = equivalence_to_adjunction(&id, &id, &eta, &eta).unwrap();
        assert_eq!(e.counit, eta);
    }

    #[test]
    fn snake_locates_perturbed_unit() {
        let z = arc(fixtures::z2());
        let id = Functor::identity(&z);
        let eps = NatTrans::identity(&id);
        let eta = NatTrans::from_ids("η", id.clone(), id.clone(), &[("*", "s")]).unwrap();
        let r = snake_check(&id, &id, &eta, &eps).unwrap();
        assert_eq!(r.law(), Some("snake-left"));
        assert!(r.counterexample().unwrap().detail.starts_with("component at *"));
    }

    #[test]
    fn scrambled_phi_is_not_natural() {
        // Swapping inside an abelian hom-monoid is natural, so mix in an
        // arrow to get a hom-set the swap does not commute with.
        let (z, two) = (arc(fixtures::z2()), arc(fixtures::arrow()));
        let c = arc(crate::cat::product(&z, &two));
        let adj = Adjunction::identity(&c);
        let mut phi = adj.phi.clone();
        let (x, y) = (c.obj("(*,0)").unwrap(), c.obj("(*,1)").unwrap());
        phi.table_mut(x, y).swap(0, 1);
        let r = validate_adjunction(&adj.left, &adj.right, &phi).unwrap();
        assert_eq!(r.law(), Some("phi-naturality"));
    }
}
