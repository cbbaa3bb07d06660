//! Named categories, functors and generators, and the typing of terms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use fincat::functor::{same_cat, CatRef};
use fincat::{validate_category, validate_functor, validate_natural, FinCat, Functor, NatTrans};

use crate::ast::Term;
use crate::DiagramError;

/// A horizontal string of wires, outermost functor first, together with the
/// categories at its two ends. The empty string denotes an identity functor,
/// in which case `outer == inner`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Boundary {
    pub functors: Vec<String>,
    pub outer: String,
    pub inner: String,
}

impl Boundary {
    pub fn len(&self) -> usize {
        self.functors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functors.is_empty()
    }

    /// The category in the region just left of wire `p` (or right of the
    /// last wire when `p == len`).
    pub fn region(&self, env: &Environment, p: usize) -> String {
        if p == 0 {
            self.outer.clone()
        } else {
            env.functor_ends(&self.functors[p - 1])
                .map(|(_, dom)| dom.to_string())
                .unwrap_or_else(|| self.inner.clone())
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.functors.is_empty() {
            write!(f, "id({})", self.outer)
        } else {
            write!(f, "{}", self.functors.join("."))
        }
    }
}

/// Typing of a term: the wire strings along its bottom and top edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interface {
    pub bottom: Boundary,
    pub top: Boundary,
}

impl Interface {
    pub fn outer(&self) -> &str {
        &self.bottom.outer
    }

    pub fn inner(&self) -> &str {
        &self.bottom.inner
    }
}

impl fmt::Display for Interface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.bottom, self.top)
    }
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub interface: Interface,
    pub nat: NatTrans,
}

#[derive(Debug, Clone, Default)]
pub struct Environment {
    categories: BTreeMap<String, CatRef>,
    functors: BTreeMap<String, (Functor, String, String)>,
    generators: BTreeMap<String, Generator>,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    fn fresh(&self, name: &str) -> Result<(), DiagramError> {
        if self.categories.contains_key(name) || self.functors.contains_key(name) || self.generators.contains_key(name)
        {
            return Err(DiagramError::Invalid(format!("name `{name}` is declared twice")));
        }
        if name == "id" {
            return Err(DiagramError::Invalid("`id` is reserved".into()));
        }
        Ok(())
    }

    pub fn add_category(&mut self, name: &str, c: FinCat) -> Result<CatRef, DiagramError> {
        self.fresh(name)?;
        let r = validate_category(&c);
        if !r.ok() {
            return Err(DiagramError::Invalid(format!("category `{name}`: {r}")));
        }
        let c = Arc::new(c);
        self.categories.insert(name.to_string(), c.clone());
        Ok(c)
    }

    fn category_name(&self, c: &FinCat) -> Option<&str> {
        self.categories
            .iter()
            .find(|(_, d)| std::ptr::eq(c, d.as_ref()))
            .or_else(|| self.categories.iter().find(|(_, d)| same_cat(c, d)))
            .map(|(n, _)| n.as_str())
    }

    /// Registers a functor whose domain and codomain are already declared.
    pub fn add_functor(&mut self, name: &str, f: Functor) -> Result<(), DiagramError> {
        self.fresh(name)?;
        let dom = self.category_name(f.dom()).map(str::to_string);
        let cod = self.category_name(f.cod()).map(str::to_string);
        let (Some(dom), Some(cod)) = (dom, cod) else {
            return Err(DiagramError::Invalid(format!(
                "functor `{name}`: domain or codomain is not a declared category"
            )));
        };
        let r = validate_functor(&f);
        if !r.ok() {
            return Err(DiagramError::Invalid(format!("functor `{name}`: {r}")));
        }
        let f = f
            .rebase(&self.categories[&dom], &self.categories[&cod])?
            .with_name(name);
        self.functors.insert(name.to_string(), (f, cod, dom));
        Ok(())
    }

    /// Registers a generator `bottom => top` with components listed per
    /// object of the inner category (morphism indices of the outer one).
    pub fn add_generator(
        &mut self,
        name: &str,
        bottom: Boundary,
        top: Boundary,
        components: Vec<usize>,
    ) -> Result<(), DiagramError> {
        self.fresh(name)?;
        for b in [&bottom, &top] {
            self.check_boundary(b)?;
        }
        if bottom.outer != top.outer || bottom.inner != top.inner {
            return Err(DiagramError::Invalid(format!(
                "generator `{name}`: {bottom} and {top} do not share endpoints"
            )));
        }
        let nat = NatTrans::new(name, self.composite(&bottom)?, self.composite(&top)?, components)?;
        let r = validate_natural(&nat)?;
        if !r.ok() {
            return Err(DiagramError::Invalid(format!("generator `{name}`: {r}")));
        }
        self.generators.insert(
            name.to_string(),
            Generator {
                name: name.to_string(),
                interface: Interface { bottom, top },
                nat,
            },
        );
        Ok(())
    }

    /// Like [`Environment::add_generator`], with boundaries written as
    /// `id(C)` or `F.G.H` and components given by object and morphism ids.
    pub fn add_generator_by_ids(
        &mut self,
        name: &str,
        bottom: &str,
        top: &str,
        components: &[(&str, &str)],
    ) -> Result<(), DiagramError> {
        let (bottom, top) = self.boundaries(bottom, top)?;
        let inner = self.category(&bottom.inner)?.clone();
        let outer = self.category(&bottom.outer)?.clone();
        let mut comps = vec![usize::MAX; inner.n_obj()];
        for (a, u) in components {
            comps[inner.obj(a)?] = outer.mor(u)?;
        }
        if let Some(a) = comps.iter().position(|&c| c == usize::MAX) {
            return Err(DiagramError::Invalid(format!(
                "generator `{name}`: no component at `{}`",
                inner.obj_id(a)
            )));
        }
        self.add_generator(name, bottom, top, comps)
    }

    /// Parses a pair of boundary expressions.
    pub fn boundaries(&self, bottom: &str, top: &str) -> Result<(Boundary, Boundary), DiagramError> {
        let b = self.boundary(bottom)?;
        let t = self.boundary(top)?;
        Ok((b, t))
    }

    /// `id(C)` or a `.`-separated list of functor names.
    pub fn boundary(&self, text: &str) -> Result<Boundary, DiagramError> {
        let text = text.trim();
        if let Some(c) = text.strip_prefix("id(").and_then(|r| r.strip_suffix(')')) {
            let c = c.trim();
            self.category(c)?;
            return Ok(Boundary {
                functors: vec![],
                outer: c.to_string(),
                inner: c.to_string(),
            });
        }
        let functors: Vec<String> = text.split('.').map(|s| s.trim().to_string()).collect();
        let first = self
            .functor_ends(&functors[0])
            .ok_or_else(|| DiagramError::Unknown(functors[0].clone()))?;
        let last = self
            .functor_ends(functors.last().unwrap())
            .ok_or_else(|| DiagramError::Unknown(functors.last().unwrap().clone()))?;
        let b = Boundary {
            outer: first.0.to_string(),
            inner: last.1.to_string(),
            functors,
        };
        self.check_boundary(&b)?;
        Ok(b)
    }

    fn check_boundary(&self, b: &Boundary) -> Result<(), DiagramError> {
        self.category(&b.outer)?;
        self.category(&b.inner)?;
        let mut at = b.outer.as_str();
        for f in &b.functors {
            let (cod, dom) = self.functor_ends(f).ok_or_else(|| DiagramError::Unknown(f.clone()))?;
            if cod != at {
                return Err(DiagramError::Horizontal {
                    node: b.to_string(),
                    message: format!("`{f}` lands in {cod}, expected {at}"),
                });
            }
            at = dom;
        }
        if at != b.inner {
            return Err(DiagramError::Horizontal {
                node: b.to_string(),
                message: format!("string starts at {at}, expected {}", b.inner),
            });
        }
        Ok(())
    }

    pub fn category(&self, name: &str) -> Result<&CatRef, DiagramError> {
        self.categories
            .get(name)
            .ok_or_else(|| DiagramError::Unknown(name.to_string()))
    }

    pub fn functor(&self, name: &str) -> Result<&Functor, DiagramError> {
        self.functors
            .get(name)
            .map(|(f, _, _)| f)
            .ok_or_else(|| DiagramError::Unknown(name.to_string()))
    }

    /// `(codomain, domain)` category names of a functor.
    pub fn functor_ends(&self, name: &str) -> Option<(&str, &str)> {
        self.functors.get(name).map(|(_, c, d)| (c.as_str(), d.as_str()))
    }

    pub fn generator(&self, name: &str) -> Result<&Generator, DiagramError> {
        self.generators
            .get(name)
            .ok_or_else(|| DiagramError::Unknown(name.to_string()))
    }

    pub fn categories(&self) -> impl Iterator<Item = (&str, &CatRef)> {
        self.categories.iter().map(|(n, c)| (n.as_str(), c))
    }

    pub fn functor_names(&self) -> impl Iterator<Item = &str> {
        self.functors.keys().map(String::as_str)
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.generators.values()
    }

    /// The functor denoted by a wire string.
    pub fn composite(&self, b: &Boundary) -> Result<Functor, DiagramError> {
        let Some((last, rest)) = b.functors.split_last() else {
            return Ok(Functor::identity(self.category(&b.inner)?).with_name(format!("id_{}", b.inner)));
        };
        let mut acc = self.functor(last)?.clone();
        for f in rest.iter().rev() {
            acc = self.functor(f)?.after(&acc)?;
        }
        Ok(acc)
    }
}

/// Computes the interface of a term bottom-up.
pub fn typecheck(term: &Term, env: &Environment) -> Result<Interface, DiagramError> {
    match term {
        Term::Gen(g) => Ok(env.generator(g)?.interface.clone()),
        Term::Id(x) => {
            let b = if let Some((cod, dom)) = env.functor_ends(x) {
                Boundary {
                    functors: vec![x.clone()],
                    outer: cod.to_string(),
                    inner: dom.to_string(),
                }
            } else if env.category(x).is_ok() {
                Boundary {
                    functors: vec![],
                    outer: x.clone(),
                    inner: x.clone(),
                }
            } else {
                return Err(DiagramError::Unknown(x.clone()));
            };
            Ok(Interface {
                bottom: b.clone(),
                top: b,
            })
        }
        Term::V(ts) => {
            let mut acc = typecheck(&ts[0], env)?;
            for t in &ts[1..] {
                let next = typecheck(t, env)?;
                if next.bottom != acc.top {
                    return Err(DiagramError::Vertical {
                        node: t.to_string(),
                        message: format!("expects {} below it, found {}", next.bottom, acc.top),
                    });
                }
                acc.top = next.top;
            }
            Ok(acc)
        }
        Term::H(ts) => {
            let mut acc = typecheck(&ts[0], env)?;
            for t in &ts[1..] {
                let next = typecheck(t, env)?;
                if next.outer() != acc.inner() {
                    return Err(DiagramError::Horizontal {
                        node: t.to_string(),
                        message: format!(
                            "lands in {}, but the wires to its left start at {}",
                            next.outer(),
                            acc.inner()
                        ),
                    });
                }
                acc.bottom.functors.extend(next.bottom.functors);
                acc.top.functors.extend(next.top.functors);
                acc.bottom.inner = next.bottom.inner;
                acc.top.inner = next.top.inner;
            }
            Ok(acc)
        }
    }
}
