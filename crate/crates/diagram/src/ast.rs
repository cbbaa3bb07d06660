//! Term syntax and its printer.
//!
//! `;` stacks terms vertically, first operand at the bottom. `|` places them
//! side by side in composition order: in `b | a` the wires of `a` are applied
//! first. `|` binds tighter than `;`.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// A named generator from the environment.
    Gen(String),
    /// `id(F)` for a functor or `id(C)` for a category.
    Id(String),
    /// Vertical stack, bottom first.
    V(Vec<Term>),
    /// Horizontal juxtaposition, outermost first.
    H(Vec<Term>),
}

impl Term {
    pub fn gen(name: impl Into<String>) -> Term {
        Term::Gen(name.into())
    }

    pub fn id(name: impl Into<String>) -> Term {
        Term::Id(name.into())
    }

    /// Vertical composite; a single child is returned as is.
    pub fn vertical(mut children: Vec<Term>) -> Term {
        if children.len() == 1 {
            children.pop().unwrap()
        } else {
            Term::V(children)
        }
    }

    /// Horizontal composite; a single child is returned as is.
    pub fn horizontal(mut children: Vec<Term>) -> Term {
        if children.len() == 1 {
            children.pop().unwrap()
        } else {
            Term::H(children)
        }
    }

    /// Number of generator occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Gen(_) => 1,
            Term::Id(_) => 0,
            Term::V(ts) | Term::H(ts) => ts.iter().map(Term::size).sum(),
        }
    }

    /// Generator names in left-to-right reading order of the source text.
    pub fn generators(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Gen(g) => out.push(g),
            Term::Id(_) => {}
            Term::V(ts) | Term::H(ts) => ts.iter().for_each(|t| t.collect(out)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Nested composites of the same kind keep their parentheses so that
        // parsing the output gives back the same tree.
        match self {
            Term::Gen(g) => write!(f, "{g}"),
            Term::Id(x) => write!(f, "id({x})"),
            Term::V(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ; ")?;
                    }
                    match t {
                        Term::V(_) => write!(f, "({t})")?,
                        _ => write!(f, "{t}")?,
                    }
                }
                Ok(())
            }
            Term::H(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    match t {
                        Term::V(_) | Term::H(_) => write!(f, "({t})")?,
                        _ => write!(f, "{t}")?,
                    }
                }
                Ok(())
            }
        }
    }
}
