//! Layered normal forms modulo the interchange law.
//!
//! A term flattens to a sequence of layers, bottom first, each a single
//! generator placed at some wire offset of the boundary below it. Two
//! adjacent layers whose wire ranges are disjoint may be swapped. The
//! normal form is the least layer sequence reachable by such swaps, ordered
//! lexicographically bottom-up by offset: every layer sits as far left as
//! the ones below it allow.

use std::collections::BTreeSet;

use fincat::Report;

use crate::ast::Term;
use crate::env::{typecheck, Boundary, Environment, Interface};
use crate::eval::evaluate;
use crate::parse::parse_term;
use crate::DiagramError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Layer {
    /// Index of the first consumed wire in the boundary below the layer.
    pub offset: usize,
    pub generator: String,
    pub bottom_len: usize,
    pub top_len: usize,
}

/// A term as a bottom boundary plus a stack of layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layered {
    pub interface: Interface,
    pub layers: Vec<Layer>,
}

impl Layered {
    /// The boundary after the first `k` layers.
    pub fn boundary_at(&self, env: &Environment, k: usize) -> Result<Boundary, DiagramError> {
        let mut b = self.interface.bottom.clone();
        for l in &self.layers[..k] {
            let g = env.generator(&l.generator)?;
            b.functors.splice(
                l.offset..l.offset + l.bottom_len,
                g.interface.top.functors.iter().cloned(),
            );
        }
        Ok(b)
    }
}

pub fn flatten(term: &Term, env: &Environment) -> Result<Layered, DiagramError> {
    let interface = typecheck(term, env)?;
    let mut layers = Vec::new();
    place(term, env, 0, &mut layers)?;
    Ok(Layered { interface, layers })
}

fn place(term: &Term, env: &Environment, offset: usize, out: &mut Vec<Layer>) -> Result<Interface, DiagramError> {
    match term {
        Term::Gen(g) => {
            let i = env.generator(g)?.interface.clone();
            out.push(Layer {
                generator: g.clone(),
                offset,
                bottom_len: i.bottom.len(),
                top_len: i.top.len(),
            });
            Ok(i)
        }
        Term::Id(_) => typecheck(term, env),
        Term::V(ts) => {
            for t in ts {
                place(t, env, offset, out)?;
            }
            typecheck(term, env)
        }
        Term::H(ts) => {
            // children are applied one after another, left to right
            let mut at = offset;
            for t in ts {
                let i = place(t, env, at, out)?;
                at += i.top.len();
            }
            typecheck(term, env)
        }
    }
}

/// The ways of swapping two adjacent layers, as `(moved down, moved up)`.
/// Empty when their wire ranges overlap. When the upper layer has no input
/// wires and the lower one no output wires at the same gap, the upper one
/// may pass on either side, giving two results.
pub fn slides(lower: &Layer, upper: &Layer) -> Vec<(Layer, Layer)> {
    let (a, b) = (lower.offset, upper.offset);
    let mut out = Vec::with_capacity(2);
    if b + upper.bottom_len <= a {
        let mut up = lower.clone();
        up.offset = a - upper.bottom_len + upper.top_len;
        out.push((upper.clone(), up));
    }
    if a + lower.top_len <= b {
        let mut down = upper.clone();
        down.offset = b - lower.top_len + lower.bottom_len;
        out.push((down, lower.clone()));
    }
    out
}

/// The first of [`slides`], if any.
pub fn slide(lower: &Layer, upper: &Layer) -> Option<(Layer, Layer)> {
    slides(lower, upper).into_iter().next()
}

/// Upper bound on the layer sequences visited while normalizing one term.
pub const MAX_CLASS: usize = 200_000;

/// Every layer sequence reachable from `layers` by adjacent swaps.
pub fn interchange_class(layers: &[Layer]) -> Result<BTreeSet<Vec<Layer>>, DiagramError> {
    let mut seen = BTreeSet::new();
    let mut todo = vec![layers.to_vec()];
    seen.insert(layers.to_vec());
    while let Some(seq) = todo.pop() {
        for k in 0..seq.len().saturating_sub(1) {
            for (down, up) in slides(&seq[k], &seq[k + 1]) {
                let mut next = seq.clone();
                next[k] = down;
                next[k + 1] = up;
                if !seen.contains(&next) {
                    if seen.len() >= MAX_CLASS {
                        return Err(DiagramError::Invalid(format!(
                            "more than {MAX_CLASS} interchange-equivalent layerings; term too large to normalize"
                        )));
                    }
                    seen.insert(next.clone());
                    todo.push(next);
                }
            }
        }
    }
    Ok(seen)
}

/// The canonical ordering of a layer sequence.
pub fn normal_layers(layers: &[Layer]) -> Result<Vec<Layer>, DiagramError> {
    Ok(interchange_class(layers)?.into_iter().next().unwrap_or_default())
}

/// Rebuilds a term from a layer stack: one generator per layer, padded
/// with identity wires.
pub fn unflatten(l: &Layered, env: &Environment) -> Result<Term, DiagramError> {
    let mut wires = l.interface.bottom.clone();
    if l.layers.is_empty() {
        return Ok(identity_term(&wires));
    }
    let mut rows = Vec::with_capacity(l.layers.len());
    for layer in &l.layers {
        let g = env.generator(&layer.generator)?;
        let end = layer.offset + layer.bottom_len;
        let mut row: Vec<Term> = wires.functors[..layer.offset].iter().map(Term::id).collect();
        row.push(Term::gen(&layer.generator));
        row.extend(wires.functors[end..].iter().map(Term::id));
        rows.push(Term::horizontal(row));
        wires
            .functors
            .splice(layer.offset..end, g.interface.top.functors.iter().cloned());
    }
    Ok(Term::vertical(rows))
}

fn identity_term(b: &Boundary) -> Term {
    if b.is_empty() {
        Term::id(&b.outer)
    } else {
        Term::horizontal(b.functors.iter().map(Term::id).collect())
    }
}

pub fn normalize(term: &Term, env: &Environment) -> Result<Term, DiagramError> {
    let mut l = flatten(term, env)?;
    l.layers = normal_layers(&l.layers)?;
    unflatten(&l, env)
}

/// Separate verdicts for syntactic equality (normal forms coincide) and
/// semantic equality (evaluations coincide).
#[derive(Debug, Clone)]
pub struct Comparison {
    pub same_normal_form: bool,
    pub same_evaluation: bool,
    pub report: Report,
}

pub fn compare_terms(s: &Term, t: &Term, env: &Environment) -> Result<Comparison, DiagramError> {
    let (ns, nt) = (normalize(s, env)?, normalize(t, env)?);
    let (es, et) = (evaluate(s, env)?, evaluate(t, env)?);
    let same_normal_form = ns == nt;
    let same_evaluation = es == et;
    let mut report = Report::new();
    report.check(!same_normal_form || same_evaluation, "interchange-soundness", || {
        format!("`{s}` and `{t}` share the normal form `{ns}` but evaluate differently")
    });
    Ok(Comparison {
        same_normal_form,
        same_evaluation,
        report,
    })
}

/// Normalization laws for one term: evaluation is preserved, the normal
/// form is a fixed point, and printing then parsing the normal form gives
/// it back.
pub fn normalization_check(term: &Term, env: &Environment) -> Result<Report, DiagramError> {
    let mut r = Report::new();
    let n = normalize(term, env)?;
    let (e, en) = (evaluate(term, env)?, evaluate(&n, env)?);
    r.check(e == en, "normalize-sound", || {
        format!("`{term}` and its normal form `{n}` evaluate differently")
    });
    let nn = normalize(&n, env)?;
    r.check(nn == n, "normalize-idempotent", || {
        format!("`{n}` renormalizes to `{nn}`")
    });
    let printed = n.to_string();
    let reparsed = parse_term(&printed)?;
    r.check(reparsed == n, "print-parse", || {
        format!("`{printed}` reparses to `{reparsed}`")
    });
    Ok(r)
}
