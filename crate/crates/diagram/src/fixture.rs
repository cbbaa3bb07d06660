//! A small environment with enough structure to exercise every typing
//! rule, and a generator of random well-typed terms over it.

use std::sync::Arc;

use fincat::fixtures::{arrow, terminal, z2};
use fincat::Functor;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::ast::Term;
use crate::env::{Boundary, Environment};
use crate::normal::{flatten, slides, unflatten};
use crate::DiagramError;

/// Golden SVG files under `tests/golden` and the terms they render.
pub const GOLDEN: &[(&str, &str)] = &[
    ("identity.svg", "id(low)"),
    ("side_by_side.svg", "lift | rise"),
    (
        "unit_point.svg",
        "(unit | id(at0)) ; (id(high) | id(at0) | point) ; (id(high) | rise | id(bang) | id(at0))",
    ),
    (
        "mixed.svg",
        "(expand | collapse) ; (id(at1) | point | id(bang)) ; (id(at1) | id(bang) | rise | id(bang))",
    ),
    ("scalar.svg", "phase | twist"),
];

/// Categories `1`, `2` (the walking arrow) and `Z2`; constant, point and
/// collapse functors between them; and generators with composite and empty
/// boundaries.
pub fn fixture_env() -> Environment {
    build().expect("fixture environment is well formed")
}

fn build() -> Result<Environment, DiagramError> {
    let mut env = Environment::new();
    let one = env.add_category("1", terminal())?;
    let two = env.add_category("2", arrow())?;
    let zz = env.add_category("Z2", z2())?;

    let zero = two.obj("0")?;
    let top = two.obj("1")?;
    env.add_functor("low", Functor::constant(zero, &two, &two))?;
    env.add_functor("high", Functor::constant(top, &two, &two))?;
    env.add_functor("at0", Functor::pick(zero, &two).rebase(&one, &two)?)?;
    env.add_functor("at1", Functor::pick(top, &two).rebase(&one, &two)?)?;
    env.add_functor("bang", Functor::constant(0, &two, &one))?;
    env.add_functor(
        "spin",
        Functor::from_ids(
            "spin",
            two.clone(),
            zz.clone(),
            &[("0", "*"), ("1", "*")],
            &[("a", "s")],
        )?,
    )?;
    env.add_functor("keep", Functor::identity(&zz))?;

    env.add_generator_by_ids("rise", "at0", "at1", &[("*", "a")])?;
    env.add_generator_by_ids("lift", "low", "high", &[("0", "a"), ("1", "a")])?;
    env.add_generator_by_ids("unit", "id(2)", "high", &[("0", "a"), ("1", "id_1")])?;
    env.add_generator_by_ids("counit", "low", "id(2)", &[("0", "id_0"), ("1", "a")])?;
    env.add_generator_by_ids("collapse", "at0.bang", "id(2)", &[("0", "id_0"), ("1", "a")])?;
    env.add_generator_by_ids("expand", "id(2)", "at1.bang", &[("0", "a"), ("1", "id_1")])?;
    env.add_generator_by_ids("merge", "high.high", "high", &[("0", "id_1"), ("1", "id_1")])?;
    env.add_generator_by_ids("dup", "low", "low.low", &[("0", "id_0"), ("1", "id_0")])?;
    env.add_generator_by_ids("point", "id(1)", "bang.at0", &[("*", "id_*")])?;
    env.add_generator_by_ids("twist", "spin", "spin", &[("0", "s"), ("1", "s")])?;
    env.add_generator_by_ids("turn", "keep", "keep", &[("*", "s")])?;
    env.add_generator_by_ids("phase", "id(Z2)", "id(Z2)", &[("*", "s")])?;
    Ok(env)
}

/// A random composable string of at most `max_len` wires.
pub fn random_boundary<R: Rng>(rng: &mut R, env: &Environment, max_len: usize) -> Boundary {
    let cats: Vec<&str> = env.categories().map(|(n, _)| n).collect();
    let outer = cats.choose(rng).copied().unwrap_or_default().to_string();
    let mut b = Boundary {
        functors: vec![],
        outer: outer.clone(),
        inner: outer,
    };
    let len = rng.gen_range(0..=max_len);
    for _ in 0..len {
        let here = b.inner.clone();
        let next: Vec<&str> = env
            .functor_names()
            .filter(|f| env.functor_ends(f).map(|(cod, _)| cod == here).unwrap_or(false))
            .collect();
        let Some(f) = next.choose(rng) else { break };
        b.inner = env.functor_ends(f).unwrap().1.to_string();
        b.functors.push(f.to_string());
    }
    b
}

/// Generators that fit into `b` at some offset, with that offset.
fn placements<'a>(env: &'a Environment, b: &Boundary) -> Vec<(&'a str, usize)> {
    let mut out = Vec::new();
    for g in env.generators() {
        let gb = &g.interface.bottom;
        for o in 0..=b.len() {
            let fits = if gb.is_empty() {
                b.region(env, o) == gb.outer
            } else {
                b.functors[o..].starts_with(&gb.functors)
            };
            if fits {
                out.push((g.name.as_str(), o));
            }
        }
    }
    out
}

fn identity_on(b: &Boundary) -> Term {
    if b.is_empty() {
        Term::id(&b.outer)
    } else {
        Term::horizontal(b.functors.iter().map(Term::id).collect())
    }
}

/// A random well-typed term with at most `max_gens` generators, built by
/// mixing vertical stacking, horizontal splitting and whiskered
/// generators.
pub fn random_term<R: Rng>(rng: &mut R, env: &Environment, max_gens: usize) -> Term {
    let start = random_boundary(rng, env, 3);
    let budget = rng.gen_range(1..=max_gens.max(1));
    grow(rng, env, &start, budget, 0).0
}

fn grow<R: Rng>(rng: &mut R, env: &Environment, b: &Boundary, budget: usize, depth: usize) -> (Term, Boundary, usize) {
    if budget == 0 {
        return (identity_on(b), b.clone(), 0);
    }
    let choice = if depth > 4 { 0 } else { rng.gen_range(0..3) };
    match choice {
        1 if budget >= 2 => {
            let k = rng.gen_range(1..budget);
            let (t1, b1, u1) = grow(rng, env, b, k, depth + 1);
            let (t2, b2, u2) = grow(rng, env, &b1, budget - u1, depth + 1);
            (Term::V(vec![t1, t2]), b2, u1 + u2)
        }
        2 if !b.is_empty() && budget >= 2 => {
            let s = rng.gen_range(0..=b.len());
            let mid = b.region(env, s);
            let left = Boundary {
                functors: b.functors[..s].to_vec(),
                outer: b.outer.clone(),
                inner: mid.clone(),
            };
            let right = Boundary {
                functors: b.functors[s..].to_vec(),
                outer: mid,
                inner: b.inner.clone(),
            };
            let k = rng.gen_range(1..budget);
            let (t1, b1, u1) = grow(rng, env, &left, k, depth + 1);
            let (t2, b2, u2) = grow(rng, env, &right, budget - u1, depth + 1);
            let mut top = b1;
            top.functors.extend(b2.functors);
            top.inner = b2.inner;
            (Term::H(vec![t1, t2]), top, u1 + u2)
        }
        _ => {
            let options = placements(env, b);
            let Some(&(g, o)) = options.choose(rng) else {
                return (identity_on(b), b.clone(), 0);
            };
            let gen = env.generator(g).expect("placement names a generator");
            let end = o + gen.interface.bottom.len();
            let mut row: Vec<Term> = b.functors[..o].iter().map(Term::id).collect();
            row.push(Term::gen(g));
            row.extend(b.functors[end..].iter().map(Term::id));
            let mut top = b.clone();
            top.functors.splice(o..end, gen.interface.top.functors.iter().cloned());
            (Term::horizontal(row), top, 1)
        }
    }
}

/// An interchange-equivalent term: the layers of `t` after `steps` random
/// legal swaps of adjacent layers.
pub fn interchange_variant<R: Rng>(
    rng: &mut R,
    t: &Term,
    env: &Environment,
    steps: usize,
) -> Result<Term, DiagramError> {
    let mut flat = flatten(t, env)?;
    let n = flat.layers.len();
    if n >= 2 {
        for _ in 0..steps {
            let k = rng.gen_range(0..n - 1);
            if let Some((down, up)) = slides(&flat.layers[k], &flat.layers[k + 1]).choose(rng).cloned() {
                flat.layers[k] = down;
                flat.layers[k + 1] = up;
            }
        }
    }
    unflatten(&flat, env)
}

/// Shared handle for callers that evaluate terms from several threads.
pub fn shared_fixture_env() -> Arc<Environment> {
    Arc::new(fixture_env())
}
