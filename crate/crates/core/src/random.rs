//! Seeded generators for the randomized suites. Everything is driven by a
//! ChaCha stream so a seed fixes the whole run.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cat::FinCat;
use crate::config::Guard;
use crate::ends::twisted_domain;
use crate::finset::{FinSetObj, SetFunctor};
use crate::fixtures::all_tables;
use crate::functor::{CatRef, Functor};
use crate::functor_category::enumerate_functors;

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random category with at most `max_objects` objects and at most
/// `max_non_identities` non-identity morphisms.
///
/// Objects carry hidden sizes 1 or 2 and morphisms are functions between
/// them, closed under composition from a few random generators; objects of
/// size 1 only yield preorders, larger ones give idempotents and
/// non-trivial monoids.
pub fn random_category(rng: &mut Rand, max_objects: usize, max_non_identities: usize) -> FinCat {
    let n = rng.gen_range(1..=max_objects.max(1));
    for _ in 0..64 {
        let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
        let mut homs: BTreeMap<(usize, usize, Vec<usize>), ()> = BTreeMap::new();
        for (o, &s) in sizes.iter().enumerate() {
            homs.insert((o, o, (0..s).collect()), ());
        }
        let n_gens = rng.gen_range(0..=3);
        for _ in 0..n_gens {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let t: Vec<usize> = (0..sizes[a]).map(|_| rng.gen_range(0..sizes[b])).collect();
            homs.insert((a, b, t), ());
        }
        loop {
            let keys: Vec<(usize, usize, Vec<usize>)> = homs.keys().cloned().collect();
            let mut grew = false;
            for (a, b, f) in &keys {
                for (b2, c, g) in &keys {
                    if b == b2 {
                        let h: Vec<usize> = f.iter().map(|&x| g[x]).collect();
                        grew |= homs.insert((*a, *c, h), ()).is_none();
                    }
                }
            }
            if !grew || homs.len() > n + max_non_identities {
                break;
            }
        }
        if homs.len() > n + max_non_identities {
            continue;
        }
        return concrete_category(&sizes, homs.into_keys().collect());
    }
    crate::fixtures::discrete(n)
}

fn concrete_category(sizes: &[usize], homs: Vec<(usize, usize, Vec<usize>)>) -> FinCat {
    let obj = |o: usize| format!("o{o}");
    let is_id = |(a, b, t): &(usize, usize, Vec<usize>)| a == b && t.iter().enumerate().all(|(i, &x)| i == x);
    let mut names = Vec::with_capacity(homs.len());
    let mut k = 0;
    for h in &homs {
        if is_id(h) {
            names.push(format!("1{}", obj(h.0)));
        } else {
            names.push(format!("m{k}"));
            k += 1;
        }
    }
    let index: BTreeMap<&(usize, usize, Vec<usize>), usize> = homs.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let mut compose = Vec::new();
    for (i, (a, b, f)) in homs.iter().enumerate() {
        for (j, (b2, c, g)) in homs.iter().enumerate() {
            if b == b2 {
                let h = (*a, *c, f.iter().map(|&x| g[x]).collect::<Vec<_>>());
                compose.push((names[j].clone(), names[i].clone(), names[index[&h]].clone()));
            }
        }
    }
    FinCat::from_tables(
        "rand",
        (0..sizes.len()).map(obj).collect(),
        homs.iter()
            .zip(&names)
            .map(|((a, b, _), id)| (id.clone(), obj(*a), obj(*b)))
            .collect(),
        homs.iter()
            .zip(&names)
            .filter(|(h, _)| is_id(h))
            .map(|((a, _, _), id)| (obj(*a), id.clone()))
            .collect(),
        compose,
    )
    .expect("closed under composition")
}

/// A random functor `C -> FinSet` with values of size at most `max_size`.
/// Falls back to a constant functor when the randomized search for
/// compatible tables runs out of attempts.
pub fn random_set_functor(rng: &mut Rand, c: &CatRef, max_size: usize) -> SetFunctor {
    let non_id: Vec<usize> = c.non_identities().collect();
    // composable pairs (g, h) indexed by each of g, h and g∘h
    let mut touching: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); c.n_mor()];
    for (g, h) in c.composable_pairs() {
        let gh = c.comp(g, h);
        for m in [g, h, gh] {
            if touching[m].last() != Some(&(g, h, gh)) {
                touching[m].push((g, h, gh));
            }
        }
    }
    for _ in 0..32 {
        let sizes: Vec<usize> = (0..c.n_obj()).map(|_| rng.gen_range(0..=max_size)).collect();
        let mut maps: Vec<Option<Vec<usize>>> = (0..c.n_mor())
            .map(|f| c.is_identity(f).then(|| (0..sizes[c.dom(f)]).collect()))
            .collect();
        let mut nodes = 0usize;
        if assign(rng, c, &sizes, &non_id, &touching, 0, &mut maps, &mut nodes) {
            let sets = sizes.iter().map(|&s| FinSetObj::range(s)).collect();
            let maps = maps.into_iter().map(Option::unwrap).collect();
            return SetFunctor::new("X", c.clone(), sets, maps).expect("checked tables");
        }
    }
    let s = rng.gen_range(0..=max_size);
    SetFunctor::constant(c, &FinSetObj::range(s)).with_name("X")
}

#[allow(clippy::too_many_arguments)]
fn assign(
    rng: &mut Rand,
    c: &FinCat,
    sizes: &[usize],
    order: &[usize],
    touching: &[Vec<(usize, usize, usize)>],
    k: usize,
    maps: &mut Vec<Option<Vec<usize>>>,
    nodes: &mut usize,
) -> bool {
    if k == order.len() {
        return true;
    }
    let f = order[k];
    let mut cands = all_tables(sizes[c.dom(f)], sizes[c.cod(f)]);
    cands.shuffle(rng);
    for t in cands {
        *nodes += 1;
        if *nodes > 20_000 {
            return false;
        }
        maps[f] = Some(t);
        let consistent = touching[f]
            .iter()
            .all(|&(g, h, gh)| match (&maps[g], &maps[h], &maps[gh]) {
                (Some(mg), Some(mh), Some(mgh)) => mh.iter().map(|&x| mg[x]).eq(mgh.iter().copied()),
                _ => true,
            });
        if consistent && assign(rng, c, sizes, order, touching, k + 1, maps, nodes) {
            return true;
        }
    }
    maps[f] = None;
    false
}

/// A uniformly chosen functor `J -> C`, if `[J, C]` is enumerable and
/// non-empty.
pub fn random_functor(rng: &mut Rand, j: &CatRef, c: &CatRef, guard: &Guard) -> Option<Functor> {
    let all = enumerate_functors(j, c, guard).ok()?;
    all.choose(rng).cloned()
}

/// A random set-valued bifunctor on `op(J) × J`.
pub fn random_bifunctor(rng: &mut Rand, j: &CatRef, max_size: usize) -> SetFunctor {
    let prod: CatRef = Arc::new(twisted_domain(j));
    random_set_functor(rng, &prod, max_size).with_name("B")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::validate_category;
    use crate::finset::validate_set_functor;

    #[test]
    fn generated_structures_are_lawful() {
        let mut r = rng(7);
        for _ in 0..50 {
            let c = Arc::new(random_category(&mut r, 4, 10));
            assert!(validate_category(&c).ok());
            assert!(c.n_obj() <= 4 && c.n_mor() - c.n_obj() <= 10);
            let x = random_set_functor(&mut r, &c, 3);
            assert!(validate_set_functor(&x).ok());
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_category(&mut rng(3), 4, 10);
        let b = random_category(&mut rng(3), 4, 10);
        assert_eq!(a, b);
    }
}
