//! Small named categories used throughout tests, the acceptance suite and
//! the CLI.

use crate::cat::{product, FinCat};

/// The terminal category: one object `*`.
pub fn terminal() -> FinCat {
    FinCat::builder("1").object("*").build().unwrap()
}

/// The walking arrow `0 -a-> 1`.
pub fn arrow() -> FinCat {
    FinCat::builder("2")
        .objects(["0", "1"])
        .morphism("a", "0", "1")
        .build()
        .unwrap()
}

/// Two parallel arrows `f, g: 0 -> 1`.
pub fn parallel() -> FinCat {
    FinCat::builder("par")
        .objects(["0", "1"])
        .morphism("f", "0", "1")
        .morphism("g", "0", "1")
        .build()
        .unwrap()
}

/// The cyclic group of order two as a one-object category (`e`, `s`).
pub fn z2() -> FinCat {
    FinCat::builder("Z2")
        .object("*")
        .identity("*", "e")
        .morphism("s", "*", "*")
        .compose("s", "s", "e")
        .build()
        .unwrap()
}

/// A discrete category on `n` objects named `0..n`.
pub fn discrete(n: usize) -> FinCat {
    FinCat::builder(format!("disc{n}"))
        .objects((0..n).map(|i| i.to_string()))
        .build()
        .unwrap()
}

/// The empty category.
pub fn empty() -> FinCat {
    discrete(0).renamed("0")
}

/// The chain poset `0 < 1 < ... < n-1`; morphisms are `i<j`.
pub fn chain(n: usize) -> FinCat {
    let mut b = FinCat::builder(format!("chain{n}")).objects((0..n).map(|i| i.to_string()));
    for i in 0..n {
        for j in i + 1..n {
            b = b.morphism(format!("{i}<{j}"), i.to_string(), j.to_string());
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                b = b.compose(format!("{j}<{k}"), format!("{i}<{j}"), format!("{i}<{k}"));
            }
        }
    }
    b.build().unwrap()
}

/// The 2x2 poset, i.e. the product of two walking arrows.
pub fn square() -> FinCat {
    product(&arrow(), &arrow()).renamed("2x2")
}

/// The full subcategory of finite sets on the skeletal sets `{0..n}` for
/// each `n` in `sizes`. Objects are named by their size; a morphism
/// `n -> m` is named `n>m:` followed by its table digits.
pub fn finset_skeleton(sizes: &[usize]) -> FinCat {
    assert!(sizes.iter().all(|&s| s < 10), "sizes must be single digits");
    let name = format!(
        "Set{{{}}}",
        sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
    );
    let mut objects = Vec::new();
    let mut morphisms = Vec::new();
    let mut identity = Vec::new();
    let mut tables: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for &n in sizes {
        objects.push(n.to_string());
        identity.push((n.to_string(), map_id(n, n, &(0..n).collect::<Vec<_>>())));
        for &m in sizes {
            for t in all_tables(n, m) {
                morphisms.push((map_id(n, m, &t), n.to_string(), m.to_string()));
                tables.push((n, m, t));
            }
        }
    }
    let mut compose = Vec::new();
    for (n1, m1, f) in &tables {
        for (n2, m2, g) in &tables {
            if m1 != n2 {
                continue;
            }
            let gf: Vec<usize> = f.iter().map(|&x| g[x]).collect();
            compose.push((map_id(*n2, *m2, g), map_id(*n1, *m1, f), map_id(*n1, *m2, &gf)));
        }
    }
    FinCat::from_tables(name, objects, morphisms, identity, compose).unwrap()
}

fn map_id(n: usize, m: usize, t: &[usize]) -> String {
    let digits: String = t.iter().map(|d| char::from(b'0' + *d as u8)).collect();
    format!("{n}>{m}:{digits}")
}

/// The table of a skeleton morphism id `n>m:digits`.
pub fn skeleton_table(id: &str) -> Vec<usize> {
    id.split(':')
        .nth(1)
        .unwrap_or("")
        .chars()
        .map(|c| c.to_digit(10).expect("skeleton ids carry digits") as usize)
        .collect()
}

/// Number of morphisms of [`finset_skeleton`] on `sizes`.
pub fn skeleton_morphism_count(sizes: &[usize]) -> u64 {
    let mut total = 0u64;
    for &n in sizes {
        for &m in sizes {
            total = total.saturating_add((m as u64).saturating_pow(n as u32));
        }
    }
    total
}

/// All functions `{0..n} -> {0..m}` as tables, in lexicographic order.
pub fn all_tables(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut t = vec![0; n];
    loop {
        out.push(t.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < m {
                break;
            }
            t[i] = 0;
        }
    }
}

/// The named fixture set used by the broader test suites.
pub fn all() -> Vec<FinCat> {
    vec![terminal(), arrow(), parallel(), z2(), discrete(2), square(), chain(3)]
}
