//! Deterministic SVG rendering of normal forms.
//!
//! One row per layer with level 0 at the bottom. Wires are straight
//! segments, generators are labeled circles, and every region is filled with
//! a color chosen from a fixed palette by hashing the category name.

use std::fmt::Write;

use crate::ast::Term;
use crate::env::{Boundary, Environment};
use crate::normal::{flatten, normal_layers, Layer};
use crate::DiagramError;

const COLUMN: f64 = 60.0;
const ROW: f64 = 80.0;
const RADIUS: f64 = 14.0;

const PALETTE: [&str; 12] = [
    "#f4cccc", "#fce5cd", "#fff2cc", "#d9ead3", "#d0e0e3", "#c9daf8", "#cfe2f3", "#d9d2e9", "#ead1dc", "#e6e6e6",
    "#ffe0b2", "#dcedc8",
];

/// FNV-1a, so colors do not depend on the standard library's hasher.
fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub fn category_color(name: &str) -> &'static str {
    PALETTE[(fnv1a(name) % PALETTE.len() as u64) as usize]
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

type Pt = (f64, f64);

struct Canvas {
    width: f64,
    regions: String,
    wires: String,
    nodes: String,
}

impl Canvas {
    fn x(&self, i: usize, len: usize) -> f64 {
        (i + 1) as f64 * self.width / (len + 1) as f64
    }

    fn polygon(&mut self, pts: &[Pt], category: &str) {
        let mut d = String::new();
        for (i, (x, y)) in pts.iter().enumerate() {
            if i > 0 {
                d.push(' ');
            }
            write!(d, "{x:.1},{y:.1}").unwrap();
        }
        writeln!(
            self.regions,
            "  <polygon points=\"{d}\" fill=\"{}\" stroke=\"none\"><title>{}</title></polygon>",
            category_color(category),
            escape(category)
        )
        .unwrap();
    }

    fn wire(&mut self, from: Pt, to: Pt, functor: &str) {
        writeln!(
            self.wires,
            "  <line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#222222\" stroke-width=\"2\"><title>{}</title></line>",
            from.0,
            from.1,
            to.0,
            to.1,
            escape(functor)
        )
        .unwrap();
    }
}

/// Renders the normal form of a well-typed term.
pub fn render_svg(term: &Term, env: &Environment) -> Result<String, DiagramError> {
    let mut flat = flatten(term, env)?;
    flat.layers = normal_layers(&flat.layers)?;
    let levels: Vec<Boundary> = (0..=flat.layers.len())
        .map(|k| flat.boundary_at(env, k))
        .collect::<Result<_, _>>()?;
    let widest = levels.iter().map(Boundary::len).max().unwrap_or(0);
    let width = (widest + 1).max(2) as f64 * COLUMN;
    let rows = flat.layers.len().max(1);
    let height = rows as f64 * ROW;
    let mut cv = Canvas {
        width,
        regions: String::new(),
        wires: String::new(),
        nodes: String::new(),
    };
    // y coordinate of boundary level k
    let level_y = |k: usize| height - k as f64 * ROW;

    if flat.layers.is_empty() {
        straight_row(&mut cv, env, &levels[0], level_y(0), level_y(1));
    }
    for (k, layer) in flat.layers.iter().enumerate() {
        layer_row(
            &mut cv,
            env,
            layer,
            &levels[k],
            &levels[k + 1],
            level_y(k),
            level_y(k + 1),
        );
    }

    let mut labels = String::new();
    let ends = [(&levels[0], height - 6.0), (levels.last().unwrap(), 14.0)];
    for (b, y) in ends {
        for (i, f) in b.functors.iter().enumerate() {
            let x = cv.x(i, b.len()) + 4.0;
            writeln!(
                labels,
                "  <text x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"12\">{}</text>",
                escape(f)
            )
            .unwrap();
        }
    }

    let mut svg = String::new();
    writeln!(svg, "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>").unwrap();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.1}\" height=\"{height:.1}\" viewBox=\"0 0 {width:.1} {height:.1}\">"
    )
    .unwrap();
    writeln!(svg, "  <title>{}</title>", escape(&term.to_string())).unwrap();
    svg.push_str(&cv.regions);
    svg.push_str(&cv.wires);
    svg.push_str(&cv.nodes);
    svg.push_str(&labels);
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn band(cv: &mut Canvas, env: &Environment, b: &Boundary, y0: f64, y1: f64) {
    let n = b.len();
    for p in 0..=n {
        let l = if p == 0 { 0.0 } else { cv.x(p - 1, n) };
        let r = if p == n { cv.width } else { cv.x(p, n) };
        cv.polygon(&[(l, y1), (r, y1), (r, y0), (l, y0)], &b.region(env, p));
    }
}

fn straight_row(cv: &mut Canvas, env: &Environment, b: &Boundary, bot: f64, top: f64) {
    band(cv, env, b, top, bot);
    for (i, f) in b.functors.iter().enumerate() {
        let x = cv.x(i, b.len());
        cv.wire((x, bot), (x, top), f);
    }
}

fn layer_row(
    cv: &mut Canvas,
    env: &Environment,
    layer: &Layer,
    below: &Boundary,
    above: &Boundary,
    bot: f64,
    top: f64,
) {
    let (nb, nt) = (below.len(), above.len());
    let (o, bl, tl) = (layer.offset, layer.bottom_len, layer.top_len);
    let w = cv.width;
    let at = move |i: usize, n: usize| (i + 1) as f64 * w / (n + 1) as f64;
    let xb = |i: usize| at(i, nb);
    let xt = |i: usize| at(i, nt);
    // x of the gap at position p of a boundary with n wires
    let gap = |p: usize, n: usize| {
        let l = if p == 0 { 0.0 } else { at(p - 1, n) };
        let r = if p == n { w } else { at(p, n) };
        (l + r) / 2.0
    };
    let ends: Vec<f64> = (o..o + bl).map(xb).chain((o..o + tl).map(xt)).collect();
    let cx = if ends.is_empty() {
        (gap(o, nb) + gap(o, nt)) / 2.0
    } else {
        ends.iter().sum::<f64>() / ends.len() as f64
    };
    let cy = (bot + top) / 2.0;
    let centre = (cx, cy);
    let first_b = if bl > 0 { (xb(o), bot) } else { (cx, bot) };
    let last_b = if bl > 0 { (xb(o + bl - 1), bot) } else { (cx, bot) };
    let first_t = if tl > 0 { (xt(o), top) } else { (cx, top) };
    let last_t = if tl > 0 { (xt(o + tl - 1), top) } else { (cx, top) };

    // regions left of the node, between passing wires
    for p in 0..=o {
        let l_b = if p == 0 { (0.0, bot) } else { (xb(p - 1), bot) };
        let l_t = if p == 0 { (0.0, top) } else { (xt(p - 1), top) };
        let cat = below.region(env, p);
        if p < o {
            cv.polygon(&[l_b, (xb(p), bot), (xt(p), top), l_t], &cat);
        } else {
            cv.polygon(&[l_b, first_b, centre, first_t, l_t], &cat);
        }
    }
    // regions right of the node
    for p in o + bl..=nb {
        let q = p - bl + tl;
        let r_b = if p == nb { (w, bot) } else { (xb(p), bot) };
        let r_t = if q == nt { (w, top) } else { (xt(q), top) };
        let cat = below.region(env, p);
        if p == o + bl {
            cv.polygon(&[last_b, r_b, r_t, last_t, centre], &cat);
        } else {
            cv.polygon(&[(xb(p - 1), bot), r_b, r_t, (xt(q - 1), top)], &cat);
        }
    }
    // regions enclosed between wires entering or leaving the node
    for j in 1..bl {
        cv.polygon(
            &[(xb(o + j - 1), bot), (xb(o + j), bot), centre],
            &below.region(env, o + j),
        );
    }
    for j in 1..tl {
        cv.polygon(
            &[(xt(o + j - 1), top), (xt(o + j), top), centre],
            &above.region(env, o + j),
        );
    }

    for i in 0..o {
        cv.wire((xb(i), bot), (xt(i), top), &below.functors[i]);
    }
    for i in o + bl..nb {
        let q = i - bl + tl;
        cv.wire((xb(i), bot), (xt(q), top), &below.functors[i]);
    }
    for i in o..o + bl {
        cv.wire((xb(i), bot), centre, &below.functors[i]);
    }
    for i in o..o + tl {
        cv.wire(centre, (xt(i), top), &above.functors[i]);
    }
    let label = escape(&layer.generator);
    writeln!(
        cv.nodes,
        "  <circle cx=\"{cx:.1}\" cy=\"{cy:.1}\" r=\"{RADIUS:.1}\" fill=\"#ffffff\" stroke=\"#222222\" stroke-width=\"2\"/>\n  <text x=\"{cx:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"11\">{label}</text>",
        cy + 4.0
    )
    .unwrap();
}
