//! One function per subcommand. Each returns an [`Outcome`]: a status, a
//! few human-readable lines, a JSON result and the law report, if any.

use std::collections::BTreeMap;
use std::path::Path;

use fincat::adjunction::{adjoint_from_universals, snake_check, Side as AdjSide};
use fincat::cat::pair_id;
use fincat::ends::{end_coend, end_finset, weighted_limit, weighted_limit_finset};
use fincat::finset::{hom_functor, yoneda_check, yoneda_embedding, FinSetObj, SetFunctor, Variance};
use fincat::functor::same_cat;
use fincat::functor_category::fully_faithful_check;
use fincat::kan::{codensity_monad, density_check, kan_finset, kan_pointwise, validate_monad, KanSide};
use fincat::limits::{limit, limit_finset, SetLimit, Side};
use fincat::random::{random_set_functor, rng};
use fincat::{
    validate_category, validate_functor, validate_natural, Functor, Guard, NatTrans, Outcome as Found, Report,
};
use fincat_diagram::normal::flatten;
use fincat_diagram::{
    compare_terms, evaluate, normalization_check, normalize, parse_term, render_svg, typecheck, Term,
};
use serde_json::{json, Value};

use crate::workspace::{LoadError, Workspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The object asked for verifiably does not exist.
    Absent,
    /// A law failed; the report carries the counterexample.
    Violation,
}

impl Status {
    pub fn word(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Absent => "absent",
            Status::Violation => "violation",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Absent | Status::Violation => 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub lines: Vec<String>,
    pub result: Value,
    pub report: Option<Report>,
}

impl Outcome {
    fn checked(lines: Vec<String>, result: Value, report: Report) -> Outcome {
        let status = if report.ok() { Status::Ok } else { Status::Violation };
        Outcome {
            status,
            lines,
            result,
            report: Some(report),
        }
    }

    fn absent(why: String, result: Value) -> Outcome {
        Outcome {
            status: Status::Absent,
            lines: vec![format!("absent: {why}")],
            result,
            report: None,
        }
    }
}

#[derive(Debug)]
pub enum CommandError {
    Usage(String),
    Load(LoadError),
    Failed(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Load(e) => e.exit_code(),
            _ => 2,
        }
    }
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CommandError::Usage(m) => write!(f, "usage error: {m}"),
            CommandError::Load(e) => write!(f, "{e}"),
            CommandError::Failed(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<fincat::Error> for CommandError {
    fn from(e: fincat::Error) -> Self {
        CommandError::Failed(e.to_string())
    }
}

impl From<fincat_diagram::DiagramError> for CommandError {
    fn from(e: fincat_diagram::DiagramError) -> Self {
        CommandError::Failed(e.to_string())
    }
}

type Res = Result<Outcome, CommandError>;

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub guard: Guard,
    pub seed: u64,
}

fn functor<'a>(ws: &'a Workspace, name: &str) -> Result<&'a Functor, CommandError> {
    ws.functor(name)
        .ok_or_else(|| CommandError::Usage(format!("`{name}` is not a declared functor")))
}

fn nat<'a>(ws: &'a Workspace, name: &str) -> Result<&'a NatTrans, CommandError> {
    ws.nat(name)
        .ok_or_else(|| CommandError::Usage(format!("`{name}` is not a declared natural transformation")))
}

fn set_json(x: &FinSetObj) -> Value {
    json!({ "size": x.len(), "elements": x.elements() })
}

fn functor_json(f: &Functor) -> Value {
    let (c, d) = (f.dom(), f.cod());
    let objects: BTreeMap<&str, &str> = (0..c.n_obj()).map(|a| (c.obj_id(a), d.obj_id(f.ob(a)))).collect();
    let morphisms: BTreeMap<&str, &str> = (0..c.n_mor()).map(|m| (c.mor_id(m), d.mor_id(f.mor(m)))).collect();
    json!({ "objects": objects, "morphisms": morphisms })
}

fn nat_json(n: &NatTrans) -> Value {
    let (c, d) = (n.dom_cat(), n.cod_cat());
    let comps: BTreeMap<&str, &str> = (0..c.n_obj()).map(|a| (c.obj_id(a), d.mor_id(n.at(a)))).collect();
    json!(comps)
}

fn setfunctor_json(x: &SetFunctor) -> Value {
    let c = x.dom();
    let sets: BTreeMap<&str, Value> = (0..c.n_obj()).map(|a| (c.obj_id(a), set_json(x.at(a)))).collect();
    let maps: BTreeMap<&str, BTreeMap<&str, &str>> = c
        .non_identities()
        .map(|m| {
            let (s, t) = (x.at(c.dom(m)), x.at(c.cod(m)));
            let table = x
                .map(m)
                .iter()
                .enumerate()
                .map(|(i, &j)| (s.elem(i), t.elem(j)))
                .collect();
            (c.mor_id(m), table)
        })
        .collect();
    json!({ "sets": sets, "maps": maps })
}

fn count(n: usize) -> String {
    if n == 1 {
        "1 element".into()
    } else {
        format!("{n} elements")
    }
}

fn side_word(side: Side) -> &'static str {
    match side {
        Side::Limit => "limit",
        Side::Colimit => "colimit",
    }
}

pub fn validate(ws: &Workspace) -> Res {
    let mut report = Report::new();
    let mut lines = Vec::new();
    let mut decls = Vec::new();
    for (kind, name) in ws.declarations() {
        let r = match kind {
            "category" => validate_category(ws.category(name).unwrap()),
            "functor" => validate_functor(ws.functor(name).unwrap()),
            "nat" => validate_natural(ws.nat(name).unwrap())?,
            "setfunctor" => fincat::finset::validate_set_functor(ws.setfunctor(name).unwrap()),
            _ => {
                typecheck(&ws.terms[name], &ws.env)?;
                Report::new()
            }
        };
        lines.push(format!("{kind} {name}: {r}"));
        decls.push(json!({ "kind": kind, "name": name, "checked": r.checked() }));
        report.merge(r);
    }
    Ok(Outcome::checked(lines, json!({ "declarations": decls }), report))
}

pub fn limit_cmd(ws: &Workspace, name: &str, side: Side, s: &Settings) -> Res {
    if let Some(x) = ws.setfunctor(name) {
        let res = limit_finset(x, side, &s.guard)?;
        let legs = set_legs(x, &res, |j| j);
        let lines = vec![format!(
            "{} of {name}: {} {{{}}}",
            side_word(side),
            count(res.object.len()),
            res.object.elements().join(", ")
        )];
        let result =
            json!({ "backend": "finset", "side": side_word(side), "object": set_json(&res.object), "legs": legs });
        return Ok(Outcome::checked(lines, result, res.certificate));
    }
    let d = functor(ws, name)?;
    let c = d.cod();
    match limit(d, side, &s.guard)? {
        Some(res) => {
            let legs = nat_json(&res.cone.legs);
            let lines = vec![format!("{} of {name}: {}", side_word(side), c.obj_id(res.object()))];
            let result =
                json!({ "backend": "search", "side": side_word(side), "object": c.obj_id(res.object()), "legs": legs });
            Ok(Outcome::checked(lines, result, res.certificate))
        }
        None => Ok(Outcome::absent(
            format!("{name} has no {} in {}", side_word(side), c.name()),
            json!({ "backend": "search", "side": side_word(side), "object": null }),
        )),
    }
}

/// Legs of a set (co)limit as element tables, keyed by object ids of the
/// shape. `diag` picks the object of `x`'s domain a leg lives at.
fn set_legs(x: &SetFunctor, res: &SetLimit, diag: impl Fn(usize) -> usize) -> Value {
    let c = x.dom();
    let mut out = BTreeMap::new();
    for (j, leg) in res.legs.iter().enumerate() {
        let at = x.at(diag(j));
        let table: BTreeMap<&str, &str> = match res.side {
            Side::Limit => leg
                .iter()
                .enumerate()
                .map(|(k, &e)| (res.object.elem(k), at.elem(e)))
                .collect(),
            Side::Colimit => leg
                .iter()
                .enumerate()
                .map(|(e, &k)| (at.elem(e), res.object.elem(k)))
                .collect(),
        };
        out.insert(c.obj_id(diag(j)).to_string(), table);
    }
    json!(out)
}

pub fn end_cmd(ws: &Workspace, name: &str, side: Side, s: &Settings) -> Res {
    let word = if side == Side::Limit { "end" } else { "coend" };
    let j_name = ws
        .twisted
        .get(name)
        .ok_or_else(|| CommandError::Usage(format!("`{name}` is not declared on op(J) x J")))?;
    let j = ws.category(j_name).unwrap().clone();
    if let Some(x) = ws.setfunctor(name) {
        let res = end_finset(x, &j, side, &s.guard)?;
        let prod = x.dom().clone();
        let diag = |a: usize| prod.obj(&pair_id(j.obj_id(a), j.obj_id(a))).unwrap();
        let legs = set_legs(x, &res, diag);
        let lines = vec![format!(
            "{word} of {name}: {} {{{}}}",
            count(res.object.len()),
            res.object.elements().join(", ")
        )];
        let result = json!({ "backend": "finset", "side": word, "object": set_json(&res.object), "legs": legs });
        return Ok(Outcome::checked(lines, result, res.certificate));
    }
    let d = functor(ws, name)?;
    let c = d.cod();
    match end_coend(d, &j, side, &s.guard)? {
        Some(res) => {
            let comps: BTreeMap<&str, &str> = res
                .wedge
                .components
                .iter()
                .enumerate()
                .map(|(a, &m)| (j.obj_id(a), c.mor_id(m)))
                .collect();
            let lines = vec![format!("{word} of {name}: {}", c.obj_id(res.object()))];
            let result =
                json!({ "backend": "search", "side": word, "object": c.obj_id(res.object()), "components": comps });
            Ok(Outcome::checked(lines, result, res.certificate))
        }
        None => Ok(Outcome::absent(
            format!("{name} has no {word} in {}", c.name()),
            json!({ "backend": "search", "side": word, "object": null }),
        )),
    }
}

pub fn kan_cmd(ws: &Workspace, k: &str, f: &str, side: KanSide, s: &Settings) -> Res {
    let word = if side == KanSide::Left { "left" } else { "right" };
    let kf = functor(ws, k)?;
    let d = kf.cod();
    if let Some(x) = ws.setfunctor(f) {
        let res = kan_finset(kf, x, side, &s.guard)?;
        let sizes: Vec<usize> = (0..d.n_obj()).map(|o| res.extension.size(o)).collect();
        let parts: Vec<String> = (0..d.n_obj())
            .map(|o| format!("{}: {}", d.obj_id(o), sizes[o]))
            .collect();
        let lines = vec![format!("{word} Kan extension of {f} along {k}: {}", parts.join(", "))];
        let result = json!({
            "backend": "finset",
            "side": word,
            "sizes": sizes,
            "extension": setfunctor_json(&res.extension),
        });
        return Ok(Outcome::checked(lines, result, res.certificate));
    }
    let ff = functor(ws, f)?;
    match kan_pointwise(kf, ff, side, &s.guard)? {
        Found::Found(res) => {
            let lines = vec![format!("{word} Kan extension of {f} along {k} found")];
            let key = if side == KanSide::Left { "unit" } else { "counit" };
            let result = json!({
                "backend": "search",
                "side": word,
                "extension": functor_json(&res.extension),
                key: nat_json(&res.unit_or_counit),
            });
            Ok(Outcome::checked(lines, result, res.certificate))
        }
        Found::Absent(why) => Ok(Outcome::absent(
            why,
            json!({ "backend": "search", "side": word, "extension": null }),
        )),
    }
}

pub fn adjoint_cmd(ws: &Workspace, g: &str, side: AdjSide) -> Res {
    let gf = functor(ws, g)?;
    let word = if side == AdjSide::Left { "left" } else { "right" };
    match adjoint_from_universals(gf, side)? {
        Found::Found(adj) => {
            let mut report = adj.validate()?;
            report.merge(snake_check(&adj.left, &adj.right, &adj.unit, &adj.counit)?);
            let other = if side == AdjSide::Left { &adj.left } else { &adj.right };
            let lines = vec![
                format!("{word} adjoint of {g}: {}", other.obj_signature()),
                format!("unit: {}", adj.unit.signature()),
                format!("counit: {}", adj.counit.signature()),
            ];
            let result = json!({
                "side": word,
                "adjoint": functor_json(other),
                "unit": nat_json(&adj.unit),
                "counit": nat_json(&adj.counit),
            });
            Ok(Outcome::checked(lines, result, report))
        }
        Found::Absent(why) => Ok(Outcome::absent(why, json!({ "side": word, "adjoint": null }))),
    }
}

pub fn snake_cmd(ws: &Workspace, f: &str, g: &str, eta: &str, eps: &str) -> Res {
    let r = snake_check(functor(ws, f)?, functor(ws, g)?, nat(ws, eta)?, nat(ws, eps)?)?;
    let lines = vec![format!("snake identities for {f} -| {g} with {eta}, {eps}")];
    Ok(Outcome::checked(
        lines,
        json!({ "left": f, "right": g, "unit": eta, "counit": eps }),
        r,
    ))
}

pub fn yoneda_cmd(ws: &Workspace, c: &str, s: &Settings) -> Res {
    let cat = ws
        .category(c)
        .ok_or_else(|| CommandError::Usage(format!("`{c}` is not a declared category")))?
        .clone();
    let mut xs: Vec<SetFunctor> = ws
        .setfunctors
        .values()
        .filter(|x| same_cat(x.dom(), &cat))
        .cloned()
        .collect();
    for o in cat.objects() {
        xs.push(hom_functor(&cat, o, Variance::Covariant)?);
    }
    let mut r = rng(s.seed);
    for i in 0..4 {
        xs.push(random_set_functor(&mut r, &cat, 3).with_name(format!("random{i}")));
    }
    let mut report = Report::new();
    let mut lines = Vec::new();
    let mut checked = BTreeMap::new();
    for x in &xs {
        let rx = yoneda_check(x, &s.guard)?;
        lines.push(format!("{}: {rx}", x.name()));
        let sizes: Vec<usize> = (0..cat.n_obj()).map(|o| x.size(o)).collect();
        checked.insert(x.name().to_string(), sizes);
        report.merge(rx);
    }
    let embedding = match yoneda_embedding(&cat, &s.guard) {
        Ok(y) => {
            let rf = fully_faithful_check(&y.functor);
            lines.push(format!("embedding fully faithful: {rf}"));
            let ok = rf.ok();
            report.merge(rf);
            json!(ok)
        }
        Err(e) => {
            lines.push(format!("embedding check skipped: {e}"));
            Value::Null
        }
    };
    Ok(Outcome::checked(
        lines,
        json!({ "category": c, "functors": checked, "embedding_fully_faithful": embedding }),
        report,
    ))
}

pub fn density_cmd(ws: &Workspace, k: &str, s: &Settings) -> Res {
    let res = density_check(functor(ws, k)?, &s.guard)?;
    let result = json!({
        "dense": res.dense(),
        "lan_is_identity": res.lan_is_identity,
        "hom_criterion": res.hom_criterion,
    });
    if res.dense() {
        Ok(Outcome::checked(vec![format!("{k} is dense")], result, res.report))
    } else {
        let why = res
            .report
            .counterexample()
            .map(|c| format!("{k} is not dense: `{}` fails at {}", c.law, c.detail))
            .unwrap_or_else(|| format!("{k} is not dense"));
        let mut out = Outcome::absent(why, result);
        out.report = Some(res.report);
        Ok(out)
    }
}

pub fn codensity_cmd(ws: &Workspace, k: &str, s: &Settings) -> Res {
    match codensity_monad(functor(ws, k)?, &s.guard)? {
        Found::Found((m, mut report)) => {
            report.merge(validate_monad(&m)?);
            let lines = vec![
                format!("codensity monad of {k}: T = {}", m.endofunctor.obj_signature()),
                format!("unit: {}", m.unit.signature()),
                format!("multiplication: {}", m.mult.signature()),
            ];
            let result = json!({
                "endofunctor": functor_json(&m.endofunctor),
                "unit": nat_json(&m.unit),
                "mult": nat_json(&m.mult),
            });
            Ok(Outcome::checked(lines, result, report))
        }
        Found::Absent(why) => Ok(Outcome::absent(why, json!({ "endofunctor": null }))),
    }
}

pub fn weighted_cmd(ws: &Workspace, w: &str, f: &str, side: Side, s: &Settings) -> Res {
    let wx = ws
        .setfunctor(w)
        .ok_or_else(|| CommandError::Usage(format!("`{w}` is not a declared set functor")))?;
    let word = side_word(side);
    if let Some(fx) = ws.setfunctor(f) {
        let res = weighted_limit_finset(wx, fx, side, &s.guard)?;
        let lines = vec![format!("weighted {word} of {f} by {w}: {}", count(res.object.len()))];
        let result = json!({ "backend": "finset", "side": word, "object": set_json(&res.object) });
        return Ok(Outcome::checked(lines, result, res.report));
    }
    let ff = functor(ws, f)?;
    match weighted_limit(wx, ff, side, &s.guard)? {
        Some(res) => {
            let e = ff.cod();
            let lines = vec![format!("weighted {word} of {f} by {w}: {}", e.obj_id(res.object))];
            let result = json!({ "backend": "search", "side": word, "object": e.obj_id(res.object) });
            Ok(Outcome::checked(lines, result, res.report))
        }
        None => Ok(Outcome::absent(
            format!("{f} has no {word} weighted by {w}"),
            json!({ "backend": "search", "side": word, "object": null }),
        )),
    }
}

/// A named term from the workspace, or the argument parsed as a term.
pub fn resolve_term(ws: &Workspace, text: &str) -> Result<Term, CommandError> {
    if let Some(t) = ws.terms.get(text) {
        return Ok(t.clone());
    }
    parse_term(text).map_err(|e| CommandError::Usage(format!("`{text}` is neither a declared term nor a term: {e}")))
}

pub fn diagram_eval_cmd(ws: &Workspace, text: &str) -> Res {
    let t = resolve_term(ws, text)?;
    let iface = typecheck(&t, &ws.env)?;
    let e = evaluate(&t, &ws.env)?;
    let lines = vec![format!("{t} : {iface}"), format!("components: {}", e.signature())];
    let result = json!({ "term": t.to_string(), "interface": iface.to_string(), "components": nat_json(&e) });
    Ok(Outcome {
        status: Status::Ok,
        lines,
        result,
        report: None,
    })
}

pub fn diagram_normalize_cmd(ws: &Workspace, text: &str, other: Option<&str>) -> Res {
    let t = resolve_term(ws, text)?;
    let n = normalize(&t, &ws.env)?;
    let layers = flatten(&n, &ws.env)?.layers.len();
    let mut report = normalization_check(&t, &ws.env)?;
    let mut lines = vec![format!("normal form: {n}")];
    let mut result = json!({ "term": t.to_string(), "normal_form": n.to_string(), "layers": layers });
    if let Some(o) = other {
        let u = resolve_term(ws, o)?;
        let c = compare_terms(&t, &u, &ws.env)?;
        lines.push(format!("same normal form: {}", c.same_normal_form));
        lines.push(format!("same evaluation: {}", c.same_evaluation));
        result["comparison"] = json!({
            "other": u.to_string(),
            "same_normal_form": c.same_normal_form,
            "same_evaluation": c.same_evaluation,
        });
        report.merge(c.report);
    }
    Ok(Outcome::checked(lines, result, report))
}

pub fn render_cmd(ws: &Workspace, text: &str, out: &Path) -> Res {
    let t = resolve_term(ws, text)?;
    let svg = render_svg(&t, &ws.env)?;
    std::fs::write(out, &svg).map_err(|e| CommandError::Failed(format!("{}: {e}", out.display())))?;
    let lines = vec![format!("wrote {} ({} bytes)", out.display(), svg.len())];
    let result = json!({ "term": t.to_string(), "output": out.display().to_string(), "bytes": svg.len() });
    Ok(Outcome {
        status: Status::Ok,
        lines,
        result,
        report: None,
    })
}
