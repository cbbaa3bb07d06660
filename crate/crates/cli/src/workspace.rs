//! Loading `.cat` files into a workspace of named structures.

use std::collections::BTreeMap;
use std::fmt::{self, Write};
use std::path::Path;

use fincat::cat::pair_id;
use fincat::finset::{validate_set_functor, SetFunctor};
use fincat::functor::CatRef;
use fincat::{opposite, product, validate_category, validate_functor, validate_natural};
use fincat::{FinCat, Functor, NatTrans, Report};
use fincat_diagram::{parse_term, typecheck, DiagramError, Environment, Term};

use crate::lexer::{describe, lex, Tok, Token};

#[derive(Debug, Clone)]
pub enum LoadError {
    Io {
        file: String,
        message: String,
    },
    Syntax {
        file: String,
        line: usize,
        col: usize,
        message: String,
    },
    Structural {
        file: String,
        line: usize,
        message: String,
    },
    /// A declaration parsed but breaks a law; the report names it.
    Violation {
        file: String,
        line: usize,
        subject: String,
        report: Report,
    },
}

impl LoadError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LoadError::Violation { .. } => 1,
            _ => 2,
        }
    }

    pub fn report(&self) -> Option<&Report> {
        match self {
            LoadError::Violation { report, .. } => Some(report),
            _ => None,
        }
    }
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io { file, message } => write!(f, "{file}: {message}"),
            LoadError::Syntax {
                file,
                line,
                col,
                message,
            } => {
                write!(f, "{file}:{line}:{col}: syntax error: {message}")
            }
            LoadError::Structural { file, line, message } => write!(f, "{file}:{line}: {message}"),
            LoadError::Violation {
                file,
                line,
                subject,
                report,
            } => {
                write!(f, "{file}:{line}: {subject} fails validation: {report}")
            }
        }
    }
}

impl std::error::Error for LoadError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Decl {
    Category(String),
    Functor(String),
    Nat(String),
    SetFunctor(String),
    Term(String),
}

/// Named categories, functors, transformations, set-valued functors and
/// diagram terms. Categories, functors and transformations live in the
/// diagram environment so terms can refer to them directly.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub env: Environment,
    pub setfunctors: BTreeMap<String, SetFunctor>,
    pub terms: BTreeMap<String, Term>,
    /// Bifunctors declared on `op(J) x J`, mapped to `J`.
    pub twisted: BTreeMap<String, String>,
    set_domains: BTreeMap<String, String>,
    decls: Vec<Decl>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn load_files<P: AsRef<Path>>(files: &[P]) -> Result<Workspace, LoadError> {
        Workspace::load_files_in(Path::new("."), files)
    }

    /// Loads `files` with relative paths taken from `dir`; messages name each
    /// file as given.
    pub fn load_files_in<P: AsRef<Path>>(dir: &Path, files: &[P]) -> Result<Workspace, LoadError> {
        let mut ws = Workspace::new();
        for p in files {
            let p = p.as_ref();
            let file = p.display().to_string();
            let text = std::fs::read_to_string(dir.join(p)).map_err(|e| LoadError::Io {
                file: file.clone(),
                message: e.to_string(),
            })?;
            ws.load_str(&file, &text)?;
        }
        Ok(ws)
    }

    pub fn parse(text: &str) -> Result<Workspace, LoadError> {
        let mut ws = Workspace::new();
        ws.load_str("<input>", text)?;
        Ok(ws)
    }

    pub fn load_str(&mut self, file: &str, text: &str) -> Result<(), LoadError> {
        let toks = lex(text).map_err(|(line, col, message)| LoadError::Syntax {
            file: file.to_string(),
            line,
            col,
            message,
        })?;
        let mut p = Parser {
            file: file.to_string(),
            toks,
            pos: 0,
            ws: self,
        };
        p.declarations()
    }

    pub fn category(&self, name: &str) -> Option<&CatRef> {
        self.env.category(name).ok()
    }

    pub fn functor(&self, name: &str) -> Option<&Functor> {
        self.env.functor(name).ok()
    }

    pub fn nat(&self, name: &str) -> Option<&NatTrans> {
        self.env.generator(name).ok().map(|g| &g.nat)
    }

    pub fn setfunctor(&self, name: &str) -> Option<&SetFunctor> {
        self.setfunctors.get(name)
    }

    /// Declared names in file order, tagged by kind.
    pub fn declarations(&self) -> Vec<(&'static str, &str)> {
        self.decls
            .iter()
            .map(|d| match d {
                Decl::Category(n) => ("category", n.as_str()),
                Decl::Functor(n) => ("functor", n.as_str()),
                Decl::Nat(n) => ("nat", n.as_str()),
                Decl::SetFunctor(n) => ("setfunctor", n.as_str()),
                Decl::Term(n) => ("term", n.as_str()),
            })
            .collect()
    }

    /// The workspace in `.cat` syntax; parsing the output gives back an
    /// equal workspace.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for d in &self.decls {
            match d {
                Decl::Category(n) => {
                    let c = self.env.category(n).unwrap();
                    writeln!(out, "category {n} {{").unwrap();
                    if c.n_obj() > 0 {
                        writeln!(out, "  objects: {};", c.objects().join(", ")).unwrap();
                    }
                    for f in c.non_identities() {
                        let (a, b) = (c.dom(f), c.cod(f));
                        writeln!(out, "  mor {}: {} -> {};", c.mor_id(f), c.obj_id(a), c.obj_id(b)).unwrap();
                    }
                    for (g, f) in c.composable_pairs() {
                        if !c.is_identity(g) && !c.is_identity(f) {
                            let h = c.comp(g, f);
                            writeln!(out, "  compose {}.{} = {};", c.mor_id(g), c.mor_id(f), c.mor_id(h)).unwrap();
                        }
                    }
                    writeln!(out, "}}").unwrap();
                }
                Decl::Functor(n) => {
                    let f = self.env.functor(n).unwrap();
                    let (cod, dom) = self.env.functor_ends(n).unwrap();
                    let (c, e) = (f.dom(), f.cod());
                    writeln!(out, "functor {n}: {dom} -> {cod} {{").unwrap();
                    for a in 0..c.n_obj() {
                        writeln!(out, "  obj {} |-> {};", c.obj_id(a), e.obj_id(f.ob(a))).unwrap();
                    }
                    for m in c.non_identities() {
                        writeln!(out, "  mor {} |-> {};", c.mor_id(m), e.mor_id(f.mor(m))).unwrap();
                    }
                    writeln!(out, "}}").unwrap();
                }
                Decl::Nat(n) => {
                    let g = self.env.generator(n).unwrap();
                    let (c, e) = (g.nat.dom_cat(), g.nat.cod_cat());
                    writeln!(out, "nat {n}: {} => {} {{", g.interface.bottom, g.interface.top).unwrap();
                    for a in 0..c.n_obj() {
                        writeln!(out, "  at {}: {};", c.obj_id(a), e.mor_id(g.nat.at(a))).unwrap();
                    }
                    writeln!(out, "}}").unwrap();
                }
                Decl::SetFunctor(n) => {
                    let x = &self.setfunctors[n];
                    let c = x.dom();
                    writeln!(out, "setfunctor {n}: {} -> Set {{", self.set_domains[n]).unwrap();
                    for a in 0..c.n_obj() {
                        writeln!(out, "  obj {} |-> {{{}}};", c.obj_id(a), x.at(a).elements().join(", ")).unwrap();
                    }
                    for m in c.non_identities() {
                        let (s, t) = (x.at(c.dom(m)), x.at(c.cod(m)));
                        let pairs: Vec<String> = x
                            .map(m)
                            .iter()
                            .enumerate()
                            .map(|(i, &j)| format!("{} -> {}", s.elem(i), t.elem(j)))
                            .collect();
                        writeln!(out, "  mor {} |-> [{}];", c.mor_id(m), pairs.join(", ")).unwrap();
                    }
                    writeln!(out, "}}").unwrap();
                }
                Decl::Term(n) => {
                    writeln!(out, "term {n} = \"{}\";", self.terms[n]).unwrap();
                }
            }
        }
        out
    }

    fn taken(&self, name: &str) -> bool {
        self.env.category(name).is_ok()
            || self.env.functor(name).is_ok()
            || self.env.generator(name).is_ok()
            || self.setfunctors.contains_key(name)
            || self.terms.contains_key(name)
    }
}

/// A category expression: a name, `op(C)` or a product `A x B`.
#[derive(Debug, Clone)]
enum CatExpr {
    Named(String),
    Op(Box<CatExpr>),
    Product(Box<CatExpr>, Box<CatExpr>),
}

impl fmt::Display for CatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatExpr::Named(n) => write!(f, "{n}"),
            CatExpr::Op(c) => write!(f, "op({c})"),
            CatExpr::Product(a, b) => write!(f, "{a} x {b}"),
        }
    }
}

struct Parser<'a> {
    file: String,
    toks: Vec<Token>,
    pos: usize,
    ws: &'a mut Workspace,
}

type Res<T> = Result<T, LoadError>;

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, message: impl Into<String>) -> LoadError {
        let t = self.peek();
        LoadError::Syntax {
            file: self.file.clone(),
            line: t.line,
            col: t.col,
            message: message.into(),
        }
    }

    fn structural(&self, line: usize, message: impl Into<String>) -> LoadError {
        LoadError::Structural {
            file: self.file.clone(),
            line,
            message: message.into(),
        }
    }

    fn violation(&self, line: usize, subject: String, report: Report) -> LoadError {
        LoadError::Violation {
            file: self.file.clone(),
            line,
            subject,
            report,
        }
    }

    fn is(&self, tok: &Tok) -> bool {
        &self.peek().tok == tok
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == w)
    }

    fn expect(&mut self, tok: Tok) -> Res<()> {
        if self.is(&tok) {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(format!(
                "expected {}, found {}",
                describe(&tok),
                describe(&self.peek().tok)
            )))
        }
    }

    fn punct(&mut self, c: char) -> Res<()> {
        self.expect(Tok::Punct(c))
    }

    fn word(&mut self, w: &str) -> Res<()> {
        if self.is_word(w) {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{w}`, found {}", describe(&self.peek().tok))))
        }
    }

    fn ident(&mut self, what: &str) -> Res<String> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.syntax(format!("expected {what}, found {}", describe(&other)))),
        }
    }

    /// An object, morphism or element id; `(x,y)` builds a pair id.
    fn name(&mut self) -> Res<String> {
        if self.is(&Tok::Punct('(')) {
            self.bump();
            let a = self.name()?;
            self.punct(',')?;
            let b = self.name()?;
            self.punct(')')?;
            Ok(pair_id(&a, &b))
        } else {
            self.ident("a name")
        }
    }

    fn cat_expr(&mut self) -> Res<CatExpr> {
        let mut e = self.cat_primary()?;
        while self.is_word("x") {
            self.bump();
            let rhs = self.cat_primary()?;
            e = CatExpr::Product(Box::new(e), Box::new(rhs));
        }
        Ok(e)
    }

    fn cat_primary(&mut self) -> Res<CatExpr> {
        if self.is_word("op") && self.toks.get(self.pos + 1).map(|t| &t.tok) == Some(&Tok::Punct('(')) {
            self.bump();
            self.bump();
            let inner = self.cat_expr()?;
            self.punct(')')?;
            return Ok(CatExpr::Op(Box::new(inner)));
        }
        if self.is(&Tok::Punct('(')) {
            self.bump();
            let inner = self.cat_expr()?;
            self.punct(')')?;
            return Ok(inner);
        }
        Ok(CatExpr::Named(self.ident("a category")?))
    }

    /// Registers derived categories on first use and returns the name the
    /// environment knows the category by.
    fn resolve(&mut self, e: &CatExpr, line: usize) -> Res<String> {
        let name = e.to_string();
        if self.ws.env.category(&name).is_ok() {
            return Ok(name);
        }
        let cat = match e {
            CatExpr::Named(n) => return Err(self.structural(line, format!("unknown category `{n}`"))),
            CatExpr::Op(c) => {
                let c = self.resolve(c, line)?;
                opposite(self.ws.env.category(&c).unwrap()).renamed(name.clone())
            }
            CatExpr::Product(a, b) => {
                let a = self.resolve(a, line)?;
                let b = self.resolve(b, line)?;
                product(self.ws.env.category(&a).unwrap(), self.ws.env.category(&b).unwrap()).renamed(name.clone())
            }
        };
        let added = self.ws.env.add_category(&name, cat);
        added.map_err(|e| self.structural(line, e.to_string()))?;
        Ok(name)
    }

    /// `J` when the expression is literally `op(J) x J`.
    fn twisted_base(e: &CatExpr) -> Option<String> {
        if let CatExpr::Product(a, b) = e {
            if let (CatExpr::Op(x), CatExpr::Named(y)) = (a.as_ref(), b.as_ref()) {
                if let CatExpr::Named(x) = x.as_ref() {
                    if x == y {
                        return Some(y.clone());
                    }
                }
            }
        }
        None
    }

    fn fresh(&self, name: &str, line: usize) -> Res<()> {
        if self.ws.taken(name) || name == "id" || name == "Set" {
            return Err(self.structural(line, format!("name `{name}` is already declared")));
        }
        Ok(())
    }

    fn declarations(&mut self) -> Res<()> {
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::End => return Ok(()),
                Tok::Punct(';') => {
                    self.bump();
                }
                Tok::Ident(k) if k == "category" => self.category()?,
                Tok::Ident(k) if k == "functor" => self.functor()?,
                Tok::Ident(k) if k == "nat" => self.nat()?,
                Tok::Ident(k) if k == "setfunctor" => self.setfunctor()?,
                Tok::Ident(k) if k == "term" => self.term()?,
                other => {
                    return Err(self.syntax(format!(
                        "expected a declaration (category, functor, nat, setfunctor, term), found {}",
                        describe(other)
                    )))
                }
            }
        }
    }

    fn category(&mut self) -> Res<()> {
        let line = self.bump().line;
        let name = self.ident("a category name")?;
        self.fresh(&name, line)?;
        self.punct('{')?;
        let mut b = FinCat::builder(name.clone());
        while !self.is(&Tok::Punct('}')) {
            if self.is_word("objects") {
                self.bump();
                self.punct(':')?;
                if !self.is(&Tok::Punct(';')) {
                    b = b.object(self.name()?);
                    while self.is(&Tok::Punct(',')) {
                        self.bump();
                        b = b.object(self.name()?);
                    }
                }
            } else if self.is_word("mor") {
                self.bump();
                let f = self.name()?;
                self.punct(':')?;
                let a = self.name()?;
                self.expect(Tok::Arrow)?;
                let c = self.name()?;
                b = b.morphism(f, a, c);
            } else if self.is_word("compose") {
                self.bump();
                let g = self.name()?;
                self.punct('.')?;
                let f = self.name()?;
                self.punct('=')?;
                let h = self.name()?;
                b = b.compose(g, f, h);
            } else {
                return Err(self.syntax(format!(
                    "expected `objects`, `mor` or `compose`, found {}",
                    describe(&self.peek().tok)
                )));
            }
            self.punct(';')?;
        }
        self.punct('}')?;
        let c = b
            .build()
            .map_err(|e| self.structural(line, format!("category `{name}`: {e}")))?;
        let r = validate_category(&c);
        if !r.ok() {
            return Err(self.violation(line, format!("category `{name}`"), r));
        }
        let added = self.ws.env.add_category(&name, c);
        added.map_err(|e| self.structural(line, e.to_string()))?;
        self.ws.decls.push(Decl::Category(name));
        Ok(())
    }

    fn functor(&mut self) -> Res<()> {
        let line = self.bump().line;
        let name = self.ident("a functor name")?;
        self.fresh(&name, line)?;
        self.punct(':')?;
        let src = self.cat_expr()?;
        self.expect(Tok::Arrow)?;
        let tgt = self.cat_expr()?;
        let (dom, cod) = (self.resolve(&src, line)?, self.resolve(&tgt, line)?);
        self.punct('{')?;
        let (mut objs, mut mors) = (Vec::new(), Vec::new());
        while !self.is(&Tok::Punct('}')) {
            let obj = if self.is_word("obj") {
                true
            } else if self.is_word("mor") {
                false
            } else {
                return Err(self.syntax(format!("expected `obj` or `mor`, found {}", describe(&self.peek().tok))));
            };
            self.bump();
            let a = self.name()?;
            self.expect(Tok::MapsTo)?;
            let x = self.name()?;
            self.punct(';')?;
            if obj {
                objs.push((a, x))
            } else {
                mors.push((a, x))
            }
        }
        self.punct('}')?;
        let c = self.ws.env.category(&dom).unwrap().clone();
        let d = self.ws.env.category(&cod).unwrap().clone();
        let f = Functor::from_ids(&name, c, d, &pairs(&objs), &pairs(&mors))
            .map_err(|e| self.structural(line, e.to_string()))?;
        let r = validate_functor(&f);
        if !r.ok() {
            return Err(self.violation(line, format!("functor `{name}`"), r));
        }
        let added = self.ws.env.add_functor(&name, f);
        added.map_err(|e| self.structural(line, e.to_string()))?;
        if let Some(j) = Self::twisted_base(&src) {
            self.ws.twisted.insert(name.clone(), j);
        }
        self.ws.decls.push(Decl::Functor(name));
        Ok(())
    }

    /// `id(C)` or `F.G.H`, as text the environment understands.
    fn boundary(&mut self, line: usize) -> Res<String> {
        if self.is_word("id") {
            self.bump();
            self.punct('(')?;
            let c = self.cat_expr()?;
            self.punct(')')?;
            let c = self.resolve(&c, line)?;
            return Ok(format!("id({c})"));
        }
        let mut parts = vec![self.ident("a functor name")?];
        while self.is(&Tok::Punct('.')) {
            self.bump();
            parts.push(self.ident("a functor name")?);
        }
        Ok(parts.join("."))
    }

    fn nat(&mut self) -> Res<()> {
        let line = self.bump().line;
        let name = self.ident("a transformation name")?;
        self.fresh(&name, line)?;
        self.punct(':')?;
        let src = self.boundary(line)?;
        self.expect(Tok::DoubleArrow)?;
        let tgt = self.boundary(line)?;
        self.punct('{')?;
        let mut comps = Vec::new();
        while !self.is(&Tok::Punct('}')) {
            self.word("at")?;
            let a = self.name()?;
            self.punct(':')?;
            let u = self.name()?;
            self.punct(';')?;
            comps.push((a, u));
        }
        self.punct('}')?;
        let env = &self.ws.env;
        let diag = |e: DiagramError| self.structural(line, format!("nat `{name}`: {e}"));
        let (bottom, top) = env.boundaries(&src, &tgt).map_err(diag)?;
        if bottom.outer != top.outer || bottom.inner != top.inner {
            return Err(self.structural(line, format!("nat `{name}`: {src} and {tgt} do not share endpoints")));
        }
        let f = env.composite(&bottom).map_err(diag)?;
        let g = env.composite(&top).map_err(diag)?;
        let alpha =
            NatTrans::from_ids(&name, f, g, &pairs(&comps)).map_err(|e| self.structural(line, e.to_string()))?;
        let r = validate_natural(&alpha).map_err(|e| self.structural(line, e.to_string()))?;
        if !r.ok() {
            return Err(self.violation(line, format!("nat `{name}`"), r));
        }
        let comps = alpha.components().to_vec();
        let added = self.ws.env.add_generator(&name, bottom, top, comps);
        added.map_err(|e| self.structural(line, e.to_string()))?;
        self.ws.decls.push(Decl::Nat(name));
        Ok(())
    }

    fn setfunctor(&mut self) -> Res<()> {
        let line = self.bump().line;
        let name = self.ident("a set functor name")?;
        self.fresh(&name, line)?;
        self.punct(':')?;
        let src = self.cat_expr()?;
        self.expect(Tok::Arrow)?;
        self.word("Set")?;
        let dom = self.resolve(&src, line)?;
        self.punct('{')?;
        let mut sets: Vec<(String, Vec<String>)> = Vec::new();
        let mut maps: Vec<(String, Vec<(String, String)>)> = Vec::new();
        while !self.is(&Tok::Punct('}')) {
            if self.is_word("obj") {
                self.bump();
                let a = self.name()?;
                self.expect(Tok::MapsTo)?;
                self.punct('{')?;
                let mut els = Vec::new();
                if !self.is(&Tok::Punct('}')) {
                    els.push(self.name()?);
                    while self.is(&Tok::Punct(',')) {
                        self.bump();
                        els.push(self.name()?);
                    }
                }
                self.punct('}')?;
                sets.push((a, els));
            } else if self.is_word("mor") {
                self.bump();
                let f = self.name()?;
                self.expect(Tok::MapsTo)?;
                self.punct('[')?;
                let mut table = Vec::new();
                if !self.is(&Tok::Punct(']')) {
                    loop {
                        let x = self.name()?;
                        self.expect(Tok::Arrow)?;
                        let y = self.name()?;
                        table.push((x, y));
                        if !self.is(&Tok::Punct(',')) {
                            break;
                        }
                        self.bump();
                    }
                }
                self.punct(']')?;
                maps.push((f, table));
            } else {
                return Err(self.syntax(format!("expected `obj` or `mor`, found {}", describe(&self.peek().tok))));
            }
            self.punct(';')?;
        }
        self.punct('}')?;
        let c = self.ws.env.category(&dom).unwrap().clone();
        let set_refs: Vec<(&str, Vec<&str>)> = sets
            .iter()
            .map(|(a, els)| (a.as_str(), els.iter().map(String::as_str).collect()))
            .collect();
        let map_refs: Vec<(&str, Vec<(&str, &str)>)> = maps.iter().map(|(f, t)| (f.as_str(), pairs(t))).collect();
        let x =
            SetFunctor::from_ids(&name, c, &set_refs, &map_refs).map_err(|e| self.structural(line, e.to_string()))?;
        let r = validate_set_functor(&x);
        if !r.ok() {
            return Err(self.violation(line, format!("setfunctor `{name}`"), r));
        }
        if let Some(j) = Self::twisted_base(&src) {
            self.ws.twisted.insert(name.clone(), j);
        }
        self.ws.set_domains.insert(name.clone(), dom);
        self.ws.setfunctors.insert(name.clone(), x);
        self.ws.decls.push(Decl::SetFunctor(name));
        Ok(())
    }

    fn term(&mut self) -> Res<()> {
        let line = self.bump().line;
        let name = self.ident("a term name")?;
        self.fresh(&name, line)?;
        self.punct('=')?;
        let t = self.peek().clone();
        let Tok::Str(text) = &t.tok else {
            return Err(self.syntax(format!("expected a quoted term, found {}", describe(&t.tok))));
        };
        self.bump();
        self.punct(';')?;
        let term = parse_term(text).map_err(|e| match e {
            DiagramError::Syntax { line: l, col, message } => LoadError::Syntax {
                file: self.file.clone(),
                line: t.line + l - 1,
                col: if l == 1 { t.col + col } else { col },
                message,
            },
            other => self.structural(line, other.to_string()),
        })?;
        typecheck(&term, &self.ws.env).map_err(|e| self.structural(line, format!("term `{name}`: {e}")))?;
        self.ws.terms.insert(name.clone(), term);
        self.ws.decls.push(Decl::Term(name));
        Ok(())
    }
}

fn pairs(v: &[(String, String)]) -> Vec<(&str, &str)> {
    v.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect()
}
