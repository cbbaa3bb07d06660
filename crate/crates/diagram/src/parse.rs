//! Hand-written recursive descent parser for diagram terms.
//!
//! ```text
//! term  := row (';' row)*
//! row   := atom ('|' atom)*
//! atom  := name | 'id' '(' name ')' | '(' term ')'
//! ```

use crate::ast::Term;
use crate::DiagramError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Semi,
    Bar,
    Open,
    Close,
    End,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Spanned>, DiagramError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        let single = match c {
            ';' => Some(Tok::Semi),
            '|' => Some(Tok::Bar),
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            col += 1;
            out.push(Spanned { tok, line: l, col: k });
        } else if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if is_name_char(c) {
            let mut name = String::new();
            while let Some(&c) = chars.peek() {
                if !is_name_char(c) {
                    break;
                }
                name.push(c);
                chars.next();
                col += 1;
            }
            out.push(Spanned {
                tok: Tok::Name(name),
                line: l,
                col: k,
            });
        } else {
            return Err(DiagramError::Syntax {
                line: l,
                col: k,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> DiagramError {
        let t = self.peek();
        DiagramError::Syntax {
            line: t.line,
            col: t.col,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), DiagramError> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {}", describe(&self.peek().tok))))
        }
    }

    fn term(&mut self) -> Result<Term, DiagramError> {
        let mut rows = vec![self.row()?];
        while self.peek().tok == Tok::Semi {
            self.bump();
            rows.push(self.row()?);
        }
        Ok(Term::vertical(rows))
    }

    fn row(&mut self) -> Result<Term, DiagramError> {
        let mut atoms = vec![self.atom()?];
        while self.peek().tok == Tok::Bar {
            self.bump();
            atoms.push(self.atom()?);
        }
        Ok(Term::horizontal(atoms))
    }

    fn atom(&mut self) -> Result<Term, DiagramError> {
        match self.peek().tok.clone() {
            Tok::Open => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::Close, "`)`")?;
                Ok(t)
            }
            Tok::Name(n) => {
                self.bump();
                if n == "id" && self.peek().tok == Tok::Open {
                    self.bump();
                    let inner = match self.peek().tok.clone() {
                        Tok::Name(x) => {
                            self.bump();
                            x
                        }
                        other => {
                            return Err(self.error(format!(
                                "expected a functor or category name, found {}",
                                describe(&other)
                            )))
                        }
                    };
                    self.expect(Tok::Close, "`)`")?;
                    Ok(Term::Id(inner))
                } else {
                    Ok(Term::Gen(n))
                }
            }
            other => Err(self.error(format!("expected a term, found {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Name(n) => format!("`{n}`"),
        Tok::Semi => "`;`".into(),
        Tok::Bar => "`|`".into(),
        Tok::Open => "`(`".into(),
        Tok::Close => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parses a complete term; trailing input is an error.
pub fn parse_term(text: &str) -> Result<Term, DiagramError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let t = p.term()?;
    if p.peek().tok != Tok::End {
        return Err(p.error(format!("unexpected {}", describe(&p.peek().tok))));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_grouping() {
        assert_eq!(
            parse_term("alpha ; beta").unwrap(),
            Term::V(vec![Term::gen("alpha"), Term::gen("beta")])
        );
        assert_eq!(
            parse_term("(beta | alpha)").unwrap(),
            Term::H(vec![Term::gen("beta"), Term::gen("alpha")])
        );
        assert_eq!(
            parse_term("gamma | (beta ; alpha)").unwrap(),
            Term::H(vec![
                Term::gen("gamma"),
                Term::V(vec![Term::gen("beta"), Term::gen("alpha")])
            ])
        );
        assert_eq!(
            parse_term("a | b ; c").unwrap(),
            Term::V(vec![Term::H(vec![Term::gen("a"), Term::gen("b")]), Term::gen("c")])
        );
        assert_eq!(parse_term("id(F)").unwrap(), Term::id("F"));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_term("a ;\n  | b") {
            Err(DiagramError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        match parse_term("(a | b") {
            Err(DiagramError::Syntax { line, col, message }) => {
                assert_eq!((line, col), (1, 7));
                assert!(message.contains("`)`"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_term("a $ b").is_err());
        assert!(parse_term("").is_err());
        assert!(parse_term("id()").is_err());
    }

    #[test]
    fn printing_round_trips() {
        for s in ["a", "a ; b ; c", "(a ; b) ; c", "a | (b | c)", "(a ; b) | id(F) ; c"] {
            let t = parse_term(s).unwrap();
            assert_eq!(parse_term(&t.to_string()).unwrap(), t, "{s}");
        }
    }
}
