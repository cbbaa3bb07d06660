//! Tokens of the `.cat` format. `#` starts a comment that runs to the end
//! of the line.

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Str(String),
    /// One of `{ } ( ) [ ] : ; , . =`.
    Punct(char),
    Arrow,
    MapsTo,
    DoubleArrow,
    End,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '*' | '<' | '+' | '^' | '!' | '?')
}

pub fn lex(text: &str) -> Result<Vec<Token>, (usize, usize, String)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l, k) = (line, col);
        let next = chars.get(i + 1).copied();
        let mut push = |tok: Tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Token { tok, line: l, col: k });
            *i += width;
            *col += width;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '-' if next == Some('>') => push(Tok::Arrow, 2, &mut i, &mut col),
            '=' if next == Some('>') => push(Tok::DoubleArrow, 2, &mut i, &mut col),
            '|' if next == Some('-') && chars.get(i + 2) == Some(&'>') => push(Tok::MapsTo, 3, &mut i, &mut col),
            '{' | '}' | '(' | ')' | '[' | ']' | ':' | ';' | ',' | '.' | '=' => push(Tok::Punct(c), 1, &mut i, &mut col),
            '"' => {
                let mut s = String::new();
                let mut j = i + 1;
                while j < chars.len() && chars[j] != '"' {
                    if chars[j] == '\n' {
                        return Err((l, k, "unterminated string".into()));
                    }
                    s.push(chars[j]);
                    j += 1;
                }
                if j == chars.len() {
                    return Err((l, k, "unterminated string".into()));
                }
                let width = j + 1 - i;
                push(Tok::Str(s), width, &mut i, &mut col);
            }
            c if is_ident_char(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                push(Tok::Ident(s), j - i, &mut i, &mut col);
            }
            other => return Err((l, k, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Token {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

pub fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Str(s) => format!("\"{s}\""),
        Tok::Punct(c) => format!("`{c}`"),
        Tok::Arrow => "`->`".into(),
        Tok::MapsTo => "`|->`".into(),
        Tok::DoubleArrow => "`=>`".into(),
        Tok::End => "end of file".into(),
    }
}
