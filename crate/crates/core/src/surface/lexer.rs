use std::sync::Arc;

use super::error::{SourceSpan, SurfaceError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Num(u64),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

const TWO_CHAR: [&str; 4] = ["->", "=>", "<=", "|-"];
const ONE_CHAR: [&str; 15] = ["{", "}", "(", ")", "[", "]", ",", ":", ";", ".", "=", "|", "*", "^", "+"];

pub(crate) const KEYWORDS: [&str; 17] = [
    "sig", "model", "theory", "goal", "morphism", "subst", "type", "forcing", "proof", "over", "not", "or", "and",
    "exists", "forall", "true", "false",
];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Valid identifier that is not a keyword.
pub fn is_plain_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if is_ident_start(c)) && cs.all(is_ident_char) && !is_keyword(s)
}

pub(crate) fn lex(text: &str, file: &Arc<str>) -> Result<Vec<Token>, SurfaceError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let span = |l0, c0, l1, c1| SourceSpan {
        file: file.clone(),
        line: l0,
        col: c0,
        end_line: l1,
        end_col: c1,
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (l0, c0) = (line, col);
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            col += (i - start) as u32;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                span: span(l0, c0, line, col),
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += (i - start) as u32;
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<u64>().map_err(|_| SurfaceError::Parse {
                span: span(l0, c0, line, col),
                message: format!("number {s} is too large"),
            })?;
            out.push(Token {
                tok: Tok::Num(n),
                span: span(l0, c0, line, col),
            });
            continue;
        }
        if let Some(sym) = TWO_CHAR
            .iter()
            .find(|s| chars.get(i + 1).is_some_and(|&d| s.starts_with(c) && s.ends_with(d)))
        {
            i += 2;
            col += 2;
            out.push(Token {
                tok: Tok::Sym(sym),
                span: span(l0, c0, line, col),
            });
            continue;
        }
        if let Some(sym) = ONE_CHAR.iter().find(|s| s.starts_with(c)) {
            i += 1;
            col += 1;
            out.push(Token {
                tok: Tok::Sym(sym),
                span: span(l0, c0, line, col),
            });
            continue;
        }
        return Err(SurfaceError::Parse {
            span: span(l0, c0, line, col + 1),
            message: format!("unexpected character {c:?}"),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: span(line, col, line, col),
    });
    Ok(out)
}
