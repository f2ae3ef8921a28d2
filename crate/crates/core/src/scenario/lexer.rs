//! Tokens of the scenario language.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    /// Digits with an optional fraction and exponent, e.g. `12`, `0.5`, `1e-8`.
    Number(String),
    /// One of `= { } [ ] ( ) ; : , * ^ / + - ->`.
    Sym(&'static str),
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(s) => write!(f, "number `{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Newline => write!(f, "end of line"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// Byte offsets in the source.
    pub start: usize,
    pub end: usize,
}

/// A character the lexer cannot start a token with.
#[derive(Debug, Clone, PartialEq)]
pub struct LexError {
    pub line: usize,
    pub col: usize,
    pub found: char,
}

const SYMBOLS: [&str; 15] = ["->", "=", "{", "}", "[", "]", "(", ")", ";", ":", ",", "*", "^", "/", "+"];

pub fn lex(src: &str) -> Result<Vec<Token>, LexError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut line_start = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let col = src[line_start..i].chars().count() + 1;
        let push = |out: &mut Vec<Token>, tok: Tok, start: usize, end: usize| {
            out.push(Token {
                tok,
                line,
                col,
                start,
                end,
            })
        };
        match c {
            b'\n' => {
                push(&mut out, Tok::Newline, i, i + 1);
                i += 1;
                line += 1;
                line_start = i;
            }
            b' ' | b'\t' | b'\r' => i += 1,
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && matches!(bytes[i], b'e' | b'E') {
                    let mut k = i + 1;
                    if k < bytes.len() && matches!(bytes[k], b'+' | b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        i = k;
                    }
                }
                push(&mut out, Tok::Number(src[start..i].to_string()), start, i);
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                push(&mut out, Tok::Ident(src[start..i].to_string()), start, i);
            }
            b'-' => {
                let (sym, len) = if bytes.get(i + 1) == Some(&b'>') { ("->", 2) } else { ("-", 1) };
                push(&mut out, Tok::Sym(sym), i, i + len);
                i += len;
            }
            _ => match SYMBOLS.iter().find(|s| s.len() == 1 && s.as_bytes()[0] == c) {
                Some(s) => {
                    push(&mut out, Tok::Sym(s), i, i + 1);
                    i += 1;
                }
                None => {
                    return Err(LexError {
                        line,
                        col,
                        found: src[i..].chars().next().expect("nonempty"),
                    })
                }
            },
        }
    }
    let col = src[line_start..].chars().count() + 1;
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
        start: src.len(),
        end: src.len(),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn lexes_strands_and_arrows() {
        assert_eq!(
            toks("1*(2j-1)^-1/2"),
            vec![
                Tok::Number("1".into()),
                Tok::Sym("*"),
                Tok::Sym("("),
                Tok::Number("2".into()),
                Tok::Ident("j".into()),
                Tok::Sym("-"),
                Tok::Number("1".into()),
                Tok::Sym(")"),
                Tok::Sym("^"),
                Tok::Sym("-"),
                Tok::Number("1".into()),
                Tok::Sym("/"),
                Tok::Number("2".into()),
                Tok::Eof
            ]
        );
        assert_eq!(toks("except 3 -> 1e-2 # note")[2], Tok::Sym("->"));
        assert_eq!(toks("1e-2")[0], Tok::Number("1e-2".into()));
        assert_eq!(toks("3e")[0], Tok::Number("3".into()));
    }

    #[test]
    fn reports_bad_characters() {
        let e = lex("a\n  $").unwrap_err();
        assert_eq!((e.line, e.col, e.found), (2, 3, '$'));
    }
}
