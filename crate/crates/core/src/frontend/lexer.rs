use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Equals,
    /// `:` opening a normal word (or a declaration separator).
    Open,
    /// `:` closing a normal word.
    Close,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Equals => "=",
            Tok::Open | Tok::Close => ":",
            _ => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

/// Whether a `:` after `prev` opens a normal word. It opens at the start,
/// after whitespace, after an opening bracket, comma or operator, and after
/// another opening `:`.
fn colon_opens(prev: Option<char>, prev_open: bool) -> bool {
    match prev {
        None => true,
        Some(':') => prev_open,
        Some(c) => c.is_whitespace() || "([{,+-*/^=".contains(c),
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    let mut prev_open = false;
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let advance = |n: usize, col: &mut usize| *col += n;
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut col);
            i += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[begin..i].iter().collect();
            advance(i - begin, &mut col);
            Tok::Ident(word)
        } else if c.is_ascii_digit() {
            let begin = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[begin..i].iter().collect();
            advance(i - begin, &mut col);
            Tok::Int(digits.parse().expect("digits"))
        } else {
            let t = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '=' => Tok::Equals,
                ':' => {
                    let prev = if i == 0 { None } else { Some(chars[i - 1]) };
                    if colon_opens(prev, prev_open) {
                        Tok::Open
                    } else {
                        Tok::Close
                    }
                }
                other => {
                    return Err(Error::Parse {
                        line,
                        column: col,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            };
            i += 1;
            advance(1, &mut col);
            t
        };
        prev_open = tok == Tok::Open;
        out.push(Token {
            tok,
            line: start.0,
            column: start.1,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn colons() {
        let t = kinds(":a :b c::");
        let colons: Vec<_> = t
            .iter()
            .filter(|k| matches!(k, Tok::Open | Tok::Close))
            .collect();
        assert_eq!(colons, [&Tok::Open, &Tok::Open, &Tok::Close, &Tok::Close]);
        let t = kinds("::a b: c:");
        let colons: Vec<_> = t
            .iter()
            .filter(|k| matches!(k, Tok::Open | Tok::Close))
            .collect();
        assert_eq!(colons, [&Tok::Open, &Tok::Open, &Tok::Close, &Tok::Close]);
        let t = kinds("d(:L L:)");
        assert!(t.contains(&Tok::Open) && t.contains(&Tok::Close));
    }

    #[test]
    fn positions_and_comments() {
        let toks = tokenize("param c; # note\n  central C;").unwrap();
        let c = toks
            .iter()
            .find(|t| t.tok == Tok::Ident("central".into()))
            .unwrap();
        assert_eq!((c.line, c.column), (2, 3));
        let err = tokenize("a $ b").unwrap_err();
        assert!(matches!(
            err,
            Error::Parse {
                line: 1,
                column: 3,
                ..
            }
        ));
    }
}
