use std::sync::Arc;

use super::{ParseError, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// Identifier immediately followed by `[`: the start of a schema reference.
    SchemaIdent(String),
    Type,
    Kind,
    Pi,
    Lambda,
    Colon,
    Dot,
    Comma,
    Arrow,
    LongArrow,
    Turnstile,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    Directive(String),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::SchemaIdent(s) => format!("identifier `{s}[`"),
            Tok::Type => "`Type`".into(),
            Tok::Kind => "`Kind`".into(),
            Tok::Pi => "`Pi`".into(),
            Tok::Lambda => "`\\`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LongArrow => "`-->`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::Directive(d) => format!("directive `#{d}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub fn is_ident_start(c: char) -> bool {
    (c.is_alphabetic() || c == '_') && c != 'λ' && c != 'Π'
}

pub fn is_ident_char(c: char) -> bool {
    is_ident_start(c) || c.is_ascii_digit() || c == '\''
}

/// `base` is the byte offset of `src` in the file; `line`/`col` are those of
/// its first character.
pub fn tokenize(src: &str, file: &Arc<str>, base: usize, line: usize, col: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    let mut line = line;
    let mut col = col;
    let span_of = |start: usize, end: usize, line: usize, col: usize| SourceSpan {
        file: file.clone(),
        start: base + start,
        end: base + end,
        line,
        column: col,
    };
    while i < chars.len() {
        let (off, c) = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c == ';' {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        let rest = &src[off..];
        let (tok, len_chars) = if is_ident_start(c) {
            let mut j = i;
            while j < chars.len() && is_ident_char(chars[j].1) {
                j += 1;
            }
            let end = chars.get(j).map_or(src.len(), |p| p.0);
            let word = &src[off..end];
            let tok = match word {
                "Type" => Tok::Type,
                "Kind" => Tok::Kind,
                "Pi" => Tok::Pi,
                _ if chars.get(j).map(|p| p.1) == Some('[') => Tok::SchemaIdent(word.to_string()),
                _ => Tok::Ident(word.to_string()),
            };
            (tok, j - i)
        } else if c == '#' {
            let mut j = i + 1;
            while j < chars.len() && is_ident_char(chars[j].1) {
                j += 1;
            }
            let end = chars.get(j).map_or(src.len(), |p| p.0);
            (Tok::Directive(src[off + 1..end].to_string()), j - i)
        } else if rest.starts_with("-->") {
            (Tok::LongArrow, 3)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if rest.starts_with("|-") {
            (Tok::Turnstile, 2)
        } else {
            let tok = match c {
                '\\' | 'λ' => Tok::Lambda,
                'Π' => Tok::Pi,
                '→' => Tok::Arrow,
                '⟶' => Tok::LongArrow,
                '⊢' => Tok::Turnstile,
                ':' => Tok::Colon,
                '.' => Tok::Dot,
                ',' => Tok::Comma,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '<' => Tok::LAngle,
                '>' => Tok::RAngle,
                _ => {
                    return Err(ParseError {
                        span: span_of(off, off + c.len_utf8(), line, col),
                        expected: Vec::new(),
                        found: format!("character `{c}`"),
                    })
                }
            };
            (tok, 1)
        };
        let end = chars.get(i + len_chars).map_or(src.len(), |p| p.0);
        out.push(Token { tok, span: span_of(off, end, line, start_col) });
        i += len_chars;
        col += len_chars;
    }
    out.push(Token { tok: Tok::Eof, span: span_of(src.len(), src.len(), line, col) });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s, &Arc::from("t"), 0, 1, 1).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn arrows_and_turnstiles() {
        assert_eq!(toks("a -> b --> c |- d"), vec![
            Tok::Ident("a".into()),
            Tok::Arrow,
            Tok::Ident("b".into()),
            Tok::LongArrow,
            Tok::Ident("c".into()),
            Tok::Turnstile,
            Tok::Ident("d".into()),
            Tok::Eof
        ]);
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(toks("λx:A.x → Π ⊢ ⟶"), vec![
            Tok::Lambda,
            Tok::Ident("x".into()),
            Tok::Colon,
            Tok::Ident("A".into()),
            Tok::Dot,
            Tok::Ident("x".into()),
            Tok::Arrow,
            Tok::Pi,
            Tok::Turnstile,
            Tok::LongArrow,
            Tok::Eof
        ]);
    }

    #[test]
    fn schema_identifiers_need_adjacent_bracket() {
        assert_eq!(toks("all[A] [X")[0], Tok::SchemaIdent("all".into()));
        assert_eq!(toks("all [A]")[0], Tok::Ident("all".into()));
    }

    #[test]
    fn comments_and_positions() {
        let ts = tokenize("; note\n  foo", &Arc::from("t"), 0, 1, 1).unwrap();
        assert_eq!(ts[0].tok, Tok::Ident("foo".into()));
        assert_eq!((ts[0].span.line, ts[0].span.column), (2, 3));
        assert_eq!((ts[0].span.start, ts[0].span.end), (9, 12));
    }

    #[test]
    fn bad_character() {
        assert!(tokenize("a $ b", &Arc::from("t"), 0, 1, 1).is_err());
    }
}
