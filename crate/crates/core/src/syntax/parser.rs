use std::collections::BTreeMap;
use std::sync::Arc;

use super::lexer::{tokenize, Tok, Token};
use super::printer::print_simple_type;
use super::{ParseError, SourceSpan, SpanMap};
use crate::kernel::Term;

#[derive(Clone, Debug)]
enum AstKind {
    Ident(String),
    SchemaRef(String, Vec<Ast>),
    Type,
    Kind,
    /// `None` binder name: non-dependent arrow.
    Pi(Option<String>, Box<Ast>, Box<Ast>),
    Lam(String, Box<Ast>, Box<Ast>),
    App(Box<Ast>, Box<Ast>),
}

#[derive(Clone, Debug)]
struct Ast {
    kind: AstKind,
    span: SourceSpan,
}

/// Schema references met while parsing: canonical name → (family, args).
pub type SchemaRefs = BTreeMap<String, (String, Vec<Term>)>;

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
    pub schema_refs: SchemaRefs,
}

fn join(a: &SourceSpan, b: &SourceSpan) -> SourceSpan {
    SourceSpan { file: a.file.clone(), start: a.start, end: b.end, line: a.line, column: a.column }
}

impl Parser {
    pub fn new(src: &str, file: &Arc<str>, base: usize, line: usize) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(src, file, base, line, 1)?, pos: 0, schema_refs: SchemaRefs::new() })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn span(&self) -> SourceSpan {
        self.toks[self.pos].span.clone()
    }

    fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos.saturating_sub(1)].span.clone()
    }

    pub fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            span: self.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    pub fn expect(&mut self, tok: Tok, what: &str) -> Result<SourceSpan, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(self.error(&[what]))
        }
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn ident(&mut self) -> Result<(String, SourceSpan), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump().span)),
            _ => Err(self.error(&["identifier"])),
        }
    }

    /// A declared name: plain identifier or schema reference such as `all[A]`.
    pub fn decl_name(&mut self) -> Result<(String, SourceSpan), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump().span)),
            Tok::SchemaIdent(_) => {
                let ast = self.schema_ref()?;
                let span = ast.span.clone();
                let t = self.lower(&ast, &mut Vec::new(), &mut SpanMap::default(), &mut Vec::new())?;
                match t {
                    Term::Free(n) => Ok((n.to_string(), span)),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::SchemaIdent(_) | Tok::Type | Tok::Kind | Tok::LParen)
    }

    fn starts_binder(&self) -> bool {
        matches!(self.peek(), Tok::Lambda | Tok::Pi)
    }

    fn term_ast(&mut self) -> Result<Ast, ParseError> {
        if self.starts_binder() {
            return self.binder();
        }
        let lhs = self.app()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.term_ast()?;
            let span = join(&lhs.span, &rhs.span);
            return Ok(Ast { kind: AstKind::Pi(None, Box::new(lhs), Box::new(rhs)), span });
        }
        Ok(lhs)
    }

    fn binder(&mut self) -> Result<Ast, ParseError> {
        let start = self.span();
        let is_pi = self.bump().tok == Tok::Pi;
        let (x, _) = self.ident()?;
        self.expect(Tok::Colon, "`:`")?;
        let dom = self.term_ast()?;
        self.expect(Tok::Dot, "`.`")?;
        let body = self.term_ast()?;
        let span = join(&start, &body.span);
        let kind = if is_pi {
            AstKind::Pi(Some(x), Box::new(dom), Box::new(body))
        } else {
            AstKind::Lam(x, Box::new(dom), Box::new(body))
        };
        Ok(Ast { kind, span })
    }

    fn app(&mut self) -> Result<Ast, ParseError> {
        let mut head = self.atom()?;
        loop {
            if self.starts_atom() {
                let arg = self.atom()?;
                let span = join(&head.span, &arg.span);
                head = Ast { kind: AstKind::App(Box::new(head), Box::new(arg)), span };
            } else if self.starts_binder() {
                // a binder as last argument extends to the right
                let arg = self.binder()?;
                let span = join(&head.span, &arg.span);
                return Ok(Ast { kind: AstKind::App(Box::new(head), Box::new(arg)), span });
            } else {
                return Ok(head);
            }
        }
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let span = self.bump().span;
                Ok(Ast { kind: AstKind::Ident(s), span })
            }
            Tok::SchemaIdent(_) => self.schema_ref(),
            Tok::Type => Ok(Ast { kind: AstKind::Type, span: self.bump().span }),
            Tok::Kind => Ok(Ast { kind: AstKind::Kind, span: self.bump().span }),
            Tok::LParen => {
                let start = self.bump().span;
                let inner = self.term_ast()?;
                let end = self.expect(Tok::RParen, "`)`")?;
                Ok(Ast { kind: inner.kind, span: join(&start, &end) })
            }
            _ => Err(self.error(&["identifier", "`Type`", "`Kind`", "`(`", "`\\`", "`Pi`"])),
        }
    }

    fn schema_ref(&mut self) -> Result<Ast, ParseError> {
        let Tok::SchemaIdent(family) = self.peek().clone() else {
            return Err(self.error(&["identifier"]));
        };
        let start = self.bump().span;
        self.expect(Tok::LBracket, "`[`")?;
        let mut args = vec![self.term_ast()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term_ast()?);
        }
        let end = self.expect(Tok::RBracket, "`]`")?;
        Ok(Ast { kind: AstKind::SchemaRef(family, args), span: join(&start, &end) })
    }

    /// Resolve binder names to indices and record spans by position.
    fn lower(&mut self, ast: &Ast, scope: &mut Vec<String>, spans: &mut SpanMap, path: &mut Vec<u8>) -> Result<Term, ParseError> {
        spans.insert(crate::kernel::Position(path.clone()), ast.span.clone());
        let mut child = |this: &mut Self, i: u8, a: &Ast, scope: &mut Vec<String>| {
            path.push(i);
            let r = this.lower(a, scope, spans, path);
            path.pop();
            r
        };
        Ok(match &ast.kind {
            AstKind::Ident(s) => match scope.iter().rposition(|n| n == s) {
                Some(k) => Term::Bound((scope.len() - 1 - k) as u32),
                None => Term::free(s),
            },
            AstKind::SchemaRef(family, args) => {
                let mut terms = Vec::new();
                let mut parts = Vec::new();
                for a in args {
                    let t = self.lower(a, &mut Vec::new(), &mut SpanMap::default(), &mut Vec::new())?;
                    let Some(s) = print_simple_type(&t) else {
                        return Err(ParseError::message(a.span.clone(), "schema argument must be a simple type"));
                    };
                    parts.push(s);
                    terms.push(t);
                }
                let canon = format!("{family}[{}]", parts.join(","));
                self.schema_refs.insert(canon.clone(), (family.clone(), terms));
                Term::free(&canon)
            }
            AstKind::Type => Term::Type,
            AstKind::Kind => Term::Kind,
            AstKind::Pi(x, a, b) => {
                let a = child(self, 0, a, scope)?;
                scope.push(x.clone().unwrap_or_default());
                let b = child(self, 1, b, scope);
                scope.pop();
                let b = b?;
                match x {
                    Some(x) => Term::pi_raw(x, a, b),
                    None => Term::pi_raw("_", a, b),
                }
            }
            AstKind::Lam(x, a, b) => {
                let a = child(self, 0, a, scope)?;
                scope.push(x.clone());
                let b = child(self, 1, b, scope);
                scope.pop();
                Term::lam_raw(x, a, b?)
            }
            AstKind::App(f, a) => {
                let f = child(self, 0, f, scope)?;
                let a = child(self, 1, a, scope)?;
                Term::app(f, a)
            }
        })
    }

    /// Parse one term (stopping at the first token that cannot continue it).
    pub fn term(&mut self) -> Result<(Term, SpanMap), ParseError> {
        let ast = self.term_ast()?;
        let mut spans = SpanMap::default();
        let t = self.lower(&ast, &mut Vec::new(), &mut spans, &mut Vec::new())?;
        Ok((t, spans))
    }

    /// Simple type: base identifier, parenthesized simple type, or arrow.
    pub fn simple_type(&mut self) -> Result<Term, ParseError> {
        let left = match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Term::free(&s)
            }
            Tok::LParen => {
                self.bump();
                let t = self.simple_type()?;
                self.expect(Tok::RParen, "`)`")?;
                t
            }
            _ => return Err(self.error(&["simple type"])),
        };
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.simple_type()?;
            return Ok(Term::arrow(left, right));
        }
        Ok(left)
    }

    pub fn last_span(&self) -> SourceSpan {
        self.prev_span()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Term {
        let mut p = Parser::new(s, &Arc::from("t"), 0, 1).unwrap();
        let (t, _) = p.term().unwrap();
        assert!(p.at_eof(), "trailing input in {s}");
        t
    }

    #[test]
    fn sorts_and_application() {
        assert_eq!(parse("Type"), Term::Type);
        assert_eq!(parse("Kind"), Term::Kind);
        let t = parse("eps (imp x y)");
        let expect = Term::app(Term::free("eps"), Term::apps(Term::free("imp"), [Term::free("x"), Term::free("y")]));
        assert_eq!(t, expect);
        assert_eq!(parse("f a b"), Term::apps(Term::free("f"), [Term::free("a"), Term::free("b")]));
    }

    #[test]
    fn binders() {
        let t = parse("Pi z : iota . eps (f z)");
        let expect = Term::pi("z", Term::free("iota"), Term::app(Term::free("eps"), Term::app(Term::free("f"), Term::free("z"))));
        assert_eq!(t, expect);
        assert_eq!(parse("\\x : A. x"), Term::lam("x", Term::free("A"), Term::free("x")));
        assert_eq!(parse("λx:A.x"), parse("\\x : A. x"));
        assert_eq!(parse("Πx:A.B"), parse("Pi x : A. B"));
    }

    #[test]
    fn arrows_are_right_associative() {
        let t = parse("a -> b -> c");
        let expect = Term::arrow(Term::free("a"), Term::arrow(Term::free("b"), Term::free("c")));
        assert_eq!(t, expect);
        assert_eq!(parse("a → b"), parse("a -> b"));
    }

    #[test]
    fn binder_as_last_argument() {
        let t = parse("f \\x : A. x");
        assert_eq!(t, Term::app(Term::free("f"), Term::lam("x", Term::free("A"), Term::free("x"))));
    }

    #[test]
    fn shadowing() {
        let t = parse("\\x : A. \\x : A. x");
        assert_eq!(t, Term::lam_raw("x", Term::free("A"), Term::lam_raw("x", Term::free("A"), Term::Bound(0))));
    }

    #[test]
    fn schema_references_are_canonical() {
        assert_eq!(parse("all[ iota -> o ]"), Term::free("all[iota->o]"));
        assert_eq!(parse("all[(iota)]"), Term::free("all[iota]"));
        let mut p = Parser::new("all[\\x:A.x]", &Arc::from("t"), 0, 1).unwrap();
        assert!(p.term().is_err());
    }

    #[test]
    fn errors_carry_expected_tokens() {
        let mut p = Parser::new("\\x A. x", &Arc::from("t"), 0, 1).unwrap();
        let e = p.term().unwrap_err();
        assert_eq!(e.expected, vec!["`:`".to_string()]);
        assert_eq!(e.span.column, 4);
        let mut p = Parser::new("(a b", &Arc::from("t"), 0, 1).unwrap();
        assert!(p.term().is_err());
    }

    #[test]
    fn spans_by_position() {
        let mut p = Parser::new("f (g a)", &Arc::from("t"), 0, 1).unwrap();
        let (_, spans) = p.term().unwrap();
        let s = spans.get(&crate::kernel::Position(vec![1, 1])).unwrap();
        assert_eq!((s.start, s.end), (5, 6));
        let s = spans.get(&crate::kernel::Position(vec![1])).unwrap();
        assert_eq!((s.start, s.end), (2, 7));
    }
}
