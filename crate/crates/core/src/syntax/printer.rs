use std::collections::HashSet;

use super::lexer::{is_ident_char, is_ident_start};
use crate::kernel::Term;

const BINDER: u8 = 0;
const APP: u8 = 1;
const ATOM: u8 = 2;

fn is_keyword(s: &str) -> bool {
    matches!(s, "Type" | "Kind" | "Pi")
}

fn collect_names(t: &Term, out: &mut HashSet<String>) {
    match t {
        Term::Free(n) | Term::Const(n) => {
            out.insert(n.to_string());
        }
        Term::Pi(_, a, b) | Term::Lam(_, a, b) | Term::App(a, b) => {
            collect_names(a, out);
            collect_names(b, out);
        }
        _ => {}
    }
}

fn valid_hint(h: &str) -> bool {
    let mut cs = h.chars();
    matches!(cs.next(), Some(c) if is_ident_start(c)) && cs.all(is_ident_char) && !is_keyword(h) && h != "_"
}

struct Printer {
    avoid: HashSet<String>,
    env: Vec<String>,
    out: String,
}

impl Printer {
    fn fresh(&self, hint: &str) -> String {
        let mut n = if valid_hint(hint) { hint.to_string() } else { "x".to_string() };
        while self.avoid.contains(&n) || self.env.contains(&n) || is_keyword(&n) {
            n.push('\'');
        }
        n
    }

    fn go(&mut self, t: &Term, prec: u8) {
        match t {
            Term::Bound(i) => {
                let i = *i as usize;
                if i < self.env.len() {
                    let n = self.env[self.env.len() - 1 - i].clone();
                    self.out.push_str(&n);
                } else {
                    self.out.push_str(&format!("#{i}"));
                }
            }
            Term::Free(n) | Term::Const(n) => self.out.push_str(n),
            Term::Type => self.out.push_str("Type"),
            Term::Kind => self.out.push_str("Kind"),
            Term::Pi(h, a, b) => {
                if prec > BINDER {
                    self.out.push('(');
                }
                if b.has_loose(0) {
                    let x = self.fresh(h);
                    self.out.push_str("Pi ");
                    self.out.push_str(&x);
                    self.out.push_str(" : ");
                    self.annotation(a);
                    self.out.push_str(". ");
                    self.env.push(x);
                    self.go(b, BINDER);
                    self.env.pop();
                } else {
                    self.go(a, APP);
                    self.out.push_str(" -> ");
                    self.env.push("_".to_string());
                    self.go(b, BINDER);
                    self.env.pop();
                }
                if prec > BINDER {
                    self.out.push(')');
                }
            }
            Term::Lam(h, a, b) => {
                if prec > BINDER {
                    self.out.push('(');
                }
                let x = self.fresh(h);
                self.out.push('\\');
                self.out.push_str(&x);
                self.out.push_str(" : ");
                self.annotation(a);
                self.out.push_str(". ");
                self.env.push(x);
                self.go(b, BINDER);
                self.env.pop();
                if prec > BINDER {
                    self.out.push(')');
                }
            }
            Term::App(f, a) => {
                if prec > APP {
                    self.out.push('(');
                }
                self.go(f, APP);
                self.out.push(' ');
                self.go(a, ATOM);
                if prec > APP {
                    self.out.push(')');
                }
            }
        }
    }

    fn annotation(&mut self, a: &Term) {
        // arrows read fine before the dot; explicit binders get parentheses
        let p = match a {
            Term::Lam(..) => ATOM,
            Term::Pi(_, _, b) if b.has_loose(0) => ATOM,
            _ => BINDER,
        };
        self.go(a, p);
    }
}

/// Re-parseable text with minimal parentheses and arrow sugar for
/// non-dependent products. Bound names come from hints, primed on clashes.
pub fn print_term(t: &Term) -> String {
    let mut avoid = HashSet::new();
    collect_names(t, &mut avoid);
    let mut p = Printer { avoid, env: Vec::new(), out: String::new() };
    p.go(t, BINDER);
    p.out
}

/// Canonical compact form of a simple type (`iota->o`, `(o->o)->o`), or
/// `None` if `t` is not built from names and non-dependent arrows.
pub fn print_simple_type(t: &Term) -> Option<String> {
    match t {
        Term::Free(n) | Term::Const(n) => Some(n.to_string()),
        Term::Pi(_, a, b) if !b.has_loose(0) => {
            let l = print_simple_type(a)?;
            let r = print_simple_type(&b.instantiate(&Term::Type))?;
            if matches!(a.as_ref(), Term::Pi(..)) {
                Some(format!("({l})->{r}"))
            } else {
                Some(format!("{l}->{r}"))
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_forms() {
        assert_eq!(print_term(&Term::Kind), "Kind");
        assert_eq!(print_term(&Term::arrow(Term::free("A"), Term::free("B"))), "A -> B");
        let t = Term::apps(Term::free("f"), [Term::free("a"), Term::app(Term::free("g"), Term::free("b"))]);
        assert_eq!(print_term(&t), "f a (g b)");
        let t = Term::app(Term::apps(Term::free("f"), [Term::free("a")]), Term::free("b"));
        assert_eq!(print_term(&t), "f a b");
    }

    #[test]
    fn binders_and_arrows() {
        let t = Term::lam("x", Term::free("A"), Term::free("x"));
        assert_eq!(print_term(&t), "\\x : A. x");
        let t = Term::arrow(Term::arrow(Term::free("a"), Term::free("b")), Term::free("c"));
        assert_eq!(print_term(&t), "(a -> b) -> c");
        let t = Term::pi("z", Term::free("iota"), Term::app(Term::free("eps"), Term::app(Term::free("f"), Term::free("z"))));
        assert_eq!(print_term(&t), "Pi z : iota. eps (f z)");
        let t = Term::app(Term::free("f"), Term::lam("x", Term::free("A"), Term::free("x")));
        assert_eq!(print_term(&t), "f (\\x : A. x)");
    }

    #[test]
    fn clashing_hints_are_primed() {
        let t = Term::lam_raw("y", Term::free("A"), Term::free("y"));
        assert_eq!(print_term(&t), "\\y' : A. y");
        let t = Term::lam_raw("x", Term::free("A"), Term::lam_raw("x", Term::free("A"), Term::Bound(1)));
        assert_eq!(print_term(&t), "\\x : A. \\x' : A. x");
        let t = Term::lam_raw("_", Term::free("A"), Term::Bound(0));
        assert_eq!(print_term(&t), "\\x : A. x");
    }

    #[test]
    fn simple_types() {
        let io = Term::arrow(Term::free("iota"), Term::free("o"));
        assert_eq!(print_simple_type(&io).unwrap(), "iota->o");
        assert_eq!(print_simple_type(&Term::arrow(io.clone(), Term::free("o"))).unwrap(), "(iota->o)->o");
        assert_eq!(print_simple_type(&Term::arrow(Term::free("o"), io)).unwrap(), "o->iota->o");
        assert!(print_simple_type(&Term::Type).is_none());
    }
}
