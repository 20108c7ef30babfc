use std::fmt;

use super::ast::{Basic, Formula, Inner, Mode};

// Binding strength, loosest first.
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const NOT: u8 = 5;
const ATOM: u8 = 6;

trait Printable {
    /// Operator, binding strength and children of this node.
    fn shape(&self) -> Shape<'_, Self>
    where
        Self: Sized;
    fn leaf(&self, out: &mut String);
    /// Leaves that still get parentheses under `!`.
    fn wrap_under_not(&self) -> bool {
        false
    }
}

enum Shape<'a, T> {
    Leaf,
    Not(&'a T),
    Binary(&'static str, u8, &'a T, &'a T),
}

fn prec<T: Printable>(t: &T) -> u8 {
    match t.shape() {
        Shape::Leaf => ATOM,
        Shape::Not(_) => NOT,
        Shape::Binary(_, p, _, _) => p,
    }
}

fn write_node<T: Printable>(t: &T, out: &mut String) {
    match t.shape() {
        Shape::Leaf => t.leaf(out),
        Shape::Not(a) => {
            out.push('!');
            write_wrapped(a, prec(a) < NOT || a.wrap_under_not(), out);
        }
        Shape::Binary(op, p, a, b) => {
            // `->` groups to the right, everything else to the left.
            let (left_paren, right_paren) = if p == IMP {
                (prec(a) <= p, prec(b) < p)
            } else {
                (prec(a) < p, prec(b) <= p)
            };
            write_wrapped(a, left_paren, out);
            out.push(' ');
            out.push_str(op);
            out.push(' ');
            write_wrapped(b, right_paren, out);
        }
    }
}

fn write_wrapped<T: Printable>(t: &T, paren: bool, out: &mut String) {
    if paren {
        out.push('(');
    }
    write_node(t, out);
    if paren {
        out.push(')');
    }
}

fn write_context(ctx: &crate::model::Context, out: &mut String) {
    out.push('(');
    out.push_str(&ctx.to_string());
    out.push(')');
}

impl Printable for Inner {
    fn wrap_under_not(&self) -> bool {
        matches!(self, Inner::Atom(_))
    }

    fn shape(&self) -> Shape<'_, Self> {
        match self {
            Inner::Atom(_) | Inner::True(_) | Inner::False(_) => Shape::Leaf,
            Inner::Not(a) => Shape::Not(a),
            Inner::And(a, b) => Shape::Binary("&", AND, a, b),
            Inner::Or(a, b) => Shape::Binary("|", OR, a, b),
            Inner::Implies(a, b) => Shape::Binary("->", IMP, a, b),
            Inner::Iff(a, b) => Shape::Binary("<->", IFF, a, b),
        }
    }

    fn leaf(&self, out: &mut String) {
        match self {
            Inner::Atom(a) => {
                out.push_str(&a.var);
                write_context(&a.ctx, out);
                out.push('=');
                out.push_str(a.value.as_str());
            }
            Inner::True(c) => {
                out.push_str("true");
                write_context(c, out);
            }
            Inner::False(c) => {
                out.push_str("false");
                write_context(c, out);
            }
            _ => unreachable!("not a leaf"),
        }
    }
}

impl Printable for Formula {
    fn shape(&self) -> Shape<'_, Self> {
        match self {
            Formula::Basic(_) => Shape::Leaf,
            Formula::Not(a) => Shape::Not(a),
            Formula::And(a, b) => Shape::Binary("&", AND, a, b),
            Formula::Or(a, b) => Shape::Binary("|", OR, a, b),
            Formula::Implies(a, b) => Shape::Binary("->", IMP, a, b),
            Formula::Iff(a, b) => Shape::Binary("<->", IFF, a, b),
        }
    }

    fn leaf(&self, out: &mut String) {
        let Formula::Basic(b) = self else {
            unreachable!("not a leaf")
        };
        write_basic(b, out);
    }
}

fn write_basic(b: &Basic, out: &mut String) {
    let (open, close) = match b.mode {
        Mode::Box => ('[', ']'),
        Mode::Diamond => ('<', '>'),
    };
    out.push(open);
    out.push_str(&b.iv.to_string());
    out.push(close);
    // The inner part is always parenthesized.
    out.push('(');
    write_node(&b.inner, out);
    out.push(')');
}

/// Canonical concrete syntax; `parse` reads it back to the same tree.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_node(f, &mut out);
    out
}

pub fn print_inner(f: &Inner) -> String {
    let mut out = String::new();
    write_node(f, &mut out);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Display for Inner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_inner(self))
    }
}

#[cfg(test)]
mod tests {
    use crate::lang::parse_unchecked;

    fn canon(s: &str) -> String {
        parse_unchecked(s).unwrap().to_string()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canon("[X<-1](Y()= -1)"), "[X<-1](Y()=-1)");
        assert_eq!(canon("[true](X()=0)"), "[](X()=0)");
        assert_eq!(canon("!!(([](X()=0)))"), "!![](X()=0)");
        assert_eq!(canon("[](X()!=1)"), "[](!(X()=1))");
        assert_eq!(canon("<X<-0>Y()=0"), "<X<-0>(Y()=0)");
        assert_eq!(
            canon("[](X()=0 | X()=1) & ![](X()=0) & ![](X()=1)"),
            "[](X()=0 | X()=1) & ![](X()=0) & ![](X()=1)"
        );
    }

    #[test]
    fn associativity_is_preserved() {
        for s in [
            "[](X()=0) & ([](X()=1) & [](X()=0))",
            "([](X()=0) -> [](X()=1)) -> [](X()=0)",
            "[](X()=0) -> [](X()=1) -> [](X()=0)",
            "[](X()=0) <-> ([](X()=1) <-> [](X()=0))",
            "!([](X()=0) | [](X()=1))",
            "[]((X(0)=0 -> X(1)=1) & !(X(0)=1 | true(1)))",
        ] {
            let once = canon(s);
            assert_eq!(canon(&once), once);
            assert_eq!(
                parse_unchecked(&once).unwrap(),
                parse_unchecked(s).unwrap(),
                "{s}"
            );
        }
    }
}
