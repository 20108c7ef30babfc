use std::collections::BTreeSet;

use crate::model::{Context, Intervention, Value};

/// `X(u) = x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub var: String,
    pub ctx: Context,
    pub value: Value,
}

impl Atom {
    pub fn new(var: impl Into<String>, ctx: Context, value: impl Into<Value>) -> Self {
        Atom {
            var: var.into(),
            ctx,
            value: value.into(),
        }
    }
}

/// A Boolean combination of atoms, the part of a basic formula after its
/// `[..]` or `<..>` prefix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Inner {
    Atom(Atom),
    True(Context),
    False(Context),
    Not(Box<Inner>),
    And(Box<Inner>, Box<Inner>),
    Or(Box<Inner>, Box<Inner>),
    Implies(Box<Inner>, Box<Inner>),
    Iff(Box<Inner>, Box<Inner>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `[iv]φ`: φ holds in all solutions.
    Box,
    /// `<iv>φ`: φ holds in some solution.
    Diamond,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Basic {
    pub mode: Mode,
    pub iv: Intervention,
    pub inner: Inner,
}

/// A Boolean combination of basic causal formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Basic(Basic),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Inner {
    pub fn atom(var: impl Into<String>, ctx: Context, value: impl Into<Value>) -> Inner {
        Inner::Atom(Atom::new(var, ctx, value))
    }

    /// Shorthand for an atom at the empty context.
    pub fn eq(var: &str, value: &str) -> Inner {
        Inner::atom(var, Context::empty(), value)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Inner {
        Inner::Not(Box::new(self))
    }

    pub fn and(self, other: Inner) -> Inner {
        Inner::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Inner) -> Inner {
        Inner::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Inner) -> Inner {
        Inner::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Inner) -> Inner {
        Inner::Iff(Box::new(self), Box::new(other))
    }

    /// Left-nested conjunction; `None` for an empty list.
    pub fn and_all(items: impl IntoIterator<Item = Inner>) -> Option<Inner> {
        items.into_iter().reduce(Inner::and)
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Inner::Atom(_))
    }

    /// Visits every atom and every `true`/`false` context in order.
    pub fn for_each_leaf(&self, f: &mut impl FnMut(Leaf<'_>)) {
        match self {
            Inner::Atom(a) => f(Leaf::Atom(a)),
            Inner::True(c) | Inner::False(c) => f(Leaf::Constant(c)),
            Inner::Not(a) => a.for_each_leaf(f),
            Inner::And(a, b) | Inner::Or(a, b) | Inner::Implies(a, b) | Inner::Iff(a, b) => {
                a.for_each_leaf(f);
                b.for_each_leaf(f);
            }
        }
    }

    /// Distinct contexts mentioned, in first-occurrence order.
    pub fn contexts(&self) -> Vec<Context> {
        let mut out: Vec<Context> = Vec::new();
        self.for_each_leaf(&mut |leaf| {
            let c = match leaf {
                Leaf::Atom(a) => &a.ctx,
                Leaf::Constant(c) => c,
            };
            if !out.contains(c) {
                out.push(c.clone());
            }
        });
        out
    }

    pub fn size(&self) -> usize {
        match self {
            Inner::Atom(_) | Inner::True(_) | Inner::False(_) => 1,
            Inner::Not(a) => 1 + a.size(),
            Inner::And(a, b) | Inner::Or(a, b) | Inner::Implies(a, b) | Inner::Iff(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }
}

/// A leaf of an inner formula.
#[derive(Clone, Copy, Debug)]
pub enum Leaf<'a> {
    Atom(&'a Atom),
    Constant(&'a Context),
}

impl Formula {
    pub fn boxed(iv: Intervention, inner: Inner) -> Formula {
        Formula::Basic(Basic {
            mode: Mode::Box,
            iv,
            inner,
        })
    }

    pub fn diamond(iv: Intervention, inner: Inner) -> Formula {
        Formula::Basic(Basic {
            mode: Mode::Diamond,
            iv,
            inner,
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Formula) -> Formula {
        Formula::Iff(Box::new(self), Box::new(other))
    }

    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    /// Visits every basic subformula, left to right.
    pub fn for_each_basic<'a>(&'a self, f: &mut impl FnMut(&'a Basic)) {
        match self {
            Formula::Basic(b) => f(b),
            Formula::Not(a) => a.for_each_basic(f),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.for_each_basic(f);
                b.for_each_basic(f);
            }
        }
    }

    pub fn basics(&self) -> Vec<&Basic> {
        let mut out = Vec::new();
        self.for_each_basic(&mut |b| out.push(b));
        out
    }

    /// Names of endogenous variables occurring in interventions or atoms.
    /// `true`/`false` mention no variable here; see [`crate::decide`] for
    /// how the reduction treats them.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.for_each_basic(&mut |b| {
            for (n, _) in &b.iv.settings {
                out.insert(n.clone());
            }
            b.inner.for_each_leaf(&mut |leaf| {
                if let Leaf::Atom(a) = leaf {
                    out.insert(a.var.clone());
                }
            });
        });
        out
    }

    /// Whether some `true(u)`/`false(u)` occurs.
    pub fn has_constants(&self) -> bool {
        let mut found = false;
        self.for_each_basic(&mut |b| {
            b.inner.for_each_leaf(&mut |leaf| {
                if let Leaf::Constant(_) = leaf {
                    found = true;
                }
            })
        });
        found
    }

    /// Distinct contexts mentioned anywhere, in first-occurrence order.
    pub fn contexts(&self) -> Vec<Context> {
        let mut out: Vec<Context> = Vec::new();
        self.for_each_basic(&mut |b| {
            for c in b.inner.contexts() {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        });
        out
    }

    /// Number of symbols, counting each setting and leaf as one.
    pub fn size(&self) -> usize {
        match self {
            Formula::Basic(b) => 1 + b.iv.settings.len() + b.inner.size(),
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => 1 + a.size() + b.size(),
        }
    }
}
