use super::ast::{Atom, Formula, Inner, Mode};
use crate::model::{Context, Signature};

/// Expands diamonds, `->`, `<->` and `true`/`false` so that only boxes,
/// atoms, `!`, `&` and `|` remain. Idempotent.
pub fn desugar(f: &Formula, sig: &Signature) -> Formula {
    match f {
        Formula::Basic(b) => {
            let inner = desugar_inner(&b.inner, sig);
            match b.mode {
                Mode::Box => Formula::boxed(b.iv.clone(), inner),
                Mode::Diamond => Formula::boxed(b.iv.clone(), inner.not()).not(),
            }
        }
        Formula::Not(a) => desugar(a, sig).not(),
        Formula::And(a, b) => desugar(a, sig).and(desugar(b, sig)),
        Formula::Or(a, b) => desugar(a, sig).or(desugar(b, sig)),
        Formula::Implies(a, b) => desugar(a, sig).not().or(desugar(b, sig)),
        Formula::Iff(a, b) => {
            let (a, b) = (desugar(a, sig), desugar(b, sig));
            a.clone().and(b.clone()).or(a.not().and(b.not()))
        }
    }
}

/// `X1(u)=v1 | !(X1(u)=v1)` for the first endogenous variable and value.
pub fn true_at(ctx: &Context, sig: &Signature) -> Inner {
    let x = sig.endo(0);
    let atom = Inner::Atom(Atom::new(x.name.clone(), ctx.clone(), x.range[0].clone()));
    atom.clone().or(atom.not())
}

pub fn desugar_inner(f: &Inner, sig: &Signature) -> Inner {
    match f {
        Inner::Atom(_) => f.clone(),
        Inner::True(c) => true_at(c, sig),
        Inner::False(c) => true_at(c, sig).not(),
        Inner::Not(a) => desugar_inner(a, sig).not(),
        Inner::And(a, b) => desugar_inner(a, sig).and(desugar_inner(b, sig)),
        Inner::Or(a, b) => desugar_inner(a, sig).or(desugar_inner(b, sig)),
        Inner::Implies(a, b) => desugar_inner(a, sig).not().or(desugar_inner(b, sig)),
        Inner::Iff(a, b) => {
            let (a, b) = (desugar_inner(a, sig), desugar_inner(b, sig));
            a.clone().and(b.clone()).or(a.not().and(b.not()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::binary_signature;
    use crate::lang::parse;

    #[test]
    fn diamond_becomes_negated_box() {
        let sig = binary_signature(2);
        let f = parse("<X<-0>(Y()=0)", &sig).unwrap();
        assert_eq!(desugar(&f, &sig).to_string(), "![X<-0](!(Y()=0))");
    }

    #[test]
    fn constants_expand_over_first_variable() {
        let sig = binary_signature(2);
        let f = parse("[](true() & false())", &sig).unwrap();
        assert_eq!(
            desugar(&f, &sig).to_string(),
            "[]((X()=0 | !(X()=0)) & !(X()=0 | !(X()=0)))"
        );
    }

    #[test]
    fn idempotent_on_examples() {
        let sig = binary_signature(2);
        for s in [
            "<X<-0>(Y()=0) -> [](X()=1 <-> Y()=0)",
            "!(<>(true()) <-> [Y<-1](X()=0))",
        ] {
            let once = desugar(&parse(s, &sig).unwrap(), &sig);
            assert_eq!(desugar(&once, &sig), once);
        }
    }
}
