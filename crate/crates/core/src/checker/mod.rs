//! The satisfaction relation `T ⊨ φ` and the affects relation.
//!
//! A box over an inner formula that mentions several contexts is evaluated
//! under global choice: one solution is picked independently per context,
//! and the box holds when the inner formula is true for every such pick.
//! A box is vacuously true when some mentioned context has no solution.

mod affects;
mod compiled;

pub use affects::{affects, affects_expansion_size, expand_affects, AffectsWitness};
pub use compiled::{eval, Compiled, PairKey, SolutionCache};
pub(crate) use compiled::{CBasic, INode, Node};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lang::parse;
    use crate::model::CausalModel;
    use crate::DEFAULT_BUDGET;

    fn check(m: &CausalModel, s: &str) -> bool {
        eval(m, &parse(s, m.signature()).unwrap()).unwrap()
    }

    #[test]
    fn copycat_verdicts() {
        let m = fixtures::copycat();
        assert!(check(&m, "[](X()=0 | X()=1)"));
        assert!(!check(&m, "[](X()=0)"));
        assert!(!check(&m, "[](X()=1)"));
        assert!(check(&m, "![](X()=1) & ![]!(X()=1)"));
    }

    #[test]
    fn effectiveness() {
        for m in [fixtures::copycat(), fixtures::xor3()] {
            assert!(check(&m, "[X<-0](X()=0) & [X<-1](X()=1)"));
        }
    }

    #[test]
    fn xor3_has_both_diamonds() {
        let m = fixtures::xor3();
        assert!(check(&m, "<X<-0>(Y()=0) & <X<-0>(Y()=1)"));
    }

    #[test]
    fn vacuous_boxes() {
        // X = 1 - Y, Y = X has no solution without intervention.
        let sig = fixtures::binary_signature(2);
        let m = CausalModel::from_fn(sig, |x, _, e| if x == 0 { 1 - e[1] } else { e[0] }).unwrap();
        assert!(check(&m, "[](X()=0) & [](X()=1)"));
        assert!(!check(&m, "<>(X()=0 | X()=1)"));
    }

    #[test]
    fn validation_errors() {
        let m = fixtures::copycat();
        let f = crate::lang::parse_unchecked("[](Q()=0)").unwrap();
        assert!(matches!(eval(&m, &f), Err(crate::Error::Validation(_))));
    }

    #[test]
    fn mod3_affects_cycle() {
        let m = fixtures::mod3();
        for (y, z) in [("X0", "X1"), ("X1", "X2"), ("X2", "X0")] {
            assert!(affects(&m, y, z).unwrap().is_some(), "{y} ~> {z}");
        }
        for (y, z) in [("X1", "X0"), ("X2", "X1"), ("X0", "X2")] {
            assert!(affects(&m, y, z).unwrap().is_none(), "{y} ~> {z}");
        }
    }

    #[test]
    fn expansion_agrees_on_fixtures() {
        for m in [
            fixtures::mod3(),
            fixtures::xor3(),
            fixtures::copycat(),
            fixtures::push_pull(),
        ] {
            let sig = m.signature();
            for y in sig.endogenous() {
                for z in sig.endogenous() {
                    if y.name == z.name {
                        continue;
                    }
                    let f = expand_affects(sig, &y.name, &z.name, DEFAULT_BUDGET).unwrap();
                    assert_eq!(
                        eval(&m, &f).unwrap(),
                        affects(&m, &y.name, &z.name).unwrap().is_some()
                    );
                }
            }
        }
    }

    #[test]
    fn constant_models_affect_nothing() {
        let m = CausalModel::constant(fixtures::binary_signature(3), &[0, 1, 0]).unwrap();
        for y in ["X", "Y", "Z"] {
            for z in ["X", "Y", "Z"] {
                if y != z {
                    assert!(affects(&m, y, z).unwrap().is_none());
                }
            }
        }
    }
}
