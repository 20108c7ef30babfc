//! Satisfiability and validity over finite signatures, the signature
//! reductions behind them, and the encodings of propositional problems.
//!
//! Recursive models are searched directly ([`sat_rec`]); unique-solution and
//! general models are enumerated over a reduced signature ([`sat_enum`]).
//! Every positive answer carries a witness model that has been re-checked.

mod cnf;
mod project;
mod reduce;
mod sat;
mod search;

use std::fmt;

use crate::lang::{Formula, Leaf};
use crate::model::{CausalModel, Context, Intervention, Value};

pub use cnf::{cnf_to_lgp, parse_dimacs, prop_to_luniq, CnfInstance, Prop};
pub use project::{project_model_rec, project_model_uniq, transform_finite1a, Direction};
pub use reduce::{
    finite1a_guard, reduce_sig_finite1, reduce_sig_finite1a, rewrite_contexts, Reduction,
};
pub use sat::{sat, sat_enum, sat_enum_with, sat_rec, valid, SatOptions, Strategy, Validity};

/// An intervention and a context whose submodel a formula inspects.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelevantPair {
    pub iv: Intervention,
    pub u: Context,
}

impl fmt::Display for RelevantPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] at ({})", self.iv, self.u)
    }
}

/// Every `(iv, u)` such that some basic formula `[iv]ψ` or `<iv>ψ` mentions
/// `u` in `ψ`, in first-occurrence order. Interventions listing the same
/// settings in a different order count as one.
pub fn relevant_pairs(f: &Formula) -> Vec<RelevantPair> {
    let mut out: Vec<RelevantPair> = Vec::new();
    let mut keys: Vec<(Vec<(String, Value)>, Context)> = Vec::new();
    f.for_each_basic(&mut |b| {
        let mut sorted = b.iv.settings.clone();
        sorted.sort();
        let mut contexts: Vec<Context> = Vec::new();
        b.inner.for_each_leaf(&mut |leaf| {
            let c = match leaf {
                Leaf::Atom(a) => &a.ctx,
                Leaf::Constant(c) => c,
            };
            if !contexts.contains(c) {
                contexts.push(c.clone());
            }
        });
        for u in contexts {
            let key = (sorted.clone(), u.clone());
            if !keys.contains(&key) {
                keys.push(key);
                out.push(RelevantPair {
                    iv: b.iv.clone(),
                    u,
                });
            }
        }
    });
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Sat,
    Unsat,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
        })
    }
}

/// The answer to a satisfiability query.
#[derive(Clone, Debug)]
pub struct SatWitness {
    pub verdict: Verdict,
    /// A satisfying model over the queried signature. Absent when UNSAT, or
    /// when writing it out (or re-checking its class) would exceed the budget.
    pub model: Option<CausalModel>,
    /// The satisfying model over the signature the search actually ran on;
    /// absent when its tables would exceed the budget.
    pub reduced_model: Option<CausalModel>,
    /// The variable order of a recursive witness, by name.
    pub order: Option<Vec<String>>,
    /// The unique solution of each relevant pair in a recursive witness,
    /// named over the variables the formula mentions.
    pub pair_solutions: Vec<(RelevantPair, Vec<(String, Value)>)>,
}

impl SatWitness {
    pub fn is_sat(&self) -> bool {
        self.verdict == Verdict::Sat
    }

    pub(crate) fn unsat() -> Self {
        SatWitness {
            verdict: Verdict::Unsat,
            model: None,
            reduced_model: None,
            order: None,
            pair_solutions: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_unchecked;

    #[test]
    fn pairs_are_deduplicated() {
        let f = parse_unchecked("[X<-1](Y()=0)").unwrap();
        assert_eq!(
            relevant_pairs(&f),
            vec![RelevantPair {
                iv: Intervention::new([("X", "1")]),
                u: Context::empty()
            }]
        );
        let g = parse_unchecked("[X<-1](Y()=0) & ![X<-1](Z()=0)").unwrap();
        assert_eq!(relevant_pairs(&g).len(), 1);
        let h = parse_unchecked("[X<-1;Y<-0](Z()=0) & <Y<-0;X<-1>(Z()=1)").unwrap();
        assert_eq!(relevant_pairs(&h).len(), 1);
    }

    #[test]
    fn pairs_per_box_and_context() {
        let f = parse_unchecked("[X<-1](Y(0)=0 | Y(1)=1) & [](Y(0)=1 & true(1))").unwrap();
        let pairs = relevant_pairs(&f);
        assert_eq!(pairs.len(), 4);
        assert!(pairs.len() < f.size() * f.size());
    }
}
