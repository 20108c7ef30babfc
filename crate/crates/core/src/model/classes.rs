use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::{CausalModel, Input};
use crate::budget;
use crate::error::{Error, Result};

/// The three model classes: recursive, unique-solution, and all models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelClass {
    Rec,
    Uniq,
    All,
}

impl ModelClass {
    pub fn contains(self, model: &CausalModel, budget: u64) -> Result<bool> {
        match self {
            ModelClass::Rec => Ok(is_recursive(model).is_some()),
            ModelClass::Uniq => is_unique_solutions(model, budget),
            ModelClass::All => Ok(true),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelClass::Rec => "REC",
            ModelClass::Uniq => "UNIQ",
            ModelClass::All => "ALL",
        }
    }
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rec" => Ok(ModelClass::Rec),
            "uniq" => Ok(ModelClass::Uniq),
            "all" => Ok(ModelClass::All),
            _ => Err(Error::Unsupported(format!("unknown model class `{s}`"))),
        }
    }
}

impl CausalModel {
    /// Inputs whose value can change the output of `F_x`, in layout order.
    pub fn sensitive_inputs(&self, x: usize) -> Vec<Input> {
        let layout = self.signature().layout(x);
        let outputs = &self.tables()[x].outputs;
        let mut found = Vec::new();
        for &input in &layout.inputs {
            let (stride, radix) = match input {
                Input::Exo(u) => (
                    layout.exo_strides[u],
                    self.signature().exogenous()[u].range.len(),
                ),
                Input::Endo(y) => (layout.endo_strides[y], self.signature().endo(y).range.len()),
            };
            // Two rows differing only in this input exist iff some adjacent
            // pair (digit d vs d+1) differs.
            let sensitive = (0..outputs.len()).any(|r| {
                let digit = (r / stride) % radix;
                digit + 1 < radix && outputs[r] != outputs[r + stride]
            });
            if sensitive {
                found.push(input);
            }
        }
        found
    }
}

/// `deps[x]` is the set of endogenous variables `F_x` depends on.
pub fn dependency_graph(model: &CausalModel) -> Vec<BTreeSet<usize>> {
    (0..model.signature().num_endo())
        .map(|x| {
            model
                .sensitive_inputs(x)
                .into_iter()
                .filter_map(|i| match i {
                    Input::Endo(y) => Some(y),
                    Input::Exo(_) => None,
                })
                .collect()
        })
        .collect()
}

/// A topological order of the dependency graph, ties broken by declaration
/// order, or `None` when the graph has a cycle.
pub fn is_recursive(model: &CausalModel) -> Option<Vec<usize>> {
    let deps = dependency_graph(model);
    let n = deps.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&x| !placed[x] && deps[x].iter().all(|&y| placed[y]))?;
        placed[next] = true;
        order.push(next);
    }
    Some(order)
}

/// Exhaustively checks that every submodel under every context has exactly
/// one solution.
pub fn is_unique_solutions(model: &CausalModel, budget: u64) -> Result<bool> {
    let sig = model.signature();
    let triples = budget::product(sig.endogenous().iter().map(|v| v.range.len() as u128 + 1))
        .saturating_mul(sig.num_contexts());
    budget::ensure("unique-solution check", triples, budget)?;
    if is_recursive(model).is_some() {
        return Ok(true);
    }
    // Each variable is either free (None) or forced to one of its values.
    let radices: Vec<usize> = sig.endogenous().iter().map(|v| v.range.len() + 1).collect();
    let contexts = sig.contexts();
    for digits in super::odometer(&radices) {
        let forced: Vec<Option<usize>> = digits.iter().map(|&d| d.checked_sub(1)).collect();
        for ctx in &contexts {
            if model.count_solutions(&forced, ctx, 2) != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{Signature, Variable};
    use crate::DEFAULT_BUDGET;

    #[test]
    fn constant_then_copy_is_recursive() {
        let sig = Signature::new(
            vec![],
            vec![
                Variable::new("X", ["0", "1"]),
                Variable::new("Y", ["0", "1"]),
            ],
        )
        .unwrap();
        let m = CausalModel::from_fn(sig, |x, _, e| if x == 0 { 1 } else { e[0] }).unwrap();
        assert_eq!(is_recursive(&m), Some(vec![0, 1]));
    }

    #[test]
    fn declaration_order_breaks_ties() {
        let sig = Signature::new(
            vec![],
            vec![
                Variable::new("X", ["0", "1"]),
                Variable::new("Y", ["0", "1"]),
            ],
        )
        .unwrap();
        let m = CausalModel::from_fn(sig, |x, _, e| if x == 0 { e[1] } else { 0 }).unwrap();
        assert_eq!(is_recursive(&m), Some(vec![1, 0]));
        let c = CausalModel::constant(m.shared_signature(), &[0, 0]).unwrap();
        assert_eq!(is_recursive(&c), Some(vec![0, 1]));
    }

    #[test]
    fn fixture_classes() {
        assert_eq!(is_recursive(&fixtures::push_pull()), None);
        assert_eq!(is_recursive(&fixtures::mod3()), None);
        assert_eq!(is_recursive(&fixtures::copycat()), None);
        assert!(is_unique_solutions(&fixtures::push_pull(), DEFAULT_BUDGET).unwrap());
        assert!(is_unique_solutions(&fixtures::mod3(), DEFAULT_BUDGET).unwrap());
        assert!(!is_unique_solutions(&fixtures::copycat(), DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn unique_check_respects_budget() {
        let err = is_unique_solutions(&fixtures::mod3(), 10).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn exogenous_sensitivity_is_detected() {
        let sig = Signature::new(
            vec![Variable::new("U", ["0", "1"])],
            vec![
                Variable::new("X", ["0", "1"]),
                Variable::new("Y", ["0", "1"]),
            ],
        )
        .unwrap();
        let m = CausalModel::from_fn(sig, |x, c, _| if x == 0 { c[0] } else { 0 }).unwrap();
        assert_eq!(m.sensitive_inputs(0), vec![Input::Exo(0)]);
        assert!(m.sensitive_inputs(1).is_empty());
    }
}
