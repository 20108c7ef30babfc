use std::sync::Arc;

use super::{
    is_recursive, is_unique_solutions, CausalModel, MechanismTable, ModelClass, Signature,
};
use crate::budget;
use crate::error::Result;

/// Number of models over `sig` (all classes), saturating.
pub fn count_models(sig: &Signature) -> u128 {
    budget::product(
        (0..sig.num_endo())
            .map(|x| budget::pow(sig.endo(x).range.len() as u128, sig.layout(x).rows)),
    )
}

/// Every model over a signature in lexicographic order of its table
/// entries (first mechanism, first row most significant), filtered by class.
#[derive(Debug, Clone)]
pub struct ModelEnumerator {
    sig: Arc<Signature>,
    class: ModelClass,
    current: Option<Vec<MechanismTable>>,
    total: u128,
}

impl ModelEnumerator {
    pub fn new(sig: impl Into<Arc<Signature>>, class: ModelClass, budget: u64) -> Result<Self> {
        let sig = sig.into();
        let total = count_models(&sig);
        budget::ensure("model enumeration", total, budget)?;
        if class == ModelClass::Uniq {
            // Each membership test is bounded by the same budget.
            let triples =
                budget::product(sig.endogenous().iter().map(|v| v.range.len() as u128 + 1))
                    .saturating_mul(sig.num_contexts());
            budget::ensure("unique-solution check", triples, budget)?;
        }
        let current = Some(
            (0..sig.num_endo())
                .map(|x| MechanismTable {
                    outputs: vec![0; sig.layout(x).rows as usize],
                })
                .collect(),
        );
        Ok(ModelEnumerator {
            sig,
            class,
            current,
            total,
        })
    }

    /// Number of models before class filtering.
    pub fn total(&self) -> u128 {
        self.total
    }

    fn advance(&mut self) {
        let Some(tables) = self.current.as_mut() else {
            return;
        };
        for x in (0..tables.len()).rev() {
            let radix = self.sig.endo(x).range.len();
            let outputs = &mut tables[x].outputs;
            for r in (0..outputs.len()).rev() {
                outputs[r] += 1;
                if outputs[r] < radix {
                    return;
                }
                outputs[r] = 0;
            }
        }
        self.current = None;
    }
}

impl Iterator for ModelEnumerator {
    type Item = CausalModel;

    fn next(&mut self) -> Option<CausalModel> {
        loop {
            let tables = self.current.clone()?;
            self.advance();
            let model = CausalModel::new(Arc::clone(&self.sig), tables)
                .expect("enumerated tables match the signature");
            let keep = match self.class {
                ModelClass::All => true,
                ModelClass::Rec => is_recursive(&model).is_some(),
                ModelClass::Uniq => is_unique_solutions(&model, u64::MAX).unwrap_or(false),
            };
            if keep {
                return Some(model);
            }
        }
    }
}

/// The `index`-th model in enumeration order (before class filtering).
pub fn nth_model(sig: &Arc<Signature>, mut index: u128) -> CausalModel {
    let mut tables: Vec<MechanismTable> = (0..sig.num_endo())
        .map(|x| MechanismTable {
            outputs: vec![0; sig.layout(x).rows as usize],
        })
        .collect();
    for x in (0..tables.len()).rev() {
        let radix = sig.endo(x).range.len() as u128;
        for r in (0..tables[x].outputs.len()).rev() {
            tables[x].outputs[r] = (index % radix) as usize;
            index /= radix;
        }
    }
    CausalModel::new(Arc::clone(sig), tables).expect("decoded tables match the signature")
}

/// Every model over `sig` in the class, in deterministic order.
pub fn enumerate_models(
    sig: impl Into<Arc<Signature>>,
    class: ModelClass,
    budget: u64,
) -> Result<ModelEnumerator> {
    ModelEnumerator::new(sig, class, budget)
}
