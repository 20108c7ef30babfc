use rayon::prelude::*;

use super::{generate_instances, AxiomId, AxiomInstance};
use crate::budget;
use crate::checker::{Compiled, SolutionCache};
use crate::error::Result;
use crate::model::{enumerate_models, CausalModel, ModelClass, Signature};

/// Outcome of evaluating every instance of a scheme on every model of a
/// class.
#[derive(Clone, Debug)]
pub struct SoundnessReport {
    pub id: AxiomId,
    pub class: ModelClass,
    /// Models examined (for entailment checks: models satisfying the
    /// premises).
    pub models: usize,
    pub instances: usize,
    pub holds_on_all: bool,
    /// The first failing (model, instance) in enumeration order.
    pub counterexample: Option<(CausalModel, AxiomInstance)>,
}

fn compile_all(instances: &[AxiomInstance], sig: &Signature) -> Result<Vec<Compiled>> {
    instances
        .iter()
        .map(|i| Compiled::new(&i.formula, sig))
        .collect()
}

fn first_failure(model: &CausalModel, compiled: &[Compiled]) -> Option<usize> {
    let mut cache = SolutionCache::new();
    compiled
        .iter()
        .position(|c| !c.eval_cached(model, &mut cache))
}

/// Evaluates every instance of `id` over `sig` on every model in `class`.
pub fn check_soundness(
    id: &AxiomId,
    class: ModelClass,
    sig: &Signature,
    budget: u64,
) -> Result<SoundnessReport> {
    check_entailment(&[], id, class, sig, budget)
}

/// Checks that every model in `class` satisfying all instances of
/// `premises` also satisfies every instance of `conclusion`.
pub fn check_entailment(
    premises: &[AxiomId],
    conclusion: &AxiomId,
    class: ModelClass,
    sig: &Signature,
    budget: u64,
) -> Result<SoundnessReport> {
    let models: Vec<CausalModel> = enumerate_models(sig.clone(), class, budget)?.collect();
    let mut premise_instances = Vec::new();
    for p in premises {
        premise_instances.extend(generate_instances(p, sig, budget)?);
    }
    let instances = generate_instances(conclusion, sig, budget)?;
    let work =
        (models.len() as u128).saturating_mul((instances.len() + premise_instances.len()) as u128);
    budget::ensure("soundness check", work, budget)?;
    let premise_compiled = compile_all(&premise_instances, sig)?;
    let compiled = compile_all(&instances, sig)?;

    let relevant: Vec<&CausalModel> = models
        .par_iter()
        .filter(|m| first_failure(m, &premise_compiled).is_none())
        .collect();
    let failure = relevant
        .par_iter()
        .enumerate()
        .find_map_first(|(i, m)| first_failure(m, &compiled).map(|j| (i, j)));
    Ok(SoundnessReport {
        id: conclusion.clone(),
        class,
        models: relevant.len(),
        instances: instances.len(),
        holds_on_all: failure.is_none(),
        counterexample: failure.map(|(i, j)| (relevant[i].clone(), instances[j].clone())),
    })
}
