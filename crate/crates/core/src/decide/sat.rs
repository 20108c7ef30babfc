use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::project::{transform_finite1a, Direction};
use super::reduce::Reduction;
use super::search::{search, Placement};
use super::{RelevantPair, SatWitness, Verdict};
use crate::budget;
use crate::checker::Compiled;
use crate::error::{Error, Result};
use crate::lang::Formula;
use crate::model::{
    count_models, nth_model, CausalModel, Intervention, ModelClass, ModelEnumerator, Signature,
    MAX_TABLE_ROWS,
};
use crate::DEFAULT_BUDGET;

/// Which signature [`sat_enum_with`] enumerates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// The class's reduced signature (`S_φ`, or `S_φ⁺` for the general class).
    #[default]
    Reduced,
    /// The queried signature itself.
    Original,
    /// Whichever of the two has fewer models.
    Smallest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SatOptions {
    pub budget: u64,
    pub strategy: Strategy,
    /// Worker threads for enumeration: 1 is sequential, 0 uses every core.
    /// The answer does not depend on it.
    pub threads: usize,
}

impl Default for SatOptions {
    fn default() -> Self {
        SatOptions {
            budget: DEFAULT_BUDGET,
            strategy: Strategy::Reduced,
            threads: 1,
        }
    }
}

impl SatOptions {
    pub fn with_budget(budget: u64) -> Self {
        SatOptions {
            budget,
            ..SatOptions::default()
        }
    }
}

/// The answer to a validity query; `refutation` is the satisfiability
/// witness for the negation.
#[derive(Clone, Debug)]
pub struct Validity {
    pub valid: bool,
    pub refutation: SatWitness,
}

impl Validity {
    pub fn countermodel(&self) -> Option<&CausalModel> {
        self.refutation.model.as_ref()
    }
}

/// Checks a model over the queried signature, if that fits in the budget:
/// `Ok(None)` means too large to build or re-check.
fn verified_on_original(
    build: impl FnOnce() -> Result<CausalModel>,
    f: &Formula,
    sig: &Signature,
    class: ModelClass,
    budget: u64,
) -> Result<Option<CausalModel>> {
    let rows = table_rows(sig);
    let compiled = Compiled::new(f, sig)?;
    let eval_cost = sig.size().saturating_mul(compiled.pairs().len() as u128);
    if rows > budget as u128 || eval_cost > budget as u128 {
        return Ok(None);
    }
    let model = match build() {
        Ok(m) => m,
        Err(e) if e.is_budget() => return Ok(None),
        Err(e) => return Err(e),
    };
    if !compiled.eval(&model) {
        return Err(Error::WitnessRejected(
            "the model carried back to the queried signature does not satisfy the formula".into(),
        ));
    }
    match class.contains(&model, budget) {
        Ok(true) => Ok(Some(model)),
        Ok(false) => Err(Error::WitnessRejected(format!(
            "the model carried back to the queried signature is not in {class}"
        ))),
        Err(e) if e.is_budget() => Ok(None),
        Err(e) => Err(e),
    }
}

type Table = HashMap<(usize, usize, Vec<usize>), usize>;

/// Re-checks a placement independently of the search: every solution
/// respects its intervention, same-context pairs agreeing on the
/// predecessors of a free variable agree on it, and the formula holds when
/// each pair has exactly its solution. Returns the table entries it fixes.
fn certify(compiled: &Compiled, found: &Placement) -> Result<Table> {
    let reject =
        |why: &str| Error::WitnessRejected(format!("search result is inconsistent: {why}"));
    let mut table = Table::new();
    for (pair, sol) in compiled.pairs().iter().zip(&found.solutions) {
        if pair
            .forced
            .iter()
            .zip(sol)
            .any(|(f, &v)| f.is_some_and(|f| f != v))
        {
            return Err(reject("a solution ignores its intervention"));
        }
        for (i, &x) in found.order.iter().enumerate() {
            if pair.forced[x].is_none() {
                let pre = found.order[..i].iter().map(|&y| sol[y]).collect();
                if *table.entry((pair.ctx[0], x, pre)).or_insert(sol[x]) != sol[x] {
                    return Err(reject("two pairs need different mechanism outputs"));
                }
            }
        }
    }
    let sols: Vec<Vec<Vec<usize>>> = found.solutions.iter().map(|s| vec![s.clone()]).collect();
    if !compiled.eval_with(|i| &sols[i]) {
        return Err(reject("the formula is false under the guessed solutions"));
    }
    Ok(table)
}

/// Most table rows a witness may have: the budget, capped by what
/// [`CausalModel::from_fn`] accepts.
fn row_limit(budget: u64) -> u128 {
    (budget as u128).min(MAX_TABLE_ROWS)
}

fn table_rows(sig: &Signature) -> u128 {
    (0..sig.num_endo())
        .map(|x| sig.layout(x).rows)
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// Evaluates `compiled` on a model known to be recursive along `order`,
/// computing each unique solution by substitution.
fn eval_along(compiled: &Compiled, model: &CausalModel, order: &[usize]) -> bool {
    let sols: Vec<Vec<Vec<usize>>> = compiled
        .pairs()
        .iter()
        .map(|p| {
            let mut a = vec![0; order.len()];
            for &x in order {
                a[x] = p.forced[x].unwrap_or_else(|| model.output(x, &p.ctx, &a));
            }
            vec![a]
        })
        .collect();
    compiled.eval_with(|i| &sols[i])
}

/// Satisfiability in the recursive models over `sig`: an exact search over
/// orders and per-pair solutions on `S_φ`. The result is re-checked as a
/// certificate; witness models are written out only when their tables fit
/// in the budget.
pub fn sat_rec(f: &Formula, sig: &Signature, budget: u64) -> Result<SatWitness> {
    let red = Reduction::finite1(f, sig)?;
    let compiled = Compiled::new(&red.formula, &red.reduced)?;
    let Some(found) = search(&compiled, &red.reduced, budget)? else {
        return Ok(SatWitness::unsat());
    };

    let table = certify(&compiled, &found)?;
    let mut pos = vec![0; red.reduced.num_endo()];
    for (i, &x) in found.order.iter().enumerate() {
        pos[x] = i;
    }
    // F_X reads the context and the variables placed before X; entries no
    // pair constrains take the first range value.
    let reduced_model = if table_rows(&red.reduced) > row_limit(budget) {
        None
    } else {
        let radix = |y: usize| red.reduced.endo(y).range.len();
        let rank = |x: usize, values: &mut dyn Iterator<Item = usize>| {
            found.order[..pos[x]]
                .iter()
                .zip(values)
                .fold(0usize, |acc, (&y, v)| acc * radix(y) + v)
        };
        let ranked: HashMap<(usize, usize, usize), usize> = table
            .iter()
            .map(|((u, x, pre), &v)| ((*u, *x, rank(*x, &mut pre.iter().copied())), v))
            .collect();
        let m = CausalModel::from_fn(Arc::clone(&red.reduced), |x, ctx, endo| {
            let r = rank(x, &mut found.order[..pos[x]].iter().map(|&y| endo[y]));
            ranked.get(&(ctx[0], x, r)).copied().unwrap_or(0)
        })?;
        if !eval_along(&compiled, &m, &found.order) {
            return Err(Error::WitnessRejected(
                "the materialized recursive model does not realize the search result".into(),
            ));
        }
        Some(m)
    };

    // Over S the dropped variables are constants, so they go first.
    let full_order: Vec<usize> = (0..sig.num_endo())
        .filter(|&x| red.reduced_var(x).is_none())
        .chain(found.order.iter().map(|&x| red.kept[x]))
        .collect();
    let model = match &reduced_model {
        Some(m) if table_rows(sig) <= row_limit(budget) => {
            let lifted = red.lift(m)?;
            if !eval_along(&Compiled::new(f, sig)?, &lifted, &full_order) {
                return Err(Error::WitnessRejected(
                    "the model carried back to the queried signature does not satisfy the formula"
                        .into(),
                ));
            }
            Some(lifted)
        }
        _ => None,
    };
    let order: Vec<String> = full_order
        .iter()
        .map(|&x| sig.endo(x).name.clone())
        .collect();
    let pair_solutions = compiled
        .pairs()
        .iter()
        .zip(&found.solutions)
        .map(|(pair, sol)| {
            let named = sol
                .iter()
                .enumerate()
                .map(|(x, &v)| {
                    (
                        red.reduced.endo(x).name.clone(),
                        red.reduced.endo_value(x, v).clone(),
                    )
                })
                .collect();
            let rp = RelevantPair {
                iv: Intervention::from_forced(&red.reduced, &pair.forced),
                u: sig.context_values(&red.contexts[pair.ctx[0]]),
            };
            (rp, named)
        })
        .collect();
    Ok(SatWitness {
        verdict: Verdict::Sat,
        model,
        reduced_model,
        order: Some(order),
        pair_solutions,
    })
}

/// Satisfiability by enumerating the models of a reduced signature:
/// `S_φ` for unique-solution (and recursive) models, `S_φ⁺` for all models.
pub fn sat_enum(
    f: &Formula,
    sig: &Signature,
    class: ModelClass,
    budget: u64,
) -> Result<SatWitness> {
    sat_enum_with(f, sig, class, &SatOptions::with_budget(budget))
}

/// The first model of `sig` in `class` satisfying `compiled`.
fn first_model(
    compiled: &Compiled,
    sig: &Arc<Signature>,
    class: ModelClass,
    opts: &SatOptions,
) -> Result<Option<CausalModel>> {
    let models = ModelEnumerator::new(Arc::clone(sig), ModelClass::All, opts.budget)?;
    let total = models.total() as u64;
    let accept = |m: &CausalModel| -> Result<bool> {
        Ok(class.contains(m, opts.budget)? && compiled.eval(m))
    };
    if opts.threads == 1 {
        for m in models {
            if accept(&m)? {
                return Ok(Some(m));
            }
        }
        return Ok(None);
    }
    let run = || {
        (0..total)
            .into_par_iter()
            .map(|i| {
                let m = nth_model(sig, i as u128);
                accept(&m).map(|ok| ok.then_some(m))
            })
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            })
            .unwrap_or(Ok(None))
    };
    if opts.threads == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?
            .install(run)
    }
}

pub fn sat_enum_with(
    f: &Formula,
    sig: &Signature,
    class: ModelClass,
    opts: &SatOptions,
) -> Result<SatWitness> {
    let red = match class {
        ModelClass::All => Reduction::finite1a(f, sig)?,
        _ => Reduction::finite1(f, sig)?,
    };
    let use_reduced = match opts.strategy {
        Strategy::Reduced => true,
        Strategy::Original => false,
        Strategy::Smallest => count_models(&red.reduced) <= count_models(sig),
    };
    if !use_reduced {
        let sig = Arc::new(sig.clone());
        let compiled = Compiled::new(f, &sig)?;
        let Some(model) = first_model(&compiled, &sig, class, opts)? else {
            return Ok(SatWitness::unsat());
        };
        return Ok(SatWitness {
            verdict: Verdict::Sat,
            model: Some(model.clone()),
            reduced_model: Some(model),
            order: None,
            pair_solutions: Vec::new(),
        });
    }
    let compiled = Compiled::new(&red.formula, &red.reduced)?;
    let Some(reduced_model) = first_model(&compiled, &red.reduced, class, opts)? else {
        return Ok(SatWitness::unsat());
    };
    let model = verified_on_original(
        || match red.star {
            None => red.lift(&reduced_model),
            Some(_) => transform_finite1a(&reduced_model, f, sig, Direction::FromReduced),
        },
        f,
        sig,
        class,
        opts.budget,
    )?;
    Ok(SatWitness {
        verdict: Verdict::Sat,
        model,
        reduced_model: Some(reduced_model),
        order: None,
        pair_solutions: Vec::new(),
    })
}

/// Satisfiability in any class: recursive models go to [`sat_rec`], the
/// others to [`sat_enum_with`].
pub fn sat(
    f: &Formula,
    sig: &Signature,
    class: ModelClass,
    opts: &SatOptions,
) -> Result<SatWitness> {
    budget::ensure("budget", 0, opts.budget)?;
    match class {
        ModelClass::Rec => sat_rec(f, sig, opts.budget),
        _ => sat_enum_with(f, sig, class, opts),
    }
}

/// Validity in `class`: `f` is valid iff `¬f` is unsatisfiable.
pub fn valid(
    f: &Formula,
    sig: &Signature,
    class: ModelClass,
    opts: &SatOptions,
) -> Result<Validity> {
    let refutation = sat(&f.clone().not(), sig, class, opts)?;
    Ok(Validity {
        valid: !refutation.is_sat(),
        refutation,
    })
}
