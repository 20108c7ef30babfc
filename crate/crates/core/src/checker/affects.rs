use crate::budget;
use crate::combinatorics::subsets_by_size;
use crate::error::{Error, Result};
use crate::lang::{Formula, Inner};
use crate::model::{odometer, CausalModel, Context, Intervention, Signature, Value};

/// Evidence for `Y ⇝ Z`: with `X⃗ ← x⃗` held fixed in context `u`, `Z` is
/// `z` in all solutions, and additionally setting `Y ← y` makes it `z'` in
/// all solutions (either statement may hold vacuously).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffectsWitness {
    pub fixed: Intervention,
    pub y_value: Value,
    pub context: Context,
    pub z: Value,
    pub z_prime: Value,
}

fn pair_indices(sig: &Signature, y: &str, z: &str) -> Result<(usize, usize)> {
    let yi = sig
        .endo_index(y)
        .ok_or_else(|| Error::UnknownVariable(y.to_string()))?;
    let zi = sig
        .endo_index(z)
        .ok_or_else(|| Error::UnknownVariable(z.to_string()))?;
    if yi == zi {
        return Err(Error::Unsupported(format!("`{y}` cannot affect itself")));
    }
    Ok((yi, zi))
}

/// Visits every `(X⃗ ← x⃗, y, u)` in the deterministic order used by both
/// [`affects`] and [`expand_affects`]: subsets by size, then values, then
/// `y`, then contexts. Stops when `f` returns `Some`.
fn scan<T>(
    sig: &Signature,
    yi: usize,
    zi: usize,
    mut f: impl FnMut(&[Option<usize>], usize, &[usize]) -> Option<T>,
) -> Option<T> {
    let others: Vec<usize> = (0..sig.num_endo())
        .filter(|&x| x != yi && x != zi)
        .collect();
    let contexts = sig.contexts();
    for subset in subsets_by_size(&others) {
        let radices: Vec<usize> = subset.iter().map(|&x| sig.endo(x).range.len()).collect();
        for values in odometer(&radices) {
            let mut fixed = vec![None; sig.num_endo()];
            for (&x, &v) in subset.iter().zip(&values) {
                fixed[x] = Some(v);
            }
            for yv in 0..sig.endo(yi).range.len() {
                for ctx in &contexts {
                    if let Some(found) = f(&fixed, yv, ctx) {
                        return Some(found);
                    }
                }
            }
        }
    }
    None
}

/// Values `z` such that `Z = z` in all solutions (every value when there
/// are none).
fn determined(sols: &[Vec<usize>], zi: usize, nz: usize) -> Vec<usize> {
    (0..nz)
        .filter(|&v| sols.iter().all(|s| s[zi] == v))
        .collect()
}

/// The first witness of `Y ⇝ Z` in `model`, if any.
pub fn affects(model: &CausalModel, y: &str, z: &str) -> Result<Option<AffectsWitness>> {
    let sig = model.signature();
    let (yi, zi) = pair_indices(sig, y, z)?;
    let nz = sig.endo(zi).range.len();
    Ok(scan(sig, yi, zi, |fixed, yv, ctx| {
        let mut with_y = fixed.to_vec();
        with_y[yi] = Some(yv);
        let after = determined(&model.solve_indices(&with_y, ctx), zi, nz);
        if after.is_empty() {
            return None;
        }
        let before = determined(&model.solve_indices(fixed, ctx), zi, nz);
        for &zb in &before {
            if let Some(&za) = after.iter().find(|&&za| za != zb) {
                return Some(AffectsWitness {
                    fixed: Intervention::from_forced(sig, fixed),
                    y_value: sig.endo_value(yi, yv).clone(),
                    context: sig.context_values(ctx),
                    z: sig.endo_value(zi, zb).clone(),
                    z_prime: sig.endo_value(zi, za).clone(),
                });
            }
        }
        None
    }))
}

/// Number of disjuncts [`expand_affects`] would produce.
pub fn affects_expansion_size(sig: &Signature, y: &str, z: &str) -> Result<u128> {
    let (yi, zi) = pair_indices(sig, y, z)?;
    // Σ over subsets of ∏ ranges = ∏ (|R(X)| + 1).
    let settings = budget::product(
        (0..sig.num_endo())
            .filter(|&x| x != yi && x != zi)
            .map(|x| sig.endo(x).range.len() as u128 + 1),
    );
    let nz = sig.endo(zi).range.len() as u128;
    Ok(budget::product([
        settings,
        sig.endo(yi).range.len() as u128,
        sig.num_contexts(),
        nz * (nz - 1),
    ]))
}

/// `Y ⇝ Z` written out as the disjunction over `X⃗ ⊆ V − {Y, Z}`, all
/// values, contexts and `z ≠ z'` of `[X⃗←x⃗; Y←y](Z(u)=z') & [X⃗←x⃗](Z(u)=z)`.
pub fn expand_affects(sig: &Signature, y: &str, z: &str, budget: u64) -> Result<Formula> {
    budget::ensure(
        "affects expansion",
        affects_expansion_size(sig, y, z)?,
        budget,
    )?;
    let (yi, zi) = pair_indices(sig, y, z)?;
    let zvar = sig.endo(zi);
    let mut terms = Vec::new();
    scan(sig, yi, zi, |fixed, yv, ctx| {
        let base = Intervention::from_forced(sig, fixed);
        let mut with_y = base.clone();
        with_y
            .settings
            .push((sig.endo(yi).name.clone(), sig.endo_value(yi, yv).clone()));
        let u = sig.context_values(ctx);
        for zb in &zvar.range {
            for za in zvar.range.iter().filter(|&za| za != zb) {
                terms.push(
                    Formula::boxed(
                        with_y.clone(),
                        Inner::atom(zvar.name.clone(), u.clone(), za.clone()),
                    )
                    .and(Formula::boxed(
                        base.clone(),
                        Inner::atom(zvar.name.clone(), u.clone(), zb.clone()),
                    )),
                );
            }
        }
        None::<()>
    });
    Ok(Formula::or_all(terms).expect("every range has at least two values"))
}
