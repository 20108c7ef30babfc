use std::sync::Arc;

use super::reduce::Reduction;
use crate::error::{Error, Result};
use crate::lang::Formula;
use crate::model::{is_recursive, is_unique_solutions, odometer, CausalModel};
use crate::DEFAULT_BUDGET;

/// Direction of [`transform_finite1a`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// From a model over `S` to one over `S_φ⁺`.
    ToReduced,
    /// From a model over `S_φ⁺` to one over `S`.
    FromReduced,
}

/// Projects a recursive model onto `S_φ`. `F'_X` evaluates the original
/// mechanisms along the order, reading kept variables from its arguments and
/// computing dropped predecessors on the way.
pub fn project_model_rec(model: &CausalModel, f: &Formula) -> Result<CausalModel> {
    let order = is_recursive(model).ok_or(Error::NotRecursive)?;
    let red = Reduction::finite1(f, model.signature())?;
    let n = model.signature().num_endo();
    let mut full = vec![0usize; n];
    CausalModel::from_fn(Arc::clone(&red.reduced), |rx, ctx, endo| {
        let x = red.kept[rx];
        let u = &red.contexts[ctx[0]];
        for &w in order.iter().take_while(|&&w| w != x) {
            full[w] = match red.reduced_var(w) {
                Some(rw) => endo[rw],
                None => model.output(w, u, &full),
            };
        }
        model.output(x, u, &full)
    })
}

/// Projects a unique-solution model onto `S_φ`: `F'_X(u, x⃗)` is the value of
/// `X` in the unique solution of `T_{V_φ−{X}←x⃗}(u)`.
pub fn project_model_uniq(model: &CausalModel, f: &Formula) -> Result<CausalModel> {
    if !is_unique_solutions(model, DEFAULT_BUDGET)? {
        return Err(Error::NotUniqueSolutions);
    }
    let red = Reduction::finite1(f, model.signature())?;
    let n = model.signature().num_endo();
    CausalModel::from_fn(Arc::clone(&red.reduced), |rx, ctx, endo| {
        let x = red.kept[rx];
        let mut forced = vec![None; n];
        for (ry, &y) in red.kept.iter().enumerate() {
            if y != x {
                forced[y] = Some(endo[ry]);
            }
        }
        model.solve_indices(&forced, &red.contexts[ctx[0]])[0][x]
    })
}

/// The general-class transforms between `S` and `S_φ⁺`. When `S_φ⁺` is
/// `({U*}, V)` both directions only re-index contexts.
pub fn transform_finite1a(
    model: &CausalModel,
    f: &Formula,
    original: &crate::model::Signature,
    direction: Direction,
) -> Result<CausalModel> {
    let red = Reduction::finite1a(f, original)?;
    match direction {
        Direction::ToReduced => {
            if model.signature() != original {
                return Err(Error::ShapeMismatch(
                    "model is not over the original signature".into(),
                ));
            }
            match red.star {
                None => reindex_to_reduced(model, &red),
                Some(_) => to_reduced_star(model, &red),
            }
        }
        Direction::FromReduced => {
            if model.signature() != &*red.reduced {
                return Err(Error::ShapeMismatch(
                    "model is not over the reduced signature".into(),
                ));
            }
            match red.star {
                None => red.lift(model),
                Some(_) => from_reduced_star(model, &red),
            }
        }
    }
}

fn reindex_to_reduced(model: &CausalModel, red: &Reduction) -> Result<CausalModel> {
    CausalModel::from_fn(Arc::clone(&red.reduced), |x, ctx, endo| {
        model.output(x, &red.contexts[ctx[0]], endo)
    })
}

/// Mixed-radix rank of `digits` (first digit most significant).
fn rank(digits: impl IntoIterator<Item = usize>, radices: &[usize]) -> usize {
    digits
        .into_iter()
        .zip(radices)
        .fold(0, |acc, (d, &r)| acc * r + d)
}

fn unrank(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    out
}

/// `F'_{X_i}(u, x⃗_{−i}, y⃗)` is `y_i` when `x⃗_{−i} = y⃗_{−i}` and some solution
/// of `T_{V_φ−{X_i}←x⃗_{−i}}(u)` has `X_i = y_i`; otherwise the first range
/// value, or the second when `y_i` is the first. `F'_{X*}` copies `V_φ`.
fn to_reduced_star(model: &CausalModel, red: &Reduction) -> Result<CausalModel> {
    let sig = model.signature();
    let star = red.star.expect("X* present");
    let k = red.kept.len();
    let radices: Vec<usize> = red.kept.iter().map(|&x| sig.endo(x).range.len()).collect();
    // reachable[u*][i][x⃗ rank with slot i zeroed] = values of X_i in solutions.
    let mut reachable = vec![vec![std::collections::HashMap::new(); k]; red.contexts.len()];
    for (u, ctx) in red.contexts.iter().enumerate() {
        for (i, &xi) in red.kept.iter().enumerate() {
            let mut others = radices.clone();
            others[i] = 1;
            for digits in odometer(&others) {
                let mut forced = vec![None; sig.num_endo()];
                for (j, &xj) in red.kept.iter().enumerate() {
                    if j != i {
                        forced[xj] = Some(digits[j]);
                    }
                }
                let mut seen = vec![false; radices[i]];
                for s in model.solve_indices(&forced, ctx) {
                    seen[s[xi]] = true;
                }
                reachable[u][i].insert(digits, seen);
            }
        }
    }
    CausalModel::from_fn(Arc::clone(&red.reduced), |x, ctx, endo| {
        if x == star {
            return rank(endo[..k].iter().copied(), &radices);
        }
        let y = unrank(endo[star], &radices);
        let agrees = (0..k).all(|j| j == x || endo[j] == y[j]);
        let mut key = endo[..k].to_vec();
        key[x] = 0;
        if agrees && reachable[ctx[0]][x][&key][y[x]] {
            y[x]
        } else if y[x] != 0 {
            0
        } else {
            1
        }
    })
}

/// The converse construction through the rank injection `f` from tuples of
/// `V_φ` into tuples of the dropped variables, with reserved tuples `y⃗₀`,
/// `y⃗₁` outside its image and `x⃗₀`, `x⃗₁` the first two tuples of `V_φ`.
fn from_reduced_star(model: &CausalModel, red: &Reduction) -> Result<CausalModel> {
    let sig = &red.original;
    let star = red.star.expect("X* present");
    let k = red.kept.len();
    let rest: Vec<usize> = (0..sig.num_endo())
        .filter(|x| !red.kept.contains(x))
        .collect();
    let kept_radices: Vec<usize> = red.kept.iter().map(|&x| sig.endo(x).range.len()).collect();
    let rest_radices: Vec<usize> = rest.iter().map(|&x| sig.endo(x).range.len()).collect();
    let n_star = kept_radices.iter().product::<usize>();
    let n_rest = rest_radices
        .iter()
        .try_fold(1usize, |a, &r| a.checked_mul(r))
        .unwrap_or(usize::MAX);
    if n_rest < n_star + 2 {
        return Err(Error::GuardViolated(format!(
            "{n_rest} tuples of dropped variables cannot hold {n_star} images and two reserved tuples"
        )));
    }
    let y0 = unrank(n_rest - 2, &rest_radices);
    let y1 = unrank(n_rest - 1, &rest_radices);
    let x0 = unrank(0, &kept_radices);
    let rest_pos = |x: usize| rest.iter().position(|&r| r == x);
    let mut reduced_endo = vec![0usize; k + 1];
    CausalModel::from_fn(Arc::clone(sig), |x, ctx, endo| {
        let u = red.reduced_context(ctx).unwrap_or(0);
        let xs: Vec<usize> = red.kept.iter().map(|&v| endo[v]).collect();
        if let Some(i) = red.reduced_var(x) {
            let ys = rank(rest.iter().map(|&v| endo[v]), &rest_radices);
            if ys < n_star {
                reduced_endo[..k].copy_from_slice(&xs);
                reduced_endo[star] = ys;
                model.output(i, &[u], &reduced_endo)
            } else if ys != n_rest - 1 {
                x0[i]
            } else {
                unrank(1, &kept_radices)[i]
            }
        } else {
            let j = rest_pos(x).expect("dropped variable");
            reduced_endo[..k].copy_from_slice(&xs);
            let image = unrank(model.output(star, &[u], &reduced_endo), &rest_radices);
            let matches = rest
                .iter()
                .enumerate()
                .all(|(p, &v)| p == j || endo[v] == image[p]);
            if matches {
                image[j]
            } else if xs != x0 {
                y0[j]
            } else {
                y1[j]
            }
        }
    })
}
