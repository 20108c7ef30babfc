use std::collections::BTreeSet;
use std::sync::Arc;

use crate::budget;
use crate::error::{Error, Result};
use crate::lang::{validate, Formula, Inner};
use crate::model::{is_value_token, odometer, CausalModel, Context, Signature, Variable};

/// A signature cut down to what a formula mentions, together with the maps
/// needed to move formulas and models between the two signatures.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub original: Arc<Signature>,
    pub reduced: Arc<Signature>,
    /// Original endogenous index of each reduced variable, except `X*`.
    pub kept: Vec<usize>,
    /// Index of `X*` in the reduced signature, when it was added.
    pub star: Option<usize>,
    /// Original context (value indices) behind each value of `U*`.
    pub contexts: Vec<Vec<usize>>,
    /// The formula with every context replaced by its `U*` value.
    pub formula: Formula,
}

/// Endogenous variables the formula mentions, in declaration order.
/// `true(u)`/`false(u)` count as mentioning the first variable, which is what
/// they desugar to.
fn mentioned_vars(f: &Formula, sig: &Signature) -> Vec<usize> {
    let names = f.variables();
    let mut kept: Vec<usize> = (0..sig.num_endo())
        .filter(|&x| names.contains(&sig.endo(x).name))
        .collect();
    if (kept.is_empty() || f.has_constants()) && !kept.contains(&0) {
        kept.insert(0, 0);
    }
    kept
}

/// Mentioned contexts as value indices, sorted.
fn mentioned_contexts(f: &Formula, sig: &Signature) -> Result<Vec<Vec<usize>>> {
    let mut set = BTreeSet::new();
    for c in f.contexts() {
        set.insert(c.resolve(sig)?);
    }
    Ok(set.into_iter().collect())
}

/// Value tokens for tuples: the components joined with `.`, `_` for the empty
/// tuple, or `c0, c1, …` when that does not give distinct valid tokens.
fn tuple_tokens(tuples: &[Vec<&str>], fallback: &str) -> Vec<String> {
    let joined: Vec<String> = tuples
        .iter()
        .map(|t| {
            if t.is_empty() {
                "_".to_string()
            } else {
                t.join(".")
            }
        })
        .collect();
    let distinct = joined.iter().collect::<BTreeSet<_>>().len() == joined.len();
    if distinct && joined.iter().all(|t| is_value_token(t)) {
        joined
    } else {
        (0..tuples.len())
            .map(|i| format!("{fallback}{i}"))
            .collect()
    }
}

fn rewrite_inner(f: &Inner, map: &dyn Fn(&Context) -> Context) -> Inner {
    let r = |a: &Inner| Box::new(rewrite_inner(a, map));
    match f {
        Inner::Atom(a) => {
            let mut a = a.clone();
            a.ctx = map(&a.ctx);
            Inner::Atom(a)
        }
        Inner::True(c) => Inner::True(map(c)),
        Inner::False(c) => Inner::False(map(c)),
        Inner::Not(a) => Inner::Not(r(a)),
        Inner::And(a, b) => Inner::And(r(a), r(b)),
        Inner::Or(a, b) => Inner::Or(r(a), r(b)),
        Inner::Implies(a, b) => Inner::Implies(r(a), r(b)),
        Inner::Iff(a, b) => Inner::Iff(r(a), r(b)),
    }
}

/// Replaces every context of `f` by `map(context)`.
pub fn rewrite_contexts(f: &Formula, map: &dyn Fn(&Context) -> Context) -> Formula {
    let r = |a: &Formula| Box::new(rewrite_contexts(a, map));
    match f {
        Formula::Basic(b) => {
            let mut b = b.clone();
            b.inner = rewrite_inner(&b.inner, map);
            Formula::Basic(b)
        }
        Formula::Not(a) => Formula::Not(r(a)),
        Formula::And(a, b) => Formula::And(r(a), r(b)),
        Formula::Or(a, b) => Formula::Or(r(a), r(b)),
        Formula::Implies(a, b) => Formula::Implies(r(a), r(b)),
        Formula::Iff(a, b) => Formula::Iff(r(a), r(b)),
    }
}

/// `||S||` for the endogenous variables `vars`.
fn norm(sig: &Signature, vars: &[usize]) -> u128 {
    budget::product(vars.iter().map(|&x| sig.endo(x).range.len() as u128))
}

/// Whether `||S|| > ||S_φ||² + ||S_φ||`, the condition under which the
/// general-class reduction adds `X*`.
pub fn finite1a_guard(f: &Formula, sig: &Signature) -> Result<bool> {
    validate(f, sig)?;
    let n = norm(sig, &mentioned_vars(f, sig));
    Ok(sig.size() > n.saturating_mul(n).saturating_add(n))
}

impl Reduction {
    /// `S_φ = ({U*}, V_φ)`, where `R(U*)` holds the contexts `f` mentions.
    pub fn finite1(f: &Formula, sig: &Signature) -> Result<Reduction> {
        validate(f, sig)?;
        let kept = mentioned_vars(f, sig);
        Reduction::build(f, sig, kept, false)
    }

    /// `S_φ⁺`: `S_φ` plus `X*` ranging over tuples of `V_φ` when the size
    /// guard holds, otherwise `({U*}, V)`.
    pub fn finite1a(f: &Formula, sig: &Signature) -> Result<Reduction> {
        if finite1a_guard(f, sig)? {
            Reduction::build(f, sig, mentioned_vars(f, sig), true)
        } else {
            Reduction::build(f, sig, (0..sig.num_endo()).collect(), false)
        }
    }

    fn build(f: &Formula, sig: &Signature, kept: Vec<usize>, with_star: bool) -> Result<Reduction> {
        let contexts = mentioned_contexts(f, sig)?;
        let u_name = sig.fresh_name("U*");
        let ctx_tuples: Vec<Vec<&str>> = contexts
            .iter()
            .map(|c| {
                c.iter()
                    .zip(sig.exogenous())
                    .map(|(&i, v)| v.range[i].as_str())
                    .collect()
            })
            .collect();
        let u_tokens = tuple_tokens(&ctx_tuples, "c");
        let mut endo: Vec<Variable> = kept.iter().map(|&x| sig.endo(x).clone()).collect();
        let star = if with_star {
            let radices: Vec<usize> = kept.iter().map(|&x| sig.endo(x).range.len()).collect();
            budget::ensure("range of X*", norm(sig, &kept), 1 << 20)?;
            let tuples: Vec<Vec<&str>> = odometer(&radices)
                .map(|d| {
                    d.iter()
                        .zip(&kept)
                        .map(|(&i, &x)| sig.endo_value(x, i).as_str())
                        .collect()
                })
                .collect();
            let name = {
                let mut n = sig.fresh_name("X*");
                while n == u_name {
                    n.push('*');
                }
                n
            };
            endo.push(Variable::new(name, tuple_tokens(&tuples, "t")));
            Some(endo.len() - 1)
        } else {
            None
        };
        let reduced = Signature::new(vec![Variable::new(u_name, u_tokens.clone())], endo)?;
        let by_ctx: Vec<(Context, Context)> = contexts
            .iter()
            .zip(&u_tokens)
            .map(|(c, t)| (sig.context_values(c), Context::new(vec![t.as_str().into()])))
            .collect();
        let formula = rewrite_contexts(f, &|c| {
            by_ctx
                .iter()
                .find(|(orig, _)| orig == c)
                .map(|(_, new)| new.clone())
                .expect("every context was collected")
        });
        Ok(Reduction {
            original: Arc::new(sig.clone()),
            reduced: Arc::new(reduced),
            kept,
            star,
            contexts,
            formula,
        })
    }

    /// The `U*` value standing for an original context, if it is mentioned.
    pub fn reduced_context(&self, ctx: &[usize]) -> Option<usize> {
        self.contexts.iter().position(|c| c == ctx)
    }

    /// Reduced position of an original endogenous variable.
    pub fn reduced_var(&self, x: usize) -> Option<usize> {
        self.kept.iter().position(|&k| k == x)
    }

    /// Carries a model over a reduced signature without `X*` back to the
    /// original one: kept variables read through the context map (unmentioned
    /// contexts behave like the first mentioned one) and every other variable
    /// is the constant first value.
    pub fn lift(&self, model: &CausalModel) -> Result<CausalModel> {
        if self.star.is_some() {
            return Err(Error::ShapeMismatch(
                "models with X* are carried back with transform_finite1a".into(),
            ));
        }
        if model.signature() != &*self.reduced {
            return Err(Error::ShapeMismatch(
                "model is not over the reduced signature".into(),
            ));
        }
        // Nothing dropped and every context mentioned: the sorted context
        // map is the identity on row layouts, so the tables carry over.
        let identity = self.kept.iter().copied().eq(0..self.original.num_endo())
            && self.contexts.len() as u128 == self.original.num_contexts();
        if identity {
            return CausalModel::new(Arc::clone(&self.original), model.tables().to_vec());
        }
        let mut reduced_endo = vec![0usize; self.kept.len()];
        CausalModel::from_fn(Arc::clone(&self.original), |x, ctx, endo| {
            let Some(rx) = self.reduced_var(x) else {
                return 0;
            };
            let u = self.reduced_context(ctx).unwrap_or(0);
            for (slot, &k) in reduced_endo.iter_mut().zip(&self.kept) {
                *slot = endo[k];
            }
            model.output(rx, &[u], &reduced_endo)
        })
    }
}

/// `S_φ` for `f` over `sig`.
pub fn reduce_sig_finite1(f: &Formula, sig: &Signature) -> Result<Signature> {
    Ok((*Reduction::finite1(f, sig)?.reduced).clone())
}

/// `S_φ⁺` for `f` over `sig`.
pub fn reduce_sig_finite1a(f: &Formula, sig: &Signature) -> Result<Signature> {
    Ok((*Reduction::finite1a(f, sig)?.reduced).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{binary_signature, binary_signature_with_context};
    use crate::lang::parse;

    fn names(sig: &Signature) -> Vec<String> {
        sig.endogenous().iter().map(|v| v.name.clone()).collect()
    }

    #[test]
    fn finite1_keeps_mentioned_variables_and_contexts() {
        let sig = binary_signature(3);
        let f = parse("[X<-1](X()=0)", &sig).unwrap();
        let red = reduce_sig_finite1(&f, &sig).unwrap();
        assert_eq!(names(&red), ["X"]);
        assert_eq!(red.exogenous()[0].name, "U*");
        assert_eq!(red.exogenous()[0].range.len(), 1);

        let sig = binary_signature_with_context(2);
        let f = parse("[](X(0)=0) & [](X(1)=1 | Y(1)=0)", &sig).unwrap();
        let red = Reduction::finite1(&f, &sig).unwrap();
        assert_eq!(names(&red.reduced), ["X", "Y"]);
        assert_eq!(red.contexts, vec![vec![0], vec![1]]);
        let toks: Vec<&str> = red.reduced.exogenous()[0]
            .range
            .iter()
            .map(|v| v.as_str())
            .collect();
        assert_eq!(toks, ["0", "1"]);
        validate(&red.formula, &red.reduced).unwrap();
    }

    #[test]
    fn finite1a_case_split() {
        let f3 = binary_signature(3);
        let f = parse("<X<-0>(Y()=0) & <X<-0>(Y()=1)", &f3).unwrap();
        assert!(!finite1a_guard(&f, &f3).unwrap());
        assert_eq!(
            names(&reduce_sig_finite1a(&f, &f3).unwrap()),
            ["X", "Y", "Z"]
        );

        let s6 = binary_signature(6);
        assert!(finite1a_guard(&f, &s6).unwrap());
        let red = reduce_sig_finite1a(&f, &s6).unwrap();
        assert_eq!(names(&red), ["X", "Y", "X*"]);
        let star: Vec<&str> = red.endo(2).range.iter().map(|v| v.as_str()).collect();
        assert_eq!(star, ["0.0", "0.1", "1.0", "1.1"]);

        let all = parse("[](X()=0 & Y()=0 & Z()=0)", &f3).unwrap();
        assert!(!finite1a_guard(&all, &f3).unwrap());
    }

    #[test]
    fn constants_mention_the_first_variable() {
        let sig = binary_signature(3);
        let f = parse("[](true())", &sig).unwrap();
        assert_eq!(names(&reduce_sig_finite1(&f, &sig).unwrap()), ["X"]);
        let g = parse("[](Z()=0 | false())", &sig).unwrap();
        assert_eq!(names(&reduce_sig_finite1(&g, &sig).unwrap()), ["X", "Z"]);
    }

    #[test]
    fn lift_preserves_restricted_solutions() {
        let sig = binary_signature_with_context(3);
        let f = parse("[](X(1)=0 | Y(1)=1)", &sig).unwrap();
        let red = Reduction::finite1(&f, &sig).unwrap();
        // X copies U*'s only context; Y = ¬X.
        let small = CausalModel::from_fn(Arc::clone(&red.reduced), |x, _, endo| {
            if x == 0 {
                1
            } else {
                1 - endo[0]
            }
        })
        .unwrap();
        let big = red.lift(&small).unwrap();
        let sols = big.solve_indices(&[None, None, None], &[1]);
        assert_eq!(sols, vec![vec![1, 0, 0]]);
    }
}
