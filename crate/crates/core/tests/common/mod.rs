//! Independent oracles and seeded generators shared by the integration tests.
#![allow(dead_code)]

use causalog::checker::eval;
use causalog::decide::{CnfInstance, Prop};
use causalog::lang::{Formula, Inner};
use causalog::model::{
    enumerate_models, CausalModel, Context, Intervention, ModelClass, Signature,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Brute force: some model of `sig` in `class` satisfies `f`.
pub fn brute_sat(f: &Formula, sig: &Signature, class: ModelClass) -> bool {
    enumerate_models(sig.clone(), class, u64::MAX)
        .unwrap()
        .any(|m| eval(&m, f).unwrap())
}

/// Truth-table satisfiability over `n` propositions.
pub fn truth_table_sat(n: usize, f: impl Fn(&[bool]) -> bool) -> bool {
    (0..1u32 << n).any(|bits| {
        let a: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        f(&a)
    })
}

fn random_context(rng: &mut ChaCha8Rng, sig: &Signature) -> Context {
    let contexts = sig.contexts();
    sig.context_values(contexts.choose(rng).unwrap())
}

fn random_atom(rng: &mut ChaCha8Rng, sig: &Signature, ctx: &Context) -> Inner {
    let var = sig.endogenous().choose(rng).unwrap();
    Inner::atom(
        var.name.clone(),
        ctx.clone(),
        var.range.choose(rng).unwrap().clone(),
    )
}

/// A random inner formula of the given depth; leaves share one context with
/// probability 1/2, otherwise each picks its own.
pub fn random_inner(rng: &mut ChaCha8Rng, sig: &Signature, depth: usize) -> Inner {
    let shared = rng.gen_bool(0.5).then(|| random_context(rng, sig));
    inner_rec(rng, sig, depth, shared.as_ref())
}

fn inner_rec(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    depth: usize,
    shared: Option<&Context>,
) -> Inner {
    let ctx_for =
        |rng: &mut ChaCha8Rng| shared.cloned().unwrap_or_else(|| random_context(rng, sig));
    if depth == 0 || rng.gen_bool(0.35) {
        let ctx = ctx_for(rng);
        return match rng.gen_range(0..12) {
            0 => Inner::True(ctx),
            1 => Inner::False(ctx),
            _ => random_atom(rng, sig, &ctx),
        };
    }
    let a = inner_rec(rng, sig, depth - 1, shared);
    match rng.gen_range(0..5) {
        0 => a.not(),
        op => {
            let b = inner_rec(rng, sig, depth - 1, shared);
            match op {
                1 => a.and(b),
                2 => a.or(b),
                3 => a.implies(b),
                _ => a.iff(b),
            }
        }
    }
}

pub fn random_intervention(rng: &mut ChaCha8Rng, sig: &Signature) -> Intervention {
    let mut settings = Vec::new();
    for v in sig.endogenous() {
        if rng.gen_bool(0.3) {
            settings.push((v.name.clone(), v.range.choose(rng).unwrap().clone()));
        }
    }
    Intervention::new(settings)
}

pub fn random_basic(rng: &mut ChaCha8Rng, sig: &Signature, inner_depth: usize) -> Formula {
    let iv = random_intervention(rng, sig);
    let inner = random_inner(rng, sig, inner_depth);
    if rng.gen_bool(0.3) {
        Formula::diamond(iv, inner)
    } else {
        Formula::boxed(iv, inner)
    }
}

/// Boolean combination (depth `depth`) of basic formulas whose inner parts
/// have depth at most 1.
pub fn random_formula(rng: &mut ChaCha8Rng, sig: &Signature, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return random_basic(rng, sig, 1);
    }
    let a = random_formula(rng, sig, depth - 1);
    match rng.gen_range(0..5) {
        0 => a.not(),
        op => {
            let b = random_formula(rng, sig, depth - 1);
            match op {
                1 => a.and(b),
                2 => a.or(b),
                3 => a.implies(b),
                _ => a.iff(b),
            }
        }
    }
}

pub fn random_cnf(rng: &mut ChaCha8Rng, max_props: usize, max_clauses: usize) -> CnfInstance {
    let props = rng.gen_range(1..=max_props);
    let clauses = (0..rng.gen_range(1..=max_clauses))
        .map(|_| {
            [0; 3].map(|_| {
                let p = rng.gen_range(1..=props as i32);
                if rng.gen_bool(0.5) {
                    -p
                } else {
                    p
                }
            })
        })
        .collect();
    CnfInstance::new(props, clauses).unwrap()
}

pub fn random_prop(rng: &mut ChaCha8Rng, props: usize, depth: usize) -> Prop {
    if depth == 0 || rng.gen_bool(0.25) {
        return Prop::Var(rng.gen_range(0..props));
    }
    match rng.gen_range(0..3) {
        0 => random_prop(rng, props, depth - 1).not(),
        1 => random_prop(rng, props, depth - 1).and(random_prop(rng, props, depth - 1)),
        _ => random_prop(rng, props, depth - 1).or(random_prop(rng, props, depth - 1)),
    }
}

/// For every context in `contexts` and every intervention on the variables
/// `kept` (each either free or set), the sorted distinct restrictions of the
/// solutions to `kept`. Two models with corresponding `kept`/`contexts`
/// lists preserve restricted solutions iff these vectors are equal.
pub fn restricted_solutions(
    model: &CausalModel,
    kept: &[usize],
    contexts: &[Vec<usize>],
) -> Vec<Vec<Vec<usize>>> {
    let sig = model.signature();
    let radices: Vec<usize> = kept.iter().map(|&x| sig.endo(x).range.len() + 1).collect();
    let mut settings: Vec<Vec<usize>> = vec![vec![]];
    for &r in &radices {
        settings = settings
            .into_iter()
            .flat_map(|s| (0..r).map(move |d| [s.clone(), vec![d]].concat()))
            .collect();
    }
    let mut out = Vec::new();
    for ctx in contexts {
        for setting in &settings {
            let mut forced = vec![None; sig.num_endo()];
            for (&x, &d) in kept.iter().zip(setting) {
                forced[x] = d.checked_sub(1);
            }
            let mut sols: Vec<Vec<usize>> = model
                .solve_indices(&forced, ctx)
                .into_iter()
                .map(|s| kept.iter().map(|&x| s[x]).collect())
                .collect();
            sols.sort();
            sols.dedup();
            out.push(sols);
        }
    }
    out
}
