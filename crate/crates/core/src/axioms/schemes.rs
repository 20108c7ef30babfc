use std::collections::HashSet;

use super::{AxiomId, AxiomInstance};
use crate::budget::Meter;
use crate::checker::expand_affects;
use crate::combinatorics::{arrangements, subsets_by_size};
use crate::error::{Error, Result};
use crate::lang::{Formula, Inner};
use crate::model::{odometer, Context, Intervention, Signature};

struct Gen<'a> {
    sig: &'a Signature,
    id: AxiomId,
    meter: Meter,
    out: Vec<AxiomInstance>,
}

impl Gen<'_> {
    fn push(&mut self, formula: Formula, bindings: String) -> Result<()> {
        self.meter.tick(1)?;
        self.out.push(AxiomInstance {
            id: self.id.clone(),
            formula,
            bindings,
        });
        Ok(())
    }

    fn name(&self, x: usize) -> &str {
        &self.sig.endo(x).name
    }

    fn range(&self, x: usize) -> usize {
        self.sig.endo(x).range.len()
    }

    fn atom(&self, x: usize, u: &Context, v: usize) -> Inner {
        Inner::atom(self.name(x), u.clone(), self.sig.endo_value(x, v).clone())
    }

    fn contexts(&self) -> Vec<Context> {
        self.sig
            .contexts()
            .iter()
            .map(|c| self.sig.context_values(c))
            .collect()
    }

    /// Every intervention over a subset of `pool`, subsets by size, values
    /// lexicographically.
    fn interventions(&self, pool: &[usize]) -> Vec<Intervention> {
        let mut out = Vec::new();
        for subset in subsets_by_size(pool) {
            out.extend(self.settings(&subset));
        }
        out
    }

    /// Every assignment to exactly the variables `vars`.
    fn settings(&self, vars: &[usize]) -> Vec<Intervention> {
        let radices: Vec<usize> = vars.iter().map(|&x| self.range(x)).collect();
        odometer(&radices)
            .map(|vals| {
                let mut forced = vec![None; self.sig.num_endo()];
                for (&x, v) in vars.iter().zip(vals) {
                    forced[x] = Some(v);
                }
                Intervention::from_forced(self.sig, &forced)
            })
            .collect()
    }

    fn with(&self, iv: &Intervention, x: usize, v: usize) -> Intervention {
        let mut iv = iv.clone();
        iv.settings
            .push((self.name(x).to_string(), self.sig.endo_value(x, v).clone()));
        iv
    }

    fn all_vars(&self) -> Vec<usize> {
        (0..self.sig.num_endo()).collect()
    }

    fn without(&self, excluded: &[usize]) -> Vec<usize> {
        (0..self.sig.num_endo())
            .filter(|x| !excluded.contains(x))
            .collect()
    }

    /// Atoms and negated atoms at context `u`.
    fn literals(&self, u: &Context) -> Vec<Inner> {
        let mut out = Vec::new();
        for x in self.all_vars() {
            for v in 0..self.range(x) {
                out.push(self.atom(x, u, v));
                out.push(self.atom(x, u, v).not());
            }
        }
        out
    }

    fn all_atoms(&self) -> Vec<Inner> {
        let mut out = Vec::new();
        for u in self.contexts() {
            for x in self.all_vars() {
                for v in 0..self.range(x) {
                    out.push(self.atom(x, &u, v));
                }
            }
        }
        out
    }
}

fn iv_text(iv: &Intervention) -> String {
    format!("[{iv}]")
}

fn skeletons_inner(p: &Inner, q: &Inner) -> Vec<Inner> {
    vec![
        p.clone().implies(q.clone().implies(p.clone())),
        p.clone().and(q.clone()).implies(p.clone()),
        p.clone()
            .implies(q.clone())
            .implies(p.clone())
            .implies(p.clone()),
    ]
}

fn skeletons_unary_inner(p: &Inner) -> Vec<Inner> {
    vec![
        p.clone().or(p.clone().not()),
        p.clone().and(p.clone().not()).not(),
    ]
}

fn skeletons(p: &Formula, q: &Formula) -> Vec<Formula> {
    vec![
        p.clone().implies(q.clone().implies(p.clone())),
        p.clone().and(q.clone()).implies(p.clone()),
        p.clone()
            .implies(q.clone())
            .implies(p.clone())
            .implies(p.clone()),
    ]
}

fn skeletons_unary(p: &Formula) -> Vec<Formula> {
    vec![
        p.clone().or(p.clone().not()),
        p.clone().and(p.clone().not()).not(),
    ]
}

/// Whether `f` is true under every assignment of truth values to its
/// distinct basic subformulas.
pub fn is_propositional_tautology(f: &Formula) -> bool {
    let mut basics: Vec<&crate::lang::Basic> = Vec::new();
    f.for_each_basic(&mut |b| {
        if !basics.contains(&b) {
            basics.push(b);
        }
    });
    fn ev(f: &Formula, basics: &[&crate::lang::Basic], bits: u64) -> bool {
        match f {
            Formula::Basic(b) => {
                let i = basics.iter().position(|x| *x == b).expect("collected");
                bits >> i & 1 == 1
            }
            Formula::Not(a) => !ev(a, basics, bits),
            Formula::And(a, b) => ev(a, basics, bits) && ev(b, basics, bits),
            Formula::Or(a, b) => ev(a, basics, bits) || ev(b, basics, bits),
            Formula::Implies(a, b) => !ev(a, basics, bits) || ev(b, basics, bits),
            Formula::Iff(a, b) => ev(a, basics, bits) == ev(b, basics, bits),
        }
    }
    assert!(basics.len() < 64, "too many distinct basic formulas");
    (0..1u64 << basics.len()).all(|bits| ev(f, &basics, bits))
}

fn chain_formula(g: &Gen<'_>, chain: &[usize], budget: u64) -> Result<Formula> {
    let aff = |a: usize, b: usize| expand_affects(g.sig, g.name(a), g.name(b), budget);
    let links = chain
        .windows(2)
        .map(|w| aff(w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;
    let premise = Formula::and_all(links).expect("k >= 1");
    let back = aff(*chain.last().expect("nonempty"), chain[0])?;
    Ok(premise.implies(back.not()))
}

fn order_indices(sig: &Signature, order: &[String]) -> Result<Vec<usize>> {
    let idx = order
        .iter()
        .map(|n| {
            sig.endo_index(n)
                .ok_or_else(|| Error::UnknownVariable(n.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let distinct: HashSet<_> = idx.iter().collect();
    if idx.len() != sig.num_endo() || distinct.len() != idx.len() {
        return Err(Error::Unsupported(
            "Ord needs a total order listing every endogenous variable once".into(),
        ));
    }
    Ok(idx)
}

/// Every ground instance of `id` over `sig`, in a deterministic order.
pub fn generate_instances(
    id: &AxiomId,
    sig: &Signature,
    budget: u64,
) -> Result<Vec<AxiomInstance>> {
    let mut g = Gen {
        sig,
        id: id.clone(),
        meter: Meter::new("axiom instances", budget),
        out: Vec::new(),
    };
    let ctxs = g.contexts();
    let all = g.all_vars();
    use AxiomId::*;
    match id {
        C0 | D0 => {
            // Substitution instances of fixed tautology skeletons over
            // basic formulas.
            let empty = Intervention::empty();
            let mut ps = Vec::new();
            for iv in g.interventions(&all) {
                for a in g.all_atoms() {
                    ps.push(Formula::boxed(iv.clone(), a.clone()));
                    if *id == D0 {
                        ps.push(Formula::diamond(iv.clone(), a));
                    }
                }
            }
            let qs: Vec<Formula> = g
                .all_atoms()
                .into_iter()
                .map(|a| Formula::boxed(empty.clone(), a))
                .collect();
            for p in &ps {
                for t in skeletons_unary(p) {
                    g.push(t, format!("p={p}"))?;
                }
                for q in &qs {
                    for t in skeletons(p, q) {
                        g.push(t, format!("p={p}, q={q}"))?;
                    }
                }
            }
        }
        C1 | D1 => {
            for x in all.clone() {
                for iv in g.interventions(&all) {
                    for u in &ctxs {
                        for a in 0..g.range(x) {
                            for b in (0..g.range(x)).filter(|&b| b != a) {
                                let f = if *id == C1 {
                                    Formula::boxed(iv.clone(), g.atom(x, u, a))
                                        .implies(Formula::boxed(iv.clone(), g.atom(x, u, b)).not())
                                } else {
                                    Formula::boxed(
                                        iv.clone(),
                                        g.atom(x, u, a).implies(g.atom(x, u, b).not()),
                                    )
                                };
                                g.push(f, format!("X={}, Y={}, u=({u})", g.name(x), iv_text(&iv)))?;
                            }
                        }
                    }
                }
            }
        }
        C2 | D2 | D10 => {
            for x in all.clone() {
                for iv in g.interventions(&all) {
                    for u in &ctxs {
                        let f = match id {
                            C2 => Formula::or_all(
                                (0..g.range(x))
                                    .map(|v| Formula::boxed(iv.clone(), g.atom(x, u, v))),
                            )
                            .expect("nonempty range"),
                            D2 => Formula::boxed(
                                iv.clone(),
                                (0..g.range(x))
                                    .map(|v| g.atom(x, u, v))
                                    .reduce(Inner::or)
                                    .expect("nonempty range"),
                            ),
                            _ => unique_solution(&g, x, &iv, u),
                        };
                        g.push(f, format!("X={}, Y={}, u=({u})", g.name(x), iv_text(&iv)))?;
                    }
                }
            }
        }
        D9 => {
            for x in all.clone() {
                for iv in g.settings(&g.without(&[x])) {
                    for u in &ctxs {
                        let f = unique_solution(&g, x, &iv, u);
                        g.push(f, format!("X={}, Y={}, u=({u})", g.name(x), iv_text(&iv)))?;
                    }
                }
            }
        }
        C3 => {
            for iv in g.interventions(&all) {
                let set: Vec<usize> = iv.targets().filter_map(|n| sig.endo_index(n)).collect();
                for w in g.without(&set) {
                    for y in all.clone() {
                        for u in &ctxs {
                            for wv in 0..g.range(w) {
                                for yv in 0..g.range(y) {
                                    let f = Formula::boxed(iv.clone(), g.atom(w, u, wv))
                                        .and(Formula::boxed(iv.clone(), g.atom(y, u, yv)))
                                        .implies(Formula::boxed(
                                            g.with(&iv, w, wv),
                                            g.atom(y, u, yv),
                                        ));
                                    g.push(
                                        f,
                                        format!(
                                            "X={}, W={}, Y={}, u=({u})",
                                            iv_text(&iv),
                                            g.name(w),
                                            g.name(y)
                                        ),
                                    )?;
                                }
                            }
                        }
                    }
                }
            }
        }
        C4 | D4 => {
            for x in all.clone() {
                for rest in g.interventions(&g.without(&[x])) {
                    for v in 0..g.range(x) {
                        let mut iv = g.with(&Intervention::empty(), x, v);
                        iv.settings.extend(rest.settings.iter().cloned());
                        for u in &ctxs {
                            g.push(
                                Formula::boxed(iv.clone(), g.atom(x, u, v)),
                                format!("X={}, W={}, u=({u})", g.name(x), iv_text(&rest)),
                            )?;
                        }
                    }
                }
            }
        }
        C5 | D5 => {
            for iv in g.interventions(&all) {
                let set: Vec<usize> = iv.targets().filter_map(|n| sig.endo_index(n)).collect();
                let free = g.without(&set);
                for &w in &free {
                    for &y in free.iter().filter(|&&y| y != w) {
                        let zs: Vec<usize> =
                            free.iter().copied().filter(|&z| z != w && z != y).collect();
                        for u in &ctxs {
                            for wv in 0..g.range(w) {
                                for yv in 0..g.range(y) {
                                    if *id == C5 {
                                        let f =
                                            Formula::boxed(g.with(&iv, w, wv), g.atom(y, u, yv))
                                                .and(Formula::boxed(
                                                    g.with(&iv, y, yv),
                                                    g.atom(w, u, wv),
                                                ))
                                                .implies(Formula::boxed(
                                                    iv.clone(),
                                                    g.atom(y, u, yv),
                                                ));
                                        g.push(
                                            f,
                                            format!(
                                                "X={}, W={}, Y={}, u=({u})",
                                                iv_text(&iv),
                                                g.name(w),
                                                g.name(y)
                                            ),
                                        )?;
                                        continue;
                                    }
                                    for zset in g.settings(&zs) {
                                        let zatoms: Vec<Inner> = zset
                                            .settings
                                            .iter()
                                            .map(|(n, v)| {
                                                Inner::atom(n.clone(), u.clone(), v.clone())
                                            })
                                            .collect();
                                        let conj = |first: Inner| {
                                            Inner::and_all(
                                                std::iter::once(first)
                                                    .chain(zatoms.iter().cloned()),
                                            )
                                            .expect("nonempty")
                                        };
                                        let lhs = Formula::diamond(
                                            g.with(&iv, y, yv),
                                            conj(g.atom(w, u, wv)),
                                        )
                                        .and(
                                            Formula::diamond(
                                                g.with(&iv, w, wv),
                                                conj(g.atom(y, u, yv)),
                                            ),
                                        );
                                        let rhs = Formula::diamond(
                                            iv.clone(),
                                            conj(g.atom(w, u, wv).and(g.atom(y, u, yv))),
                                        );
                                        g.push(
                                            lhs.implies(rhs),
                                            format!(
                                                "X={}, W={}, Y={}, Z={}, u=({u})",
                                                iv_text(&iv),
                                                g.name(w),
                                                g.name(y),
                                                iv_text(&zset)
                                            ),
                                        )?;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        C6(k) | D6(k) => {
            for chain in arrangements(sig.num_endo(), k + 1) {
                let left = g.meter.remaining();
                let f = chain_formula(&g, &chain, left)?;
                let names: Vec<&str> = chain.iter().map(|&x| g.name(x)).collect();
                g.push(f, format!("chain={}", names.join(",")))?;
            }
        }
        Ord(order) => {
            let order = order_indices(sig, order)?;
            for (i, &y) in order.iter().enumerate() {
                for &w in &order[i + 1..] {
                    for iv in g.interventions(&g.without(&[w])) {
                        for wv in 0..g.range(w) {
                            for u in &ctxs {
                                let f = Formula::and_all((0..g.range(y)).map(|yv| {
                                    Formula::boxed(g.with(&iv, w, wv), g.atom(y, u, yv))
                                        .iff(Formula::boxed(iv.clone(), g.atom(y, u, yv)))
                                }))
                                .expect("nonempty range");
                                g.push(
                                    f,
                                    format!(
                                        "Y={}, W={}, X={}, u=({u})",
                                        g.name(y),
                                        g.name(w),
                                        iv_text(&iv)
                                    ),
                                )?;
                            }
                        }
                    }
                }
            }
        }
        D3 => {
            let ys: Vec<Vec<usize>> = subsets_by_size(&all)
                .into_iter()
                .filter(|s| !s.is_empty())
                .collect();
            for iv in g.interventions(&all) {
                let set: Vec<usize> = iv.targets().filter_map(|n| sig.endo_index(n)).collect();
                for w in g.without(&set) {
                    for wv in 0..g.range(w) {
                        for yvars in &ys {
                            for yset in g.settings(yvars) {
                                for u in &ctxs {
                                    let yconj =
                                        Inner::and_all(yset.settings.iter().map(|(n, v)| {
                                            Inner::atom(n.clone(), u.clone(), v.clone())
                                        }))
                                        .expect("nonempty");
                                    let f = Formula::diamond(
                                        iv.clone(),
                                        g.atom(w, u, wv).and(yconj.clone()),
                                    )
                                    .implies(Formula::diamond(g.with(&iv, w, wv), yconj));
                                    g.push(
                                        f,
                                        format!(
                                            "X={}, W={}, Y={}, u=({u})",
                                            iv_text(&iv),
                                            g.name(w),
                                            iv_text(&yset)
                                        ),
                                    )?;
                                }
                            }
                        }
                    }
                }
            }
        }
        D7 => {
            // φ and ψ range over literals at one shared context.
            for iv in g.interventions(&all) {
                for u in &ctxs {
                    let lits = g.literals(u);
                    for phi in &lits {
                        for psi in &lits {
                            let f = Formula::boxed(iv.clone(), phi.clone())
                                .and(Formula::boxed(iv.clone(), phi.clone().implies(psi.clone())))
                                .implies(Formula::boxed(iv.clone(), psi.clone()));
                            g.push(f, format!("X={}, phi={phi}, psi={psi}", iv_text(&iv)))?;
                        }
                    }
                }
            }
        }
        D8 => {
            let atoms = g.all_atoms();
            for iv in g.interventions(&all) {
                for u in &ctxs {
                    g.push(
                        Formula::boxed(iv.clone(), Inner::True(u.clone())),
                        format!("X={}, phi=true({u})", iv_text(&iv)),
                    )?;
                }
                for p in &atoms {
                    for t in skeletons_unary_inner(p) {
                        g.push(
                            Formula::boxed(iv.clone(), t.clone()),
                            format!("X={}, phi={t}", iv_text(&iv)),
                        )?;
                    }
                    for q in &atoms {
                        for t in skeletons_inner(p, q) {
                            g.push(
                                Formula::boxed(iv.clone(), t.clone()),
                                format!("X={}, phi={t}", iv_text(&iv)),
                            )?;
                        }
                    }
                }
            }
        }
        D11 => {
            for iv in g.interventions(&all) {
                for chosen in subsets_by_size(&ctxs).into_iter().filter(|s| !s.is_empty()) {
                    let families: Vec<Vec<Inner>> = chosen.iter().map(|u| g.literals(u)).collect();
                    let radices: Vec<usize> = families.iter().map(Vec::len).collect();
                    for pick in odometer(&radices) {
                        let phis: Vec<Inner> = pick
                            .iter()
                            .zip(&families)
                            .map(|(&i, fam)| fam[i].clone())
                            .collect();
                        let lhs = Formula::diamond(
                            iv.clone(),
                            Inner::and_all(phis.clone()).expect("nonempty"),
                        );
                        let rhs = Formula::and_all(
                            phis.iter().map(|p| Formula::diamond(iv.clone(), p.clone())),
                        )
                        .expect("nonempty");
                        let text: Vec<String> = phis.iter().map(|p| p.to_string()).collect();
                        g.push(
                            lhs.iff(rhs),
                            format!("Y={}, phis={}", iv_text(&iv), text.join("; ")),
                        )?;
                    }
                }
            }
        }
    }
    Ok(g.out)
}

/// `<Y⃗←y⃗>true(u) & ([Y⃗←y⃗](X(u)=x1) | ...)`.
fn unique_solution(g: &Gen<'_>, x: usize, iv: &Intervention, u: &Context) -> Formula {
    let some = Formula::diamond(iv.clone(), Inner::True(u.clone()));
    let determined =
        Formula::or_all((0..g.range(x)).map(|v| Formula::boxed(iv.clone(), g.atom(x, u, v))))
            .expect("nonempty range");
    some.and(determined)
}
