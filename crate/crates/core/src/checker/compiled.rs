use crate::error::{Error, Result};
use crate::lang::{validate, Formula, Inner, Mode};
use crate::model::{odometer, CausalModel, Signature};

/// Solution sets of one model, keyed by pair.
pub type SolutionCache = std::collections::HashMap<PairKey, Vec<Vec<usize>>>;

/// An (intervention, context) pair in index form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairKey {
    pub forced: Vec<Option<usize>>,
    pub ctx: Vec<usize>,
}

#[derive(Clone, Debug)]
pub(crate) enum INode {
    /// Atom `var = val` read from the solution chosen for context `slot`.
    Atom {
        slot: usize,
        var: usize,
        val: usize,
    },
    Const(bool),
    Not(Box<INode>),
    And(Box<INode>, Box<INode>),
    Or(Box<INode>, Box<INode>),
    Implies(Box<INode>, Box<INode>),
    Iff(Box<INode>, Box<INode>),
}

#[derive(Clone, Debug)]
pub(crate) struct CBasic {
    pub diamond: bool,
    /// Pair index for each distinct context of the inner formula.
    pub slots: Vec<usize>,
    pub inner: INode,
}

#[derive(Clone, Debug)]
pub(crate) enum Node {
    Basic(usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
}

/// A formula resolved against a signature, for repeated evaluation.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub(crate) pairs: Vec<PairKey>,
    pub(crate) basics: Vec<CBasic>,
    pub(crate) root: Node,
}

impl Compiled {
    pub fn new(f: &Formula, sig: &Signature) -> Result<Self> {
        validate(f, sig).map_err(|e| Error::Validation(e.to_string()))?;
        let mut c = Compiled {
            pairs: Vec::new(),
            basics: Vec::new(),
            root: Node::Basic(0),
        };
        c.root = c.node(f, sig)?;
        Ok(c)
    }

    /// The distinct (intervention, context) pairs, in first-occurrence order.
    pub fn pairs(&self) -> &[PairKey] {
        &self.pairs
    }

    fn node(&mut self, f: &Formula, sig: &Signature) -> Result<Node> {
        let b = |a: &Formula, s: &mut Self| s.node(a, sig).map(Box::new);
        Ok(match f {
            Formula::Basic(basic) => {
                let forced = basic.iv.resolve(sig)?;
                let contexts = basic.inner.contexts();
                let mut slots = Vec::with_capacity(contexts.len());
                for ctx in &contexts {
                    let key = PairKey {
                        forced: forced.clone(),
                        ctx: ctx.resolve(sig)?,
                    };
                    let idx = match self.pairs.iter().position(|p| p == &key) {
                        Some(i) => i,
                        None => {
                            self.pairs.push(key);
                            self.pairs.len() - 1
                        }
                    };
                    slots.push(idx);
                }
                let inner = inner_node(&basic.inner, sig, &contexts)?;
                self.basics.push(CBasic {
                    diamond: basic.mode == Mode::Diamond,
                    slots,
                    inner,
                });
                Node::Basic(self.basics.len() - 1)
            }
            Formula::Not(a) => Node::Not(b(a, self)?),
            Formula::And(x, y) => Node::And(b(x, self)?, b(y, self)?),
            Formula::Or(x, y) => Node::Or(b(x, self)?, b(y, self)?),
            Formula::Implies(x, y) => Node::Implies(b(x, self)?, b(y, self)?),
            Formula::Iff(x, y) => Node::Iff(b(x, self)?, b(y, self)?),
        })
    }

    /// Evaluates with solution sets supplied per pair.
    pub fn eval_with<'a>(&self, sols: impl Fn(usize) -> &'a [Vec<usize>]) -> bool {
        let truth: Vec<bool> = self
            .basics
            .iter()
            .map(|b| {
                let sets: Vec<&[Vec<usize>]> = b.slots.iter().map(|&p| sols(p)).collect();
                eval_basic(b, &sets)
            })
            .collect();
        eval_node(&self.root, &truth)
    }

    /// Like [`Compiled::eval`], sharing solution sets across formulas
    /// evaluated on the same model.
    pub fn eval_cached(&self, model: &CausalModel, cache: &mut SolutionCache) -> bool {
        for p in &self.pairs {
            if !cache.contains_key(p) {
                let sols = model.solve_indices(&p.forced, &p.ctx);
                cache.insert(p.clone(), sols);
            }
        }
        self.eval_with(|i| &cache[&self.pairs[i]])
    }

    pub fn eval(&self, model: &CausalModel) -> bool {
        let sols: Vec<Vec<Vec<usize>>> = self
            .pairs
            .iter()
            .map(|p| model.solve_indices(&p.forced, &p.ctx))
            .collect();
        self.eval_with(|p| &sols[p])
    }
}

fn inner_node(f: &Inner, sig: &Signature, contexts: &[crate::model::Context]) -> Result<INode> {
    let r = |a: &Inner| inner_node(a, sig, contexts).map(Box::new);
    Ok(match f {
        Inner::Atom(a) => {
            let var = sig
                .endo_index(&a.var)
                .ok_or_else(|| Error::UnknownVariable(a.var.clone()))?;
            let val = sig
                .endo(var)
                .index_of(&a.value)
                .ok_or_else(|| Error::OutOfRangeValue {
                    variable: a.var.clone(),
                    value: a.value.to_string(),
                })?;
            let slot = contexts
                .iter()
                .position(|c| c == &a.ctx)
                .expect("context collected");
            INode::Atom { slot, var, val }
        }
        Inner::True(_) => INode::Const(true),
        Inner::False(_) => INode::Const(false),
        Inner::Not(a) => INode::Not(r(a)?),
        Inner::And(a, b) => INode::And(r(a)?, r(b)?),
        Inner::Or(a, b) => INode::Or(r(a)?, r(b)?),
        Inner::Implies(a, b) => INode::Implies(r(a)?, r(b)?),
        Inner::Iff(a, b) => INode::Iff(r(a)?, r(b)?),
    })
}

pub(crate) fn eval_inner(n: &INode, choice: &[&[usize]]) -> bool {
    match n {
        INode::Atom { slot, var, val } => choice[*slot][*var] == *val,
        INode::Const(b) => *b,
        INode::Not(a) => !eval_inner(a, choice),
        INode::And(a, b) => eval_inner(a, choice) && eval_inner(b, choice),
        INode::Or(a, b) => eval_inner(a, choice) || eval_inner(b, choice),
        INode::Implies(a, b) => !eval_inner(a, choice) || eval_inner(b, choice),
        INode::Iff(a, b) => eval_inner(a, choice) == eval_inner(b, choice),
    }
}

/// Box: φ under every global choice (vacuously true when some mentioned
/// context has no solution). Diamond: the dual.
pub(crate) fn eval_basic(b: &CBasic, sets: &[&[Vec<usize>]]) -> bool {
    if sets.iter().any(|s| s.is_empty()) {
        return !b.diamond;
    }
    let radices: Vec<usize> = sets.iter().map(|s| s.len()).collect();
    let mut choice: Vec<&[usize]> = Vec::with_capacity(sets.len());
    for digits in odometer(&radices) {
        choice.clear();
        choice.extend(digits.iter().zip(sets).map(|(&d, s)| s[d].as_slice()));
        let holds = eval_inner(&b.inner, &choice);
        if b.diamond && holds {
            return true;
        }
        if !b.diamond && !holds {
            return false;
        }
    }
    !b.diamond
}

pub(crate) fn eval_node(n: &Node, truth: &[bool]) -> bool {
    match n {
        Node::Basic(i) => truth[*i],
        Node::Not(a) => !eval_node(a, truth),
        Node::And(a, b) => eval_node(a, truth) && eval_node(b, truth),
        Node::Or(a, b) => eval_node(a, truth) || eval_node(b, truth),
        Node::Implies(a, b) => !eval_node(a, truth) || eval_node(b, truth),
        Node::Iff(a, b) => eval_node(a, truth) == eval_node(b, truth),
    }
}

/// `T ⊨ f`.
pub fn eval(model: &CausalModel, f: &Formula) -> Result<bool> {
    Ok(Compiled::new(f, model.signature())?.eval(model))
}
