//! Exact search for recursive models through guessed per-pair solutions.
//!
//! Variables are placed one at a time; the placement order is `≺`. When `X`
//! is placed, the pairs of one context that agree on every earlier variable
//! must give a non-intervened `X` the same value, since `F_X` sees only the
//! context and its predecessors. That is exactly the compatibility
//! condition, so any complete placement is realized by a recursive model.

use std::collections::{HashMap, HashSet};

use crate::budget::Meter;
use crate::checker::{CBasic, Compiled, INode, Node};
use crate::error::Result;
use crate::model::Signature;

/// A successful placement: the order and one solution vector per pair.
pub(crate) struct Placement {
    pub order: Vec<usize>,
    pub solutions: Vec<Vec<usize>>,
}

type Partial = Vec<Vec<Option<usize>>>;

fn and3(a: Option<bool>, b: impl FnOnce() -> Option<bool>) -> Option<bool> {
    match a {
        Some(false) => Some(false),
        Some(true) => b(),
        None => match b() {
            Some(false) => Some(false),
            _ => None,
        },
    }
}

fn not3(a: Option<bool>) -> Option<bool> {
    a.map(|b| !b)
}

fn or3(a: Option<bool>, b: impl FnOnce() -> Option<bool>) -> Option<bool> {
    not3(and3(not3(a), || not3(b())))
}

fn iff3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    Some(a? == b?)
}

/// Kleene evaluation of an inner formula; each pair has one solution.
fn inner3(n: &INode, b: &CBasic, vals: &Partial) -> Option<bool> {
    match n {
        INode::Atom { slot, var, val } => vals[b.slots[*slot]][*var].map(|v| v == *val),
        INode::Const(c) => Some(*c),
        INode::Not(a) => not3(inner3(a, b, vals)),
        INode::And(x, y) => and3(inner3(x, b, vals), || inner3(y, b, vals)),
        INode::Or(x, y) => or3(inner3(x, b, vals), || inner3(y, b, vals)),
        INode::Implies(x, y) => or3(not3(inner3(x, b, vals)), || inner3(y, b, vals)),
        INode::Iff(x, y) => iff3(inner3(x, b, vals), inner3(y, b, vals)),
    }
}

/// With exactly one solution per pair, Box and Diamond coincide.
fn node3(n: &Node, basics: &[CBasic], vals: &Partial) -> Option<bool> {
    match n {
        Node::Basic(i) => inner3(&basics[*i].inner, &basics[*i], vals),
        Node::Not(a) => not3(node3(a, basics, vals)),
        Node::And(x, y) => and3(node3(x, basics, vals), || node3(y, basics, vals)),
        Node::Or(x, y) => or3(node3(x, basics, vals), || node3(y, basics, vals)),
        Node::Implies(x, y) => or3(not3(node3(x, basics, vals)), || node3(y, basics, vals)),
        Node::Iff(x, y) => iff3(node3(x, basics, vals), node3(y, basics, vals)),
    }
}

fn collect_refs(n: &INode, b: &CBasic, out: &mut Vec<(usize, usize)>) {
    match n {
        INode::Atom { slot, var, .. } => out.push((b.slots[*slot], *var)),
        INode::Const(_) => {}
        INode::Not(a) => collect_refs(a, b, out),
        INode::And(x, y) | INode::Or(x, y) | INode::Implies(x, y) | INode::Iff(x, y) => {
            collect_refs(x, b, out);
            collect_refs(y, b, out);
        }
    }
}

/// Labels classes by first occurrence so equal partitions compare equal.
fn canonical(labels: impl IntoIterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    labels
        .into_iter()
        .map(|key| {
            let next = seen.len();
            *seen.entry(key).or_insert(next)
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Key {
    placed: Vec<bool>,
    classes: Vec<usize>,
    referenced: Vec<Option<usize>>,
}

struct Search<'a> {
    sig: &'a Signature,
    compiled: &'a Compiled,
    forced: Vec<Vec<Option<usize>>>,
    refs: Vec<(usize, usize)>,
    referenced: Vec<Vec<bool>>,
    /// Whether some pair intervenes on the variable.
    splits: Vec<bool>,
    meter: Meter,
    failed: HashSet<Key>,
    vals: Partial,
    placed: Vec<bool>,
    order: Vec<usize>,
}

impl Search<'_> {
    fn verdict(&self) -> Option<bool> {
        node3(&self.compiled.root, &self.compiled.basics, &self.vals)
    }

    /// Tries to place every remaining variable, given the current partition
    /// of pairs into classes that agree on all placed variables.
    fn extend(&mut self, classes: &[usize]) -> Result<bool> {
        if self.order.len() == self.sig.num_endo() {
            return Ok(self.verdict() == Some(true));
        }
        let key = Key {
            placed: self.placed.clone(),
            classes: classes.to_vec(),
            referenced: self.refs.iter().map(|&(p, v)| self.vals[p][v]).collect(),
        };
        if self.failed.contains(&key) || self.doomed(classes) {
            return Ok(false);
        }
        let mut candidates: Vec<(usize, Vec<Vec<usize>>)> = (0..self.sig.num_endo())
            .filter(|&x| !self.placed[x])
            .map(|x| (x, self.groups(x, classes)))
            .collect();
        // A variable whose free pairs already lie in distinct classes is
        // unconstrained now, and placing it only refines the classes seen by
        // later variables: if any completion exists, one places it here.
        if let Some(i) = candidates
            .iter()
            .position(|(_, g)| g.iter().all(|g| g.len() == 1))
        {
            candidates.swap(0, i);
            candidates.truncate(1);
        } else if candidates.iter().any(|&(x, _)| self.splits[x]) {
            // A variable no pair intervenes on never splits a class (free
            // pairs of one class share its value), so it can wait until
            // every variable that can split has been placed.
            candidates.retain(|&(x, _)| self.splits[x]);
        } else {
            candidates.truncate(1);
        }
        for (x, groups) in candidates {
            for (p, forced) in self.forced.iter().enumerate() {
                if let Some(v) = forced[x] {
                    self.vals[p][x] = Some(v);
                }
            }
            self.placed[x] = true;
            self.order.push(x);
            if self.assign(x, &groups, 0, classes)? {
                return Ok(true);
            }
            self.order.pop();
            self.placed[x] = false;
            for row in &mut self.vals {
                row[x] = None;
            }
        }
        self.failed.insert(key);
        Ok(false)
    }

    /// Free pairs for `x` grouped by class, in first-occurrence order.
    fn groups(&self, x: usize, classes: &[usize]) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        // Labels are canonical, so they index a vector.
        let mut group_of: Vec<usize> = vec![usize::MAX; classes.len()];
        for (p, forced) in self.forced.iter().enumerate() {
            if forced[x].is_none() {
                let c = classes[p];
                if group_of[c] == usize::MAX {
                    group_of[c] = groups.len();
                    groups.push(Vec::new());
                }
                groups[group_of[c]].push(p);
            }
        }
        groups
    }

    /// Values worth trying for one group. When no atom reads `x` in the
    /// group, its value matters only for how it splits the class; a value
    /// no forced pair of the class takes gives the finest split.
    fn values_for(&self, x: usize, group: &[usize], classes: &[usize]) -> Vec<usize> {
        let n = self.sig.endo(x).range.len();
        if group.iter().any(|&p| self.referenced[p][x]) {
            return (0..n).collect();
        }
        let class = classes[group[0]];
        let mut taken = vec![false; n];
        for (p, forced) in self.forced.iter().enumerate() {
            if classes[p] == class {
                if let Some(v) = forced[x] {
                    taken[v] = true;
                }
            }
        }
        match taken.iter().position(|t| !t) {
            Some(v) => vec![v],
            None => (0..n).collect(),
        }
    }

    /// Splits every settled class into singletons. A class is settled when
    /// no two of its pairs are read by the formula at one unplaced variable
    /// free in both: each later group then holds at most one read entry, so
    /// the class can never force two read entries apart, exactly as if its
    /// pairs were already separated. [`repair`] restores real consistency.
    fn settle(&self, classes: &[usize]) -> Vec<usize> {
        let n = self.sig.num_endo();
        let mut readers = vec![0u8; classes.len() * n];
        let mut unsettled = vec![false; classes.len()];
        for (p, &c) in classes.iter().enumerate() {
            for y in 0..n {
                if !self.placed[y] && self.referenced[p][y] && self.forced[p][y].is_none() {
                    let slot = &mut readers[c * n + y];
                    *slot = slot.saturating_add(1);
                    unsettled[c] |= *slot > 1;
                }
            }
        }
        canonical(
            classes
                .iter()
                .enumerate()
                .map(|(p, &c)| (c, if unsettled[c] { 0 } else { p + 1 })),
        )
    }

    /// Looks ahead for two pairs that can never be separated yet must
    /// disagree. Pairs of one class stay together unless a later variable
    /// intervened on in one of them takes different values in the two; if
    /// none can, they share every later free variable, so read entries the
    /// formula forces to different values there rule out every completion.
    fn doomed(&mut self, classes: &[usize]) -> bool {
        let n = self.sig.num_endo();
        let separators: Vec<usize> = (0..n)
            .filter(|&z| !self.placed[z] && self.splits[z])
            .collect();
        let mut implied: HashMap<(usize, usize), Option<usize>> = HashMap::new();
        for p in 0..classes.len() {
            for q in p + 1..classes.len() {
                if classes[p] != classes[q] {
                    continue;
                }
                let separable =
                    separators
                        .iter()
                        .any(|&z| match (self.forced[p][z], self.forced[q][z]) {
                            (None, None) => false,
                            (Some(a), Some(b)) => a != b,
                            _ => true,
                        });
                if separable {
                    continue;
                }
                for y in 0..n {
                    let shared = !self.placed[y]
                        && self.forced[p][y].is_none()
                        && self.forced[q][y].is_none()
                        && self.referenced[p][y]
                        && self.referenced[q][y];
                    if !shared {
                        continue;
                    }
                    let a = *implied
                        .entry((p, y))
                        .or_insert_with(|| self.only_value(p, y));
                    let b = *implied
                        .entry((q, y))
                        .or_insert_with(|| self.only_value(q, y));
                    if matches!((a, b), (Some(a), Some(b)) if a != b) {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// The single value of entry `(p, y)` the formula still allows, if only
    /// one is left.
    fn only_value(&mut self, p: usize, y: usize) -> Option<usize> {
        let mut allowed = None;
        for v in 0..self.sig.endo(y).range.len() {
            self.vals[p][y] = Some(v);
            let ok = self.verdict() != Some(false);
            self.vals[p][y] = None;
            if ok {
                if allowed.is_some() {
                    return None;
                }
                allowed = Some(v);
            }
        }
        allowed
    }

    fn assign(
        &mut self,
        x: usize,
        groups: &[Vec<usize>],
        g: usize,
        classes: &[usize],
    ) -> Result<bool> {
        if self.verdict() == Some(false) {
            return Ok(false);
        }
        if g == groups.len() {
            let refined = canonical(
                classes
                    .iter()
                    .enumerate()
                    .map(|(p, &c)| (c, self.vals[p][x].expect("placed"))),
            );
            let refined = self.settle(&refined);
            return self.extend(&refined);
        }
        for v in self.values_for(x, &groups[g], classes) {
            self.meter.tick(1)?;
            for &p in &groups[g] {
                self.vals[p][x] = Some(v);
            }
            if self.assign(x, groups, g + 1, classes)? {
                return Ok(true);
            }
        }
        for &p in &groups[g] {
            self.vals[p][x] = None;
        }
        Ok(false)
    }
}

/// Makes entries no atom reads agree with their real group: along the
/// order, the free pairs of one context agreeing on every earlier variable
/// take the value of the group's read entry (or of its first pair).
/// Settled classes guarantee at most one read entry per group.
fn repair(
    compiled: &Compiled,
    referenced: &[Vec<bool>],
    order: &[usize],
    solutions: &mut [Vec<usize>],
) {
    let pairs = compiled.pairs();
    for (i, &x) in order.iter().enumerate() {
        let mut groups: HashMap<(usize, Vec<usize>), Vec<usize>> = HashMap::new();
        for (p, pair) in pairs.iter().enumerate() {
            if pair.forced[x].is_none() {
                let pre = order[..i].iter().map(|&y| solutions[p][y]).collect();
                groups.entry((pair.ctx[0], pre)).or_default().push(p);
            }
        }
        for members in groups.values() {
            let leader = members
                .iter()
                .copied()
                .find(|&p| referenced[p][x])
                .unwrap_or(members[0]);
            let v = solutions[leader][x];
            for &p in members {
                solutions[p][x] = v;
            }
        }
    }
}

/// Finds an order and per-pair solutions satisfying `compiled` in some
/// recursive model over `sig`, or `None` when there is none.
pub(crate) fn search(
    compiled: &Compiled,
    sig: &Signature,
    budget: u64,
) -> Result<Option<Placement>> {
    let pairs = compiled.pairs();
    let mut refs = Vec::new();
    for b in &compiled.basics {
        collect_refs(&b.inner, b, &mut refs);
    }
    refs.sort_unstable();
    refs.dedup();
    let mut referenced = vec![vec![false; sig.num_endo()]; pairs.len()];
    for &(p, x) in &refs {
        referenced[p][x] = true;
    }
    let mut s = Search {
        sig,
        compiled,
        forced: pairs.iter().map(|p| p.forced.clone()).collect(),
        refs,
        referenced,
        splits: (0..sig.num_endo())
            .map(|x| pairs.iter().any(|p| p.forced[x].is_some()))
            .collect(),
        meter: Meter::new("recursive satisfiability search", budget),
        failed: HashSet::new(),
        vals: vec![vec![None; sig.num_endo()]; pairs.len()],
        placed: vec![false; sig.num_endo()],
        order: Vec::new(),
    };
    let classes = s.settle(&canonical(pairs.iter().map(|p| (p.ctx[0], 0))));
    if !s.extend(&classes)? {
        return Ok(None);
    }
    let mut solutions: Vec<Vec<usize>> = s
        .vals
        .into_iter()
        .map(|row| row.into_iter().map(|v| v.expect("complete")).collect())
        .collect();
    repair(compiled, &s.referenced, &s.order, &mut solutions);
    Ok(Some(Placement {
        order: s.order,
        solutions,
    }))
}
