use std::fmt;

use crate::error::{Error, Result};
use crate::lang::{Formula, Inner};
use crate::model::{Intervention, Signature, Variable};

/// A 3-CNF formula. Literals are DIMACS-style: `i` is `p_i`, `-i` is `¬p_i`,
/// with propositions numbered `1..=num_props`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfInstance {
    pub num_props: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl CnfInstance {
    pub fn new(num_props: usize, clauses: Vec<[i32; 3]>) -> Result<CnfInstance> {
        if clauses.is_empty() {
            return Err(Error::MalformedCnf("no clauses".into()));
        }
        for c in &clauses {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > num_props {
                    return Err(Error::MalformedCnf(format!(
                        "literal {l} is outside 1..={num_props}"
                    )));
                }
            }
        }
        Ok(CnfInstance { num_props, clauses })
    }

    /// Truth under `assignment[i]` for `p_{i+1}`.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }
}

impl fmt::Display for CnfInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.num_props, self.clauses.len())?;
        for c in &self.clauses {
            writeln!(f, "{} {} {} 0", c[0], c[1], c[2])?;
        }
        Ok(())
    }
}

/// Reads DIMACS CNF: `c` comment lines, a `p cnf <props> <clauses>` header,
/// then clauses as integers terminated by `0` (they may span lines).
pub fn parse_dimacs(text: &str) -> Result<CnfInstance> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            if header.is_some() || parsed.is_none() {
                return Err(Error::MalformedCnf(format!("line {}: bad header", n + 1)));
            }
            header = parsed;
            continue;
        }
        if header.is_none() {
            return Err(Error::MalformedCnf(format!(
                "line {}: clause before header",
                n + 1
            )));
        }
        for tok in line.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| {
                Error::MalformedCnf(format!("line {}: `{tok}` is not a literal", n + 1))
            })?;
            if lit != 0 {
                current.push(lit);
                continue;
            }
            let clause: [i32; 3] = current.as_slice().try_into().map_err(|_| {
                Error::MalformedCnf(format!(
                    "line {}: clause has {} literals, expected 3",
                    n + 1,
                    current.len()
                ))
            })?;
            clauses.push(clause);
            current.clear();
        }
    }
    let (props, count) = header.ok_or_else(|| Error::MalformedCnf("missing header".into()))?;
    if !current.is_empty() {
        return Err(Error::MalformedCnf(
            "last clause is not terminated by 0".into(),
        ));
    }
    if clauses.len() != count {
        return Err(Error::MalformedCnf(format!(
            "header declares {count} clauses, found {}",
            clauses.len()
        )));
    }
    CnfInstance::new(props, clauses)
}

fn binary(name: String) -> Variable {
    Variable::new(name, ["0", "1"])
}

/// The encoding into conjunctions of boxes over `(∅, {X1..Xk, Y1..Ym})`:
/// `[](Y1()=1 & … & Ym()=1)` plus, per clause, the box that sets each of
/// its propositions to the value falsifying its literal and expects
/// `Yj()=0`. Repeated literals are merged; a clause with complementary
/// literals cannot be falsified and contributes no box.
pub fn cnf_to_lgp(cnf: &CnfInstance) -> Result<(Formula, Signature)> {
    let cnf = CnfInstance::new(cnf.num_props, cnf.clauses.clone())?;
    let m = cnf.clauses.len();
    let mut endo: Vec<Variable> = (1..=cnf.num_props)
        .map(|i| binary(format!("X{i}")))
        .collect();
    endo.extend((1..=m).map(|j| binary(format!("Y{j}"))));
    let sig = Signature::new(vec![], endo)?;

    let all_one = Inner::and_all((1..=m).map(|j| Inner::eq(&format!("Y{j}"), "1"))).expect("m > 0");
    let mut parts = vec![Formula::boxed(Intervention::empty(), all_one)];
    for (j, clause) in cnf.clauses.iter().enumerate() {
        let mut lits: Vec<i32> = Vec::new();
        for &l in clause {
            if !lits.contains(&l) {
                lits.push(l);
            }
        }
        if lits.iter().any(|&l| lits.contains(&-l)) {
            continue;
        }
        let iv = Intervention::new(lits.iter().map(|&l| {
            (
                format!("X{}", l.unsigned_abs()),
                if l > 0 { "0" } else { "1" },
            )
        }));
        parts.push(Formula::boxed(iv, Inner::eq(&format!("Y{}", j + 1), "0")));
    }
    Ok((Formula::and_all(parts).expect("nonempty"), sig))
}

/// A propositional formula over `p1, p2, …` (`Var(i)` is `p_{i+1}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prop {
    Var(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn not(self) -> Prop {
        Prop::Not(Box::new(self))
    }

    pub fn and(self, other: Prop) -> Prop {
        Prop::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Prop) -> Prop {
        Prop::Or(Box::new(self), Box::new(other))
    }

    /// One more than the largest proposition index.
    pub fn num_props(&self) -> usize {
        match self {
            Prop::Var(i) => i + 1,
            Prop::Not(a) => a.num_props(),
            Prop::And(a, b) | Prop::Or(a, b) => a.num_props().max(b.num_props()),
        }
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        match self {
            Prop::Var(i) => assignment[*i],
            Prop::Not(a) => !a.evaluate(assignment),
            Prop::And(a, b) => a.evaluate(assignment) && b.evaluate(assignment),
            Prop::Or(a, b) => a.evaluate(assignment) || b.evaluate(assignment),
        }
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Var(i) => write!(f, "p{}", i + 1),
            Prop::Not(a) => write!(f, "!{a}"),
            Prop::And(a, b) => write!(f, "({a} & {b})"),
            Prop::Or(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

/// Replaces each `p_i` by `[](Xi()=1)` over `(∅, {X1..Xk})` binary.
pub fn prop_to_luniq(prop: &Prop) -> Result<(Formula, Signature)> {
    fn go(p: &Prop) -> Formula {
        match p {
            Prop::Var(i) => Formula::boxed(
                Intervention::empty(),
                Inner::eq(&format!("X{}", i + 1), "1"),
            ),
            Prop::Not(a) => go(a).not(),
            Prop::And(a, b) => go(a).and(go(b)),
            Prop::Or(a, b) => go(a).or(go(b)),
        }
    }
    let sig = Signature::new(
        vec![],
        (1..=prop.num_props())
            .map(|i| binary(format!("X{i}")))
            .collect(),
    )?;
    Ok((go(prop), sig))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::sat_rec;
    use crate::lang::{classify_language, LanguageClass};
    use crate::DEFAULT_BUDGET;

    #[test]
    fn dimacs_round_trip_and_errors() {
        let text = "c example\np cnf 3 2\n1 -2 3 0\n-1\n2 3 0\n";
        let cnf = parse_dimacs(text).unwrap();
        assert_eq!(cnf.clauses, vec![[1, -2, 3], [-1, 2, 3]]);
        assert_eq!(parse_dimacs(&cnf.to_string()).unwrap(), cnf);
        for bad in [
            "1 2 3 0\n",
            "p cnf 3 1\n1 2 0\n",
            "p cnf 3 1\n1 2 4 0\n",
            "p cnf 3 2\n1 2 3 0\n",
            "p cnf 3 1\n1 2 3\n",
            "p cnf 3 0\n",
        ] {
            assert!(
                matches!(parse_dimacs(bad), Err(Error::MalformedCnf(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn single_clause_encoding() {
        let cnf = CnfInstance::new(3, vec![[1, 2, 3]]).unwrap();
        let (f, sig) = cnf_to_lgp(&cnf).unwrap();
        assert_eq!(f.to_string(), "[](Y1()=1) & [X1<-0;X2<-0;X3<-0](Y1()=0)");
        assert_eq!(sig.num_endo(), 4);
        assert_eq!(classify_language(&f), LanguageClass::Gp);
        assert!(sat_rec(&f, &sig, DEFAULT_BUDGET).unwrap().is_sat());
    }

    #[test]
    fn unsatisfiable_cnf_maps_to_unsat() {
        // All eight sign patterns over three propositions.
        let clauses = (0..8)
            .map(|s| [1, 2, 3].map(|i: i32| if s >> (i - 1) & 1 == 1 { -i } else { i }))
            .collect();
        let cnf = CnfInstance::new(3, clauses).unwrap();
        assert!(!(0..8).any(|s| cnf.evaluate(&[s & 1 == 1, s & 2 == 2, s & 4 == 4])));
        let (f, sig) = cnf_to_lgp(&cnf).unwrap();
        assert!(!sat_rec(&f, &sig, DEFAULT_BUDGET).unwrap().is_sat());
    }

    #[test]
    fn tautological_clause_is_dropped() {
        let cnf = CnfInstance::new(2, vec![[1, -1, 2]]).unwrap();
        let (f, sig) = cnf_to_lgp(&cnf).unwrap();
        assert_eq!(f.to_string(), "[](Y1()=1)");
        assert!(sat_rec(&f, &sig, DEFAULT_BUDGET).unwrap().is_sat());
    }

    #[test]
    fn propositional_embedding() {
        let p1 = Prop::Var(0);
        let (f, sig) = prop_to_luniq(&p1.clone().and(p1.clone().not())).unwrap();
        assert!(!sat_rec(&f, &sig, DEFAULT_BUDGET).unwrap().is_sat());
        let (g, sig) = prop_to_luniq(&p1.or(Prop::Var(1).not())).unwrap();
        assert_eq!(g.to_string(), "[](X1()=1) | ![](X2()=1)");
        let w = sat_rec(&g, &sig, DEFAULT_BUDGET).unwrap();
        let m = w.model.unwrap();
        // The witness is constant: no mechanism reads another variable.
        for x in 0..sig.num_endo() {
            assert!(m.sensitive_inputs(x).is_empty());
        }
    }
}
