//! Ground instances of the axiom schemes and exhaustive soundness checks.
//!
//! Counterfactual terms `X_{y⃗}(u) = x` are written as `[Y⃗←y⃗](X(u)=x)`.

mod schemes;
mod soundness;

use std::fmt;

use crate::lang::{Formula, LanguageClass};

pub use schemes::{generate_instances, is_propositional_tautology};
pub use soundness::{check_entailment, check_soundness, SoundnessReport};

/// One axiom scheme. `C6`/`D6` carry the chain length `k ≥ 1`; `Ord` carries
/// a total order of the endogenous variables, by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AxiomId {
    C0,
    C1,
    C2,
    C3,
    C4,
    C5,
    C6(usize),
    Ord(Vec<String>),
    D0,
    D1,
    D2,
    D3,
    D4,
    D5,
    D6(usize),
    D7,
    D8,
    D9,
    D10,
    D11,
}

impl AxiomId {
    /// The language the scheme's surface syntax is meant to live in.
    pub fn host_language(&self) -> LanguageClass {
        match self {
            AxiomId::C0
            | AxiomId::C1
            | AxiomId::C2
            | AxiomId::C3
            | AxiomId::C4
            | AxiomId::C5
            | AxiomId::Ord(_) => LanguageClass::Uniq,
            _ => LanguageClass::Plus,
        }
    }

    /// Parses names such as `C3`, `C6(2)`, `D11` or `Ord(X<Y<Z)`.
    pub fn parse(s: &str) -> Option<AxiomId> {
        let s = s.trim();
        let with_k = |prefix: &str| -> Option<usize> {
            let rest = s
                .strip_prefix(prefix)?
                .strip_prefix('(')?
                .strip_suffix(')')?;
            rest.trim().parse().ok().filter(|&k| k >= 1)
        };
        if let Some(k) = with_k("C6") {
            return Some(AxiomId::C6(k));
        }
        if let Some(k) = with_k("D6") {
            return Some(AxiomId::D6(k));
        }
        if let Some(rest) = s.strip_prefix("Ord(").and_then(|r| r.strip_suffix(')')) {
            return Some(AxiomId::Ord(
                rest.split('<').map(|v| v.trim().to_string()).collect(),
            ));
        }
        Some(match s {
            "C0" => AxiomId::C0,
            "C1" => AxiomId::C1,
            "C2" => AxiomId::C2,
            "C3" => AxiomId::C3,
            "C4" => AxiomId::C4,
            "C5" => AxiomId::C5,
            "C6" => AxiomId::C6(1),
            "D0" => AxiomId::D0,
            "D1" => AxiomId::D1,
            "D2" => AxiomId::D2,
            "D3" => AxiomId::D3,
            "D4" => AxiomId::D4,
            "D5" => AxiomId::D5,
            "D6" => AxiomId::D6(1),
            "D7" => AxiomId::D7,
            "D8" => AxiomId::D8,
            "D9" => AxiomId::D9,
            "D10" => AxiomId::D10,
            "D11" => AxiomId::D11,
            _ => return None,
        })
    }

    /// Every scheme with a fixed parameterization: `C6(1..=k_max)`,
    /// `D6(1..=k_max)`, and no `Ord`.
    pub fn standard(k_max: usize) -> Vec<AxiomId> {
        use AxiomId::*;
        let mut ids = vec![C0, C1, C2, C3, C4, C5];
        ids.extend((1..=k_max).map(C6));
        ids.extend([D0, D1, D2, D3, D4, D5]);
        ids.extend((1..=k_max).map(D6));
        ids.extend([D7, D8, D9, D10, D11]);
        ids
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomId::C6(k) => write!(f, "C6({k})"),
            AxiomId::D6(k) => write!(f, "D6({k})"),
            AxiomId::Ord(order) => write!(f, "Ord({})", order.join("<")),
            other => write!(f, "{other:?}"),
        }
    }
}

/// A ground instance of a scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomInstance {
    pub id: AxiomId,
    pub formula: Formula,
    /// Human-readable description of the instantiated parameters.
    pub bindings: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip_through_text() {
        let mut ids = AxiomId::standard(3);
        ids.push(AxiomId::Ord(vec!["X".into(), "Y".into()]));
        for id in ids {
            assert_eq!(AxiomId::parse(&id.to_string()), Some(id.clone()), "{id}");
        }
        assert_eq!(AxiomId::parse("C6(0)"), None);
        assert_eq!(AxiomId::parse("E1"), None);
    }
}
