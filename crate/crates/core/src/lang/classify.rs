use std::fmt;

use super::ast::{Formula, Mode};

/// Syntactic fragment of a formula, smallest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LanguageClass {
    /// Conjunctions of boxes over single atoms.
    Gp,
    /// Boolean combinations of boxes or diamonds over single atoms.
    Uniq,
    /// Boolean combinations of boxes over arbitrary inner formulas.
    Plus,
}

impl fmt::Display for LanguageClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LanguageClass::Gp => "GP",
            LanguageClass::Uniq => "UNIQ",
            LanguageClass::Plus => "PLUS",
        })
    }
}

/// The smallest of GP ⊂ UNIQ ⊂ PLUS containing `f`, judged on the surface
/// syntax.
pub fn classify_language(f: &Formula) -> LanguageClass {
    use LanguageClass::*;
    match f {
        Formula::Basic(b) => match (b.mode, b.inner.is_atom()) {
            (_, false) => Plus,
            (Mode::Box, true) => Gp,
            (Mode::Diamond, true) => Uniq,
        },
        Formula::And(a, b) => classify_language(a).max(classify_language(b)),
        Formula::Not(a) => classify_language(a).max(Uniq),
        Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            classify_language(a).max(classify_language(b)).max(Uniq)
        }
    }
}
