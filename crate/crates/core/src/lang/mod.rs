//! Formula syntax: AST, parser, printer, language classes and desugaring.
//!
//! ```text
//! formula := iff ; iff := imp ("<->" imp)* ; imp := or ("->" imp)?
//! or := and ("|" and)* ; and := un ("&" un)* ; un := "!" un | base
//! base := "(" formula ")" | ("[" sets? "]" | "<" sets? ">") inner-unit
//! sets := IDENT "<-" VALUE (";" IDENT "<-" VALUE)*
//! ```
//!
//! Inner formulas use the same connectives over atoms `X(u1,..)=v`,
//! `X(u)!=v`, `true(u)` and `false(u)`.

mod ast;
mod classify;
mod desugar;
mod lexer;
mod parser;
mod printer;
mod validate;

pub use ast::{Atom, Basic, Formula, Inner, Leaf, Mode};
pub use classify::{classify_language, LanguageClass};
pub use desugar::{desugar, desugar_inner, true_at};
pub use parser::{parse, parse_unchecked};
pub use printer::{print_formula, print_inner};
pub use validate::validate;
