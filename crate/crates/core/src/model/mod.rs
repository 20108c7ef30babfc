//! Finite signatures, structural-equation models and their submodels.

mod classes;
mod enumerate;
pub mod file;
mod mechanism;

use std::fmt;

use crate::budget;
use crate::error::{Error, Result};

pub use classes::{dependency_graph, is_recursive, is_unique_solutions, ModelClass};
pub use enumerate::{count_models, enumerate_models, nth_model, ModelEnumerator};
pub use mechanism::{solve, CausalModel, MechanismTable, MAX_TABLE_ROWS};

/// An element of a variable's range. Tokens are opaque: `"01"` and `"1"` are
/// different values and nothing is ever compared numerically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value(String);

impl Value {
    pub fn new(token: impl Into<String>) -> Self {
        Value(token.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value(s)
    }
}

/// A named variable with its ordered, finite range.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub range: Vec<Value>,
}

impl Variable {
    pub fn new<V: Into<Value>>(
        name: impl Into<String>,
        range: impl IntoIterator<Item = V>,
    ) -> Self {
        Variable {
            name: name.into(),
            range: range.into_iter().map(Into::into).collect(),
        }
    }

    pub fn index_of(&self, value: &Value) -> Option<usize> {
        self.range.iter().position(|v| v == value)
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(is_word_char) && s != "true" && s != "false"
}

pub(crate) fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '*' | '\'' | '+')
}

pub(crate) fn is_value_token(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    !body.is_empty() && body.chars().all(is_word_char)
}

/// Which slot of a mechanism's input tuple a variable occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Input {
    Exo(usize),
    Endo(usize),
}

/// Row addressing for the table of one endogenous variable. Inputs are the
/// exogenous variables followed by the other endogenous variables, both in
/// declaration order; the first input is the most significant digit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Layout {
    pub inputs: Vec<Input>,
    pub exo_strides: Vec<usize>,
    pub endo_strides: Vec<usize>,
    pub rows: u128,
}

/// The variables of a model: exogenous `U`, endogenous `V`, and their ranges.
#[derive(Clone, Debug)]
pub struct Signature {
    exogenous: Vec<Variable>,
    endogenous: Vec<Variable>,
    layouts: Vec<Layout>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.exogenous == other.exogenous && self.endogenous == other.endogenous
    }
}

impl Eq for Signature {}

impl Signature {
    /// Validates names and ranges. Endogenous ranges need at least two values;
    /// exogenous ranges need at least one.
    pub fn new(exogenous: Vec<Variable>, endogenous: Vec<Variable>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (kind, var, min) in exogenous
            .iter()
            .map(|v| ("exogenous", v, 1))
            .chain(endogenous.iter().map(|v| ("endogenous", v, 2)))
        {
            if !is_ident(&var.name) {
                return Err(Error::InvalidSignature(format!(
                    "`{}` is not a valid variable name",
                    var.name
                )));
            }
            if !seen.insert(var.name.as_str()) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate variable `{}`",
                    var.name
                )));
            }
            if var.range.len() < min {
                return Err(Error::InvalidSignature(format!(
                    "{kind} variable `{}` needs at least {min} values",
                    var.name
                )));
            }
            let mut values = std::collections::HashSet::new();
            for v in &var.range {
                if !is_value_token(v.as_str()) {
                    return Err(Error::InvalidSignature(format!(
                        "`{v}` is not a valid value token"
                    )));
                }
                if !values.insert(v) {
                    return Err(Error::InvalidSignature(format!(
                        "value `{v}` repeated in the range of `{}`",
                        var.name
                    )));
                }
            }
        }
        let layouts = (0..endogenous.len())
            .map(|x| layout_for(&exogenous, &endogenous, x))
            .collect();
        Ok(Signature {
            exogenous,
            endogenous,
            layouts,
        })
    }

    pub fn exogenous(&self) -> &[Variable] {
        &self.exogenous
    }

    pub fn endogenous(&self) -> &[Variable] {
        &self.endogenous
    }

    pub fn endo(&self, i: usize) -> &Variable {
        &self.endogenous[i]
    }

    pub fn num_endo(&self) -> usize {
        self.endogenous.len()
    }

    pub fn endo_index(&self, name: &str) -> Option<usize> {
        self.endogenous.iter().position(|v| v.name == name)
    }

    pub fn exo_index(&self, name: &str) -> Option<usize> {
        self.exogenous.iter().position(|v| v.name == name)
    }

    pub fn has_name(&self, name: &str) -> bool {
        self.endo_index(name).is_some() || self.exo_index(name).is_some()
    }

    pub(crate) fn layout(&self, x: usize) -> &Layout {
        &self.layouts[x]
    }

    /// Product of the endogenous range sizes.
    pub fn size(&self) -> u128 {
        budget::product(self.endogenous.iter().map(|v| v.range.len() as u128))
    }

    pub fn num_contexts(&self) -> u128 {
        budget::product(self.exogenous.iter().map(|v| v.range.len() as u128))
    }

    /// Every context as value indices, in lexicographic order.
    pub fn contexts(&self) -> Vec<Vec<usize>> {
        let radices: Vec<usize> = self.exogenous.iter().map(|v| v.range.len()).collect();
        odometer(&radices).collect()
    }

    pub fn context_values(&self, ctx: &[usize]) -> Context {
        Context::new(
            ctx.iter()
                .zip(&self.exogenous)
                .map(|(&i, v)| v.range[i].clone())
                .collect(),
        )
    }

    pub fn endo_value(&self, var: usize, value: usize) -> &Value {
        &self.endogenous[var].range[value]
    }

    /// A name not used in this signature, derived from `base` by appending `*`.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.has_name(&name) {
            name.push('*');
        }
        name
    }
}

fn layout_for(exo: &[Variable], endo: &[Variable], x: usize) -> Layout {
    let mut inputs: Vec<Input> = (0..exo.len()).map(Input::Exo).collect();
    inputs.extend((0..endo.len()).filter(|&j| j != x).map(Input::Endo));
    let mut exo_strides = vec![0usize; exo.len()];
    let mut endo_strides = vec![0usize; endo.len()];
    let mut stride: u128 = 1;
    for input in inputs.iter().rev() {
        let (slot, len) = match *input {
            Input::Exo(i) => (&mut exo_strides[i], exo[i].range.len()),
            Input::Endo(j) => (&mut endo_strides[j], endo[j].range.len()),
        };
        *slot = usize::try_from(stride).unwrap_or(usize::MAX);
        stride = stride.saturating_mul(len as u128);
    }
    Layout {
        inputs,
        exo_strides,
        endo_strides,
        rows: stride,
    }
}

/// Mixed-radix counter over `radices`, last digit fastest.
pub(crate) fn odometer(radices: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let empty = radices.contains(&0);
    let mut next = if empty {
        None
    } else {
        Some(vec![0usize; radices.len()])
    };
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        let mut i = radices.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < radices[i] {
                next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    })
}

/// A total assignment to the exogenous variables, positional in declaration
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Context {
    pub values: Vec<Value>,
}

impl Context {
    pub fn new(values: Vec<Value>) -> Self {
        Context { values }
    }

    pub fn empty() -> Self {
        Context { values: vec![] }
    }

    pub fn parse_list(text: &str) -> Self {
        let values = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(Value::from)
            .collect();
        Context { values }
    }

    pub fn resolve(&self, sig: &Signature) -> Result<Vec<usize>> {
        if self.values.len() != sig.exogenous.len() {
            return Err(Error::InvalidContext(format!(
                "expected {} values, got {}",
                sig.exogenous.len(),
                self.values.len()
            )));
        }
        self.values
            .iter()
            .zip(&sig.exogenous)
            .map(|(v, var)| {
                var.index_of(v).ok_or_else(|| {
                    Error::InvalidContext(format!("`{v}` is not in the range of `{}`", var.name))
                })
            })
            .collect()
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Settings `Y1 <- y1; ...; Yk <- yk` of distinct endogenous variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Intervention {
    pub settings: Vec<(String, Value)>,
}

impl Intervention {
    pub fn new<N: Into<String>, V: Into<Value>>(
        settings: impl IntoIterator<Item = (N, V)>,
    ) -> Self {
        Intervention {
            settings: settings
                .into_iter()
                .map(|(n, v)| (n.into(), v.into()))
                .collect(),
        }
    }

    pub fn empty() -> Self {
        Intervention::default()
    }

    pub fn is_empty(&self) -> bool {
        self.settings.is_empty()
    }

    pub fn targets(&self) -> impl Iterator<Item = &str> {
        self.settings.iter().map(|(n, _)| n.as_str())
    }

    /// Same settings sorted by variable name, for set-like comparison.
    pub fn canonical(&self, sig: &Signature) -> Intervention {
        let mut settings = self.settings.clone();
        settings.sort_by_key(|(n, _)| sig.endo_index(n).unwrap_or(usize::MAX));
        Intervention { settings }
    }

    /// Per-variable forced value indices, `None` where the variable is free.
    pub fn resolve(&self, sig: &Signature) -> Result<Vec<Option<usize>>> {
        let mut forced = vec![None; sig.num_endo()];
        for (name, value) in &self.settings {
            let x = sig.endo_index(name).ok_or_else(|| {
                Error::InvalidIntervention(format!("`{name}` is not an endogenous variable"))
            })?;
            if forced[x].is_some() {
                return Err(Error::DuplicateInterventionTarget(name.clone()));
            }
            let v = sig.endo(x).index_of(value).ok_or_else(|| {
                Error::InvalidIntervention(format!("`{value}` is not in the range of `{name}`"))
            })?;
            forced[x] = Some(v);
        }
        Ok(forced)
    }

    pub fn from_forced(sig: &Signature, forced: &[Option<usize>]) -> Intervention {
        Intervention {
            settings: forced
                .iter()
                .enumerate()
                .filter_map(|(x, v)| {
                    v.map(|v| (sig.endo(x).name.clone(), sig.endo_value(x, v).clone()))
                })
                .collect(),
        }
    }
}

impl fmt::Display for Intervention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, v)) in self.settings.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{n}<-{v}")?;
        }
        Ok(())
    }
}

/// A total assignment to the endogenous variables, as indices into each
/// variable's range.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndoAssignment {
    pub values: Vec<usize>,
}

impl EndoAssignment {
    pub fn new(values: Vec<usize>) -> Self {
        EndoAssignment { values }
    }

    pub fn get<'a>(&self, sig: &'a Signature, name: &str) -> Option<&'a Value> {
        let x = sig.endo_index(name)?;
        Some(sig.endo_value(x, self.values[x]))
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        AssignmentDisplay { sig, a: self }
    }
}

struct AssignmentDisplay<'a> {
    sig: &'a Signature,
    a: &'a EndoAssignment,
}

impl fmt::Display for AssignmentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (x, &v) in self.a.values.iter().enumerate() {
            if x > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}={}", self.sig.endo(x).name, self.sig.endo_value(x, v))?;
        }
        f.write_str(")")
    }
}

/// All solutions of one submodel, sorted lexicographically in declaration
/// order and free of duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SolutionSet {
    pub solutions: Vec<EndoAssignment>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, EndoAssignment> {
        self.solutions.iter()
    }

    /// The solutions as `name=value` rows, for tests and printing.
    pub fn to_named(&self, sig: &Signature) -> Vec<Vec<(String, String)>> {
        self.solutions
            .iter()
            .map(|s| {
                s.values
                    .iter()
                    .enumerate()
                    .map(|(x, &v)| (sig.endo(x).name.clone(), sig.endo_value(x, v).to_string()))
                    .collect()
            })
            .collect()
    }
}

/// `||S||`: the product of the endogenous range sizes.
pub fn sig_size(sig: &Signature) -> u128 {
    sig.size()
}
