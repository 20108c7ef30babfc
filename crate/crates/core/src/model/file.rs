//! The line-oriented model file format.
//!
//! ```text
//! exogenous U : 0 1
//! endogenous X : -1 0 1
//! endogenous Y : -1 0 1
//! eq X(U, Y):
//!   (0, -1) -> -1
//!   ...
//! eq Y() = 0          # constant
//! ```
//!
//! An equation lists the inputs it consults; all other inputs are ignored.
//! Tables must list every input tuple exactly once.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use super::{odometer, CausalModel, Input, MechanismTable, Signature, Value, Variable};
use crate::error::{Error, Result};

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::ModelFile {
        line,
        message: message.into(),
    }
}

struct Equation {
    line: usize,
    var: usize,
    inputs: Vec<Input>,
    body: EqBody,
}

enum EqBody {
    Const(Value),
    Rows(Vec<(usize, Vec<Value>, Value)>),
}

struct Parsed {
    sig: Arc<Signature>,
    equations: Vec<Equation>,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_decl(rest: &str, line: usize) -> Result<Variable> {
    let (name, range) = rest
        .split_once(':')
        .ok_or_else(|| err(line, "expected `NAME : values...`"))?;
    let name = name.trim();
    let values: Vec<&str> = range.split_whitespace().collect();
    Ok(Variable::new(name, values))
}

fn parse_text(text: &str) -> Result<Parsed> {
    let mut exo = Vec::new();
    let mut endo = Vec::new();
    let mut eq_lines: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = strip_comment(raw);
        if l.is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix("exogenous ") {
            if !eq_lines.is_empty() {
                return Err(err(line, "declarations must precede equations"));
            }
            exo.push((line, parse_decl(rest, line)?));
        } else if let Some(rest) = l.strip_prefix("endogenous ") {
            if !eq_lines.is_empty() {
                return Err(err(line, "declarations must precede equations"));
            }
            endo.push((line, parse_decl(rest, line)?));
        } else if l.starts_with("eq ") || l.starts_with('(') {
            eq_lines.push((line, l));
        } else {
            return Err(err(line, format!("unrecognized line `{l}`")));
        }
    }
    let first_decl_line = |name: &str| {
        exo.iter()
            .chain(endo.iter())
            .find(|(_, v)| v.name == name)
            .map(|(l, _)| *l)
            .unwrap_or(1)
    };
    let sig = Signature::new(
        exo.iter().map(|(_, v)| v.clone()).collect(),
        endo.iter().map(|(_, v)| v.clone()).collect(),
    )
    .map_err(|e| {
        // Point at a relevant declaration when we can.
        let line = exo
            .iter()
            .chain(endo.iter())
            .map(|(_, v)| v.name.as_str())
            .find(|n| e.to_string().contains(&format!("`{n}`")))
            .map(first_decl_line)
            .unwrap_or(1);
        err(line, e.to_string())
    })?;
    let sig = Arc::new(sig);

    let mut equations: Vec<Equation> = Vec::new();
    for (line, l) in eq_lines {
        if let Some(rest) = l.strip_prefix("eq ") {
            equations.push(parse_eq_header(&sig, rest.trim(), line)?);
        } else {
            let eq = equations
                .last_mut()
                .ok_or_else(|| err(line, "table row outside an equation"))?;
            let EqBody::Rows(rows) = &mut eq.body else {
                return Err(err(line, "table row after a constant equation"));
            };
            let (tuple, out) = parse_row(l, line)?;
            rows.push((line, tuple, out));
        }
    }
    Ok(Parsed { sig, equations })
}

fn parse_eq_header(sig: &Signature, rest: &str, line: usize) -> Result<Equation> {
    let open = rest
        .find('(')
        .ok_or_else(|| err(line, "expected `eq NAME(inputs)`"))?;
    let close = rest
        .find(')')
        .ok_or_else(|| err(line, "missing `)` in equation header"))?;
    let name = rest[..open].trim();
    let var = sig
        .endo_index(name)
        .ok_or_else(|| err(line, format!("`{name}` is not an endogenous variable")))?;
    let mut inputs = Vec::new();
    for input in rest[open + 1..close]
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
    {
        let i = if let Some(u) = sig.exo_index(input) {
            Input::Exo(u)
        } else if let Some(y) = sig.endo_index(input) {
            if y == var {
                return Err(err(line, format!("`{name}` cannot be an input of itself")));
            }
            Input::Endo(y)
        } else {
            return Err(err(line, format!("unknown input `{input}`")));
        };
        if inputs.contains(&i) {
            return Err(err(line, format!("input `{input}` listed twice")));
        }
        inputs.push(i);
    }
    let tail = rest[close + 1..].trim();
    let body = if tail == ":" {
        EqBody::Rows(Vec::new())
    } else if let Some(v) = tail.strip_prefix('=') {
        EqBody::Const(Value::from(v.trim()))
    } else {
        return Err(err(line, "expected `:` or `= VALUE` after the inputs"));
    };
    Ok(Equation {
        line,
        var,
        inputs,
        body,
    })
}

fn parse_row(l: &str, line: usize) -> Result<(Vec<Value>, Value)> {
    let close = l
        .find(')')
        .ok_or_else(|| err(line, "missing `)` in table row"))?;
    let tuple = l[1..close]
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Value::from)
        .collect();
    let out = l[close + 1..]
        .trim()
        .strip_prefix("->")
        .ok_or_else(|| err(line, "expected `-> VALUE` after the input tuple"))?
        .trim();
    if out.is_empty() || out.contains(char::is_whitespace) {
        return Err(err(line, "expected a single output value"));
    }
    Ok((tuple, Value::from(out)))
}

fn input_var<'a>(sig: &'a Signature, i: Input) -> &'a Variable {
    match i {
        Input::Exo(u) => &sig.exogenous()[u],
        Input::Endo(y) => sig.endo(y),
    }
}

fn build_table(sig: &Arc<Signature>, eq: &Equation) -> Result<MechanismTable> {
    let var = sig.endo(eq.var);
    let out_index = |v: &Value, line: usize| {
        var.index_of(v).ok_or_else(|| {
            err(
                line,
                format!("output `{v}` is not in the range of `{}`", var.name),
            )
        })
    };
    // Map from declared-input value indices to output index.
    let mut lookup: HashMap<Vec<usize>, usize> = HashMap::new();
    let constant = match &eq.body {
        EqBody::Const(v) => Some(out_index(v, eq.line)?),
        EqBody::Rows(rows) => {
            let expected: usize = eq
                .inputs
                .iter()
                .map(|&i| input_var(sig, i).range.len())
                .product();
            for (line, tuple, out) in rows {
                if tuple.len() != eq.inputs.len() {
                    return Err(err(
                        *line,
                        format!(
                            "expected {} values in the tuple, got {}",
                            eq.inputs.len(),
                            tuple.len()
                        ),
                    ));
                }
                let key = tuple
                    .iter()
                    .zip(&eq.inputs)
                    .map(|(v, &i)| {
                        let iv = input_var(sig, i);
                        iv.index_of(v).ok_or_else(|| {
                            err(*line, format!("`{v}` is not in the range of `{}`", iv.name))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let o = out_index(out, *line)?;
                if lookup.insert(key, o).is_some() {
                    return Err(err(*line, "duplicate table row"));
                }
            }
            if lookup.len() != expected {
                return Err(err(
                    eq.line,
                    format!(
                        "table for `{}` has {} rows, expected {expected}",
                        var.name,
                        lookup.len()
                    ),
                ));
            }
            None
        }
    };
    let layout = sig.layout(eq.var);
    let radices: Vec<usize> = layout
        .inputs
        .iter()
        .map(|&i| input_var(sig, i).range.len())
        .collect();
    let positions: Vec<usize> = eq
        .inputs
        .iter()
        .map(|i| {
            layout
                .inputs
                .iter()
                .position(|j| j == i)
                .expect("input in layout")
        })
        .collect();
    let outputs = odometer(&radices)
        .map(|digits| match constant {
            Some(c) => c,
            None => lookup[&positions.iter().map(|&p| digits[p]).collect::<Vec<_>>()],
        })
        .collect();
    Ok(MechanismTable { outputs })
}

/// Parses only the signature; equations, if present, are checked for syntax
/// but otherwise ignored.
pub fn parse_signature(text: &str) -> Result<Signature> {
    let parsed = parse_text(text)?;
    Ok(Arc::try_unwrap(parsed.sig).unwrap_or_else(|s| (*s).clone()))
}

pub fn parse_model(text: &str) -> Result<CausalModel> {
    let parsed = parse_text(text)?;
    let sig = parsed.sig;
    let mut tables: Vec<Option<MechanismTable>> = vec![None; sig.num_endo()];
    for eq in &parsed.equations {
        if tables[eq.var].is_some() {
            return Err(err(
                eq.line,
                format!("second equation for `{}`", sig.endo(eq.var).name),
            ));
        }
        tables[eq.var] = Some(build_table(&sig, eq)?);
    }
    let tables = tables
        .into_iter()
        .enumerate()
        .map(|(x, t)| t.ok_or_else(|| err(0, format!("no equation for `{}`", sig.endo(x).name))))
        .collect::<Result<Vec<_>>>()?;
    CausalModel::new(sig, tables)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| err(0, format!("{}: {e}", path.display())))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<CausalModel> {
    parse_model(&read(path.as_ref())?)
}

pub fn load_signature(path: impl AsRef<Path>) -> Result<Signature> {
    parse_signature(&read(path.as_ref())?)
}

pub fn write_signature(sig: &Signature) -> String {
    let mut out = String::new();
    for (kind, vars) in [
        ("exogenous", sig.exogenous()),
        ("endogenous", sig.endogenous()),
    ] {
        for v in vars {
            let range: Vec<&str> = v.range.iter().map(Value::as_str).collect();
            let _ = writeln!(out, "{kind} {} : {}", v.name, range.join(" "));
        }
    }
    out
}

/// Canonical text for a model: each mechanism is written over the inputs it
/// actually depends on.
pub fn write_model(model: &CausalModel) -> String {
    let sig = model.signature();
    let mut out = write_signature(sig);
    for x in 0..sig.num_endo() {
        let var = sig.endo(x);
        let inputs = model.sensitive_inputs(x);
        let names: Vec<&str> = inputs
            .iter()
            .map(|&i| input_var(sig, i).name.as_str())
            .collect();
        if inputs.is_empty() {
            let v = model.tables()[x].outputs[0];
            let _ = writeln!(out, "eq {}() = {}", var.name, var.range[v]);
            continue;
        }
        let _ = writeln!(out, "eq {}({}):", var.name, names.join(", "));
        let radices: Vec<usize> = inputs
            .iter()
            .map(|&i| input_var(sig, i).range.len())
            .collect();
        let mut ctx = vec![0; sig.exogenous().len()];
        let mut endo = vec![0; sig.num_endo()];
        for digits in odometer(&radices) {
            let mut cells = Vec::with_capacity(inputs.len());
            for (&i, &d) in inputs.iter().zip(&digits) {
                match i {
                    Input::Exo(u) => ctx[u] = d,
                    Input::Endo(y) => endo[y] = d,
                }
                cells.push(input_var(sig, i).range[d].as_str());
            }
            let o = model.output(x, &ctx, &endo);
            let _ = writeln!(out, "  ({}) -> {}", cells.join(", "), var.range[o]);
        }
    }
    out
}

pub fn save_model(model: &CausalModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, write_model(model)).map_err(|e| err(0, format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{Context, Intervention};

    const PUSH_PULL: &str = "\
# push-pull
endogenous X : -1 0 1
endogenous Y : -1 0 1
eq X(Y):
  (-1) -> -1
  (0) -> 0
  (1) -> 1
eq Y(X):
  (-1) -> 1
  (0) -> 0
  (1) -> -1
";

    #[test]
    fn loads_push_pull() {
        let m = parse_model(PUSH_PULL).unwrap();
        assert_eq!(m, fixtures::push_pull());
        let sols = m.solve(&Intervention::empty(), &Context::empty()).unwrap();
        assert_eq!(sols.len(), 1);
    }

    #[test]
    fn write_then_parse_round_trips() {
        for m in [
            fixtures::push_pull(),
            fixtures::copycat(),
            fixtures::mod3(),
            fixtures::xor3(),
        ] {
            let text = write_model(&m);
            assert_eq!(parse_model(&text).unwrap(), m, "{text}");
        }
    }

    #[test]
    fn const_shorthand() {
        let m = parse_model("exogenous U : 0 1\nendogenous Z : 0 1\neq Z() = 1\n").unwrap();
        assert_eq!(m.tables()[0].outputs, vec![1, 1]);
        assert_eq!(write_model(&m).lines().last(), Some("eq Z() = 1"));
    }

    #[test]
    fn rejects_bad_files() {
        let bad = [
            "endogenous X : 0\neq X() = 0\n",
            "endogenous X : 0 1\nendogenous X : 0 1\n",
            "endogenous X : 0 1\nendogenous Y : 0 1\neq X(Y):\n  (0) -> 0\neq Y() = 0\n",
            "endogenous X : 0 1\nendogenous Y : 0 1\neq X(Y):\n  (0) -> 0\n  (1) -> 1\n  (1) -> 0\neq Y() = 0\n",
            "endogenous X : 0 1\neq X() = 2\n",
            "endogenous X : 0 1\nendogenous Y : 0 1\neq X() = 0\n",
            "endogenous X : 0 1\neq X(X):\n  (0) -> 0\n  (1) -> 1\n",
            "endogenous X : 0 1\nbogus\n",
        ];
        for text in bad {
            assert!(parse_model(text).is_err(), "accepted:\n{text}");
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_model("endogenous X : 0 1\neq X() = 0\n  (0) -> 1\n").unwrap_err();
        assert!(matches!(e, Error::ModelFile { line: 3, .. }), "{e:?}");
    }

    #[test]
    fn signature_only_files() {
        let s = parse_signature("endogenous X : 0 1\nendogenous Y : 0 1\n").unwrap();
        assert_eq!(s.num_endo(), 2);
        assert_eq!(parse_signature(&write_signature(&s)).unwrap(), s);
    }
}
