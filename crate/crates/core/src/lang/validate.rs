use super::ast::{Formula, Leaf};
use crate::error::{Error, Result};
use crate::model::{Context, Intervention, Signature, Value};

fn check_value(sig: &Signature, var: &str, value: &Value) -> Result<()> {
    let x = sig
        .endo_index(var)
        .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
    if sig.endo(x).index_of(value).is_none() {
        return Err(Error::OutOfRangeValue {
            variable: var.to_string(),
            value: value.to_string(),
        });
    }
    Ok(())
}

pub(crate) fn check_context(sig: &Signature, ctx: &Context) -> Result<()> {
    if ctx.values.len() != sig.exogenous().len() {
        return Err(Error::BadContextArity {
            expected: sig.exogenous().len(),
            found: ctx.values.len(),
        });
    }
    for (v, var) in ctx.values.iter().zip(sig.exogenous()) {
        if var.index_of(v).is_none() {
            return Err(Error::OutOfRangeValue {
                variable: var.name.clone(),
                value: v.to_string(),
            });
        }
    }
    Ok(())
}

pub(crate) fn check_intervention(sig: &Signature, iv: &Intervention) -> Result<()> {
    let mut seen = Vec::new();
    for (name, value) in &iv.settings {
        check_value(sig, name, value)?;
        if seen.contains(&name) {
            return Err(Error::DuplicateInterventionTarget(name.clone()));
        }
        seen.push(name);
    }
    Ok(())
}

/// Checks every variable, value and context of `f` against `sig`.
pub fn validate(f: &Formula, sig: &Signature) -> Result<()> {
    let mut result = Ok(());
    f.for_each_basic(&mut |b| {
        if result.is_err() {
            return;
        }
        result = check_intervention(sig, &b.iv);
        b.inner.for_each_leaf(&mut |leaf| {
            if result.is_err() {
                return;
            }
            result = match leaf {
                Leaf::Atom(a) => {
                    check_value(sig, &a.var, &a.value).and_then(|_| check_context(sig, &a.ctx))
                }
                Leaf::Constant(c) => check_context(sig, c),
            };
        });
    });
    result
}
