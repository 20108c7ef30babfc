//! Small named models used throughout the tests, benches and docs.

use crate::model::{CausalModel, Signature, Variable};

fn ternary(name: &str) -> Variable {
    Variable::new(name, ["-1", "0", "1"])
}

fn binary(name: &str) -> Variable {
    Variable::new(name, ["0", "1"])
}

/// `n` binary endogenous variables named `X`, `Y`, `Z`, `W`, then `V4`, ...,
/// with no exogenous variables.
pub fn binary_signature(n: usize) -> Signature {
    let names = ["X", "Y", "Z", "W"];
    let vars = (0..n)
        .map(|i| match names.get(i) {
            Some(n) => binary(n),
            None => binary(&format!("V{i}")),
        })
        .collect();
    Signature::new(vec![], vars).expect("valid signature")
}

/// Like [`binary_signature`] but with one binary exogenous variable `U`.
pub fn binary_signature_with_context(n: usize) -> Signature {
    let endo = binary_signature(n).endogenous().to_vec();
    Signature::new(vec![binary("U")], endo).expect("valid signature")
}

/// `X = Y`, `Y = -X` over `{-1, 0, 1}`: not recursive, yet every submodel
/// has exactly one solution.
pub fn push_pull() -> CausalModel {
    let sig = Signature::new(vec![], vec![ternary("X"), ternary("Y")]).expect("valid signature");
    // Index i holds value i - 1, so negation maps i to 2 - i.
    CausalModel::from_fn(sig, |x, _, e| if x == 0 { e[1] } else { 2 - e[0] }).expect("valid model")
}

/// `X = Y`, `Y = X` over binary ranges: two solutions without intervention.
pub fn copycat() -> CausalModel {
    let sig = binary_signature(2);
    CausalModel::from_fn(sig, |x, _, e| e[1 - x]).expect("valid model")
}

/// Three variables over `{0, 1, 2}` where `X_i` is 2 if its predecessor in
/// the cycle `X0 → X1 → X2 → X0` equals 1, and 0 otherwise.
pub fn mod3() -> CausalModel {
    let sig = Signature::new(
        vec![],
        (0..3)
            .map(|i| Variable::new(format!("X{i}"), ["0", "1", "2"]))
            .collect(),
    )
    .expect("valid signature");
    CausalModel::from_fn(sig, |x, _, e| if e[(x + 2) % 3] == 1 { 2 } else { 0 })
        .expect("valid model")
}

/// `X = Y ⊕ Z`, `Y = X ⊕ Z`, `Z = X ⊕ Y` over binary ranges.
pub fn xor3() -> CausalModel {
    let sig = binary_signature(3);
    CausalModel::from_fn(sig, |x, _, e| {
        let others: usize = (0..3).filter(|&j| j != x).map(|j| e[j]).sum();
        others % 2
    })
    .expect("valid model")
}
