use std::sync::Arc;

use super::{odometer, Context, EndoAssignment, Input, Intervention, Signature, SolutionSet};
use crate::error::{Error, Result};

/// Largest table the library will materialize, in rows summed over all
/// mechanisms.
pub const MAX_TABLE_ROWS: u128 = 1 << 26;

/// `F_X` as a total table: `outputs[row]` is the index of the output value,
/// rows addressed per the variable's input layout.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MechanismTable {
    pub outputs: Vec<usize>,
}

/// A signature plus one total mechanism per endogenous variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalModel {
    sig: Arc<Signature>,
    tables: Vec<MechanismTable>,
}

impl CausalModel {
    pub fn new(sig: impl Into<Arc<Signature>>, tables: Vec<MechanismTable>) -> Result<Self> {
        let sig = sig.into();
        if tables.len() != sig.num_endo() {
            return Err(Error::InvalidMechanism {
                variable: "*".into(),
                message: format!(
                    "expected {} mechanisms, got {}",
                    sig.num_endo(),
                    tables.len()
                ),
            });
        }
        for (x, t) in tables.iter().enumerate() {
            let var = sig.endo(x);
            if t.outputs.len() as u128 != sig.layout(x).rows {
                return Err(Error::InvalidMechanism {
                    variable: var.name.clone(),
                    message: format!(
                        "table has {} rows, expected {}",
                        t.outputs.len(),
                        sig.layout(x).rows
                    ),
                });
            }
            if let Some(&bad) = t.outputs.iter().find(|&&o| o >= var.range.len()) {
                return Err(Error::InvalidMechanism {
                    variable: var.name.clone(),
                    message: format!("output index {bad} is out of range"),
                });
            }
        }
        Ok(CausalModel { sig, tables })
    }

    /// Builds every table by calling `f(x, context, endo)` once per row. In
    /// `endo` the slot of `x` itself is 0 and must be ignored.
    pub fn from_fn<F>(sig: impl Into<Arc<Signature>>, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, &[usize], &[usize]) -> usize,
    {
        let sig = sig.into();
        let total: u128 = (0..sig.num_endo())
            .map(|x| sig.layout(x).rows)
            .fold(0u128, |a, b| a.saturating_add(b));
        if total > MAX_TABLE_ROWS {
            return Err(Error::BudgetExceeded {
                what: "mechanism tables".into(),
                needed: total,
                budget: MAX_TABLE_ROWS as u64,
            });
        }
        let mut tables = Vec::with_capacity(sig.num_endo());
        for x in 0..sig.num_endo() {
            let layout = sig.layout(x);
            let radices: Vec<usize> = layout
                .inputs
                .iter()
                .map(|i| match *i {
                    Input::Exo(u) => sig.exogenous()[u].range.len(),
                    Input::Endo(y) => sig.endo(y).range.len(),
                })
                .collect();
            let mut ctx = vec![0usize; sig.exogenous().len()];
            let mut endo = vec![0usize; sig.num_endo()];
            let mut outputs = Vec::with_capacity(layout.rows as usize);
            // Last input fastest, matching the row layout; digits are
            // updated in place.
            let mut digits = vec![0usize; radices.len()];
            'rows: loop {
                outputs.push(f(x, &ctx, &endo));
                let mut i = digits.len();
                loop {
                    if i == 0 {
                        break 'rows;
                    }
                    i -= 1;
                    digits[i] += 1;
                    let wrapped = digits[i] == radices[i];
                    if wrapped {
                        digits[i] = 0;
                    }
                    match layout.inputs[i] {
                        Input::Exo(u) => ctx[u] = digits[i],
                        Input::Endo(y) => endo[y] = digits[i],
                    }
                    if !wrapped {
                        break;
                    }
                }
            }
            tables.push(MechanismTable { outputs });
        }
        CausalModel::new(sig, tables)
    }

    /// The model in which every mechanism is the constant `values[x]`.
    pub fn constant(sig: impl Into<Arc<Signature>>, values: &[usize]) -> Result<Self> {
        CausalModel::from_fn(sig, |x, _, _| values[x])
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn shared_signature(&self) -> Arc<Signature> {
        Arc::clone(&self.sig)
    }

    pub fn tables(&self) -> &[MechanismTable] {
        &self.tables
    }

    pub fn into_tables(self) -> Vec<MechanismTable> {
        self.tables
    }

    #[inline]
    pub(crate) fn row(&self, x: usize, ctx: &[usize], endo: &[usize]) -> usize {
        let layout = self.sig.layout(x);
        let mut row = 0;
        for (c, s) in ctx.iter().zip(&layout.exo_strides) {
            row += c * s;
        }
        for (v, s) in endo.iter().zip(&layout.endo_strides) {
            row += v * s;
        }
        row
    }

    /// `F_X(u, endo)` as a value index; the slot of `x` in `endo` is ignored.
    #[inline]
    pub fn output(&self, x: usize, ctx: &[usize], endo: &[usize]) -> usize {
        self.tables[x].outputs[self.row(x, ctx, endo)]
    }

    /// Whether `a` satisfies every equation of the submodel that leaves the
    /// variables with `forced[x] == None` free.
    pub fn is_solution(&self, forced: &[Option<usize>], ctx: &[usize], a: &[usize]) -> bool {
        forced.iter().enumerate().all(|(x, f)| match f {
            Some(v) => a[x] == *v,
            None => self.output(x, ctx, a) == a[x],
        })
    }

    /// All solutions of `T_{forced}(ctx)` in lexicographic order.
    pub fn solve_indices(&self, forced: &[Option<usize>], ctx: &[usize]) -> Vec<Vec<usize>> {
        let free: Vec<usize> = (0..forced.len()).filter(|&x| forced[x].is_none()).collect();
        let radices: Vec<usize> = free.iter().map(|&x| self.sig.endo(x).range.len()).collect();
        let mut a: Vec<usize> = forced.iter().map(|f| f.unwrap_or(0)).collect();
        let mut out = Vec::new();
        for digits in odometer(&radices) {
            for (&x, d) in free.iter().zip(digits) {
                a[x] = d;
            }
            if free.iter().all(|&x| self.output(x, ctx, &a) == a[x]) {
                out.push(a.clone());
            }
        }
        out
    }

    /// Number of solutions, stopping early once `limit` is reached.
    pub(crate) fn count_solutions(
        &self,
        forced: &[Option<usize>],
        ctx: &[usize],
        limit: usize,
    ) -> usize {
        let free: Vec<usize> = (0..forced.len()).filter(|&x| forced[x].is_none()).collect();
        let radices: Vec<usize> = free.iter().map(|&x| self.sig.endo(x).range.len()).collect();
        let mut a: Vec<usize> = forced.iter().map(|f| f.unwrap_or(0)).collect();
        let mut n = 0;
        for digits in odometer(&radices) {
            for (&x, d) in free.iter().zip(digits) {
                a[x] = d;
            }
            if free.iter().all(|&x| self.output(x, ctx, &a) == a[x]) {
                n += 1;
                if n >= limit {
                    break;
                }
            }
        }
        n
    }

    pub fn solve(&self, iv: &Intervention, u: &Context) -> Result<SolutionSet> {
        let forced = iv.resolve(&self.sig)?;
        let ctx = u.resolve(&self.sig)?;
        Ok(SolutionSet {
            solutions: self
                .solve_indices(&forced, &ctx)
                .into_iter()
                .map(EndoAssignment::new)
                .collect(),
        })
    }

    /// Same tables over a signature with identical shape (used when a
    /// signature is renamed or rebuilt).
    pub fn with_signature(&self, sig: impl Into<Arc<Signature>>) -> Result<Self> {
        CausalModel::new(sig, self.tables.clone())
    }
}

/// The solutions of `T_{iv}(u)`.
pub fn solve(model: &CausalModel, iv: &Intervention, u: &Context) -> Result<SolutionSet> {
    model.solve(iv, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::Value;

    #[test]
    fn push_pull_solutions() {
        let m = fixtures::push_pull();
        let sols = m.solve(&Intervention::empty(), &Context::empty()).unwrap();
        assert_eq!(
            sols.to_named(m.signature()),
            vec![vec![("X".into(), "0".into()), ("Y".into(), "0".into())]]
        );
        let sols = m
            .solve(&Intervention::new([("X", "1")]), &Context::empty())
            .unwrap();
        assert_eq!(
            sols.to_named(m.signature()),
            vec![vec![("X".into(), "1".into()), ("Y".into(), "-1".into())]]
        );
    }

    #[test]
    fn copycat_has_two_solutions() {
        let m = fixtures::copycat();
        let sols = m.solve(&Intervention::empty(), &Context::empty()).unwrap();
        assert_eq!(sols.len(), 2);
        assert_eq!(sols.solutions[0].values, vec![0, 0]);
        assert_eq!(sols.solutions[1].values, vec![1, 1]);
    }

    #[test]
    fn full_intervention_is_effective() {
        let m = fixtures::xor3();
        let iv = Intervention::new([("X", "1"), ("Y", "0"), ("Z", "1")]);
        let sols = m.solve(&iv, &Context::empty()).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols.solutions[0].values, vec![1, 0, 1]);
    }

    #[test]
    fn solve_rejects_bad_queries() {
        let m = fixtures::copycat();
        assert!(m
            .solve(&Intervention::new([("X", "7")]), &Context::empty())
            .is_err());
        assert!(m
            .solve(
                &Intervention::empty(),
                &Context::new(vec![Value::from("0")])
            )
            .is_err());
    }

    #[test]
    fn new_checks_tables() {
        let m = fixtures::copycat();
        let mut tables = m.tables().to_vec();
        tables[0].outputs[0] = 5;
        assert!(CausalModel::new(m.shared_signature(), tables).is_err());
        assert!(CausalModel::new(m.shared_signature(), vec![]).is_err());
    }
}
