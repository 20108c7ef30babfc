//! `causalog`: command-line access to model files, formulas, the deciders
//! and the axiom checker.
//!
//! Exit codes: 0 when the query was answered (whatever the verdict), 1 on
//! input errors, 2 when a budget is exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use causalog::axioms::{check_entailment, AxiomId};
use causalog::checker::{affects, eval};
use causalog::decide::{
    cnf_to_lgp, parse_dimacs, project_model_rec, project_model_uniq, transform_finite1a, Direction,
    Reduction, SatOptions, SatWitness, Strategy,
};
use causalog::lang::{classify_language, parse, parse_unchecked, Formula};
use causalog::model::file::{load_model, load_signature, write_model, write_signature};
use causalog::{
    is_recursive, is_unique_solutions, sat, valid, CausalModel, Context, Error, Intervention,
    ModelClass, Signature,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "causalog",
    version,
    about = "Exact reasoning about finite causal models"
)]
struct Cli {
    /// Step budget for enumeration and search.
    #[arg(long, global = true, default_value_t = causalog::DEFAULT_BUDGET)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a formula in canonical form with its language class.
    Parse {
        /// Validate against this signature (or model) file.
        #[arg(long)]
        sig: Option<PathBuf>,
        /// Formula text, or `@path` to read it from a file.
        formula: String,
    },
    /// Print every solution of a submodel.
    Solve {
        model: PathBuf,
        /// Settings such as `X<-1;Y<-0`.
        #[arg(long, default_value = "")]
        intervene: String,
        /// Comma-separated exogenous values in declaration order.
        #[arg(long, default_value = "")]
        context: String,
    },
    /// Evaluate a formula in a model.
    Check { model: PathBuf, formula: String },
    /// Report the smallest model class containing a model.
    Classify { model: PathBuf },
    /// Decide whether `y` affects `z` in a model.
    Affects {
        model: PathBuf,
        y: String,
        z: String,
    },
    /// Decide satisfiability in a model class.
    Sat(Query),
    /// Decide validity in a model class.
    Valid(Query),
    /// Check axiom schemes on every model of a class.
    Axioms {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long, value_enum, default_value_t = ClassArg::Uniq)]
        class: ClassArg,
        /// Schemes to check, e.g. `C3`, `C6(2)`, `Ord(X<Y)`; all standard
        /// schemes when omitted.
        #[arg(long = "scheme", value_delimiter = ',')]
        schemes: Vec<String>,
        /// Only models satisfying these schemes are examined.
        #[arg(long = "given", value_delimiter = ',')]
        given: Vec<String>,
        /// Longest chain for the parameterized schemes.
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Print the reduced signature for a formula, with the rewritten formula
    /// as a leading comment.
    Reduce {
        #[arg(long)]
        sig: PathBuf,
        /// Use the general-class reduction, which may add `X*`.
        #[arg(long)]
        plus: bool,
        formula: String,
    },
    /// Encode a DIMACS 3-CNF file as a conjunction of boxes.
    Cnf2gp {
        cnf: PathBuf,
        /// Write the signature here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transform a model between a signature and its reduction.
    Project {
        #[arg(long, value_enum)]
        mode: ProjectMode,
        /// The original signature; required for `from-plus`.
        #[arg(long)]
        original: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        model: PathBuf,
        formula: String,
    },
}

#[derive(clap::Args)]
struct Query {
    /// Signature (or model) file.
    #[arg(long)]
    sig: PathBuf,
    #[arg(long, value_enum, default_value_t = ClassArg::Uniq)]
    class: ClassArg,
    /// Enumerate over the queried signature instead of the reduced one.
    #[arg(long)]
    exact: bool,
    /// Worker threads for enumeration (0 = one per core).
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Write the witness model here instead of printing it.
    #[arg(long)]
    out: Option<PathBuf>,
    formula: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Rec,
    Uniq,
    All,
}

impl From<ClassArg> for ModelClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Rec => ModelClass::Rec,
            ClassArg::Uniq => ModelClass::Uniq,
            ClassArg::All => ModelClass::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProjectMode {
    /// Recursive model onto the reduced signature.
    Rec,
    /// Unique-solution model onto the reduced signature.
    Uniq,
    /// Any model onto the general-class reduced signature.
    ToPlus,
    /// A model over the general-class reduced signature back to the original.
    FromPlus,
}

/// A failure with the file it came from, if any.
struct Failure {
    source: Option<String>,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure {
            source: None,
            error,
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn at<T>(path: &Path, r: causalog::Result<T>) -> CliResult<T> {
    r.map_err(|error| Failure {
        source: Some(path.display().to_string()),
        error,
    })
}

fn input_error(message: String) -> Failure {
    Failure::from(Error::Unsupported(message))
}

fn model_at(path: &Path) -> CliResult<CausalModel> {
    at(path, load_model(path))
}

fn sig_at(path: &Path) -> CliResult<Signature> {
    at(path, load_signature(path))
}

/// Formula text inline, or read from `@path`.
fn formula_text(arg: &str) -> CliResult<(String, Option<PathBuf>)> {
    match arg.strip_prefix('@') {
        Some(path) => {
            let path = PathBuf::from(path);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
            Ok((text.trim().to_string(), Some(path)))
        }
        None => Ok((arg.to_string(), None)),
    }
}

fn formula_over(arg: &str, sig: &Signature) -> CliResult<Formula> {
    let (text, path) = formula_text(arg)?;
    let r = parse(&text, sig);
    match path {
        Some(p) => at(&p, r),
        None => Ok(r?),
    }
}

fn parse_intervention(text: &str) -> CliResult<Intervention> {
    let mut settings = Vec::new();
    for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = part.split_once("<-").ok_or_else(|| {
            Failure::from(Error::InvalidIntervention(format!(
                "`{part}` is not `X<-v`"
            )))
        })?;
        settings.push((name.trim().to_string(), value.trim().to_string()));
    }
    Ok(Intervention::new(settings))
}

fn order_names(sig: &Signature, order: &[usize]) -> String {
    order
        .iter()
        .map(|&x| sig.endo(x).name.as_str())
        .collect::<Vec<_>>()
        .join(" < ")
}

/// Writes `model` to `out`, or appends it to the report.
fn emit_model(report: &mut String, model: &CausalModel, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => {
            std::fs::write(path, write_model(model))
                .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
            let _ = writeln!(report, "# model written to {}", path.display());
        }
        None => report.push_str(&write_model(model)),
    }
    Ok(())
}

fn emit_witness(report: &mut String, w: &SatWitness, out: Option<&Path>) -> CliResult<()> {
    if let Some(order) = &w.order {
        let _ = writeln!(report, "# order: {}", order.join(" < "));
    }
    match &w.model {
        Some(m) => emit_model(report, m, out),
        None => {
            report.push_str(
                "# the witness over the queried signature exceeds the budget; reduced witness:\n",
            );
            match &w.reduced_model {
                Some(m) => report.push_str(&write_model(m)),
                None => report.push_str("# (none)\n"),
            }
            Ok(())
        }
    }
}

fn options(q: &Query, budget: u64) -> SatOptions {
    SatOptions {
        budget,
        strategy: if q.exact {
            Strategy::Original
        } else {
            Strategy::Reduced
        },
        threads: q.parallel,
    }
}

/// Runs a query; a reduced-signature witness that fails to carry back is
/// reported and the query is retried over the queried signature.
fn with_fallback<T>(
    mut opts: SatOptions,
    run: impl Fn(&SatOptions) -> causalog::Result<T>,
) -> CliResult<T> {
    match run(&opts) {
        Err(Error::WitnessRejected(why)) if opts.strategy == Strategy::Reduced => {
            eprintln!("note: {why}; retrying over the queried signature");
            opts.strategy = Strategy::Original;
            Ok(run(&opts)?)
        }
        r => Ok(r?),
    }
}

fn run(cli: Cli) -> CliResult<String> {
    let budget = cli.budget;
    let mut out = String::new();
    match cli.command {
        Command::Parse { sig, formula } => {
            let f = match sig {
                Some(path) => formula_over(&formula, &sig_at(&path)?)?,
                None => {
                    let (text, path) = formula_text(&formula)?;
                    match path {
                        Some(p) => at(&p, parse_unchecked(&text))?,
                        None => parse_unchecked(&text)?,
                    }
                }
            };
            let _ = writeln!(out, "{f}");
            let _ = writeln!(out, "language: {}", classify_language(&f));
        }
        Command::Solve {
            model,
            intervene,
            context,
        } => {
            let m = model_at(&model)?;
            let iv = parse_intervention(&intervene)?;
            let sols = m.solve(&iv, &Context::parse_list(&context))?;
            if sols.is_empty() {
                out.push_str("no solutions\n");
            }
            for s in sols.iter() {
                let _ = writeln!(out, "{}", s.display(m.signature()));
            }
        }
        Command::Check { model, formula } => {
            let m = model_at(&model)?;
            let f = formula_over(&formula, m.signature())?;
            let _ = writeln!(out, "{}", eval(&m, &f)?);
        }
        Command::Classify { model } => {
            let m = model_at(&model)?;
            let line = match is_recursive(&m) {
                Some(order) => format!("REC (order: {})", order_names(m.signature(), &order)),
                None if is_unique_solutions(&m, budget)? => "UNIQ (not REC)".to_string(),
                None => "ALL (not UNIQ)".to_string(),
            };
            let _ = writeln!(out, "{line}");
        }
        Command::Affects { model, y, z } => {
            let m = model_at(&model)?;
            match affects(&m, &y, &z)? {
                Some(w) => {
                    let _ = writeln!(out, "{y} affects {z}");
                    let _ = writeln!(
                        out,
                        "  in context ({}), [{}] gives {z}={}; adding {y}<-{} gives {z}={}",
                        w.context, w.fixed, w.z, w.y_value, w.z_prime
                    );
                }
                None => {
                    let _ = writeln!(out, "{y} does not affect {z}");
                }
            }
        }
        Command::Sat(q) => {
            let sig = sig_at(&q.sig)?;
            let f = formula_over(&q.formula, &sig)?;
            let class = ModelClass::from(q.class);
            let w = with_fallback(options(&q, budget), |o| sat(&f, &sig, class, o))?;
            let _ = writeln!(out, "{}", w.verdict);
            if w.is_sat() {
                emit_witness(&mut out, &w, q.out.as_deref())?;
            }
        }
        Command::Valid(q) => {
            let sig = sig_at(&q.sig)?;
            let f = formula_over(&q.formula, &sig)?;
            let class = ModelClass::from(q.class);
            let v = with_fallback(options(&q, budget), |o| valid(&f, &sig, class, o))?;
            if v.valid {
                out.push_str("VALID\n");
            } else {
                out.push_str("INVALID\n# countermodel\n");
                emit_witness(&mut out, &v.refutation, q.out.as_deref())?;
            }
        }
        Command::Axioms {
            sig,
            class,
            schemes,
            given,
            k,
        } => {
            let s = sig_at(&sig)?;
            let ids = |names: &[String]| -> CliResult<Vec<AxiomId>> {
                names
                    .iter()
                    .map(|n| {
                        AxiomId::parse(n)
                            .ok_or_else(|| input_error(format!("unknown scheme `{n}`")))
                    })
                    .collect()
            };
            let ids_to_check = if schemes.is_empty() {
                AxiomId::standard(k)
            } else {
                ids(&schemes)?
            };
            let premises = ids(&given)?;
            let class = ModelClass::from(class);
            for id in &ids_to_check {
                let r = check_entailment(&premises, id, class, &s, budget)?;
                let verdict = if r.holds_on_all { "holds" } else { "FAILS" };
                let _ = writeln!(
                    out,
                    "{id}: {verdict} on {class} ({} models, {} instances)",
                    r.models, r.instances
                );
                if let Some((m, inst)) = &r.counterexample {
                    let _ = writeln!(out, "  instance: {}", inst.formula);
                    for line in write_model(m).lines() {
                        let _ = writeln!(out, "  | {line}");
                    }
                }
            }
        }
        Command::Reduce { sig, plus, formula } => {
            let s = sig_at(&sig)?;
            let f = formula_over(&formula, &s)?;
            let red = if plus {
                Reduction::finite1a(&f, &s)?
            } else {
                Reduction::finite1(&f, &s)?
            };
            let _ = writeln!(out, "# formula: {}", red.formula);
            out.push_str(&write_signature(&red.reduced));
        }
        Command::Cnf2gp { cnf, out: sig_out } => {
            let text = std::fs::read_to_string(&cnf)
                .map_err(|e| input_error(format!("{}: {e}", cnf.display())))?;
            let instance = at(&cnf, parse_dimacs(&text))?;
            let (f, s) = cnf_to_lgp(&instance)?;
            let _ = writeln!(out, "{f}");
            match sig_out {
                Some(path) => std::fs::write(&path, write_signature(&s))
                    .map_err(|e| input_error(format!("{}: {e}", path.display())))?,
                None => out.push_str(&write_signature(&s)),
            }
        }
        Command::Project {
            mode,
            original,
            out: model_out,
            model,
            formula,
        } => {
            let m = model_at(&model)?;
            let projected = match mode {
                ProjectMode::Rec => project_model_rec(&m, &formula_over(&formula, m.signature())?)?,
                ProjectMode::Uniq => {
                    project_model_uniq(&m, &formula_over(&formula, m.signature())?)?
                }
                ProjectMode::ToPlus => {
                    let f = formula_over(&formula, m.signature())?;
                    transform_finite1a(&m, &f, m.signature(), Direction::ToReduced)?
                }
                ProjectMode::FromPlus => {
                    let path = original.ok_or_else(|| {
                        input_error("`--mode from-plus` needs `--original`".into())
                    })?;
                    let s = sig_at(&path)?;
                    let f = formula_over(&formula, &s)?;
                    transform_finite1a(&m, &f, &s, Direction::FromReduced)?
                }
            };
            emit_model(&mut out, &projected, model_out.as_deref())?;
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(Failure { source, error }) => {
            match source {
                Some(s) => eprintln!("error: {s}: {error}"),
                None => eprintln!("error: {error}"),
            }
            ExitCode::from(if error.is_budget() { 2 } else { 1 })
        }
    }
}
