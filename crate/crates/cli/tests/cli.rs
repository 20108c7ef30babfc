//! End-to-end runs of the `causalog` binary against the files in `data/`.

use std::path::PathBuf;
use std::process::{Command, Output};

use causalog::checker::eval;
use causalog::lang::parse;
use causalog::model::file::load_model;
use causalog::{is_recursive, is_unique_solutions, DEFAULT_BUDGET};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causalog"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

#[test]
fn copycat_checks() {
    let m = data("copycat.model");
    assert_eq!(ok(&["check", &m, "[](X()=0 | X()=1)"]), "true\n");
    for f in ["[](X()=0)", "[](X()=1)", "[](!(X()=1))"] {
        assert_eq!(ok(&["check", &m, f]), "false\n", "{f}");
    }
}

#[test]
fn classification() {
    assert_eq!(ok(&["classify", &data("mod3.model")]), "UNIQ (not REC)\n");
    assert_eq!(
        ok(&["classify", &data("copycat.model")]),
        "ALL (not UNIQ)\n"
    );
    assert_eq!(
        ok(&["classify", &data("chain.model")]),
        "REC (order: X < Y)\n"
    );
}

#[test]
fn solve_under_intervention() {
    let m = data("push-pull.model");
    assert_eq!(ok(&["solve", &m]), "(X=0, Y=0)\n");
    assert_eq!(ok(&["solve", &m, "--intervene", "Y<-1"]), "(X=1, Y=1)\n");
    assert_eq!(
        ok(&["solve", &data("copycat.model")]),
        "(X=0, Y=0)\n(X=1, Y=1)\n"
    );
    assert_eq!(
        ok(&["solve", &data("chain.model"), "--context", "1"]),
        "(X=1, Y=1)\n"
    );
}

#[test]
fn affects_cycle() {
    let m = data("mod3.model");
    assert!(ok(&["affects", &m, "X0", "X1"]).starts_with("X0 affects X1\n"));
    assert_eq!(ok(&["affects", &m, "X1", "X0"]), "X1 does not affect X0\n");
}

#[test]
fn sat_verdicts_by_class() {
    let sig = data("two-binary.sig");
    let f = "[](X()=0) & [](X()=1)";
    for class in ["rec", "uniq"] {
        assert_eq!(ok(&["sat", "--class", class, "--sig", &sig, f]), "UNSAT\n");
    }
    assert!(ok(&["sat", "--class", "all", "--sig", &sig, f]).starts_with("SAT\n"));
}

#[test]
fn witness_files_reload_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let sig_path = data("three-binary.sig");
    let sig = causalog::model::file::load_signature(&sig_path).unwrap();
    let cases = [
        ("rec", "[X<-0](Z()=1) & [X<-1](Z()=0)"),
        ("uniq", "[X<-1](Y()=1) & [Y<-1](X()=0)"),
        ("all", "<X<-0>(Y()=0) & <X<-0>(Y()=1)"),
    ];
    for (i, (class, text)) in cases.into_iter().enumerate() {
        let path = dir.path().join(format!("w{i}.model"));
        let p = path.display().to_string();
        let out = ok(&[
            "sat", "--class", class, "--sig", &sig_path, "--out", &p, text,
        ]);
        assert!(out.starts_with("SAT\n"), "{class}: {out}");
        let m = load_model(&path).unwrap();
        assert!(
            eval(&m, &parse(text, &sig).unwrap()).unwrap(),
            "{class}: {text}"
        );
        match class {
            "rec" => assert!(is_recursive(&m).is_some()),
            "uniq" => assert!(is_unique_solutions(&m, DEFAULT_BUDGET).unwrap()),
            _ => {}
        }
    }
}

#[test]
fn validity_and_countermodel() {
    let sig = data("two-binary.sig");
    assert_eq!(
        ok(&[
            "valid",
            "--class",
            "uniq",
            "--sig",
            &sig,
            "[](X()=0) | [](X()=1)"
        ]),
        "VALID\n"
    );
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("counter.model");
    let p = path.display().to_string();
    let text = "[](X()=0) | [](X()=1)";
    let out = ok(&["valid", "--class", "all", "--sig", &sig, "--out", &p, text]);
    assert!(out.starts_with("INVALID\n"));
    let m = load_model(&path).unwrap();
    assert!(!eval(&m, &parse(text, m.signature()).unwrap()).unwrap());
}

#[test]
fn output_is_deterministic() {
    let sig = data("three-binary.sig");
    let args = [
        "sat",
        "--class",
        "all",
        "--sig",
        &sig,
        "--parallel",
        "4",
        "<X<-0>(Y()=0) & <X<-0>(Y()=1)",
    ];
    let first = ok(&args);
    assert_eq!(ok(&args), first);
    let sequential = ok(&[
        "sat",
        "--class",
        "all",
        "--sig",
        &sig,
        "<X<-0>(Y()=0) & <X<-0>(Y()=1)",
    ]);
    assert_eq!(sequential, first);
}

#[test]
fn formula_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    std::fs::write(&path, "[](X()=0 | X()=1)\n").unwrap();
    let arg = format!("@{}", path.display());
    assert_eq!(ok(&["check", &data("copycat.model"), &arg]), "true\n");
    assert_eq!(ok(&["parse", &arg]), "[](X()=0 | X()=1)\nlanguage: PLUS\n");
}

#[test]
fn axiom_report() {
    let out = ok(&[
        "axioms",
        "--sig",
        &data("two-binary.sig"),
        "--class",
        "uniq",
        "--scheme",
        "C1,C2,C5",
    ]);
    assert_eq!(out.lines().count(), 3);
    assert!(out.lines().all(|l| l.contains(": holds on UNIQ")), "{out}");
    let all = ok(&[
        "axioms",
        "--sig",
        &data("two-binary.sig"),
        "--class",
        "all",
        "--scheme",
        "C5",
    ]);
    assert!(all.starts_with("C5: FAILS on ALL"), "{all}");
    assert!(all.contains("  instance: "));
}

#[test]
fn reductions_and_encodings() {
    let out = ok(&[
        "reduce",
        "--sig",
        &data("three-binary.sig"),
        "[X<-0](Y()=1)",
    ]);
    assert_eq!(
        out,
        "# formula: [X<-0](Y(_)=1)\nexogenous U* : _\nendogenous X : 0 1\nendogenous Y : 0 1\n"
    );
    let plus = ok(&[
        "reduce",
        "--plus",
        "--sig",
        &data("three-binary.sig"),
        "[X<-0](X()=0)",
    ]);
    assert!(plus.contains("endogenous X* : 0 1"), "{plus}");

    let dir = tempfile::tempdir().unwrap();
    let sig_path = dir.path().join("cnf.sig");
    let s = sig_path.display().to_string();
    let formula = ok(&["cnf2gp", &data("sample.cnf"), "--out", &s]);
    assert_eq!(
        formula,
        "[](Y1()=1 & Y2()=1) & [X1<-0;X2<-1;X3<-0](Y1()=0) & [X1<-1;X2<-0;X3<-1](Y2()=0)\n"
    );
    let verdict = ok(&["sat", "--class", "rec", "--sig", &s, formula.trim()]);
    assert!(verdict.starts_with("SAT\n"));
}

#[test]
fn projection_onto_reduced_signature() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.model");
    let p = path.display().to_string();
    ok(&[
        "project",
        "--mode",
        "rec",
        "--out",
        &p,
        &data("chain.model"),
        "[](Y(1)=1)",
    ]);
    let reduced = load_model(&path).unwrap();
    assert_eq!(reduced.signature().num_endo(), 1);
    assert!(eval(&reduced, &parse("[](Y(1)=1)", reduced.signature()).unwrap()).unwrap());

    let out = ok(&[
        "project",
        "--mode",
        "uniq",
        &data("mod3.model"),
        "[](X0()=0)",
    ]);
    assert!(out.contains("endogenous X0 : 0 1 2"));
    let not_rec = run(&[
        "project",
        "--mode",
        "rec",
        &data("mod3.model"),
        "[](X0()=0)",
    ]);
    assert_eq!(not_rec.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let over = run(&[
        "--budget",
        "10",
        "sat",
        "--class",
        "uniq",
        "--sig",
        &data("three-binary.sig"),
        "[X<-0](Z()=1)",
    ]);
    assert_eq!(over.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&over.stderr).contains("budget exceeded"));

    let unknown = run(&["check", &data("copycat.model"), "[](Q()=0)"]);
    assert_eq!(unknown.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.model");
    std::fs::write(&bad, "endogenous X : 0 1\neq X():\n  () -> 2\n").unwrap();
    let out = run(&["classify", &bad.display().to_string()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.model") && err.contains("line 3"), "{err}");

    let missing = run(&["classify", "/nonexistent/file.model"]);
    assert_eq!(missing.status.code(), Some(1));
}
