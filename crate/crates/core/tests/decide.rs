mod common;

use std::sync::Arc;

use causalog::checker::eval;
use causalog::decide::*;
use causalog::fixtures::{binary_signature, binary_signature_with_context, mod3, push_pull, xor3};
use causalog::lang::parse;
use causalog::model::{enumerate_models, is_recursive, ModelClass, Signature};
use causalog::DEFAULT_BUDGET;
use common::*;

fn corpus() -> Vec<(Formula, Signature)> {
    let mut rng = rng(7);
    let mut out = Vec::new();
    for i in 0..240 {
        let sig = if i % 2 == 0 {
            binary_signature(3)
        } else {
            binary_signature_with_context(2)
        };
        out.push((random_formula(&mut rng, &sig, 2), sig));
    }
    out
}

use causalog::lang::Formula;

#[test]
fn deciders_match_brute_force_enumeration() {
    for (f, sig) in corpus() {
        let rec = sat_rec(&f, &sig, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            rec.is_sat(),
            brute_sat(&f, &sig, ModelClass::Rec),
            "REC {f}"
        );
        let uniq = sat_enum(&f, &sig, ModelClass::Uniq, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            uniq.is_sat(),
            brute_sat(&f, &sig, ModelClass::Uniq),
            "UNIQ {f}"
        );
        for w in [&rec, &uniq] {
            if let Some(m) = &w.model {
                assert!(eval(m, &f).unwrap());
            }
        }
        if let Some(m) = &rec.model {
            assert!(is_recursive(m).is_some());
        }
    }
}

#[test]
fn verdicts_are_monotone_in_the_class() {
    for (f, sig) in corpus() {
        let rec = sat_rec(&f, &sig, DEFAULT_BUDGET).unwrap().is_sat();
        let uniq = sat_enum(&f, &sig, ModelClass::Uniq, DEFAULT_BUDGET)
            .unwrap()
            .is_sat();
        let all = sat_enum(&f, &sig, ModelClass::All, DEFAULT_BUDGET)
            .unwrap()
            .is_sat();
        assert!(!rec || uniq, "{f}");
        assert!(!uniq || all, "{f}");
    }
}

#[test]
fn reduction_preserves_rec_and_uniq_satisfiability() {
    for (f, sig) in corpus().into_iter().take(120) {
        let red = Reduction::finite1(&f, &sig).unwrap();
        for class in [ModelClass::Rec, ModelClass::Uniq] {
            assert_eq!(
                brute_sat(&f, &sig, class),
                brute_sat(&red.formula, &red.reduced, class),
                "{class} {f}"
            );
        }
    }
}

#[test]
fn validity_is_dual_to_satisfiability() {
    for (f, sig) in corpus().into_iter().take(60) {
        for class in [ModelClass::Rec, ModelClass::Uniq] {
            let opts = SatOptions::default();
            let v = valid(&f, &sig, class, &opts).unwrap();
            assert_eq!(
                v.valid,
                !sat(&f.clone().not(), &sig, class, &opts).unwrap().is_sat()
            );
            let not_f = f.clone().not();
            assert_eq!(
                sat(&f, &sig, class, &opts).unwrap().is_sat(),
                !valid(&not_f, &sig, class, &opts).unwrap().valid
            );
            if let Some(m) = v.countermodel() {
                assert!(!eval(m, &f).unwrap());
            }
        }
    }
}

#[test]
fn the_general_class_needs_an_extra_variable() {
    let sig = binary_signature(3);
    let f = parse("<X<-0>(Y()=0) & <X<-0>(Y()=1)", &sig).unwrap();
    assert!(eval(&xor3(), &f).unwrap());
    let w = sat_enum(&f, &sig, ModelClass::All, DEFAULT_BUDGET).unwrap();
    assert!(eval(w.model.as_ref().unwrap(), &f).unwrap());
    let red = Reduction::finite1(&f, &sig).unwrap();
    assert!(!brute_sat(&red.formula, &red.reduced, ModelClass::All));
    let plus = Reduction::finite1a(&f, &sig).unwrap();
    assert!(brute_sat(&plus.formula, &plus.reduced, ModelClass::All));
}

#[test]
fn guarded_reduction_misses_models_with_empty_submodels() {
    // SAT over S (X constant, Y and Z chase each other): the intervened
    // submodel has no solution. Over S_φ⁺ every X-intervened submodel has one.
    let sig = binary_signature(3);
    let f = parse("[X<-0](X()=0 & X()=1)", &sig).unwrap();
    assert!(finite1a_guard(&f, &sig).unwrap());
    assert!(brute_sat(&f, &sig, ModelClass::All));
    assert!(!sat_enum(&f, &sig, ModelClass::All, DEFAULT_BUDGET)
        .unwrap()
        .is_sat());
    let exact = SatOptions {
        strategy: Strategy::Original,
        ..SatOptions::default()
    };
    let w = sat_enum_with(&f, &sig, ModelClass::All, &exact).unwrap();
    assert!(eval(w.model.as_ref().unwrap(), &f).unwrap());
}

#[test]
fn cnf_encoding_matches_truth_tables() {
    let mut rng = rng(11);
    for _ in 0..100 {
        let cnf = random_cnf(&mut rng, 4, 6);
        let (f, sig) = cnf_to_lgp(&cnf).unwrap();
        let expected = truth_table_sat(cnf.num_props, |a| cnf.evaluate(a));
        assert_eq!(
            sat_rec(&f, &sig, DEFAULT_BUDGET).unwrap().is_sat(),
            expected,
            "{cnf}"
        );
    }
}

#[test]
fn propositional_embedding_matches_truth_tables() {
    let mut rng = rng(13);
    for _ in 0..50 {
        let p = random_prop(&mut rng, 3, 3);
        let (f, sig) = prop_to_luniq(&p).unwrap();
        let expected = truth_table_sat(p.num_props(), |a| p.evaluate(a));
        assert_eq!(
            sat_rec(&f, &sig, DEFAULT_BUDGET).unwrap().is_sat(),
            expected,
            "{p}"
        );
    }
}

fn kept_and_contexts(
    red: &Reduction,
) -> (Vec<usize>, Vec<Vec<usize>>, Vec<usize>, Vec<Vec<usize>>) {
    let reduced_kept: Vec<usize> = (0..red.kept.len()).collect();
    let reduced_ctx: Vec<Vec<usize>> = (0..red.contexts.len()).map(|u| vec![u]).collect();
    (
        red.kept.clone(),
        red.contexts.clone(),
        reduced_kept,
        reduced_ctx,
    )
}

#[test]
fn rec_projection_preserves_restricted_solutions() {
    let sig = binary_signature(3);
    for text in [
        "[X<-0](Z()=1)",
        "[](X()=0 | Y()=1)",
        "[](Y()=0)",
        "[](X()=0 & Y()=0 & Z()=1)",
    ] {
        let f = parse(text, &sig).unwrap();
        let red = Reduction::finite1(&f, &sig).unwrap();
        let (k, c, rk, rc) = kept_and_contexts(&red);
        for m in enumerate_models(sig.clone(), ModelClass::Rec, u64::MAX).unwrap() {
            let p = project_model_rec(&m, &f).unwrap();
            assert!(is_recursive(&p).is_some());
            assert_eq!(
                restricted_solutions(&p, &rk, &rc),
                restricted_solutions(&m, &k, &c),
                "{text}"
            );
        }
    }
}

#[test]
fn uniq_projection_preserves_restricted_solutions() {
    let mut models = vec![push_pull(), mod3()];
    models.extend(enumerate_models(binary_signature(3), ModelClass::Uniq, u64::MAX).unwrap());
    for m in models {
        let sig = m.signature().clone();
        let a = &sig.endo(0);
        let b = &sig.endo(sig.num_endo() - 1);
        for text in [
            format!("[]({}()={})", a.name, a.range[0]),
            format!("[{}<-{}]({}()={})", a.name, a.range[1], b.name, b.range[0]),
        ] {
            let f = parse(&text, &sig).unwrap();
            let red = Reduction::finite1(&f, &sig).unwrap();
            let (k, c, rk, rc) = kept_and_contexts(&red);
            let p = project_model_uniq(&m, &f).unwrap();
            assert_eq!(
                restricted_solutions(&p, &rk, &rc),
                restricted_solutions(&m, &k, &c),
                "{text}"
            );
        }
    }
}

#[test]
fn projections_reject_models_outside_their_class() {
    let f = parse("[](X()=0)", push_pull().signature()).unwrap();
    assert!(matches!(
        project_model_rec(&push_pull(), &f),
        Err(causalog::Error::NotRecursive)
    ));
    let c = causalog::fixtures::copycat();
    let g = parse("[](X()=0)", c.signature()).unwrap();
    assert!(matches!(
        project_model_uniq(&c, &g),
        Err(causalog::Error::NotUniqueSolutions)
    ));
}

#[test]
fn finite1a_transforms_on_unique_solution_models() {
    // The guard fires: three binary variables, formula mentions one.
    let sig = binary_signature(3);
    let f = parse("[X<-0](X()=0)", &sig).unwrap();
    let red = Reduction::finite1a(&f, &sig).unwrap();
    assert!(red.star.is_some());
    let (k, c, rk, rc) = kept_and_contexts(&red);
    for m in enumerate_models(sig.clone(), ModelClass::Uniq, u64::MAX).unwrap() {
        let t = transform_finite1a(&m, &f, &sig, Direction::ToReduced).unwrap();
        assert_eq!(
            restricted_solutions(&t, &rk, &rc),
            restricted_solutions(&m, &k, &c)
        );
        let back = transform_finite1a(&t, &f, &sig, Direction::FromReduced).unwrap();
        assert_eq!(eval(&back, &f).unwrap(), eval(&m, &f).unwrap());
    }
    for m in enumerate_models(Arc::clone(&red.reduced), ModelClass::All, u64::MAX).unwrap() {
        let back = transform_finite1a(&m, &f, &sig, Direction::FromReduced).unwrap();
        assert_eq!(
            restricted_solutions(&back, &k, &c),
            restricted_solutions(&m, &rk, &rc)
        );
    }
}

#[test]
fn sat_rec_is_deterministic() {
    for (f, sig) in corpus().into_iter().take(30) {
        let a = sat_rec(&f, &sig, DEFAULT_BUDGET).unwrap();
        let b = sat_rec(&f, &sig, DEFAULT_BUDGET).unwrap();
        assert_eq!(a.order, b.order);
        assert_eq!(
            a.model.map(|m| m.into_tables()),
            b.model.map(|m| m.into_tables())
        );
    }
}
