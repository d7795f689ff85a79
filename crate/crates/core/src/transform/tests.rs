use super::*;
use crate::calculus::{preset, CalculusSpec};
use crate::checker::check;
use crate::parser::{parse_derivation, parse_formula, parse_sequent};
use crate::search::{prove, SearchLimits, SearchOutcome};

fn spec(name: &str) -> CalculusSpec {
    preset(name).unwrap().spec
}

fn proved(goal: &str, name: &str) -> Derivation {
    match prove(&parse_sequent(goal).unwrap(), &spec(name), &SearchLimits::depth(4)) {
        SearchOutcome::Proved(d) => d,
        other => panic!("{goal} in {name}: {other:?}"),
    }
}

#[test]
fn weakening_keeps_height() {
    let d = proved("|- t = t", "R12r");
    let r = weaken_hp(&d, &parse_formula("Q(a)").unwrap(), Side::Antecedent, &spec("R12r")).unwrap();
    assert_eq!(r.output.sequent, parse_sequent("Q(a) |- t = t").unwrap());
    assert_eq!(r.output_height, 0);
    let d = proved("a = c, b = c |- a = b", "R12r");
    let r = weaken_hp(&d, &parse_formula("c = c").unwrap(), Side::Antecedent, &spec("R12r")).unwrap();
    assert_eq!((r.input_height, r.output_height), (1, 1));
}

#[test]
fn weakening_renames_clashing_eigenparameters() {
    let d = parse_derivation("(rforall [0;eigen=b] \"|- forall x. x = x\"\n  (refax [0] \"|- b = b\"))").unwrap();
    let s = spec("R12r@c");
    assert!(check(&d, &s).valid);
    let r = weaken_hp(&d, &parse_formula("P(b)").unwrap(), Side::Antecedent, &s).unwrap();
    assert_ne!(r.output.rule.eigen.as_deref(), Some("b"));
    assert_eq!(r.output_height, 1);
}

#[test]
fn projection_contracts_duplicates() {
    let d = proved("a = b |- b = a, b = a", "R12r");
    let (a, r) = project_succedent(&d, &spec("R12r")).unwrap();
    assert_eq!(a, parse_formula("b = a").unwrap());
    assert_eq!(r.output.sequent, parse_sequent("a = b |- b = a").unwrap());
    assert_eq!(r.output_height, r.input_height);
    assert!(project_succedent(&d, &spec("R12r@c")).is_err());
}

#[test]
fn projection_through_discarded_rewrites_can_lose_height() {
    let d =
        parse_derivation("(rep1r [op=0;ctx=0;at=0] \"a = b |- P(b), t = t\"\n  (refax [1] \"a = b |- P(a), t = t\"))")
            .unwrap();
    let (a, r) = project_succedent(&d, &spec("R12r")).unwrap();
    assert_eq!(a, parse_formula("t = t").unwrap());
    assert_eq!((r.input_height, r.output_height), (1, 0));
}

const SYMM: &str = "(symm [0] \"s = r |- r = s\"\n  (init [0;0] \"r = s |- r = s\"))";

fn with_symm() -> CalculusSpec {
    CalculusSpec::equality([RuleId::RefAx, RuleId::Symm])
}

#[test]
fn symmetry_through_rep1r_and_cut() {
    let d = parse_derivation(SYMM).unwrap();
    let r = equivalence_translate(
        &d,
        &with_symm(),
        &CalculusSpec::equality([RuleId::RefAx, RuleId::Rep1R]),
    )
    .unwrap();
    let counts = r.output.rule_counts();
    assert_eq!(counts[&RuleId::Cut], 1);
    assert_eq!(counts[&RuleId::Rep1R], 1);
    assert_eq!(r.output.children[0].sequent, parse_sequent("s = r |- r = s").unwrap());
}

#[test]
fn symmetry_through_left_rules() {
    let d = parse_derivation(SYMM).unwrap();
    for (rule, n) in [
        (RuleId::Rep1L, 2),
        (RuleId::Rep2L, 2),
        (RuleId::Rep, 1),
        (RuleId::RepPrime, 1),
    ] {
        let to = CalculusSpec::equality([RuleId::RefL, rule]);
        let r = equivalence_translate(&d, &with_symm(), &to).unwrap();
        let counts = r.output.rule_counts();
        assert_eq!(counts[&rule], n, "{rule}");
        assert_eq!(counts[&RuleId::RefL], 1);
        assert!(!counts.contains_key(&RuleId::Cut), "{rule}");
    }
    let r = equivalence_translate(&d, &with_symm(), &spec("CngOnly")).unwrap();
    assert_eq!(r.output.rule_counts()[&RuleId::CNG], 1);
}

#[test]
fn translation_between_equivalent_presets() {
    let goals = [
        "a = b |- b = a",
        "a = c, b = c |- a = b",
        "a = b, P(a) |- P(b)",
        "a = b, b = c |- f(a) = f(c)",
        "a = b, P(f(b)) |- P(f(a))",
    ];
    let names = [
        "R12r",
        "R12rl",
        "R1rl",
        "R2rl",
        "RefRep",
        "RefRep2L",
        "CngOnly",
        "EqCutFree",
        "R2rlPlus",
    ];
    for g in goals {
        for from in names {
            let lim = SearchLimits::depth(5);
            let SearchOutcome::Proved(d) = prove(&parse_sequent(g).unwrap(), &spec(from), &lim) else {
                continue;
            };
            for to in names {
                let r = equivalence_translate(&d, &spec(from), &spec(to))
                    .unwrap_or_else(|e| panic!("{g}: {from} -> {to}: {e}"));
                assert_eq!(r.output.sequent, d.sequent);
            }
        }
    }
}

#[test]
fn function_free_orientation() {
    for (goal, height) in [
        ("b = a |- a = b", 1),
        ("a = c, b = c |- a = b", 3),
        ("P(a), a = b |- P(b)", 1),
    ] {
        let r = orient_function_free(&parse_sequent(goal).unwrap()).unwrap();
        assert!(r.output_height <= height, "{goal}: {}", r.output_height);
        assert!(r
            .output
            .rule_counts()
            .keys()
            .all(|k| !matches!(k, RuleId::Rep1R | RuleId::Rep1L)));
    }
    let r = orient_function_free(&parse_sequent("a = b |- P(a)").unwrap());
    assert!(matches!(r, Err(TransformError::Underivable(_))));
}

#[test]
fn splitting_multiple_occurrences() {
    let d = parse_derivation(
        "(rep2r [op=0;ctx=0;at=0.0/1.0] \"a = b |- f(a) = f(a)\"\n  (refax [0] \"a = b |- f(b) = f(b)\"))",
    )
    .unwrap();
    let r = single_occurrence_normalize(&d, &spec("R12r")).unwrap();
    assert_eq!(r.output_height, 2);
    assert_eq!(r.output.rule_counts()[&RuleId::Rep2R], 2);
    let d = parse_derivation(
        "(rep [op=0;ctx=1;at=0.0/1] \"a = b, f(a) = a |- c = c\"\n  (refax [0] \"a = b, f(a) = a, f(b) = b |- c = c\"))",
    )
    .unwrap();
    let r = single_occurrence_normalize(&d, &spec("RefRep").with_rules([RuleId::RefAx])).unwrap();
    assert_eq!(r.output_height, 2);
    let r2 = single_occurrence_normalize(&r.output, &spec("RefRep").with_rules([RuleId::RefAx])).unwrap();
    assert_eq!(r2.output, r.output);
}

#[test]
fn right_normalization() {
    let d = proved("a = b |- b = a", "R12r");
    let r = right_normalize(&d).unwrap();
    assert!(check(&r.output, &spec("R12r_eqr")).valid);
    let d = parse_derivation("(rep2r [op=0;ctx=0;at=0] \"a = b |- a = b\"\n  (refax [0] \"a = b |- b = b\"))").unwrap();
    let r = right_normalize(&d).unwrap();
    assert_eq!(r.output.rule.rule, RuleId::Rep1R);
    assert_eq!(r.output.rule.replacement.as_ref().unwrap().paths, vec![vec![1]]);
    assert_eq!(r.output_height, 1);
    let d = parse_derivation("(rep2r [op=0;ctx=0;at=1] \"a = b |- b = a\"\n  (refax [0] \"a = b |- b = b\"))").unwrap();
    assert_eq!(right_normalize(&d).unwrap().output, d);
    for g in [
        "a = b, b = c |- f(c) = f(a)",
        "a = b, c = b |- g(a, c) = g(c, a)",
        "f(a) = b |- f(f(a)) = f(b)",
    ] {
        let d = proved(g, "R12r");
        let r = right_normalize(&d).unwrap_or_else(|e| panic!("{g}: {e}"));
        assert_eq!(r.output.sequent, d.sequent);
    }
}

#[test]
fn scope_restriction() {
    for g in [
        "a = b, P(a) |- P(b)",
        "a = b, c = b, Q(a, c) |- Q(c, a)",
        "P(a) |- P(a)",
    ] {
        let d = proved(g, "R12r");
        let r = scope_restrict(&d).unwrap_or_else(|e| panic!("{g}: {e}"));
        assert_eq!(r.output_height, r.input_height);
        assert!(!r.output.uses(RuleId::Rep1R) && !r.output.uses(RuleId::Rep2R));
    }
    let d = proved("a = b |- b = a", "R12r");
    assert_eq!(scope_restrict(&d).unwrap().output, d);
}

#[test]
fn cut_elimination_on_translated_symmetry() {
    let d = parse_derivation(SYMM).unwrap();
    let t = equivalence_translate(&d, &with_symm(), &spec("R12r")).unwrap();
    assert!(t.output.uses(RuleId::Cut));
    let r = cut_eliminate_pipeline(&t.output).unwrap();
    assert!(!r.output.uses(RuleId::Cut) && !r.output.uses(RuleId::LC));
    assert_eq!(r.output.sequent, d.sequent);
}

#[test]
fn cut_elimination_through_translations() {
    let goals = [
        "a = b |- b = a",
        "a = c, b = c |- a = b",
        "a = b, b = c |- f(a) = f(c)",
        "a = b, P(f(b)) |- P(f(a))",
        "f(a) = b, a = c |- f(c) = b",
    ];
    for g in goals {
        for from in ["R12rl", "RefRep", "CngOnly", "EqCutFree", "R2rlPlus", "RefRep1L"] {
            let SearchOutcome::Proved(d) = prove(&parse_sequent(g).unwrap(), &spec(from), &SearchLimits::depth(5))
            else {
                continue;
            };
            let t = equivalence_translate(&d, &spec(from), &spec("R12r")).unwrap();
            let r = cut_eliminate_pipeline(&t.output).unwrap_or_else(|e| panic!("{g} from {from}: {e}"));
            assert_eq!(r.output.sequent, d.sequent);
        }
    }
}

#[test]
fn rep1r_base_cases() {
    let d =
        parse_derivation("(rep1r [op=0;ctx=0;at=0] \"a = b |- b = b\"\n  (init [0;0] \"a = b |- a = b\"))").unwrap();
    let r = eliminate_rep1r_plus(&d).unwrap();
    assert_eq!(r.output.rule.rule, RuleId::RefAx);
    let d =
        parse_derivation("(rep1r [op=0;ctx=0;at=0] \"a = b, P(a) |- P(b)\"\n  (init [1;0] \"a = b, P(a) |- P(a)\"))")
            .unwrap();
    let r = eliminate_rep1r_plus(&d).unwrap();
    assert_eq!(r.output.rule.rule, RuleId::Rep2Lplus);
    assert_eq!(r.output.children[0].rule.rule, RuleId::Init);
    let d = parse_derivation("(rep1r [op=0;ctx=0;at=0] \"a = b |- b = a\"\n  (refax [0] \"a = b |- a = a\"))").unwrap();
    let r = eliminate_rep1r_plus(&d).unwrap();
    assert_eq!(r.output.rule_counts()[&RuleId::Rep2R], 1);
    let d = parse_derivation(
        "(rep1r [op=0;ctx=0;at=1.0] \"a = f(a) |- a = f(f(a))\"\n  (init [0;0] \"a = f(a) |- a = f(a)\"))",
    )
    .unwrap();
    let r = eliminate_rep1r_plus(&d).unwrap();
    assert_eq!(r.output_height, 2);
    let d =
        parse_derivation("(rep2r [op=0;ctx=0;at=0] \"a = b, P(a) |- P(a)\"\n  (init [1;0] \"a = b, P(a) |- P(b)\"))");
    assert!(d.is_err() || eliminate_rep2r_plus(&d.unwrap()).is_err());
}

#[test]
fn rep1r_elimination_over_search_outputs() {
    let goals = [
        "a = b |- b = a",
        "a = b, P(b) |- P(a)",
        "a = c, b = c |- a = b",
        "a = b, b = c |- f(c) = f(a)",
        "f(a) = b, a = c |- f(c) = b",
        "a = b, c = b, Q(a, c) |- Q(c, a)",
        "a = f(b), b = c |- f(c) = a",
    ];
    let mixed = spec("R2rlPlus").with_rules([RuleId::Rep1R]);
    for g in goals {
        let SearchOutcome::Proved(d) = prove(&parse_sequent(g).unwrap(), &mixed, &SearchLimits::depth(4)) else {
            panic!("{g}");
        };
        let d = single_occurrence_normalize(&d, &mixed).unwrap().output;
        let r = eliminate_rep1r_plus(&d).unwrap_or_else(|e| panic!("{g}: {e}"));
        assert!(!r.output.uses(RuleId::Rep1R));
        let dual = spec("R1rlPlus").with_rules([RuleId::Rep2R]);
        if let SearchOutcome::Proved(d) = prove(&parse_sequent(g).unwrap(), &dual, &SearchLimits::depth(4)) {
            let d = single_occurrence_normalize(&d, &dual).unwrap().output;
            let r = eliminate_rep2r_plus(&d).unwrap_or_else(|e| panic!("{g}: {e}"));
            assert!(!r.output.uses(RuleId::Rep2R));
        }
    }
}

#[test]
fn semishortening() {
    use crate::calculus::Precedence;
    for g in [
        "a = b |- b = a",
        "f(a) = b |- b = f(a)",
        "b = f(a), P(b) |- P(f(a))",
        "a = f(b), b = c |- f(c) = a",
    ] {
        let d = proved(g, "R12r");
        let r = semishorten(&d, &Precedence::Empty).unwrap_or_else(|e| panic!("{g}: {e}"));
        assert!(
            !r.output.uses(RuleId::Rep1R) && !r.output.uses(RuleId::Rep1Lplus),
            "{g}"
        );
        let r = semishorten(&d, &Precedence::TermHeight).unwrap_or_else(|e| panic!("{g}: {e}"));
        assert_eq!(r.output.sequent, d.sequent);
    }
    let d = proved("a = b |- a = b", "R12r");
    assert_eq!(semishorten(&d, &Precedence::TermHeight).unwrap().output, d);
}

#[test]
fn cut_formula_used_as_operating_equality() {
    let d = parse_derivation(
        "(cut [cut=a = b;left=0/] \"b = a, P(a) |- P(b)\"
  (rep1r [op=0;ctx=0;at=0] \"b = a |- a = b\"
    (refax [0] \"b = a |- b = b\"))
  (rep1r [op=1;ctx=0;at=0] \"P(a), a = b |- P(b)\"
    (init [0;0] \"P(a), a = b |- P(a)\")))",
    )
    .unwrap();
    assert!(check(&d, &spec("R12r").with_rules([RuleId::Cut])).valid);
    let r = cut_eliminate_pipeline(&d).unwrap();
    assert_eq!(r.output.rule_counts().values().sum::<usize>(), 2);
    assert_eq!(r.output.rule.rule, RuleId::Rep2R);
    assert!(!r.output.uses(RuleId::Cut));
}
