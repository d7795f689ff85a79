//! Acceptance suite: one line per criterion, then a single verdict.

mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::golden;
use eqseq::calculus::{applicable_instances, default_universe, premisses_of, preset, CalculusSpec, Precedence, RuleId};
use eqseq::checker::{check, Derivation};
use eqseq::cli;
use eqseq::corpus::{derivations, equality_sequents, function_free_sequents, Pipeline};
use eqseq::parser::parse_sequent;
use eqseq::search::{
    decide_function_free, prove, saturate_forward, saturate_reachable, Decision, Hook, SearchLimits, SearchOutcome,
    SequentPool, Signature,
};
use eqseq::syntax::{Formula, Sequent, Side, Term};
use eqseq::transform::{
    cut_eliminate_pipeline, eliminate_rep1r_plus, orient_function_free, project_succedent, right_normalize,
    scope_restrict, semishorten, weaken_hp, TransformReport,
};

const GOLDEN_MIN_FILES: usize = 20;
const GOLDEN_TIME: Duration = Duration::from_secs(1);
const REPETITION_TIME: Duration = Duration::from_secs(30);
const FUNCTION_FREE_COUNT: usize = 500;
const REACHABLE_CAP: usize = 200_000;
const FUNCTION_FREE_TIME: Duration = Duration::from_secs(120);
const ROUND_TRIP_COUNT: usize = 200;
const ROUND_TRIP_TIME: Duration = Duration::from_secs(300);
const SEED: u64 = 2024;

struct Verdict {
    pass: bool,
    detail: String,
}

fn spec(name: &str) -> CalculusSpec {
    preset(name).unwrap().spec
}

fn seq(s: &str) -> Sequent {
    parse_sequent(s).unwrap()
}

fn ms(d: Duration) -> u128 {
    d.as_millis()
}

fn golden_derivations() -> Verdict {
    let start = Instant::now();
    let files = golden();
    let invalid: Vec<String> = files
        .iter()
        .filter(|g| !check(&g.derivation, &g.spec).valid)
        .map(|g| g.name.clone())
        .collect();
    let took = start.elapsed();
    Verdict {
        pass: files.len() >= GOLDEN_MIN_FILES && invalid.is_empty() && took < GOLDEN_TIME,
        detail: format!(
            "{}/{} files valid (min {GOLDEN_MIN_FILES}) in {} ms (limit {} ms){}",
            files.len() - invalid.len(),
            files.len(),
            ms(took),
            ms(GOLDEN_TIME),
            if invalid.is_empty() {
                String::new()
            } else {
                format!("; invalid: {}", invalid.join(", "))
            }
        ),
    }
}

fn identity_pool(term_height: usize) -> SequentPool {
    let sig = Signature {
        params: vec!["a".into(), "b".into()],
        functions: vec![("f".into(), 1)],
        predicates: vec![],
    };
    let terms = sig.terms(term_height);
    let identities: Vec<Formula> = terms.iter().map(|t| Formula::eq(t.clone(), t.clone())).collect();
    SequentPool::new(&identities, &sig.atoms(&terms), 2)
}

fn necessity_of_repetition() -> Verdict {
    let start = Instant::now();
    let cut_free = spec("EqCutFree");
    let exhausted = matches!(
        prove(
            &seq("a = f(a) |- a = f(f(a))"),
            &cut_free,
            &SearchLimits::depth(8).with_term_height(4)
        ),
        SearchOutcome::Exhausted(_)
    );
    let took = start.elapsed();
    let expanded = match prove(
        &seq("a = f(a), a = f(a) |- a = f(f(a))"),
        &cut_free,
        &SearchLimits::depth(1),
    ) {
        SearchOutcome::Proved(d) => d.height() == 1 && check(&d, &cut_free).valid,
        _ => false,
    };
    let pool = identity_pool(3);
    let closure = saturate_forward(&pool, &cut_free, &SearchLimits::default()).unwrap_or_default();
    let propagated = !closure.is_empty() && closure.iter().all(|s| s.succedent.iter().all(Formula::is_identity));
    Verdict {
        pass: exhausted && took < REPETITION_TIME && expanded && propagated,
        detail: format!(
            "unexpanded exhausted={exhausted} at depth 8/term-height 4 in {} ms (limit {} ms); \
             expanded proves at height 1={expanded}; identity propagation over {} pool sequents ({} derivable)={propagated}",
            ms(took),
            ms(REPETITION_TIME),
            pool.len(),
            closure.len()
        ),
    }
}

fn chain_shape(counts: (usize, usize, usize), mirrored: bool) -> Sequent {
    let eq = |u: &str| {
        let (l, r) = if mirrored { ("c", u) } else { (u, "c") };
        Formula::eq(Term::param(l), Term::param(r))
    };
    let mut ant = Vec::new();
    for (u, n) in [("a", counts.0), ("b", counts.1), ("c", counts.2)] {
        ant.extend(std::iter::repeat_with(|| eq(u)).take(n));
    }
    Sequent::new(ant, vec![Formula::eq(Term::param("a"), Term::param("b"))])
}

/// Every backward instance has a premiss of the shape and none is a leaf.
fn shape_closed(hook: Hook, calc: &CalculusSpec, mirrored: bool) -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut broken = Vec::new();
    for counts in (0..4).flat_map(|i| (0..4).flat_map(move |j| (0..3).map(move |k| (i, j, k)))) {
        let s = chain_shape(counts, mirrored);
        if !hook.holds(&s) {
            continue;
        }
        for inst in applicable_instances(&s, calc, &default_universe(&s, 1)) {
            checked += 1;
            let ps = premisses_of(&s, &inst, calc).unwrap_or_default();
            if ps.is_empty() || !ps.iter().any(|p| hook.holds(p)) {
                broken.push(format!("{s} by {:?}", inst.rule));
            }
        }
    }
    (checked, broken)
}

fn counterexamples() -> Verdict {
    use RuleId::*;
    let systems = [
        (Hook::LeftChain, spec("S1"), false),
        (Hook::LeftChain, CalculusSpec::equality([RefAx, LC, Rep, Rep1R]), false),
        (Hook::RightChain, spec("S2"), true),
        (
            Hook::RightChain,
            CalculusSpec::equality([RefAx, LC, RepPrime, Rep2R]),
            true,
        ),
    ];
    let mut checked = 0;
    let mut broken = Vec::new();
    for (hook, calc, mirrored) in &systems {
        let (n, b) = shape_closed(*hook, calc, *mirrored);
        checked += n;
        broken.extend(b);
    }
    let lim = SearchLimits::depth(6);
    let decided = |goal: &str, name: &str| {
        matches!(
            prove(&seq(goal), &spec(name), &lim),
            SearchOutcome::DecidedUnderivable(_)
        )
    };
    let derivable = |goal: &str| match prove(&seq(goal), &spec("R12r"), &SearchLimits::depth(2)) {
        SearchOutcome::Proved(d) => d.height() <= 2,
        _ => false,
    };
    let s1 = decided("a = c, b = c |- a = b", "S1");
    let s2 = decided("c = b, c = a |- a = b", "S2");
    let r1 = derivable("a = c, b = c |- a = b");
    let r2 = derivable("c = b, c = a |- a = b");
    Verdict {
        pass: checked > 0 && broken.is_empty() && s1 && s2 && r1 && r2,
        detail: format!(
            "{checked} backward instances keep the shapes ({} escape); S1 decided={s1}, S2 decided={s2}; \
             R12r depth<=2: {r1}/{r2}{}",
            broken.len(),
            broken
                .first()
                .map(|b| format!("; first escape: {b}"))
                .unwrap_or_default()
        ),
    }
}

fn function_free_equivalence() -> Verdict {
    let start = Instant::now();
    let (r12r, r2rl) = (spec("R12r"), spec("R2rl"));
    let goals = function_free_sequents(FUNCTION_FREE_COUNT, SEED);
    let mut mismatches = Vec::new();
    let mut derivable = 0;
    for goal in &goals {
        let universe = default_universe(goal, 0);
        let closure = |spec: &CalculusSpec| saturate_reachable(goal, spec, &universe, REACHABLE_CAP);
        let (closure_r12r, closure_r2rl) = (closure(&r12r), closure(&r2rl));
        let decided = matches!(decide_function_free(goal), Ok(Decision::Derivable(_)));
        let witness_ok = !decided
            || orient_function_free(goal).is_ok_and(|r| r.output.sequent == *goal && check(&r.output, &r2rl).valid);
        derivable += usize::from(decided);
        if closure_r12r != Ok(decided) || closure_r2rl != Ok(decided) || !witness_ok {
            mismatches.push(goal.to_string());
        }
    }
    let took = start.elapsed();
    Verdict {
        pass: goals.len() >= FUNCTION_FREE_COUNT && mismatches.is_empty() && took < FUNCTION_FREE_TIME,
        detail: format!(
            "{} sequents ({derivable} derivable): decide = saturation of the backward-reachable sequents in R12r and in R2rl, \
             R2rl witnesses valid; {} mismatches in {} ms (limit {} ms){}",
            goals.len(),
            mismatches.len(),
            ms(took),
            ms(FUNCTION_FREE_TIME),
            mismatches.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    }
}

/// The pipeline output and the property it must satisfy.
fn round_trip(p: Pipeline, d: &Derivation) -> Result<TransformReport, String> {
    let (report, target, banned): (_, &str, &[RuleId]) = match p {
        Pipeline::CutElimination => (cut_eliminate_pipeline(d), "R12r", &[RuleId::Cut, RuleId::LC]),
        Pipeline::RightNormalize => (right_normalize(d), "R12r_eqr", &[]),
        Pipeline::ScopeRestrict => (scope_restrict(d), "R_scope", &[]),
        Pipeline::Rep1rElimination => (eliminate_rep1r_plus(d), "R2rlPlus", &[RuleId::Rep1R]),
        Pipeline::Semishorten => (semishorten(d, &Precedence::TermHeight), "R12prec_rlPlus", &[]),
    };
    let r = report.map_err(|e| e.to_string())?;
    let target = spec(target);
    if let Some(e) = check(&r.output, &target).first_error {
        return Err(format!("invalid in target: {}", e.error));
    }
    if let Some(rule) = banned.iter().find(|rule| r.output.uses(**rule)) {
        return Err(format!("output uses {rule:?}"));
    }
    if r.output.sequent != d.sequent {
        return Err("endsequent changed".into());
    }
    Ok(r)
}

fn transform_round_trips() -> Verdict {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut failed = 0;
    for p in Pipeline::ALL {
        let corpus = derivations(p, ROUND_TRIP_COUNT, SEED);
        let max_height = corpus.iter().map(Derivation::height).max().unwrap_or(0);
        let bad = corpus.iter().filter(|d| round_trip(p, d).is_err()).count();
        failed += bad + ROUND_TRIP_COUNT.saturating_sub(corpus.len()) + usize::from(max_height > 5);
        lines.push(format!("{} {}/{}", p.name(), corpus.len() - bad, corpus.len()));
    }
    let took = start.elapsed();
    Verdict {
        pass: failed == 0 && took < ROUND_TRIP_TIME,
        detail: format!(
            "{} (input height <= 5) in {} ms (limit {} ms)",
            lines.join(", "),
            ms(took),
            ms(ROUND_TRIP_TIME)
        ),
    }
}

fn height_preservation() -> Verdict {
    let mut inputs: Vec<(Derivation, CalculusSpec)> = golden().into_iter().map(|g| (g.derivation, g.spec)).collect();
    for p in Pipeline::ALL {
        inputs.extend(
            derivations(p, ROUND_TRIP_COUNT, SEED)
                .into_iter()
                .map(|d| (d, p.source())),
        );
    }
    let extra = [
        (Formula::atom("Q", vec![Term::param("a")]), Side::Antecedent),
        (Formula::eq(Term::param("a"), Term::param("e")), Side::Antecedent),
        (Formula::atom("Q", vec![Term::param("a")]), Side::Succedent),
    ];
    let (mut weakened, mut weak_drift) = (0, 0);
    let (mut projected, mut dropped, mut raised, mut proj_failed) = (0, 0, 0, 0);
    let mut first_drop = None;
    for (d, calc) in &inputs {
        for (f, side) in &extra {
            weakened += 1;
            match weaken_hp(d, f, *side, calc) {
                Ok(r) if r.output_height == r.input_height => {}
                _ => weak_drift += 1,
            }
        }
        if calc.base != eqseq::calculus::Base::None || d.sequent.succedent.len() < 2 {
            continue;
        }
        projected += 1;
        match project_succedent(d, calc) {
            Ok((a, r)) if r.output_height < r.input_height => {
                dropped += 1;
                first_drop.get_or_insert_with(|| {
                    format!("{} onto {a}: {} -> {}", d.sequent, r.input_height, r.output_height)
                });
            }
            Ok((_, r)) if r.output_height > r.input_height => raised += 1,
            Ok(_) => {}
            Err(_) => proj_failed += 1,
        }
    }
    Verdict {
        pass: weak_drift == 0 && dropped == 0 && raised == 0 && proj_failed == 0,
        detail: format!(
            "weaken_hp {}/{weakened} equal height; project_succedent {}/{projected} equal height \
             ({dropped} lower, {raised} higher, {proj_failed} failed){}",
            weakened - weak_drift,
            projected - dropped - raised - proj_failed,
            first_drop.map(|s| format!("; first drop: {s}")).unwrap_or_default()
        ),
    }
}

/// Equivalent preset pairs, whether they are compared on the function-free
/// corpus only, and their bounds as `[depth, budget, term height]`.
const EQUIVALENT: [(&str, &str, bool, [usize; 3]); 12] = [
    ("R12r", "R12rl", false, [4, 2000, 1]),
    ("R12r", "R12r_eqr", false, [4, 2000, 1]),
    ("R12r", "R_scope", false, [4, 2000, 1]),
    ("R12r", "R_scope_eqr", false, [4, 2000, 1]),
    ("R12r", "R2rlPlus", false, [4, 2000, 1]),
    ("R12r", "R1rlPlus", false, [4, 2000, 1]),
    ("R12r", "R12prec_rlPlus", false, [4, 2000, 1]),
    ("R12r", "CngLCeq", false, [3, 200, 1]),
    ("RefRep", "RefRep2L", false, [4, 500, 1]),
    ("RefRep", "RefRep1L", false, [4, 500, 1]),
    ("R12r", "R2rl", true, [4, 2000, 2]),
    ("R12r", "R1rl", true, [4, 2000, 2]),
];

fn value<'a>(block: &'a str, key: &str) -> &'a str {
    block
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|v| v.strip_prefix(": ")))
        .unwrap_or("")
}

fn preset_matrix() -> Verdict {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let mut general: BTreeSet<String> = equality_sequents(60, SEED).iter().map(|s| s.to_string()).collect();
    general.extend(
        golden()
            .iter()
            .filter(|g| g.derivation.sequent.succedent.len() == 1)
            .map(|g| g.derivation.sequent.to_string()),
    );
    let function_free: Vec<String> = function_free_sequents(60, SEED).iter().map(|s| s.to_string()).collect();
    let write = |name: &str, lines: Vec<&String>| {
        let path = dir.join(name);
        std::fs::write(&path, lines.into_iter().map(|l| format!("{l}\n")).collect::<String>()).unwrap();
        path
    };
    let general = write("general.seq", general.iter().collect());
    let function_free = write("function_free.seq", function_free.iter().collect());
    let (mut disagreements, mut inconclusive, mut total) = (0, 0, 0);
    let mut cells = Vec::new();
    for (a, b, ff, [depth, budget, height]) in EQUIVALENT {
        let corpora: &[&PathBuf] = if ff {
            &[&function_free]
        } else {
            &[&general, &function_free]
        };
        let (mut agree, mut pair_total) = (0, 0);
        for corpus in corpora {
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let (depth, budget, height) = (depth.to_string(), budget.to_string(), height.to_string());
            let args = [
                "eqseq",
                "compare",
                corpus.to_str().unwrap(),
                a,
                b,
                "--depth",
                &depth,
                "--budget",
                &budget,
                "--term-height",
                &height,
            ];
            let code = cli::run(args, &mut out, &mut err);
            if code == cli::EXIT_USAGE {
                disagreements += 1;
                cells.push(format!("{a}~{b}: error {}", String::from_utf8_lossy(&err).trim()));
                continue;
            }
            let out = String::from_utf8(out).unwrap();
            let (_, block) = out.split_once("---\n").unwrap_or(("", ""));
            let n = |k: &str| value(block, k).parse::<usize>().unwrap_or(usize::MAX / 4);
            disagreements += n("disagreements");
            inconclusive += n("inconclusive");
            total += n("total");
            agree += n("agree");
            pair_total += n("total");
        }
        cells.push(format!("{a}~{b} {agree}/{pair_total}"));
    }
    Verdict {
        pass: disagreements == 0,
        detail: format!(
            "{} pairs, {total} comparisons: {disagreements} confirmed disagreements, {inconclusive} inconclusive [{}]",
            EQUIVALENT.len(),
            cells.join(", ")
        ),
    }
}

type Criterion = (&'static str, fn() -> Verdict);

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("golden derivations", golden_derivations),
        ("necessity of repetition", necessity_of_repetition),
        ("S1/S2 counterexamples", counterexamples),
        ("function-free equivalence", function_free_equivalence),
        ("transform round trips", transform_round_trips),
        ("height-preserving admissibility", height_preservation),
        ("preset equivalence matrix", preset_matrix),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        println!(
            "[{}] {}. {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            k + 1,
            v.detail
        );
        if !v.pass {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
