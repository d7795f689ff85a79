mod common;

use std::path::PathBuf;

use common::golden_dir;
use eqseq::calculus::preset;
use eqseq::checker::check;
use eqseq::cli::{run, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};
use eqseq::parser::parse_derivation;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn eqseq(args: &[&str]) -> Out {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("eqseq").chain(args.iter().copied()), &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn block(stdout: &str) -> Vec<(String, String)> {
    let (_, block) = stdout.split_once("---\n").expect("machine block");
    block
        .lines()
        .map(|l| {
            let (k, v) = l.split_once(": ").unwrap_or((l, ""));
            (k.to_string(), v.to_string())
        })
        .collect()
}

fn value(stdout: &str, key: &str) -> String {
    block(stdout)
        .into_iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v)
        .unwrap_or_default()
}

fn without_time(stdout: &str) -> String {
    stdout
        .lines()
        .filter(|l| !l.starts_with("time_ms"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn prove_emits_a_derivation_that_checks() {
    let o = eqseq(&["prove", "a=c, b=c |- a=b", "--preset", "R12r", "--depth", "3"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(value(&o.stdout, "result"), "proved");
    let (text, _) = o.stdout.split_once("---\n").unwrap();
    let d = parse_derivation(text).unwrap();
    assert!(check(&d, &preset("R12r").unwrap().spec).valid);
}

#[test]
fn prove_reports_exhaustion_with_exit_one() {
    let o = eqseq(&[
        "prove",
        "a=f(a) |- a=f(f(a))",
        "--preset",
        "EqCutFree",
        "--depth",
        "8",
        "--term-height",
        "4",
    ]);
    assert_eq!(o.code, EXIT_NEGATIVE);
    assert_eq!(value(&o.stdout, "result"), "exhausted");
}

#[test]
fn prove_writes_to_a_file_on_request() {
    let path = scratch("sym.drv");
    let o = eqseq(&[
        "prove",
        "b=a |- a=b",
        "--preset",
        "R2rl",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.code, EXIT_OK);
    let c = eqseq(&["check", path.to_str().unwrap(), "--preset", "R2rl"]);
    assert_eq!(c.code, EXIT_OK);
    assert_eq!(value(&c.stdout, "result"), "valid");
}

#[test]
fn check_reports_the_failing_node() {
    let g = golden_dir().join("s1_witness.drv");
    let o = eqseq(&["check", g.to_str().unwrap(), "--preset", "S1"]);
    assert_eq!(o.code, EXIT_NEGATIVE);
    assert_eq!(value(&o.stdout, "result"), "invalid");
    assert_eq!(value(&o.stdout, "error_node"), "/");
}

#[test]
fn decide_returns_a_witness_or_exit_one() {
    let yes = eqseq(&["decide", "a=b, c=b |- a=c"]);
    assert_eq!(yes.code, EXIT_OK);
    assert_eq!(value(&yes.stdout, "result"), "derivable");
    let no = eqseq(&["decide", "a=b |- a=c"]);
    assert_eq!(no.code, EXIT_NEGATIVE);
    assert_eq!(value(&no.stdout, "result"), "underivable");
    assert_eq!(eqseq(&["decide", "a=f(b) |- a=c"]).code, EXIT_USAGE);
}

#[test]
fn transform_outputs_recheck_in_the_target() {
    let g = golden_dir().join("rep1r_case_3_3_before.drv");
    let o = eqseq(&["transform", g.to_str().unwrap(), "--op", "eliminate-rep1r-plus"]);
    assert_eq!(o.code, EXIT_OK, "{}{}", o.stdout, o.stderr);
    assert_eq!(value(&o.stdout, "checked"), "valid");
    assert!(!value(&o.stdout, "counts").contains("Rep1R"));
}

#[test]
fn transform_weakening_keeps_height() {
    let g = golden_dir().join("spine_r12r.drv");
    let o = eqseq(&[
        "transform",
        g.to_str().unwrap(),
        "--op",
        "weaken-hp",
        "--from",
        "R12r",
        "--formula",
        "Q(a)",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(value(&o.stdout, "input_height"), value(&o.stdout, "output_height"));
}

#[test]
fn transform_failure_is_reported() {
    let g = golden_dir().join("symm_cng.drv");
    let o = eqseq(&["transform", g.to_str().unwrap(), "--op", "right-normalize"]);
    assert_eq!(o.code, EXIT_NEGATIVE);
    assert_eq!(value(&o.stdout, "result"), "failed");
}

#[test]
fn compare_counts_agreement() {
    let corpus = scratch("ff.seq");
    std::fs::write(&corpus, "a=b, b=c |- a=c\nb=a |- a=b\na=b |- a=c\nP(a), a=b |- P(b)\n").unwrap();
    let o = eqseq(&["compare", corpus.to_str().unwrap(), "R12r", "R2rl", "--depth", "6"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    assert_eq!(value(&o.stdout, "total"), "4");
    assert_eq!(value(&o.stdout, "disagreements"), "0");
}

#[test]
fn reports_are_deterministic_modulo_timing() {
    let args = ["prove", "a=b, b=c, c=d |- a=d", "--preset", "R12rl", "--depth", "4"];
    assert_eq!(without_time(&eqseq(&args).stdout), without_time(&eqseq(&args).stdout));
}

#[test]
fn json_block_has_the_same_keys() {
    let text = eqseq(&["prove", "b=a |- a=b", "--preset", "R12r"]).stdout;
    let json = eqseq(&["--json", "prove", "b=a |- a=b", "--preset", "R12r"]).stdout;
    let (_, obj) = json.split_once("---\n").unwrap();
    let obj: serde_json::Value = serde_json::from_str(obj).unwrap();
    for (k, _) in block(&text) {
        assert!(obj.get(&k).is_some(), "missing {k}");
    }
}

#[test]
fn config_file_supplies_defaults() {
    let cfg = scratch("eqseq.toml");
    std::fs::write(&cfg, "# defaults\npreset = \"R12r\"\ndepth = 1\n").unwrap();
    let o = eqseq(&["--config", cfg.to_str().unwrap(), "prove", "a=b, b=c, c=d |- a=d"]);
    assert_eq!(value(&o.stdout, "result"), "exhausted");
    let o = eqseq(&[
        "--config",
        cfg.to_str().unwrap(),
        "prove",
        "a=b, b=c, c=d |- a=d",
        "--depth",
        "3",
    ]);
    assert_eq!(value(&o.stdout, "result"), "proved");
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(eqseq(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(eqseq(&["prove", "a = |- b"]).code, EXIT_USAGE);
    assert_eq!(eqseq(&["prove", "a=b |- a=b", "--preset", "Nope"]).code, EXIT_USAGE);
    assert_eq!(
        eqseq(&["check", "/nonexistent.drv", "--preset", "R12r"]).code,
        EXIT_USAGE
    );
    let o = eqseq(&["prove", "|- a=a"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("--preset"));
}

#[test]
fn presets_lists_every_preset() {
    let o = eqseq(&["presets"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(
        value(&o.stdout, "count"),
        eqseq::calculus::preset_names().len().to_string()
    );
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_eqseq");
    let ok = std::process::Command::new(bin)
        .args(["prove", "|- a=a", "--preset", "R12r"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = std::process::Command::new(bin).arg("--nope").output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}
