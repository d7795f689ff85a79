//! Command-line front end. Every command prints a human-readable part and a
//! machine block of `key: value` lines after a `---` separator.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::calculus::{parse_precedence, preset, preset_names, CalcError, CalculusSpec};
use crate::checker::{check, Derivation};
use crate::parser::{parse_derivation, parse_formula, parse_sequent, parse_sequent_list, print_derivation, ParseError};
use crate::search::{decide_function_free, prove, Decision, SearchLimits, SearchOutcome};
use crate::syntax::Side;
use crate::transform::{self, TransformError, TransformReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error("{0}: {1}")]
    Config(PathBuf, String),
}

#[derive(Debug, Parser)]
#[command(name = "eqseq", about = "Sequent calculi with equality: check, search, transform")]
pub struct Cli {
    /// Print the machine block as a JSON object.
    #[arg(long, global = true)]
    pub json: bool,
    /// Defaults file with `key = value` lines (default: ./eqseq.toml if present).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Calculus {
    /// Preset name, optionally with a base suffix such as `R12r@c`.
    #[arg(long)]
    pub preset: Option<String>,
    /// Calculus in spec text, e.g. `base=none rules=refax,rep2r flags= prec=none`.
    #[arg(long, conflicts_with = "preset")]
    pub spec: Option<String>,
}

#[derive(Debug, clap::Args)]
pub struct Limits {
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub term_height: Option<usize>,
    /// Maximal number of search nodes.
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Op {
    WeakenHp,
    ProjectSuccedent,
    EquivalenceTranslate,
    CutEliminatePipeline,
    RightNormalize,
    ScopeRestrict,
    OrientFunctionFree,
    EliminateRep1rPlus,
    EliminateRep2rPlus,
    SingleOccurrenceNormalize,
    Semishorten,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a derivation file against a calculus.
    Check {
        drv: PathBuf,
        #[command(flatten)]
        calculus: Calculus,
    },
    /// Search for a derivation of a sequent.
    Prove {
        sequent: String,
        #[command(flatten)]
        calculus: Calculus,
        #[command(flatten)]
        limits: Limits,
        /// Write the derivation to this file instead of the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide a function-free atomic sequent by equality chains.
    Decide { sequent: String },
    /// Apply a derivation transformation.
    Transform {
        drv: PathBuf,
        #[arg(long, value_enum)]
        op: Op,
        /// Calculus of the input (checked before transforming).
        #[arg(long)]
        from: Option<String>,
        /// Target preset (translation, normalization).
        #[arg(long)]
        target: Option<String>,
        /// Formula to weaken by.
        #[arg(long)]
        formula: Option<String>,
        #[arg(long, value_enum, default_value = "left")]
        side: SideArg,
        /// Precedence for semishortening: empty, height or {a<b;...}.
        #[arg(long, default_value = "height")]
        prec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run bounded search in two calculi over a sequent file and compare.
    Compare {
        corpus: PathBuf,
        first: String,
        second: String,
        #[command(flatten)]
        limits: Limits,
    },
    /// List the preset calculi.
    Presets,
}

/// Defaults read from a `key = value` file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    pub values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str, path: &Path) -> Result<Config, CliError> {
        let mut values = BTreeMap::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(path.to_path_buf(), format!("line {}: expected key = value", k + 1)))?;
            let value = value.trim().trim_matches('"');
            values.insert(key.trim().to_string(), value.to_string());
        }
        Ok(Config { values })
    }

    fn number(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Usage(format!("config `{key}` is not a number: {v}")))
            })
            .transpose()
    }
}

/// Human-readable part, machine block and exit code of one command.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub text: String,
    pub block: Vec<(String, String)>,
    pub code: i32,
}

impl Report {
    fn put(&mut self, key: &str, value: impl ToString) {
        self.block.push((key.to_string(), value.to_string()));
    }

    /// The report as printed; `time_ms` is the only nondeterministic line.
    pub fn render(&self, json: bool, time_ms: u128) -> String {
        let mut out = self.text.clone();
        if !out.is_empty() && !out.ends_with('\n') {
            out.push('\n');
        }
        out.push_str("---\n");
        if json {
            let mut map = serde_json::Map::new();
            for (k, v) in &self.block {
                let value = v
                    .parse::<u64>()
                    .map(serde_json::Value::from)
                    .unwrap_or_else(|_| v.clone().into());
                map.insert(k.clone(), value);
            }
            map.insert("time_ms".into(), (time_ms as u64).into());
            out.push_str(&serde_json::Value::Object(map).to_string());
            out.push('\n');
        } else {
            for (k, v) in &self.block {
                out.push_str(&format!("{k}: {v}\n"));
            }
            out.push_str(&format!("time_ms: {time_ms}\n"));
        }
        out
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn named(name: &str) -> Result<CalculusSpec, CliError> {
    Ok(preset(name)?.spec)
}

fn calculus(c: &Calculus, cfg: &Config) -> Result<CalculusSpec, CliError> {
    match (&c.preset, &c.spec, cfg.values.get("preset")) {
        (Some(p), _, _) => named(p),
        (None, Some(s), _) => Ok(s.parse()?),
        (None, None, Some(p)) => named(p),
        (None, None, None) => Err(CliError::Usage("give --preset or --spec".into())),
    }
}

fn limits(l: &Limits, cfg: &Config) -> Result<SearchLimits, CliError> {
    let d = SearchLimits::default();
    Ok(SearchLimits {
        max_depth: l.depth.or(cfg.number("depth")?).unwrap_or(d.max_depth),
        term_height: l.term_height.or(cfg.number("term_height")?).unwrap_or(d.term_height),
        node_budget: l.budget.or(cfg.number("budget")?).unwrap_or(d.node_budget),
        universe: None,
    })
}

fn counts(d: &Derivation) -> String {
    d.rule_counts()
        .iter()
        .map(|(r, n)| format!("{r}={n}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Prints `d` into the report or into `out`.
fn emit(r: &mut Report, d: &Derivation, out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = print_derivation(d);
    match out {
        Some(p) => {
            write(p, &text)?;
            r.put("written", p.display());
        }
        None => r.text.push_str(&text),
    }
    r.put("height", d.height());
    r.put("counts", counts(d));
    Ok(())
}

fn cmd_check(drv: &Path, c: &Calculus, cfg: &Config) -> Result<Report, CliError> {
    let d = parse_derivation(&read(drv)?)?;
    let spec = calculus(c, cfg)?;
    let report = check(&d, &spec);
    let mut r = Report {
        code: if report.valid { EXIT_OK } else { EXIT_NEGATIVE },
        ..Report::default()
    };
    r.put("command", "check");
    r.put("spec", &spec);
    for line in report.to_string().lines() {
        let (k, v) = line.split_once(": ").unwrap_or((line, ""));
        r.put(k, v);
    }
    Ok(r)
}

fn cmd_prove(goal: &str, c: &Calculus, l: &Limits, out: Option<&PathBuf>, cfg: &Config) -> Result<Report, CliError> {
    let goal = parse_sequent(goal)?;
    let spec = calculus(c, cfg)?;
    let lim = limits(l, cfg)?;
    let outcome = prove(&goal, &spec, &lim);
    let mut r = Report::default();
    r.put("command", "prove");
    r.put("sequent", &goal);
    r.put("spec", &spec);
    r.put("result", outcome.label());
    match &outcome {
        SearchOutcome::Proved(d) => {
            r.put("checked", if check(d, &spec).valid { "valid" } else { "invalid" });
            emit(&mut r, d, out)?;
        }
        SearchOutcome::Exhausted(stats) => {
            r.code = EXIT_NEGATIVE;
            r.put("depth", lim.max_depth);
            r.put("term_height", lim.term_height);
            r.put("nodes", stats.nodes);
            r.put("budget_exceeded", stats.budget_exceeded);
        }
        SearchOutcome::DecidedUnderivable(reason) => {
            r.code = EXIT_NEGATIVE;
            r.put("reason", reason);
        }
    }
    Ok(r)
}

fn cmd_decide(goal: &str) -> Result<Report, CliError> {
    let goal = parse_sequent(goal)?;
    let decision = decide_function_free(&goal).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut r = Report::default();
    r.put("command", "decide");
    r.put("sequent", &goal);
    match decision {
        Decision::Derivable(w) => {
            r.put("result", "derivable");
            let chains: Vec<String> = w.chains.iter().map(|c| c.len().to_string()).collect();
            r.put("chains", chains.join(","));
            let rep = transform::orient_function_free(&goal).map_err(|e| CliError::Usage(e.to_string()))?;
            emit(&mut r, &rep.output, None)?;
        }
        Decision::Underivable => {
            r.code = EXIT_NEGATIVE;
            r.put("result", "underivable");
        }
    }
    Ok(r)
}

/// A preset name or a spec text.
fn spec_arg(s: &str) -> Result<CalculusSpec, CliError> {
    if s.contains('=') {
        Ok(s.parse()?)
    } else {
        named(s)
    }
}

fn required(v: &Option<String>, flag: &str) -> Result<CalculusSpec, CliError> {
    spec_arg(
        v.as_deref()
            .ok_or_else(|| CliError::Usage(format!("this op needs {flag}")))?,
    )
}

struct TransformArgs<'a> {
    op: Op,
    from: &'a Option<String>,
    target: &'a Option<String>,
    formula: &'a Option<String>,
    side: SideArg,
    prec: &'a str,
}

fn run_op(
    d: &Derivation,
    a: &TransformArgs,
) -> Result<Result<(Option<String>, TransformReport), TransformError>, CliError> {
    let side = match a.side {
        SideArg::Left => Side::Antecedent,
        SideArg::Right => Side::Succedent,
    };
    Ok(match a.op {
        Op::WeakenHp => {
            let f = parse_formula(
                a.formula
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("weaken-hp needs --formula".into()))?,
            )?;
            transform::weaken_hp(d, &f, side, &required(a.from, "--from")?).map(|r| (None, r))
        }
        Op::ProjectSuccedent => {
            transform::project_succedent(d, &required(a.from, "--from")?).map(|(f, r)| (Some(f.to_string()), r))
        }
        Op::EquivalenceTranslate => {
            transform::equivalence_translate(d, &required(a.from, "--from")?, &required(a.target, "--target")?)
                .map(|r| (None, r))
        }
        Op::CutEliminatePipeline => transform::cut_eliminate_pipeline(d).map(|r| (None, r)),
        Op::RightNormalize => transform::right_normalize(d).map(|r| (None, r)),
        Op::ScopeRestrict => transform::scope_restrict(d).map(|r| (None, r)),
        Op::OrientFunctionFree => transform::orient_function_free(&d.sequent).map(|r| (None, r)),
        Op::EliminateRep1rPlus => transform::eliminate_rep1r_plus(d).map(|r| (None, r)),
        Op::EliminateRep2rPlus => transform::eliminate_rep2r_plus(d).map(|r| (None, r)),
        Op::SingleOccurrenceNormalize => {
            transform::single_occurrence_normalize(d, &required(a.from, "--from")?).map(|r| (None, r))
        }
        Op::Semishorten => {
            let prec = parse_precedence(a.prec)?.ok_or_else(|| CliError::Usage("--prec must not be none".into()))?;
            transform::semishorten(d, &prec).map(|r| (None, r))
        }
    })
}

fn cmd_transform(drv: &Path, a: &TransformArgs, out: Option<&PathBuf>) -> Result<Report, CliError> {
    let d = parse_derivation(&read(drv)?)?;
    let mut r = Report::default();
    r.put("command", "transform");
    r.put(
        "op",
        a.op.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default(),
    );
    match run_op(&d, a)? {
        Ok((formula, rep)) => {
            r.put("result", "ok");
            if let Some(f) = formula {
                r.put("formula", f);
            }
            r.put("target", &rep.target);
            r.put(
                "checked",
                if check(&rep.output, &rep.target).valid {
                    "valid"
                } else {
                    "invalid"
                },
            );
            r.put("input_height", rep.input_height);
            r.put("output_height", rep.output_height);
            r.put("steps", rep.steps.join(","));
            emit(&mut r, &rep.output, out)?;
        }
        Err(e) => {
            r.code = EXIT_NEGATIVE;
            r.put("result", "failed");
            r.put("error", e.to_string().replace('\n', " "));
        }
    }
    Ok(r)
}

fn verdict(a: &SearchOutcome, b: &SearchOutcome) -> &'static str {
    use SearchOutcome::*;
    match (a, b) {
        (Proved(_), Proved(_)) | (DecidedUnderivable(_), DecidedUnderivable(_)) => "agree",
        (Proved(_), DecidedUnderivable(_)) | (DecidedUnderivable(_), Proved(_)) => "disagree",
        _ => "inconclusive",
    }
}

fn cmd_compare(corpus: &Path, first: &str, second: &str, l: &Limits, cfg: &Config) -> Result<Report, CliError> {
    let goals = parse_sequent_list(&read(corpus)?)?;
    let (s1, s2) = (spec_arg(first)?, spec_arg(second)?);
    let lim = limits(l, cfg)?;
    let rows: Vec<(String, &str, &str, &str)> = goals
        .par_iter()
        .map(|g| {
            let (a, b) = (prove(g, &s1, &lim), prove(g, &s2, &lim));
            (g.to_string(), a.label(), b.label(), verdict(&a, &b))
        })
        .collect();
    let mut r = Report::default();
    for (g, a, b, v) in &rows {
        r.text.push_str(&format!("{v:<12} {a:<11} {b:<11} {g}\n"));
    }
    let count = |v: &str| rows.iter().filter(|row| row.3 == v).count();
    let disagreements = count("disagree");
    r.code = if disagreements == 0 { EXIT_OK } else { EXIT_NEGATIVE };
    r.put("command", "compare");
    r.put("first", first);
    r.put("second", second);
    r.put("result", if disagreements == 0 { "agree" } else { "disagree" });
    r.put("total", rows.len());
    r.put("agree", count("agree"));
    r.put("inconclusive", count("inconclusive"));
    r.put("disagreements", disagreements);
    Ok(r)
}

fn cmd_presets() -> Result<Report, CliError> {
    let mut r = Report::default();
    let names = preset_names();
    for name in &names {
        r.text.push_str(&format!("{name:<16} {}\n", named(name)?));
    }
    r.put("command", "presets");
    r.put("count", names.len());
    Ok(r)
}

fn config(path: Option<&PathBuf>) -> Result<Config, CliError> {
    match path {
        Some(p) => Config::parse(&read(p)?, p),
        None => {
            let p = Path::new("eqseq.toml");
            if p.exists() {
                Config::parse(&read(p)?, p)
            } else {
                Ok(Config::default())
            }
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let cfg = config(cli.config.as_ref())?;
    match &cli.command {
        Command::Check { drv, calculus } => cmd_check(drv, calculus, &cfg),
        Command::Prove {
            sequent,
            calculus,
            limits,
            out,
        } => cmd_prove(sequent, calculus, limits, out.as_ref(), &cfg),
        Command::Decide { sequent } => cmd_decide(sequent),
        Command::Transform {
            drv,
            op,
            from,
            target,
            formula,
            side,
            prec,
            out,
        } => {
            let args = TransformArgs {
                op: *op,
                from,
                target,
                formula,
                side: *side,
                prec,
            };
            cmd_transform(drv, &args, out.as_ref())
        }
        Command::Compare {
            corpus,
            first,
            second,
            limits,
        } => cmd_compare(corpus, first, second, limits, &cfg),
        Command::Presets => cmd_presets(),
    }
}

/// Runs the command line `args` (program name first), writing the report to
/// `out` and errors to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let start = Instant::now();
    match dispatch(&cli) {
        Ok(report) => {
            let _ = out.write_all(report.render(cli.json, start.elapsed().as_millis()).as_bytes());
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
