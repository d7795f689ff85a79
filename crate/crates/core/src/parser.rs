//! Concrete syntax for terms, formulas, sequents and derivations.
//!
//! ```text
//! term     := name | name "(" term ("," term)* ")"
//! formula  := "forall" x "." formula | "exists" x "." formula
//!           | disj ("->" formula)?
//! disj     := conj ("|" conj)*
//! conj     := unit ("&" unit)*
//! unit     := "bot" | Pred | Pred "(" terms ")" | term "=" term | "(" formula ")"
//! sequent  := formulas? "|-" formulas?
//! ```
//!
//! Predicates start with an uppercase letter, everything else is a term
//! symbol. Names starting with `_` are reserved for generated
//! eigenparameters and only accepted in derivation files.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::calculus::{Replacement, RuleId, RuleInstance, Split};
use crate::checker::Derivation;
use crate::syntax::{path_to_string, Formula, Path, Sequent, Term};

/// Byte range in the input plus the 1-based line and column of its start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    fn new(src: &str, start: usize, end: usize) -> SourceSpan {
        let start = start.min(src.len());
        let before = &src[..start];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        SourceSpan {
            start,
            end: end.max(start).min(src.len()),
            line,
            column,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}:{}: {message}", span.line, span.column)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Equals,
    Amp,
    Bar,
    Arrow,
    Dot,
    Turnstile,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Equals => write!(f, "`=`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::Bar => write!(f, "`|`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Turnstile => write!(f, "`|-`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str, allow_reserved: bool) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let err = |msg: String, s: usize, e: usize| ParseError {
        message: msg,
        span: SourceSpan::new(src, s, e),
    };
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < src.len() {
        let c = src[i..].chars().next().expect("in bounds");
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if c == '#' {
            while i < src.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '=' => Tok::Equals,
            '&' => Tok::Amp,
            '.' => Tok::Dot,
            '|' if src[i..].starts_with("|-") => {
                i += 1;
                Tok::Turnstile
            }
            '|' => Tok::Bar,
            '-' if src[i..].starts_with("->") => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < src.len() && is_ident_char(bytes[j] as char) {
                    j += 1;
                }
                let name = &src[i..j];
                if name.starts_with('_') && !allow_reserved {
                    return Err(err(format!("identifier `{name}` is reserved"), i, j));
                }
                out.push((Tok::Ident(name.to_string()), i, j));
                i = j;
                continue;
            }
            other => return Err(err(format!("unexpected character `{other}`"), i, i + other.len_utf8())),
        };
        i += 1;
        out.push((tok, start, i));
    }
    out.push((Tok::Eof, src.len(), src.len()));
    Ok(out)
}

const KEYWORDS: [&str; 3] = ["bot", "forall", "exists"];

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    bound: Vec<String>,
    functions: HashMap<String, usize>,
    predicates: HashMap<String, usize>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, allow_reserved: bool) -> Result<Parser<'a>, ParseError> {
        Ok(Parser {
            src,
            toks: lex(src, allow_reserved)?,
            pos: 0,
            bound: Vec::new(),
            functions: HashMap::new(),
            predicates: HashMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn error_here(&self, message: String) -> ParseError {
        let (_, s, e) = &self.toks[self.pos];
        ParseError {
            message,
            span: SourceSpan::new(self.src, *s, *e),
        }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => Err(self.error_here(format!("expected a name, found {t}"))),
        }
    }

    fn record(&mut self, predicate: bool, name: &str, arity: usize) -> Result<(), ParseError> {
        let table = if predicate {
            &mut self.predicates
        } else {
            &mut self.functions
        };
        match table.insert(name.to_string(), arity) {
            Some(old) if old != arity => Err(ParseError {
                message: format!("`{name}` used with arity {old} and {arity}"),
                span: SourceSpan::new(
                    self.src,
                    self.toks[self.pos.saturating_sub(1)].1,
                    self.toks[self.pos.saturating_sub(1)].2,
                ),
            }),
            _ => Ok(()),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let name = match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) && !starts_upper(&s) => s,
            t => return Err(self.error_here(format!("expected a term, found {t}"))),
        };
        self.bump();
        if *self.peek() == Tok::LParen {
            self.bump();
            let mut args = vec![self.term()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.term()?);
            }
            self.expect(Tok::RParen)?;
            self.record(false, &name, args.len())?;
            return Ok(Term::App(name, args));
        }
        if self.bound.contains(&name) {
            return Ok(Term::Bound(name));
        }
        self.record(false, &name, 0)?;
        Ok(Term::Param(name))
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if let Tok::Ident(k) = self.peek().clone() {
            if k == "forall" || k == "exists" {
                self.bump();
                let x = self.ident()?;
                if KEYWORDS.contains(&x.as_str()) || starts_upper(&x) {
                    return Err(self.error_here(format!("`{x}` cannot be bound")));
                }
                self.expect(Tok::Dot)?;
                self.bound.push(x.clone());
                let body = self.formula();
                self.bound.pop();
                let body = Box::new(body?);
                return Ok(if k == "forall" {
                    Formula::Forall(x, body)
                } else {
                    Formula::Exists(x, body)
                });
            }
        }
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::Imp(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            f = Formula::Or(Box::new(f), Box::new(self.conjunction()?));
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unit()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            f = Formula::And(Box::new(f), Box::new(self.unit()?));
        }
        Ok(f)
    }

    fn unit(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(k) if k == "forall" || k == "exists" => self.formula(),
            Tok::Ident(k) if k == "bot" => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Ident(p) if starts_upper(&p) => {
                self.bump();
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    args.push(self.term()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.term()?);
                    }
                    self.expect(Tok::RParen)?;
                }
                self.record(true, &p, args.len())?;
                Ok(Formula::Atom(p, args))
            }
            Tok::Ident(_) => {
                let l = self.term()?;
                self.expect(Tok::Equals)?;
                let r = self.term()?;
                Ok(Formula::Eq(l, r))
            }
            t => Err(self.error_here(format!("expected a formula, found {t}"))),
        }
    }

    fn formula_list(&mut self) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        if matches!(self.peek(), Tok::Turnstile | Tok::Eof) {
            return Ok(out);
        }
        out.push(self.formula()?);
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.formula()?);
        }
        Ok(out)
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() != Tok::Eof {
            return Err(self.error_here(format!("unexpected {}", self.peek())));
        }
        let clash: Vec<&String> = self
            .functions
            .keys()
            .filter(|f| self.predicates.contains_key(*f))
            .collect();
        if let Some(name) = clash.first() {
            return Err(self.error_here(format!("`{name}` used as predicate and term")));
        }
        Ok(())
    }
}

fn starts_upper(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

fn rename_binders(f: &Formula, params: &BTreeSet<String>) -> Formula {
    fn fresh(x: &str, params: &BTreeSet<String>) -> String {
        (1..)
            .map(|n| format!("{x}{n}"))
            .find(|c| !params.contains(c))
            .expect("fresh name")
    }
    fn rename_bound(t: &Term, from: &str, to: &str) -> Term {
        match t {
            Term::Bound(x) if x == from => Term::Bound(to.to_string()),
            Term::App(g, args) => Term::App(g.clone(), args.iter().map(|a| rename_bound(a, from, to)).collect()),
            other => other.clone(),
        }
    }
    fn walk(f: &Formula, params: &BTreeSet<String>) -> Formula {
        match f {
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                let mut body = walk(a, params);
                let mut x = x.clone();
                if params.contains(&x) {
                    let y = fresh(&x, params);
                    let from = x.clone();
                    body = rename_in(&body, &from, &y);
                    x = y;
                }
                match f {
                    Formula::Forall(..) => Formula::Forall(x, Box::new(body)),
                    _ => Formula::Exists(x, Box::new(body)),
                }
            }
            Formula::And(a, b) => Formula::And(Box::new(walk(a, params)), Box::new(walk(b, params))),
            Formula::Or(a, b) => Formula::Or(Box::new(walk(a, params)), Box::new(walk(b, params))),
            Formula::Imp(a, b) => Formula::Imp(Box::new(walk(a, params)), Box::new(walk(b, params))),
            other => other.clone(),
        }
    }
    fn rename_in(f: &Formula, from: &str, to: &str) -> Formula {
        match f {
            Formula::Forall(x, _) | Formula::Exists(x, _) if x == from => f.clone(),
            Formula::Forall(x, a) => Formula::Forall(x.clone(), Box::new(rename_in(a, from, to))),
            Formula::Exists(x, a) => Formula::Exists(x.clone(), Box::new(rename_in(a, from, to))),
            Formula::And(a, b) => Formula::And(Box::new(rename_in(a, from, to)), Box::new(rename_in(b, from, to))),
            Formula::Or(a, b) => Formula::Or(Box::new(rename_in(a, from, to)), Box::new(rename_in(b, from, to))),
            Formula::Imp(a, b) => Formula::Imp(Box::new(rename_in(a, from, to)), Box::new(rename_in(b, from, to))),
            other => other.map_terms(&|t| rename_bound(t, from, to)),
        }
    }
    walk(f, params)
}

fn with_params_apart(formulas: Vec<Formula>) -> Vec<Formula> {
    let mut params = BTreeSet::new();
    formulas.iter().for_each(|f| f.params_into(&mut params));
    formulas.iter().map(|f| rename_binders(f, &params)).collect()
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, false)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    parse_formula_with(src, false)
}

fn parse_formula_with(src: &str, allow_reserved: bool) -> Result<Formula, ParseError> {
    let mut p = Parser::new(src, allow_reserved)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(with_params_apart(vec![f]).pop().expect("one formula"))
}

pub fn parse_sequent(src: &str) -> Result<Sequent, ParseError> {
    parse_sequent_with(src, false)
}

fn parse_sequent_with(src: &str, allow_reserved: bool) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(src, allow_reserved)?;
    let antecedent = p.formula_list()?;
    p.expect(Tok::Turnstile)?;
    let succedent = p.formula_list()?;
    p.finish()?;
    let n = antecedent.len();
    let mut all = with_params_apart(antecedent.into_iter().chain(succedent).collect());
    let succedent = all.split_off(n);
    Ok(Sequent::new(all, succedent))
}

/// Parses one sequent per non-empty, non-comment line.
pub fn parse_sequent_list(src: &str) -> Result<Vec<Sequent>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in src.split_inclusive('\n') {
        let body = line.split('#').next().unwrap_or("");
        if !body.trim().is_empty() {
            out.push(parse_sequent(body).map_err(|e| shift(src, e, offset))?);
        }
        offset += line.len();
    }
    Ok(out)
}

fn shift(src: &str, e: ParseError, offset: usize) -> ParseError {
    ParseError {
        message: e.message,
        span: SourceSpan::new(src, e.span.start + offset, e.span.end + offset),
    }
}

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Exists(..) => 0,
        Formula::Imp(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

fn write_formula(f: &Formula, ctx: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let paren = prec(f) < ctx;
    if paren {
        write!(out, "(")?;
    }
    match f {
        Formula::Atom(p, args) => {
            write!(out, "{p}")?;
            if !args.is_empty() {
                let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(out, "({})", args.join(","))?;
            }
        }
        Formula::Eq(l, r) => write!(out, "{l} = {r}")?,
        Formula::Bottom => write!(out, "bot")?,
        Formula::And(a, b) => {
            write_formula(a, 3, out)?;
            write!(out, " & ")?;
            write_formula(b, 4, out)?;
        }
        Formula::Or(a, b) => {
            write_formula(a, 2, out)?;
            write!(out, " | ")?;
            write_formula(b, 3, out)?;
        }
        Formula::Imp(a, b) => {
            write_formula(a, 2, out)?;
            write!(out, " -> ")?;
            write_formula(b, 1, out)?;
        }
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            let q = if matches!(f, Formula::Forall(..)) {
                "forall"
            } else {
                "exists"
            };
            write!(out, "{q} {x}. ")?;
            write_formula(a, 0, out)?;
        }
    }
    if paren {
        write!(out, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, 0, f)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |fs: &[Formula]| fs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let (a, s) = (side(&self.antecedent), side(&self.succedent));
        match (a.is_empty(), s.is_empty()) {
            (true, true) => write!(f, "|-"),
            (true, false) => write!(f, "|- {s}"),
            (false, true) => write!(f, "{a} |-"),
            (false, false) => write!(f, "{a} |- {s}"),
        }
    }
}

fn instance_args(inst: &RuleInstance) -> String {
    let mut parts: Vec<String> = inst.principal.iter().map(|i| i.to_string()).collect();
    if let Some(Replacement { op, context, paths }) = &inst.replacement {
        if let Some(op) = op {
            parts.push(format!("op={op}"));
        }
        parts.push(format!("ctx={context}"));
        let paths: Vec<String> = paths.iter().map(|p| path_to_string(p)).collect();
        parts.push(format!("at={}", paths.join("/")));
    }
    if let Some(t) = &inst.witness {
        parts.push(format!("t={t}"));
    }
    if let Some(a) = &inst.eigen {
        parts.push(format!("eigen={a}"));
    }
    if let Some(f) = &inst.cut_formula {
        parts.push(format!("cut={f}"));
    }
    if let Some(Split { antecedent, succedent }) = &inst.split {
        let list = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        parts.push(format!("left={}/{}", list(antecedent), list(succedent)));
    }
    parts.join(";")
}

fn write_derivation(d: &Derivation, indent: usize, out: &mut String) {
    out.push_str(&format!(
        "({} [{}] \"{}\"",
        d.rule.rule.text_id(),
        instance_args(&d.rule),
        d.sequent
    ));
    for c in &d.children {
        out.push('\n');
        out.push_str(&" ".repeat(indent + 2));
        write_derivation(c, indent + 2, out);
    }
    out.push(')');
}

/// Canonical text form, terminated by a newline.
pub fn print_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    write_derivation(d, 0, &mut out);
    out.push('\n');
    out
}

struct DrvReader<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> DrvReader<'a> {
    fn err(&self, message: impl Into<String>, start: usize, end: usize) -> ParseError {
        ParseError {
            message: message.into(),
            span: SourceSpan::new(self.src, start, end),
        }
    }

    fn skip(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() {
            match bytes[self.pos] {
                b'#' => {
                    while self.pos < bytes.len() && bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if (c as char).is_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn eat(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip();
        if self.src.as_bytes().get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char), self.pos, self.pos + 1))
        }
    }

    fn node(&mut self) -> Result<Derivation, ParseError> {
        self.eat(b'(')?;
        self.skip();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && (bytes[self.pos] as char).is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let id = &self.src[start..self.pos];
        let rule = RuleId::from_text_id(id).ok_or_else(|| self.err(format!("unknown rule `{id}`"), start, self.pos))?;
        self.skip();
        let mut inst = RuleInstance::new(rule, vec![]);
        if bytes.get(self.pos) == Some(&b'[') {
            let open = self.pos + 1;
            let close = self.src[open..]
                .find(']')
                .map(|k| open + k)
                .ok_or_else(|| self.err("unclosed `[`", open - 1, open))?;
            inst = self.args(rule, open, close)?;
            self.pos = close + 1;
        }
        self.eat(b'"')?;
        let open = self.pos;
        let close = self.src[open..]
            .find('"')
            .map(|k| open + k)
            .ok_or_else(|| self.err("unclosed string", open - 1, open))?;
        let sequent = parse_sequent_with(&self.src[open..close], true).map_err(|e| shift(self.src, e, open))?;
        self.pos = close + 1;
        let mut children = Vec::new();
        loop {
            self.skip();
            match bytes.get(self.pos) {
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                Some(b'(') => children.push(self.node()?),
                _ => return Err(self.err("expected `(` or `)`", self.pos, self.pos + 1)),
            }
        }
        Ok(Derivation::new(sequent, inst, children))
    }

    fn args(&self, rule: RuleId, open: usize, close: usize) -> Result<RuleInstance, ParseError> {
        let mut inst = RuleInstance::new(rule, vec![]);
        let mut rep: Option<Replacement> = None;
        let mut offset = open;
        for raw in self.src[open..close].split(';') {
            let here = offset;
            offset += raw.len() + 1;
            let item = raw.trim();
            if item.is_empty() {
                continue;
            }
            let bad = |m: String| self.err(m, here, here + raw.len());
            let index = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| bad(format!("expected an index, found `{s}`")))
            };
            let Some((key, value)) = item.split_once('=') else {
                inst.principal.push(index(item)?);
                continue;
            };
            let value = value.trim();
            let sub = |e: ParseError| {
                let at = here + raw.find(value).unwrap_or(0);
                shift(self.src, e, at)
            };
            let rep = rep.get_or_insert(Replacement {
                op: None,
                context: 0,
                paths: vec![],
            });
            match key.trim() {
                "op" => rep.op = Some(index(value)?),
                "ctx" => rep.context = index(value)?,
                "at" => {
                    rep.paths = value
                        .split('/')
                        .map(|p| p.split('.').map(index).collect::<Result<Path, _>>())
                        .collect::<Result<_, _>>()?
                }
                "t" => inst.witness = Some(parse_term_with(value, true).map_err(sub)?),
                "eigen" => inst.eigen = Some(value.to_string()),
                "cut" => inst.cut_formula = Some(parse_formula_with(value, true).map_err(sub)?),
                "left" => {
                    let (a, s) = value.split_once('/').ok_or_else(|| bad("expected left=A/S".into()))?;
                    let list = |x: &str| -> Result<Vec<usize>, ParseError> {
                        x.split(',').filter(|y| !y.trim().is_empty()).map(index).collect()
                    };
                    inst.split = Some(Split {
                        antecedent: list(a)?,
                        succedent: list(s)?,
                    });
                }
                other => return Err(bad(format!("unknown argument `{other}`"))),
            }
        }
        if rule.is_replacement() {
            inst.replacement = rep;
        }
        Ok(inst)
    }
}

fn parse_term_with(src: &str, allow_reserved: bool) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, allow_reserved)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_derivation(src: &str) -> Result<Derivation, ParseError> {
    let mut r = DrvReader { src, pos: 0 };
    let d = r.node()?;
    r.skip();
    if r.pos != src.len() {
        return Err(r.err("trailing input after derivation", r.pos, src.len()));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn equality_binds_tighter_than_connectives() {
        let f = parse_formula("a = b & P(a) -> Q").unwrap();
        let Formula::Imp(l, r) = f else { panic!() };
        assert!(matches!(*l, Formula::And(..)));
        assert_eq!(*r, Formula::atom("Q", vec![]));
    }

    #[test]
    fn quantifier_scope_extends_right() {
        let f = parse_formula("forall x. P(x) -> Q(x)").unwrap();
        let Formula::Forall(_, body) = f else { panic!() };
        assert!(matches!(*body, Formula::Imp(..)));
    }

    #[test]
    fn binders_renamed_apart_from_parameters() {
        let s = parse_sequent("P(x) |- forall x. P(x)").unwrap();
        let Formula::Forall(y, body) = &s.succedent[0] else {
            panic!()
        };
        assert_ne!(y, "x");
        assert_eq!(**body, Formula::atom("P", vec![Term::Bound(y.clone())]));
    }

    #[test]
    fn sequent_forms() {
        for src in [
            "|-",
            "|- t = t",
            "a = b |-",
            "a = c, b = c |- a = b",
            "P(f(a,b)) |- Q, bot",
        ] {
            assert_eq!(parse_sequent(src).unwrap().to_string(), src);
        }
    }

    #[test]
    fn errors_carry_spans() {
        let e = parse_formula("P(a) & ").unwrap_err();
        assert_eq!(e.span.start, 7);
        let e = parse_sequent("a = b |-\n  f(a) = f(a,b)").unwrap_err();
        assert_eq!((e.span.line, e.span.column), (2, 15));
        let e = parse_term("_e1").unwrap_err();
        assert_eq!(e.span.start, 0);
        assert!(e.message.contains("reserved"));
        assert!(parse_formula("P(a) & P").is_err());
        assert!(parse_formula("a ? b").is_err());
        assert!(parse_sequent("a = b").is_err());
    }

    #[test]
    fn two_node_derivation() {
        let src = "(rep2r [op=1;ctx=0;at=1] \"a = c, b = c |- a = b\"\n  (init [0;0] \"a = c, b = c |- a = c\"))\n";
        let d = parse_derivation(src).unwrap();
        assert_eq!(d.height(), 1);
        assert_eq!(print_derivation(&d), src);
    }

    #[test]
    fn derivation_arguments() {
        let src = "(cut [cut=P(a) | a = b;left=0,1/] \"x = y, Q |- \"\n  (rw [0] \"|-\")\n  (lbot [2] \"|-\"))";
        let d = parse_derivation(src).unwrap();
        assert_eq!(
            d.rule.split,
            Some(Split {
                antecedent: vec![0, 1],
                succedent: vec![]
            })
        );
        assert!(d.rule.cut_formula.is_some());
        assert!(parse_derivation("(nope [] \"|-\")").is_err());
        assert!(parse_derivation("(init [0;0] \"|-\") x").is_err());
        let e = parse_derivation("(init [0;0]\n \"a |- b b\")").unwrap_err();
        assert_eq!(e.span.line, 2);
    }

    fn term_strategy() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![Just(Term::param("a")), Just(Term::param("b")), Just(Term::param("c"))];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|t| Term::app("f", vec![t])),
                (inner.clone(), inner).prop_map(|(s, t)| Term::app("g", vec![s, t])),
            ]
        })
    }

    fn formula_strategy() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            (term_strategy(), term_strategy()).prop_map(|(l, r)| Formula::eq(l, r)),
            term_strategy().prop_map(|t| Formula::atom("P", vec![t])),
            Just(Formula::atom("Q", vec![])),
            Just(Formula::Bottom),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::And(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Or(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Imp(Box::new(a), Box::new(b))),
                inner
                    .clone()
                    .prop_map(|a| Formula::Forall("x".into(), Box::new(bind(a)))),
                inner.prop_map(|a| Formula::Exists("x".into(), Box::new(bind(a)))),
            ]
        })
    }

    fn bind(f: Formula) -> Formula {
        f.map_terms(&|t| replace_param(t))
    }

    fn replace_param(t: &Term) -> Term {
        match t {
            Term::Param(p) if p == "a" => Term::Bound("x".into()),
            Term::App(g, args) => Term::App(g.clone(), args.iter().map(replace_param).collect()),
            other => other.clone(),
        }
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(f in formula_strategy()) {
            let text = f.to_string();
            prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
        }

        #[test]
        fn errors_point_inside_input(s in "[a-zP=(),&|> -]{0,16}") {
            if let Err(e) = parse_sequent(&s) {
                prop_assert!(e.span.start <= s.len());
            }
        }
    }
}
