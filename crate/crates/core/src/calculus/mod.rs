//! Rule catalog, calculus specifications and named presets.
//!
//! Conventions shared by every rule: a premiss is its conclusion with the
//! principal formulas modified in place, formulas a rule adds are appended at
//! the end of the side, and formulas a rule drops are removed. Indices in a
//! [`RuleInstance`] always refer to the conclusion.
//!
#![doc = include_str!("../../../../book/src/snippets/calculi.md")]

mod moves;
mod presets;
mod rules;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{path_to_string, Formula, Path, SyntaxError, Term};

pub use moves::{applicable_instances, applicable_moves, default_universe, extend_universe};
pub use presets::{preset, preset_names, Preset};
pub use rules::{premisses_of, replacement_terms};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    Init,
    LBot,
    MinBot,
    LAnd,
    RAnd,
    LOr,
    ROr,
    LImp,
    RImp,
    LImpI,
    RImpI,
    LForall,
    RForall,
    RForallI,
    LExists,
    RExists,
    LW,
    RW,
    LC,
    RC,
    LCeq,
    Cut,
    RefAx,
    RefL,
    Eq1,
    Eq2,
    Rep1R,
    Rep2R,
    Rep1L,
    Rep2L,
    Rep,
    RepPrime,
    Rep1Lplus,
    Rep2Lplus,
    CNG,
    Symm,
}

use RuleId::*;

impl RuleId {
    pub const ALL: [RuleId; 36] = [
        Init, LBot, MinBot, LAnd, RAnd, LOr, ROr, LImp, RImp, LImpI, RImpI, LForall, RForall, RForallI, LExists,
        RExists, LW, RW, LC, RC, LCeq, Cut, RefAx, RefL, Eq1, Eq2, Rep1R, Rep2R, Rep1L, Rep2L, Rep, RepPrime,
        Rep1Lplus, Rep2Lplus, CNG, Symm,
    ];

    /// Identifier used in derivation files and calculus specs.
    pub fn text_id(self) -> &'static str {
        match self {
            Init => "init",
            LBot => "lbot",
            MinBot => "minbot",
            LAnd => "land",
            RAnd => "rand",
            LOr => "lor",
            ROr => "ror",
            LImp => "limp",
            RImp => "rimp",
            LImpI => "limpi",
            RImpI => "rimpi",
            LForall => "lforall",
            RForall => "rforall",
            RForallI => "rforalli",
            LExists => "lexists",
            RExists => "rexists",
            LW => "lw",
            RW => "rw",
            LC => "lc",
            RC => "rc",
            LCeq => "lceq",
            Cut => "cut",
            RefAx => "refax",
            RefL => "refl",
            Eq1 => "eq1",
            Eq2 => "eq2",
            Rep1R => "rep1r",
            Rep2R => "rep2r",
            Rep1L => "rep1l",
            Rep2L => "rep2l",
            Rep => "rep",
            RepPrime => "repprime",
            Rep1Lplus => "rep1lplus",
            Rep2Lplus => "rep2lplus",
            CNG => "cng",
            Symm => "symm",
        }
    }

    pub fn from_text_id(s: &str) -> Option<RuleId> {
        RuleId::ALL.iter().copied().find(|r| r.text_id() == s)
    }

    pub fn is_leaf(self) -> bool {
        matches!(self, Init | LBot | MinBot | RefAx)
    }

    /// 1 or 2 for the oriented replacement rules, `None` otherwise.
    pub fn index(self) -> Option<u8> {
        match self {
            Eq1 | Rep1R | Rep1L | RepPrime | Rep1Lplus => Some(1),
            Eq2 | Rep2R | Rep2L | Rep | Rep2Lplus => Some(2),
            _ => None,
        }
    }

    /// Replacement rules whose context formula sits in the succedent.
    pub fn rewrites_succedent(self) -> bool {
        matches!(self, Eq1 | Eq2 | Rep1R | Rep2R | CNG)
    }

    /// Replacement rules whose context formula sits in the antecedent.
    pub fn rewrites_antecedent(self) -> bool {
        matches!(self, Rep1L | Rep2L | Rep | RepPrime | Rep1Lplus | Rep2Lplus)
    }

    pub fn is_replacement(self) -> bool {
        self.rewrites_succedent() || self.rewrites_antecedent()
    }

    pub fn is_equality_rule(self) -> bool {
        self.is_replacement() || matches!(self, RefAx | RefL | Symm)
    }

    pub fn is_structural(self) -> bool {
        matches!(self, LW | RW | LC | RC | LCeq | Cut)
    }

    pub fn is_logical(self) -> bool {
        !(self.is_equality_rule() || self.is_structural() || self == Init)
    }

    /// Whether the rule keeps the context formula of an equality context in
    /// the premiss next to the rewritten copy.
    pub fn repeats_context(self, context_is_equality: bool) -> bool {
        match self {
            Rep | RepPrime => true,
            Rep1Lplus | Rep2Lplus => context_is_equality,
            _ => false,
        }
    }

    /// The same kind of rule with the other index.
    pub fn mirrored(self) -> RuleId {
        match self {
            Eq1 => Eq2,
            Eq2 => Eq1,
            Rep1R => Rep2R,
            Rep2R => Rep1R,
            Rep1L => Rep2L,
            Rep2L => Rep1L,
            Rep => RepPrime,
            RepPrime => Rep,
            Rep1Lplus => Rep2Lplus,
            Rep2Lplus => Rep1Lplus,
            other => other,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Replacement witness: operating equality, context formula and the
/// rewritten occurrences (paths into the context formula of the conclusion).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Replacement {
    /// Antecedent index of the operating equality; absent for CNG.
    pub op: Option<usize>,
    pub context: usize,
    pub paths: Vec<Path>,
}

/// Conclusion indices that go to the first premiss of Cut or CNG.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Split {
    pub antecedent: Vec<usize>,
    pub succedent: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub principal: Vec<usize>,
    pub replacement: Option<Replacement>,
    pub witness: Option<Term>,
    pub eigen: Option<String>,
    pub cut_formula: Option<Formula>,
    pub split: Option<Split>,
}

impl RuleInstance {
    pub fn new(rule: RuleId, principal: Vec<usize>) -> RuleInstance {
        RuleInstance {
            rule,
            principal,
            replacement: None,
            witness: None,
            eigen: None,
            cut_formula: None,
            split: None,
        }
    }

    pub fn replacing(rule: RuleId, op: Option<usize>, context: usize, paths: Vec<Path>) -> Self {
        RuleInstance {
            replacement: Some(Replacement { op, context, paths }),
            ..RuleInstance::new(rule, vec![])
        }
    }

    pub fn with_witness(mut self, t: Term) -> Self {
        self.witness = Some(t);
        self
    }

    pub fn with_eigen(mut self, a: &str) -> Self {
        self.eigen = Some(a.to_string());
        self
    }

    pub fn with_cut(mut self, f: Formula, split: Split) -> Self {
        self.cut_formula = Some(f);
        self.split = Some(split);
        self
    }

    pub fn with_split(mut self, split: Split) -> Self {
        self.split = Some(split);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    None,
    G3m,
    G3i,
    G3c,
}

impl Base {
    pub fn logical_rules(self) -> &'static [RuleId] {
        match self {
            Base::None => &[],
            Base::G3c => &[
                LBot, LAnd, RAnd, LOr, ROr, LImp, RImp, LForall, RForall, LExists, RExists,
            ],
            Base::G3i => &[
                LBot, LAnd, RAnd, LOr, ROr, LImpI, RImpI, LForall, RForallI, LExists, RExists,
            ],
            Base::G3m => &[
                MinBot, LAnd, RAnd, LOr, ROr, LImpI, RImpI, LForall, RForallI, LExists, RExists,
            ],
        }
    }

    fn text(self) -> &'static str {
        match self {
            Base::None => "none",
            Base::G3m => "m",
            Base::G3i => "i",
            Base::G3c => "c",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flag {
    /// Equality context formulas of succedent rewrites change only on the right.
    RightHandOnly,
    /// Succedent rewrites only act on equalities.
    ContextEqOnly,
    /// Antecedent rewrites only act on formulas that are not equalities.
    ContextNonEqOnly,
    SingleOccurrence,
    /// Index-2 inferences nonlengthening, index-1 inferences shortening.
    Oriented,
}

impl Flag {
    const ALL: [Flag; 5] = [
        Flag::RightHandOnly,
        Flag::ContextEqOnly,
        Flag::ContextNonEqOnly,
        Flag::SingleOccurrence,
        Flag::Oriented,
    ];

    pub fn text_id(self) -> &'static str {
        match self {
            Flag::RightHandOnly => "eqr",
            Flag::ContextEqOnly => "r-eq",
            Flag::ContextNonEqOnly => "l-noneq",
            Flag::SingleOccurrence => "single",
            Flag::Oriented => "oriented",
        }
    }
}

/// An antisymmetric relation on terms; `precedes(a, b)` reads `a ≺ b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Precedence {
    Empty,
    TermHeight,
    Explicit(Vec<(Term, Term)>),
}

impl Precedence {
    pub fn precedes(&self, a: &Term, b: &Term) -> bool {
        match self {
            Precedence::Empty => false,
            Precedence::TermHeight => a.height() < b.height(),
            Precedence::Explicit(pairs) => pairs.iter().any(|(x, y)| x == a && y == b),
        }
    }

    pub fn is_antisymmetric(&self) -> bool {
        match self {
            Precedence::Explicit(pairs) => pairs
                .iter()
                .all(|(x, y)| x != y && !pairs.iter().any(|(u, v)| u == y && v == x)),
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalcError {
    #[error("rule {0} is not part of the calculus")]
    RuleNotInCalculus(RuleId),
    #[error("restriction violated: {0}")]
    FlagViolation(String),
    #[error("principal formula does not fit rule {rule}: {detail}")]
    ShapeMismatch { rule: RuleId, detail: String },
    #[error("eigenparameter `{0}` occurs in the conclusion")]
    EigenvariableViolation(String),
    #[error("orientation violated: {0}")]
    OrientationViolation(String),
    #[error("malformed instance for {rule}: {detail}")]
    MalformedInstance { rule: RuleId, detail: String },
    #[error("invalid calculus: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// Logic base, enabled rules, restriction flags and precedence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalculusSpec {
    pub base: Base,
    pub rules: BTreeSet<RuleId>,
    pub flags: BTreeSet<Flag>,
    pub precedence: Option<Precedence>,
}

impl CalculusSpec {
    /// Builds a spec; initial sequents and the logical rules of `base` are
    /// always included.
    pub fn new(
        base: Base,
        rules: impl IntoIterator<Item = RuleId>,
        flags: impl IntoIterator<Item = Flag>,
        precedence: Option<Precedence>,
    ) -> Result<CalculusSpec, CalcError> {
        let mut all: BTreeSet<RuleId> = rules.into_iter().collect();
        all.insert(Init);
        all.extend(base.logical_rules().iter().copied());
        let spec = CalculusSpec {
            base,
            rules: all,
            flags: flags.into_iter().collect(),
            precedence,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn equality(rules: impl IntoIterator<Item = RuleId>) -> CalculusSpec {
        CalculusSpec::new(Base::None, rules, [], None).expect("equality rule set")
    }

    fn validate(&self) -> Result<(), CalcError> {
        if self.base == Base::None {
            if let Some(r) = self.rules.iter().find(|r| r.is_logical()) {
                return Err(CalcError::InvalidSpec(format!("logical rule {r} needs a logical base")));
            }
        }
        if self.flags.contains(&Flag::Oriented) && self.precedence.is_none() {
            return Err(CalcError::InvalidSpec("oriented calculus needs a precedence".into()));
        }
        if let Some(p) = &self.precedence {
            if !p.is_antisymmetric() {
                return Err(CalcError::InvalidSpec("precedence is not antisymmetric".into()));
            }
        }
        Ok(())
    }

    pub fn has(&self, rule: RuleId) -> bool {
        self.rules.contains(&rule)
    }

    pub fn has_flag(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }

    /// Copy with extra rules enabled.
    pub fn with_rules(&self, extra: impl IntoIterator<Item = RuleId>) -> CalculusSpec {
        let mut s = self.clone();
        s.rules.extend(extra);
        s
    }

    pub fn with_base(&self, base: Base) -> CalculusSpec {
        let mut s = self.clone();
        s.base = base;
        s.rules.retain(|r| !r.is_logical());
        s.rules.extend(base.logical_rules().iter().copied());
        s
    }

    pub fn with_precedence(&self, precedence: Precedence) -> CalculusSpec {
        let mut s = self.clone();
        s.precedence = Some(precedence);
        s
    }
}

impl fmt::Display for CalculusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rules: Vec<_> = self
            .rules
            .iter()
            .filter(|r| **r != Init && !r.is_logical())
            .map(|r| r.text_id())
            .collect();
        let flags: Vec<_> = self.flags.iter().map(|fl| fl.text_id()).collect();
        let prec = match &self.precedence {
            None => "none".to_string(),
            Some(Precedence::Empty) => "empty".to_string(),
            Some(Precedence::TermHeight) => "height".to_string(),
            Some(Precedence::Explicit(pairs)) => format!(
                "{{{}}}",
                pairs
                    .iter()
                    .map(|(a, b)| format!("{a}<{b}"))
                    .collect::<Vec<_>>()
                    .join(";")
            ),
        };
        write!(
            f,
            "base={} rules={} flags={} prec={}",
            self.base.text(),
            rules.join(","),
            flags.join(","),
            prec
        )
    }
}

impl FromStr for CalculusSpec {
    type Err = CalcError;

    /// `base=<none|m|i|c> rules=<list> flags=<list> prec=<none|empty|height|{a<b;...}>`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut base = Base::None;
        let mut rules = Vec::new();
        let mut flags = Vec::new();
        let mut precedence = None;
        for field in s.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| CalcError::InvalidSpec(format!("expected key=value, got `{field}`")))?;
            match key {
                "base" => {
                    base = match value {
                        "none" => Base::None,
                        "m" => Base::G3m,
                        "i" => Base::G3i,
                        "c" => Base::G3c,
                        _ => return Err(CalcError::InvalidSpec(format!("unknown base `{value}`"))),
                    }
                }
                "rules" => {
                    for id in value.split(',').filter(|x| !x.is_empty()) {
                        rules.push(
                            RuleId::from_text_id(id)
                                .ok_or_else(|| CalcError::InvalidSpec(format!("unknown rule `{id}`")))?,
                        );
                    }
                }
                "flags" => {
                    for id in value.split(',').filter(|x| !x.is_empty()) {
                        flags.push(
                            Flag::ALL
                                .iter()
                                .copied()
                                .find(|f| f.text_id() == id)
                                .ok_or_else(|| CalcError::InvalidSpec(format!("unknown flag `{id}`")))?,
                        );
                    }
                }
                "prec" => precedence = parse_precedence(value)?,
                _ => return Err(CalcError::InvalidSpec(format!("unknown field `{key}`"))),
            }
        }
        CalculusSpec::new(base, rules, flags, precedence)
    }
}

/// `none`, `empty`, `height`, or an explicit list `{a<b;f(a)<c}`.
pub fn parse_precedence(value: &str) -> Result<Option<Precedence>, CalcError> {
    Ok(match value {
        "none" => None,
        "empty" => Some(Precedence::Empty),
        "height" => Some(Precedence::TermHeight),
        v if v.starts_with('{') && v.ends_with('}') => {
            let mut pairs = Vec::new();
            for item in v[1..v.len() - 1].split(';').map(str::trim).filter(|x| !x.is_empty()) {
                let (a, b) = item
                    .split_once('<')
                    .ok_or_else(|| CalcError::InvalidSpec(format!("expected a<b, got `{item}`")))?;
                let parse = |t: &str| {
                    crate::parser::parse_term(t.trim())
                        .map_err(|e| CalcError::InvalidSpec(format!("bad term in precedence: {e}")))
                };
                pairs.push((parse(a)?, parse(b)?));
            }
            Some(Precedence::Explicit(pairs))
        }
        _ => return Err(CalcError::InvalidSpec(format!("unknown precedence `{value}`"))),
    })
}

pub(crate) fn paths_text(paths: &[Path]) -> String {
    paths.iter().map(|p| path_to_string(p)).collect::<Vec<_>>().join("/")
}
