//! Bounded backward proof search, forward saturation and the decision
//! procedure for function-free atomic sequents.
//!
#![doc = include_str!("../../../../book/src/snippets/search.md")]

mod function_free;
mod hooks;
mod saturate;

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::calculus::{applicable_moves, default_universe, extend_universe, Base, CalculusSpec, RuleId};
use crate::checker::Derivation;
use crate::syntax::{Sequent, Term};

pub use function_free::{
    chain_extract, chain_to_derivation, decide_function_free, Chain, DecideError, Decision, Link, Witness,
};
pub use hooks::{refuting_hook, Hook};
pub use saturate::{saturate_forward, saturate_reachable, SequentPool, Signature};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximal height of a derivation.
    pub max_depth: usize,
    /// Maximal height of terms introduced by the search.
    pub term_height: usize,
    pub universe: Option<BTreeSet<Term>>,
    /// Maximal number of expanded nodes.
    pub node_budget: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_depth: 6,
            term_height: 2,
            universe: None,
            node_budget: 200_000,
        }
    }
}

impl SearchLimits {
    pub fn depth(max_depth: usize) -> SearchLimits {
        SearchLimits {
            max_depth,
            ..SearchLimits::default()
        }
    }

    pub fn with_term_height(mut self, term_height: usize) -> SearchLimits {
        self.term_height = term_height;
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: usize,
    pub memo_entries: usize,
    pub depth_reached: usize,
    pub budget_exceeded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Proved(Derivation),
    /// No derivation within the limits.
    Exhausted(SearchStats),
    /// Underivable, certified by a decision procedure or a shape invariant.
    DecidedUnderivable(String),
}

impl SearchOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchOutcome::Proved(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Proved(_) => "proved",
            SearchOutcome::Exhausted(_) => "exhausted",
            SearchOutcome::DecidedUnderivable(_) => "underivable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("node budget of {0} exceeded")]
    BudgetExceeded(usize),
}

struct Searcher<'a> {
    spec: &'a CalculusSpec,
    lim: &'a SearchLimits,
    universe: BTreeSet<Term>,
    symbols: BTreeSet<(String, usize)>,
    /// Largest remaining depth at which a sequent is known to fail.
    failed: HashMap<Sequent, usize>,
    proved: HashMap<Sequent, Derivation>,
    hooks: Vec<Hook>,
    /// Height bound on terms in premisses.
    max_height: usize,
    stats: SearchStats,
}

fn term_height(s: &Sequent) -> usize {
    s.subterms().iter().map(Term::height).max().unwrap_or(0)
}

struct OutOfBudget;

impl Searcher<'_> {
    fn universe_for(&self, s: &Sequent) -> BTreeSet<Term> {
        let params = s.params();
        if params.iter().all(|p| self.universe.contains(&Term::Param(p.clone()))) {
            return self.universe.clone();
        }
        let mut u = self.universe.clone();
        u.extend(params.into_iter().map(Term::Param));
        extend_universe(&mut u, &self.symbols, self.lim.term_height);
        u
    }

    fn dfs(&mut self, s: &Sequent, depth: usize) -> Result<Option<Derivation>, OutOfBudget> {
        if let Some(d) = self.proved.get(s) {
            if d.height() <= depth {
                return Ok(Some(relabel(d, s)));
            }
        }
        if self.failed.get(s).is_some_and(|&d| d >= depth) {
            return Ok(None);
        }
        if self.hooks.iter().any(|h| h.holds(s)) {
            self.failed.insert(s.clone(), usize::MAX);
            return Ok(None);
        }
        self.stats.nodes += 1;
        if self.stats.nodes > self.lim.node_budget {
            self.stats.budget_exceeded = true;
            return Err(OutOfBudget);
        }
        let universe = self.universe_for(s);
        let mut moves = applicable_moves(s, self.spec, &universe);
        moves.sort_by_key(|(i, _)| !i.rule.is_leaf());
        for (inst, premisses) in moves {
            if premisses.is_empty() {
                let d = Derivation::leaf(s.clone(), inst);
                self.proved.insert(s.clone(), d.clone());
                return Ok(Some(d));
            }
            if depth == 0 || premisses.iter().any(|p| p == s || term_height(p) > self.max_height) {
                continue;
            }
            let mut children = Vec::with_capacity(premisses.len());
            for p in &premisses {
                match self.dfs(p, depth - 1)? {
                    Some(d) => children.push(d),
                    None => break,
                }
            }
            if children.len() == premisses.len() {
                let d = Derivation::new(s.clone(), inst, children);
                self.proved.insert(s.clone(), d.clone());
                return Ok(Some(d));
            }
        }
        let entry = self.failed.entry(s.clone()).or_insert(0);
        *entry = (*entry).max(depth);
        Ok(None)
    }
}

/// A stored derivation of a sequent equal (as a multiset) to `s`, with the
/// root reindexed to the formula order of `s`.
fn relabel(d: &Derivation, s: &Sequent) -> Derivation {
    if d.sequent.antecedent == s.antecedent && d.sequent.succedent == s.succedent {
        return d.clone();
    }
    crate::transform::reorder(d, s).expect("multiset-equal sequents")
}

/// Iterative deepening search for a derivation of `goal` in `spec`.
pub fn prove(goal: &Sequent, spec: &CalculusSpec, lim: &SearchLimits) -> SearchOutcome {
    if let Some(h) = refuting_hook(goal, spec) {
        return SearchOutcome::DecidedUnderivable(h.name().to_string());
    }
    if decides_function_free(spec) {
        if let Ok(Decision::Underivable) = decide_function_free(goal) {
            return SearchOutcome::DecidedUnderivable("no chain of equalities".to_string());
        }
    }
    let universe = lim
        .universe
        .clone()
        .unwrap_or_else(|| default_universe(goal, lim.term_height));
    let mut symbols = BTreeSet::new();
    goal.formulas().for_each(|f| f.function_symbols_into(&mut symbols));
    let hooks = Hook::ALL.into_iter().filter(|h| h.applies_to(spec)).collect();
    let mut searcher = Searcher {
        spec,
        lim,
        universe,
        symbols,
        failed: HashMap::new(),
        proved: HashMap::new(),
        hooks,
        max_height: lim.term_height.max(term_height(goal)),
        stats: SearchStats::default(),
    };
    for depth in 0..=lim.max_depth {
        searcher.stats.depth_reached = depth;
        match searcher.dfs(goal, depth) {
            Ok(Some(d)) => return SearchOutcome::Proved(relabel(&d, goal)),
            Ok(None) => {}
            Err(OutOfBudget) => break,
        }
    }
    searcher.stats.memo_entries = searcher.failed.len() + searcher.proved.len();
    SearchOutcome::Exhausted(searcher.stats)
}

/// Calculi in which function-free atomic derivability is decided by chains.
fn decides_function_free(spec: &CalculusSpec) -> bool {
    use RuleId::*;
    let core: BTreeSet<RuleId> = spec.rules.iter().copied().filter(|r| *r != Init).collect();
    let families: [&[RuleId]; 4] = [
        &[RefAx, Rep1R, Rep2R],
        &[RefAx, Rep1R, Rep2R, Rep1L, Rep2L],
        &[RefAx, Rep2R, Rep2L],
        &[RefAx, Rep1R, Rep1L],
    ];
    spec.base == Base::None && spec.flags.is_empty() && families.iter().any(|f| core == f.iter().copied().collect())
}
