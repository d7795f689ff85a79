//! Forward closure of a finite pool of sequents.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::calculus::{applicable_moves, extend_universe, CalculusSpec};
use crate::syntax::{Formula, Sequent, Term};

use super::{SearchError, SearchLimits};

/// Parameters, function symbols and predicates with their arities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub params: Vec<String>,
    pub functions: Vec<(String, usize)>,
    pub predicates: Vec<(String, usize)>,
}

impl Signature {
    pub fn of(s: &Sequent) -> Signature {
        let mut functions = BTreeSet::new();
        let mut predicates = BTreeSet::new();
        for f in s.formulas() {
            f.function_symbols_into(&mut functions);
            if let Formula::Atom(p, args) = f {
                predicates.insert((p.clone(), args.len()));
            }
        }
        Signature {
            params: s.params().into_iter().collect(),
            functions: functions.into_iter().collect(),
            predicates: predicates.into_iter().collect(),
        }
    }

    /// Terms of height at most `term_height`.
    pub fn terms(&self, term_height: usize) -> BTreeSet<Term> {
        let mut out: BTreeSet<Term> = self.params.iter().map(|p| Term::param(p)).collect();
        let symbols = self.functions.iter().cloned().collect();
        extend_universe(&mut out, &symbols, term_height);
        out
    }

    /// Equalities and predicate atoms over `terms`.
    pub fn atoms(&self, terms: &BTreeSet<Term>) -> Vec<Formula> {
        let mut out = Vec::new();
        for l in terms {
            for r in terms {
                out.push(Formula::eq(l.clone(), r.clone()));
            }
        }
        let ts: Vec<&Term> = terms.iter().collect();
        for (p, n) in &self.predicates {
            let mut idx = vec![0usize; *n];
            loop {
                out.push(Formula::atom(p, idx.iter().map(|&k| ts[k].clone()).collect()));
                let mut k = 0;
                while k < *n {
                    idx[k] += 1;
                    if idx[k] < ts.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == *n || ts.is_empty() {
                    break;
                }
            }
        }
        out
    }
}

/// A finite set of candidate sequents with a single succedent formula.
#[derive(Debug, Clone, Default)]
pub struct SequentPool {
    pub sequents: Vec<Sequent>,
}

fn sub_multisets(items: &[Formula], max: usize) -> Vec<Vec<Formula>> {
    fn go(items: &[Formula], start: usize, max: usize, cur: &mut Vec<Formula>, out: &mut Vec<Vec<Formula>>) {
        out.push(cur.clone());
        if cur.len() == max {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            go(items, i, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, 0, max, &mut Vec::new(), &mut out);
    out
}

impl SequentPool {
    /// Antecedents are multisets of at most `max_antecedent` formulas drawn
    /// from `left`; succedents are single formulas from `right`.
    pub fn new(left: &[Formula], right: &[Formula], max_antecedent: usize) -> SequentPool {
        let mut seen = HashSet::new();
        let mut sequents = Vec::new();
        for ant in sub_multisets(left, max_antecedent) {
            for f in right {
                let s = Sequent::new(ant.clone(), vec![f.clone()]);
                if seen.insert(s.clone()) {
                    sequents.push(s);
                }
            }
        }
        SequentPool { sequents }
    }

    /// Every atom over the signature on either side.
    pub fn from_signature(sig: &Signature, term_height: usize, max_antecedent: usize) -> SequentPool {
        let atoms = sig.atoms(&sig.terms(term_height));
        SequentPool::new(&atoms, &atoms, max_antecedent)
    }

    /// A fixed antecedent with every atom over its signature on the right.
    pub fn with_antecedent(antecedent: &[Formula], sig: &Signature, term_height: usize) -> SequentPool {
        let atoms = sig.atoms(&sig.terms(term_height));
        let sequents = atoms
            .into_iter()
            .map(|f| Sequent::new(antecedent.to_vec(), vec![f]))
            .collect();
        SequentPool { sequents }
    }

    /// Every sequent reachable from `goal` by reading rules of `spec` upward,
    /// with witnesses from `universe`; fails once more than `cap` are found.
    pub fn reachable(
        goal: &Sequent,
        spec: &CalculusSpec,
        universe: &BTreeSet<Term>,
        cap: usize,
    ) -> Result<SequentPool, SearchError> {
        let mut seen = HashSet::from([goal.clone()]);
        let mut sequents = vec![goal.clone()];
        let mut next = 0;
        while next < sequents.len() {
            let s = sequents[next].clone();
            next += 1;
            for (_, premisses) in applicable_moves(&s, spec, universe) {
                for p in premisses {
                    if seen.insert(p.clone()) {
                        if sequents.len() == cap {
                            return Err(SearchError::BudgetExceeded(cap));
                        }
                        sequents.push(p);
                    }
                }
            }
        }
        Ok(SequentPool { sequents })
    }

    pub fn len(&self) -> usize {
        self.sequents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequents.is_empty()
    }

    fn universe(&self) -> BTreeSet<Term> {
        let mut u = BTreeSet::new();
        for s in &self.sequents {
            u.extend(s.subterms());
        }
        u
    }
}

/// Least subset of `pool` closed under the rules of `spec`, where an
/// inference counts only if all its premisses lie in the pool.
/// `lim.node_budget` bounds the number of instance checks.
pub fn saturate_forward(
    pool: &SequentPool,
    spec: &CalculusSpec,
    lim: &SearchLimits,
) -> Result<BTreeSet<Sequent>, SearchError> {
    let universe = lim.universe.clone().unwrap_or_else(|| pool.universe());
    let members: HashSet<&Sequent> = pool.sequents.iter().collect();
    let candidates: Vec<(usize, Vec<Vec<Sequent>>)> = pool
        .sequents
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let premisses = applicable_moves(s, spec, &universe)
                .into_iter()
                .map(|(_, ps)| ps)
                .filter(|ps| ps.iter().all(|p| members.contains(p)))
                .collect();
            (k, premisses)
        })
        .collect();
    let mut derived: HashSet<Sequent> = HashSet::new();
    let mut checks = 0usize;
    loop {
        let mut changed = false;
        for (k, options) in &candidates {
            let s = &pool.sequents[*k];
            if derived.contains(s) {
                continue;
            }
            for ps in options {
                checks += 1;
                if checks > lim.node_budget {
                    return Err(SearchError::BudgetExceeded(lim.node_budget));
                }
                if ps.iter().all(|p| derived.contains(p)) {
                    derived.insert(s.clone());
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            return Ok(derived.into_iter().collect());
        }
    }
}

/// Whether `goal` is derivable from the sequents reachable from it (see
/// [`SequentPool::reachable`]), computed in one pass: every inference is
/// recorded once and fires when its last premiss becomes derived.
pub fn saturate_reachable(
    goal: &Sequent,
    spec: &CalculusSpec,
    universe: &BTreeSet<Term>,
    cap: usize,
) -> Result<bool, SearchError> {
    let mut ids: HashMap<Sequent, usize> = HashMap::from([(goal.clone(), 0)]);
    let mut sequents = vec![goal.clone()];
    // Conclusion and number of premisses not yet derived, per inference.
    let mut inferences: Vec<(usize, usize)> = Vec::new();
    let mut waiting: Vec<Vec<usize>> = vec![Vec::new()];
    let mut derived = vec![false];
    let mut queue = Vec::new();
    let mut next = 0;
    while next < sequents.len() {
        let s = sequents[next].clone();
        for (_, premisses) in applicable_moves(&s, spec, universe) {
            if premisses.is_empty() {
                if !derived[next] {
                    derived[next] = true;
                    queue.push(next);
                }
                continue;
            }
            let mut ps = Vec::with_capacity(premisses.len());
            for p in premisses {
                let id = match ids.get(&p) {
                    Some(&id) => id,
                    None => {
                        if sequents.len() == cap {
                            return Err(SearchError::BudgetExceeded(cap));
                        }
                        ids.insert(p.clone(), sequents.len());
                        sequents.push(p);
                        waiting.push(Vec::new());
                        derived.push(false);
                        sequents.len() - 1
                    }
                };
                ps.push(id);
            }
            ps.sort_unstable();
            ps.dedup();
            for &p in &ps {
                waiting[p].push(inferences.len());
            }
            inferences.push((next, ps.len()));
        }
        next += 1;
    }
    while let Some(k) = queue.pop() {
        for &m in &waiting[k] {
            let (conclusion, open) = &mut inferences[m];
            *open -= 1;
            if *open == 0 && !derived[*conclusion] {
                derived[*conclusion] = true;
                queue.push(*conclusion);
            }
        }
    }
    Ok(derived[0])
}
