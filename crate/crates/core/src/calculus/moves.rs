use std::collections::{BTreeSet, HashSet};

use crate::syntax::{occurrences, Formula, Path, Sequent, Side, Term};

use super::{premisses_of, CalculusSpec, RuleId, RuleInstance, Split};
use RuleId::*;

/// Subterms of `goal`, closed under the function symbols of `goal` up to
/// `term_height`.
pub fn default_universe(goal: &Sequent, term_height: usize) -> BTreeSet<Term> {
    let mut universe = goal.subterms();
    let mut symbols = BTreeSet::new();
    goal.formulas().for_each(|f| f.function_symbols_into(&mut symbols));
    for p in goal.params() {
        universe.insert(Term::Param(p));
    }
    extend_universe(&mut universe, &symbols, term_height);
    universe
}

/// Closes `universe` under `symbols`, keeping terms of height at most `term_height`.
pub fn extend_universe(universe: &mut BTreeSet<Term>, symbols: &BTreeSet<(String, usize)>, term_height: usize) {
    loop {
        let current: Vec<Term> = universe.iter().cloned().collect();
        let mut added = false;
        for (f, n) in symbols {
            let mut tuple = vec![0usize; *n];
            if current.is_empty() && *n > 0 {
                continue;
            }
            loop {
                let args: Vec<Term> = tuple.iter().map(|&k| current[k].clone()).collect();
                let t = Term::App(f.clone(), args);
                if t.height() <= term_height && universe.insert(t) {
                    added = true;
                }
                let mut k = 0;
                while k < *n {
                    tuple[k] += 1;
                    if tuple[k] < current.len() {
                        break;
                    }
                    tuple[k] = 0;
                    k += 1;
                }
                if k == *n {
                    break;
                }
            }
        }
        if !added {
            return;
        }
    }
}

/// First name of the form `_eN` not occurring in `s`.
pub(crate) fn fresh_eigen_name(s: &Sequent) -> String {
    let used = s.params();
    (1..)
        .map(|n| format!("_e{n}"))
        .find(|a| !used.contains(a))
        .expect("infinitely many candidates")
}

fn nonempty_subsets(paths: &[Path]) -> Vec<Vec<Path>> {
    let n = paths.len().min(12);
    (1u32..(1 << n))
        .map(|mask| {
            (0..n)
                .filter(|k| mask & (1 << k) != 0)
                .map(|k| paths[k].clone())
                .collect()
        })
        .collect()
}

fn splits(s: &Sequent, exclude_succedent: Option<usize>) -> Vec<Split> {
    let n = s.antecedent.len();
    let succ: Vec<usize> = (0..s.succedent.len())
        .filter(|j| Some(*j) != exclude_succedent)
        .collect();
    let total = n + succ.len();
    if total > 16 {
        return vec![Split::default()];
    }
    (0u32..(1 << total))
        .map(|mask| Split {
            antecedent: (0..n).filter(|k| mask & (1 << k) != 0).collect(),
            succedent: succ
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << (n + k)) != 0)
                .map(|(_, j)| *j)
                .collect(),
        })
        .collect()
}

/// Candidate cut formulas: equalities over the universe and the atoms of the goal.
fn cut_pool(goal: &Sequent, universe: &BTreeSet<Term>) -> Vec<Formula> {
    let mut pool = BTreeSet::new();
    for l in universe {
        for r in universe {
            pool.insert(Formula::eq(l.clone(), r.clone()));
        }
    }
    for f in goal.formulas() {
        if f.is_atomic() {
            pool.insert(f.clone());
        }
    }
    pool.into_iter().collect()
}

/// Every instance of a rule of `spec` with conclusion `goal` whose witness
/// and replacement terms come from `universe`; instances with the same rule
/// and the same premisses are reported once.
pub fn applicable_instances(goal: &Sequent, spec: &CalculusSpec, universe: &BTreeSet<Term>) -> Vec<RuleInstance> {
    applicable_moves(goal, spec, universe)
        .into_iter()
        .map(|(i, _)| i)
        .collect()
}

/// [`applicable_instances`] paired with the premisses of each instance.
pub fn applicable_moves(
    goal: &Sequent,
    spec: &CalculusSpec,
    universe: &BTreeSet<Term>,
) -> Vec<(RuleInstance, Vec<Sequent>)> {
    let mut out = Vec::new();
    let mut seen: HashSet<(RuleId, Vec<Sequent>)> = HashSet::new();
    let mut push = |inst: RuleInstance| {
        if let Ok(ps) = premisses_of(goal, &inst, spec) {
            if seen.insert((inst.rule, ps.clone())) {
                out.push((inst, ps));
            }
        }
    };
    let ant = &goal.antecedent;
    let suc = &goal.succedent;
    for &rule in &spec.rules {
        match rule {
            Init | MinBot => {
                for i in 0..ant.len() {
                    for j in 0..suc.len() {
                        push(RuleInstance::new(rule, vec![i, j]));
                    }
                }
            }
            LBot | LAnd | LOr | LImp | LImpI | LW | LC | LCeq | Symm => {
                (0..ant.len()).for_each(|i| push(RuleInstance::new(rule, vec![i])));
            }
            RefAx | RAnd | ROr | RImp | RImpI | RW | RC => {
                (0..suc.len()).for_each(|j| push(RuleInstance::new(rule, vec![j])));
            }
            LForall => {
                for i in 0..ant.len() {
                    for t in universe {
                        push(RuleInstance::new(rule, vec![i]).with_witness(t.clone()));
                    }
                }
            }
            RExists => {
                for j in 0..suc.len() {
                    for t in universe {
                        push(RuleInstance::new(rule, vec![j]).with_witness(t.clone()));
                    }
                }
            }
            RForall | RForallI => {
                let a = fresh_eigen_name(goal);
                (0..suc.len()).for_each(|j| push(RuleInstance::new(rule, vec![j]).with_eigen(&a)));
            }
            LExists => {
                let a = fresh_eigen_name(goal);
                (0..ant.len()).for_each(|i| push(RuleInstance::new(rule, vec![i]).with_eigen(&a)));
            }
            RefL => {
                for t in universe {
                    push(RuleInstance::new(rule, vec![]).with_witness(t.clone()));
                }
            }
            Cut => {
                for f in cut_pool(goal, universe) {
                    for split in splits(goal, None) {
                        push(RuleInstance::new(rule, vec![]).with_cut(f.clone(), split));
                    }
                }
            }
            CNG => {
                for (j, ctx) in suc.iter().enumerate() {
                    if !ctx.is_atomic() {
                        continue;
                    }
                    let mut terms = BTreeSet::new();
                    ctx.subterms_into(&mut terms);
                    for from in &terms {
                        let paths = occurrences(ctx, from).expect("atomic");
                        for chosen in nonempty_subsets(&paths) {
                            for r in universe {
                                for split in splits(goal, Some(j)) {
                                    push(
                                        RuleInstance::replacing(rule, None, j, chosen.clone())
                                            .with_witness(r.clone())
                                            .with_split(split),
                                    );
                                }
                            }
                        }
                    }
                }
            }
            _ if rule.is_replacement() => {
                let side = if rule.rewrites_succedent() {
                    Side::Succedent
                } else {
                    Side::Antecedent
                };
                for (op, f) in ant.iter().enumerate() {
                    let Some((l, r)) = f.as_eq() else { continue };
                    let from = if rule.index() == Some(1) { r } else { l };
                    for (c, ctx) in goal.side(side).iter().enumerate() {
                        if (side == Side::Antecedent && c == op) || !ctx.is_atomic() {
                            continue;
                        }
                        let paths = occurrences(ctx, from).expect("atomic");
                        for chosen in nonempty_subsets(&paths) {
                            push(RuleInstance::replacing(rule, Some(op), c, chosen));
                        }
                    }
                }
            }
            _ => {}
        }
    }
    out
}
