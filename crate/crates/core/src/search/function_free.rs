//! Function-free atomic sequents: derivability is decided by chains of
//! antecedent equalities, and a derivation using only index-2 replacements
//! is read off the chains.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::calculus::{preset, RuleId, RuleInstance};
use crate::checker::Derivation;
use crate::syntax::{Formula, Sequent, Side, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("function symbols present in `{0}`")]
    FunctionSymbolsPresent(String),
    #[error("goal must have atomic formulas on the left and a single atom on the right")]
    NonAtomicGoal,
    #[error("witness does not fit the goal: {0}")]
    MalformedWitness(String),
}

/// One antecedent equality used by a chain, as it is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub index: usize,
    pub lhs: Term,
    pub rhs: Term,
}

/// Equalities arranged as `from ≈ a1, a1 ≈ a2, ..., an ≈ to`; each link keeps
/// its stored orientation. The empty chain connects a term with itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub from: Term,
    pub to: Term,
    pub links: Vec<Link>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }
}

/// Antecedent atom matching the succedent (absent for an equality goal) and
/// one chain per argument position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub atom: Option<usize>,
    pub chains: Vec<Chain>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Derivable(Witness),
    Underivable,
}

/// A shortest chain from `a` to `b` through the equalities of `gamma`.
pub fn chain_extract(gamma: &[Formula], a: &Term, b: &Term) -> Option<Chain> {
    let mut prev: BTreeMap<Term, (Term, usize)> = BTreeMap::new();
    let mut queue = VecDeque::from([a.clone()]);
    let mut seen = std::collections::BTreeSet::from([a.clone()]);
    while let Some(t) = queue.pop_front() {
        if t == *b {
            break;
        }
        for (i, f) in gamma.iter().enumerate() {
            let Some((l, r)) = f.as_eq() else { continue };
            let next = if *l == t {
                r
            } else if *r == t {
                l
            } else {
                continue;
            };
            if seen.insert(next.clone()) {
                prev.insert(next.clone(), (t.clone(), i));
                queue.push_back(next.clone());
            }
        }
    }
    if !seen.contains(b) {
        return None;
    }
    let mut links = Vec::new();
    let mut cur = b.clone();
    while cur != *a {
        let (p, i) = prev[&cur].clone();
        let (l, r) = gamma[i].as_eq().expect("equality link");
        links.push(Link {
            index: i,
            lhs: l.clone(),
            rhs: r.clone(),
        });
        cur = p;
    }
    links.reverse();
    Some(Chain {
        from: a.clone(),
        to: b.clone(),
        links,
    })
}

fn check_goal(goal: &Sequent) -> Result<&Formula, DecideError> {
    if !goal.is_function_free() {
        return Err(DecideError::FunctionSymbolsPresent(goal.to_string()));
    }
    match goal.succedent.as_slice() {
        [f] if f.is_atomic() && goal.antecedent.iter().all(Formula::is_atomic) => Ok(f),
        _ => Err(DecideError::NonAtomicGoal),
    }
}

/// Decides derivability of a function-free atomic sequent in the calculi
/// with index-1 and index-2 replacements.
pub fn decide_function_free(goal: &Sequent) -> Result<Decision, DecideError> {
    let target = check_goal(goal)?;
    let gamma = &goal.antecedent;
    if let Some((a, b)) = target.as_eq() {
        return Ok(match chain_extract(gamma, a, b) {
            Some(c) => Decision::Derivable(Witness {
                atom: None,
                chains: vec![c],
            }),
            None => Decision::Underivable,
        });
    }
    let Formula::Atom(p, bs) = target else {
        unreachable!("atomic")
    };
    for (i, f) in gamma.iter().enumerate() {
        let Formula::Atom(q, as_) = f else { continue };
        if q != p || as_.len() != bs.len() {
            continue;
        }
        let chains: Option<Vec<Chain>> = as_.iter().zip(bs).map(|(a, b)| chain_extract(gamma, a, b)).collect();
        if let Some(chains) = chains {
            return Ok(Decision::Derivable(Witness { atom: Some(i), chains }));
        }
    }
    Ok(Decision::Underivable)
}

fn rep(rule: RuleId, op: usize, ctx: usize, path: Vec<usize>) -> RuleInstance {
    RuleInstance::replacing(rule, Some(op), ctx, vec![path])
}

/// One backward step towards a leaf; the chain `a ≈ ... ≈ b` is shortened
/// by rewriting its first or last link, or by folding the first link into
/// the second one.
fn step_for_chain(
    s: &Sequent,
    chain: &Chain,
    left: Option<(usize, Vec<usize>)>,
    right: (usize, Vec<usize>),
) -> (RuleInstance, Sequent) {
    let spec = &preset("R2rl").expect("preset").spec;
    let first = &chain.links[0];
    let last = chain.links.last().expect("nonempty");
    let inst = if let (true, Some((ctx, path))) = (first.lhs == chain.from, left) {
        rep(RuleId::Rep2L, first.index, ctx, path)
    } else if first.lhs == chain.from {
        // Equality goal: rewrite its left-hand side forward.
        rep(RuleId::Rep2R, first.index, right.0, vec![0])
    } else if last.lhs == chain.to {
        rep(RuleId::Rep2R, last.index, right.0, right.1)
    } else {
        let second = &chain.links[1];
        let path = if second.lhs == first.lhs { vec![0] } else { vec![1] };
        rep(RuleId::Rep2L, first.index, second.index, path)
    };
    let premiss = crate::calculus::premisses_of(s, &inst, spec)
        .expect("chain step is an R2rl inference")
        .remove(0);
    (inst, premiss)
}

/// Derivation in R2rl of `goal` from a witness computed by
/// [`decide_function_free`].
pub fn chain_to_derivation(witness: &Witness, goal: &Sequent) -> Result<Derivation, DecideError> {
    let target = check_goal(goal)?;
    let bad = |m: &str| DecideError::MalformedWitness(m.to_string());
    let mut spine: Vec<(Sequent, RuleInstance)> = Vec::new();
    let mut s = goal.clone();
    let leaf;
    if target.is_equality() {
        if witness.atom.is_some() || witness.chains.len() != 1 {
            return Err(bad("equality goals take one chain and no atom"));
        }
        loop {
            let (u, v) = {
                let (u, v) = s.succedent[0].as_eq().expect("equality");
                (u.clone(), v.clone())
            };
            if u == v {
                leaf = RuleInstance::new(RuleId::RefAx, vec![0]);
                break;
            }
            if let Some(i) = s.find(Side::Antecedent, &s.succedent[0]) {
                leaf = RuleInstance::new(RuleId::Init, vec![i, 0]);
                break;
            }
            let chain = chain_extract(&s.antecedent, &u, &v).ok_or_else(|| bad("no chain"))?;
            let (inst, premiss) = step_for_chain(&s, &chain, None, (0, vec![1]));
            spine.push((s, inst));
            s = premiss;
        }
    } else {
        let w = witness.atom.ok_or_else(|| bad("atom goals need a witnessing atom"))?;
        match (s.antecedent.get(w), target) {
            (Some(Formula::Atom(p, a)), Formula::Atom(q, b)) if p == q && a.len() == b.len() => {}
            _ => return Err(bad("witness atom does not match the goal")),
        }
        loop {
            let (Formula::Atom(_, a), Formula::Atom(_, b)) = (&s.antecedent[w], &s.succedent[0]) else {
                unreachable!("atoms")
            };
            let Some(k) = (0..a.len()).find(|&k| a[k] != b[k]) else {
                leaf = RuleInstance::new(RuleId::Init, vec![w, 0]);
                break;
            };
            let chain = chain_extract(&s.antecedent, &a[k], &b[k]).ok_or_else(|| bad("no chain"))?;
            let (inst, premiss) = step_for_chain(&s, &chain, Some((w, vec![k])), (0, vec![k]));
            spine.push((s, inst));
            s = premiss;
        }
    }
    let mut d = Derivation::leaf(s, leaf);
    while let Some((conclusion, inst)) = spine.pop() {
        d = Derivation::new(conclusion, inst, vec![d]);
    }
    Ok(d)
}
