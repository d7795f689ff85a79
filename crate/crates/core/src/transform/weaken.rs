use std::collections::BTreeSet;

use crate::calculus::{premisses_of, Base, CalculusSpec, RuleId, RuleInstance, Split};
use crate::checker::{check, Derivation};
use crate::syntax::{Formula, Sequent, Side};

use super::build::{node, rename};
use super::{permissive, reorder, TransformError, TransformReport};

fn all_params(d: &Derivation, out: &mut BTreeSet<String>) {
    out.extend(d.sequent.params());
    if let Some(t) = &d.rule.witness {
        t.params_into(out);
    }
    d.children.iter().for_each(|c| all_params(c, out));
}

/// Adds `f` to `side` of every sequent that inherits the context.
pub(crate) fn weaken(d: &Derivation, f: &Formula, side: Side) -> Derivation {
    let mut inst = d.rule.clone();
    let mut children = d.children.clone();
    if let Some(a) = inst.eigen.clone() {
        if f.params().contains(&a) {
            let mut used = f.params();
            all_params(d, &mut used);
            let fresh = (0..)
                .map(|k| format!("{a}{k}"))
                .find(|b| !used.contains(b))
                .expect("unbounded");
            children = children.iter().map(|c| rename(c, &a, &fresh)).collect();
            inst.eigen = Some(fresh);
        }
    }
    let rule = inst.rule;
    let children = children
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let discards = side == Side::Succedent && matches!(rule, RuleId::RImpI | RuleId::RForallI);
            let first_of_split = k == 0 && matches!(rule, RuleId::Cut | RuleId::CNG);
            if discards || first_of_split {
                c.clone()
            } else {
                weaken(c, f, side)
            }
        })
        .collect();
    Derivation::new(d.sequent.with_added(side, f.clone()), inst, children)
}

fn weaken_all(d: Derivation, ant: &[Formula]) -> Derivation {
    ant.iter().fold(d, |d, f| weaken(&d, f, Side::Antecedent))
}

pub(crate) fn require_valid(d: &Derivation, spec: &CalculusSpec) -> Result<(), TransformError> {
    match check(d, spec).first_error {
        None => Ok(()),
        Some(e) => Err(TransformError::Precondition(format!(
            "input invalid at {:?}: {}",
            e.path, e.error
        ))),
    }
}

/// Height-preserving weakening by `f` on `side`; eigenparameters clashing
/// with `f` are renamed.
pub fn weaken_hp(
    d: &Derivation,
    f: &Formula,
    side: Side,
    spec: &CalculusSpec,
) -> Result<TransformReport, TransformError> {
    require_valid(d, spec)?;
    let out = weaken(d, f, side);
    TransformReport::finish(d, out, spec.clone(), vec!["weaken".into()])
}

type Options = Vec<Option<Derivation>>;

fn better(a: Option<Derivation>, b: Option<Derivation>) -> Option<Derivation> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.height() > x.height() { y } else { x }),
        (x, y) => x.or(y),
    }
}

fn single(ant: &[Formula], f: &Formula) -> Sequent {
    Sequent::new(ant.to_vec(), vec![f.clone()])
}

/// Projections of `d` onto each of its succedent formulas, each of maximal
/// height among the ones this construction finds.
fn projections(d: &Derivation) -> Result<Options, TransformError> {
    let s = &d.sequent;
    let ant = &s.antecedent;
    let n = s.succedent.len();
    let mut out: Options = vec![None; n];
    for (k, f) in s.succedent.iter().enumerate() {
        let goal = single(ant, f);
        if f.is_identity() {
            out[k] = Some(node(goal, RuleInstance::new(RuleId::RefAx, vec![0]), vec![])?);
        } else if let Some(i) = s.find(Side::Antecedent, f).filter(|_| f.is_atomic()) {
            out[k] = Some(node(goal, RuleInstance::new(RuleId::Init, vec![i, 0]), vec![])?);
        }
    }
    let premisses = premisses_of(s, &d.rule, &permissive())?;
    let children: Vec<Derivation> = d
        .children
        .iter()
        .zip(&premisses)
        .map(|(c, p)| reorder(c, p))
        .collect::<Result<_, _>>()?;
    let rule = d.rule.rule;
    use RuleId::*;
    match rule {
        Init | RefAx => {}
        Rep1R | Rep2R | Eq1 | Eq2 => {
            let child = projections(&children[0])?;
            let rep = d.rule.replacement.as_ref().expect("replacement");
            for k in 0..n {
                let opt = if k == rep.context {
                    let mut inst = d.rule.clone();
                    inst.replacement.as_mut().expect("replacement").context = 0;
                    match child[k].clone() {
                        Some(c) => Some(node(single(ant, &s.succedent[k]), inst, vec![c])?),
                        None => None,
                    }
                } else if matches!(rule, Eq1 | Eq2) {
                    let op = ant[rep.op.expect("op")].clone();
                    child[k].as_ref().map(|c| weaken(c, &op, Side::Antecedent))
                } else {
                    child[k].clone()
                };
                out[k] = better(out[k].take(), opt);
            }
        }
        Rep1L | Rep2L | Rep | RepPrime | Rep1Lplus | Rep2Lplus | LW | LC | LCeq | RefL | Symm => {
            let child = projections(&children[0])?;
            for k in 0..n {
                let opt = match child[k].clone() {
                    Some(c) => Some(node(single(ant, &s.succedent[k]), d.rule.clone(), vec![c])?),
                    None => None,
                };
                out[k] = better(out[k].take(), opt);
            }
        }
        RW | RC => {
            let j = d.rule.principal[0];
            let child = projections(&children[0])?;
            for k in 0..n {
                let opt = match rule {
                    RW if k == j => None,
                    RW => child[if k < j { k } else { k - 1 }].clone(),
                    _ if k == j => better(child[k].clone(), child[n].clone()),
                    _ => child[k].clone(),
                };
                out[k] = better(out[k].take(), opt);
            }
        }
        Cut | CNG => {
            let split = d.rule.split.clone().unwrap_or_default();
            let left_ant: Vec<Formula> = split.antecedent.iter().map(|&i| ant[i].clone()).collect();
            let right_ant: Vec<Formula> = (0..ant.len())
                .filter(|i| !split.antecedent.contains(i))
                .map(|i| ant[i].clone())
                .collect();
            let left = projections(&children[0])?;
            let right = projections(&children[1])?;
            let ctx = d.rule.replacement.as_ref().map(|r| r.context);
            let bridge = left.last().cloned().flatten();
            let mut rest = 0;
            for k in 0..n {
                let opt = if let Some(m) = split.succedent.iter().position(|&j| j == k) {
                    left[m].clone().map(|c| weaken_all(c, &right_ant))
                } else {
                    let m = rest;
                    rest += 1;
                    let f = &s.succedent[k];
                    match (rule, &bridge, right[m].clone()) {
                        (Cut, Some(b), Some(c)) => {
                            let conclusion =
                                Sequent::new(left_ant.iter().chain(&right_ant).cloned().collect(), vec![f.clone()]);
                            let mut inst = d.rule.clone();
                            inst.split = Some(Split {
                                antecedent: (0..left_ant.len()).collect(),
                                succedent: vec![],
                            });
                            Some(node(conclusion, inst, vec![b.clone(), c])?)
                        }
                        (CNG, _, Some(c)) if Some(k) != ctx => Some(weaken_all(c, &left_ant)),
                        (CNG, Some(b), Some(c)) => {
                            let conclusion =
                                Sequent::new(left_ant.iter().chain(&right_ant).cloned().collect(), vec![f.clone()]);
                            let mut inst = d.rule.clone();
                            inst.replacement.as_mut().expect("replacement").context = 0;
                            inst.split = Some(Split {
                                antecedent: (0..left_ant.len()).collect(),
                                succedent: vec![],
                            });
                            Some(node(conclusion, inst, vec![b.clone(), c])?)
                        }
                        _ => None,
                    }
                };
                out[k] = better(out[k].take(), opt);
            }
        }
        other => {
            return Err(TransformError::Precondition(format!(
                "{other} is outside the equality fragment"
            )))
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(k, o)| o.map(|p| reorder(&p, &single(ant, &s.succedent[k]))).transpose())
        .collect()
}

/// A succedent formula `A` of `d` and a derivation of the antecedent of `d`
/// with `A` alone on the right, of the largest height found.
pub fn project_succedent(d: &Derivation, spec: &CalculusSpec) -> Result<(Formula, TransformReport), TransformError> {
    if spec.base != Base::None {
        return Err(TransformError::Precondition(
            "succedent projection is defined for the equality fragment only".into(),
        ));
    }
    require_valid(d, spec)?;
    let best = projections(d)?
        .into_iter()
        .flatten()
        .max_by_key(|p| p.height())
        .ok_or_else(|| TransformError::Precondition("no succedent formula is derivable alone".into()))?;
    let a = best.sequent.succedent[0].clone();
    let report = TransformReport::finish(d, best, spec.clone(), vec!["project".into()])?;
    Ok((a, report))
}
