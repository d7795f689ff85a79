use crate::calculus::{preset, RuleId};
use crate::checker::Derivation;
use crate::syntax::{Formula, Path, Sequent, Side};

use super::build::{init, refax, rep_left, rep_right};
use super::weaken::require_valid;
use super::{TransformError, TransformReport};

/// One succedent rewrite of a linear R12r derivation.
struct Step {
    rule: RuleId,
    op: Formula,
    paths: Vec<Path>,
}

/// The rewrites of a single-succedent R12r derivation from the endsequent
/// upwards, and its leaf.
fn spine(d: &Derivation) -> Result<(Vec<Step>, &Derivation), TransformError> {
    let mut steps = Vec::new();
    let mut cur = d;
    loop {
        match cur.rule.rule {
            RuleId::Rep1R | RuleId::Rep2R => {
                let rep = cur.rule.replacement.as_ref().expect("replacement");
                let op = cur.sequent.antecedent[rep.op.expect("op")].clone();
                steps.push(Step {
                    rule: cur.rule.rule,
                    op,
                    paths: rep.paths.clone(),
                });
                cur = &cur.children[0];
            }
            RuleId::RefAx | RuleId::Init => return Ok((steps, cur)),
            other => return Err(TransformError::Precondition(format!("{other} is not an R12r rule"))),
        }
    }
}

fn single_goal(d: &Derivation) -> Result<&Formula, TransformError> {
    require_valid(d, &preset("R12r").expect("preset").spec)?;
    match d.sequent.succedent.as_slice() {
        [f] => Ok(f),
        _ => Err(TransformError::Precondition(
            "the succedent must be a single formula".into(),
        )),
    }
}

/// Paths of `paths` below side `k` of an equality, relative to that side.
fn below(paths: &[Path], k: usize) -> Vec<Path> {
    paths
        .iter()
        .filter(|p| p.first() == Some(&k))
        .map(|p| p[1..].to_vec())
        .collect()
}

fn under(k: usize, paths: Vec<Path>) -> Vec<Path> {
    paths
        .into_iter()
        .map(|p| std::iter::once(k).chain(p).collect())
        .collect()
}

/// An R12r_eqr derivation of an equality, rewriting only right-hand sides.
pub fn right_normalize(d: &Derivation) -> Result<TransformReport, TransformError> {
    let goal = single_goal(d)?;
    let target = preset("R12r_eqr").expect("preset").spec;
    let (p, _) = goal
        .as_eq()
        .ok_or_else(|| TransformError::Precondition(format!("`{goal}` is not an equality")))?;
    let (steps, leaf) = spine(d)?;
    if steps.iter().all(|s| below(&s.paths, 0).is_empty()) {
        return TransformReport::finish(d, d.clone(), target, vec![]);
    }
    let gamma = d.sequent.antecedent.clone();
    let (lhs, rhs) = {
        let (l, r) = leaf.sequent.succedent[0].as_eq().expect("equality leaf");
        (l.clone(), r.clone())
    };
    // Top part: p = lhs_n rewritten back to p = p through the left-hand steps.
    let at = |t: &crate::syntax::Term| Sequent::new(gamma.clone(), vec![Formula::eq(p.clone(), t.clone())]);
    let top = at(p);
    let mut cur = refax(top.clone(), &top.succedent[0])?;
    let mut names = vec!["refax".to_string()];
    for s in &steps {
        let ps = below(&s.paths, 0);
        if !ps.is_empty() {
            cur = rep_right(cur, s.rule.mirrored(), &s.op, 0, under(1, ps))?;
            names.push("mirror".into());
        }
    }
    debug_assert_eq!(cur.sequent.succedent[0], Formula::eq(p.clone(), lhs.clone()));
    // Bridge from p = lhs_n to p = rhs_n.
    let bridge = at(&rhs);
    if lhs != rhs {
        if bridge.succedent[0].is_identity() {
            cur = refax(bridge, &Formula::eq(rhs.clone(), rhs.clone()))?;
        } else if gamma.contains(&bridge.succedent[0]) {
            cur = init(bridge.clone(), &bridge.succedent[0])?;
        } else {
            cur = rep_right(
                cur,
                RuleId::Rep1R,
                &Formula::eq(lhs.clone(), rhs.clone()),
                0,
                vec![vec![1]],
            )?;
            names.push("bridge".into());
        }
    }
    for s in steps.iter().rev() {
        let ps = below(&s.paths, 1);
        if !ps.is_empty() {
            cur = rep_right(cur, s.rule, &s.op, 0, under(1, ps))?;
        }
    }
    TransformReport::finish(d, cur, target, names)
}

/// A derivation in R_scope: a non-equality succedent is reached by
/// rewriting its antecedent counterpart instead.
pub fn scope_restrict(d: &Derivation) -> Result<TransformReport, TransformError> {
    let goal = single_goal(d)?;
    let target = preset("R_scope").expect("preset").spec;
    if goal.is_equality() || d.height() == 0 {
        return TransformReport::finish(d, d.clone(), target, vec![]);
    }
    let (steps, leaf) = spine(d)?;
    let i = leaf.rule.principal[0];
    let top = d.sequent.with_replaced(Side::Antecedent, i, goal.clone());
    let mut cur = init(top, goal)?;
    for s in &steps {
        let rule = match s.rule {
            RuleId::Rep1R => RuleId::Rep2L,
            _ => RuleId::Rep1L,
        };
        cur = rep_left(cur, rule, &s.op, i, s.paths.clone())?;
    }
    TransformReport::finish(d, cur, target, vec!["left-spine".into()])
}
