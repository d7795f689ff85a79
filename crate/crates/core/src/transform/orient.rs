use crate::calculus::{preset, CalculusSpec, RuleId};
use crate::checker::Derivation;
use crate::search::{chain_to_derivation, decide_function_free, Decision};
use crate::syntax::{replace_at, Formula, Sequent, Side};

use super::build::{node, terms_of};
use super::weaken::{require_valid, weaken};
use super::{reorder, TransformError, TransformReport};

/// An R2rl derivation of a derivable function-free atomic sequent, read off
/// the equality chains that decide it.
pub fn orient_function_free(goal: &Sequent) -> Result<TransformReport, TransformError> {
    let bad = |e: crate::search::DecideError| TransformError::Precondition(e.to_string());
    let witness = match decide_function_free(goal).map_err(bad)? {
        Decision::Derivable(w) => w,
        Decision::Underivable => return Err(TransformError::Underivable(goal.to_string())),
    };
    let d = chain_to_derivation(&witness, goal).map_err(bad)?;
    let target = preset("R2rl").expect("preset").spec;
    TransformReport::finish(&d, d.clone(), target, vec!["chains".into()])
}

/// Splits every multi-occurrence replacement into a chain of single
/// replacements with the same operating equality. Eq1, Eq2 and CNG nodes
/// are kept as they are.
pub fn single_occurrence_normalize(d: &Derivation, spec: &CalculusSpec) -> Result<TransformReport, TransformError> {
    require_valid(d, spec)?;
    let out = split_all(d)?;
    TransformReport::finish(d, out, spec.clone(), vec!["single-occurrence".into()])
}

pub(crate) fn split_all(d: &Derivation) -> Result<Derivation, TransformError> {
    let children: Vec<Derivation> = d.children.iter().map(split_all).collect::<Result<_, _>>()?;
    let rule = d.rule.rule;
    let rep = match &d.rule.replacement {
        Some(r) if r.paths.len() > 1 && !matches!(rule, RuleId::Eq1 | RuleId::Eq2 | RuleId::CNG) => r,
        _ => return Ok(Derivation::new(d.sequent.clone(), d.rule.clone(), children)),
    };
    let (from, to) = terms_of(d)?;
    let child = children.into_iter().next().expect("one premiss");
    let side = if rule.rewrites_succedent() {
        Side::Succedent
    } else {
        Side::Antecedent
    };
    let ctx = d.sequent.side(side)[rep.context].clone();
    let n = rep.paths.len();
    let rewrite = |k: usize| -> Result<Formula, TransformError> {
        if k == 0 {
            return Ok(ctx.clone());
        }
        Ok(replace_at(&ctx, &rep.paths[..k], &from, &to).map_err(crate::calculus::CalcError::from)?)
    };
    let single = |k: usize, c: usize| {
        let mut inst = d.rule.clone();
        let r = inst.replacement.as_mut().expect("replacement");
        r.paths = vec![rep.paths[k].clone()];
        r.context = c;
        inst
    };
    if side == Side::Antecedent && rule.repeats_context(ctx.is_equality()) {
        let base = d.sequent.antecedent.len();
        let mut conclusions = vec![d.sequent.clone()];
        for k in 1..=n {
            let next = conclusions[k - 1].with_added(Side::Antecedent, rewrite(k)?);
            conclusions.push(next);
        }
        let mut cur = (1..n).try_fold(child, |c, k| {
            Ok::<_, TransformError>(weaken(&c, &rewrite(k)?, Side::Antecedent))
        })?;
        cur = reorder(&cur, &conclusions[n])?;
        for k in (1..=n).rev() {
            let c = if k == 1 { rep.context } else { base + k - 2 };
            cur = node(conclusions[k - 1].clone(), single(k - 1, c), vec![cur])?;
        }
        return Ok(cur);
    }
    let mut cur = child;
    for k in (1..=n).rev() {
        let conclusion = d.sequent.with_replaced(side, rep.context, rewrite(k - 1)?);
        cur = node(conclusion, single(k - 1, rep.context), vec![cur])?;
    }
    Ok(cur)
}
