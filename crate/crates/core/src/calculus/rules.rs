use crate::syntax::{replace_at, substitute, Formula, Sequent, Side, Term};

use super::{paths_text, CalcError, CalculusSpec, Flag, RuleId, RuleInstance};
use RuleId::*;

fn shape(rule: RuleId, detail: impl Into<String>) -> CalcError {
    CalcError::ShapeMismatch {
        rule,
        detail: detail.into(),
    }
}

fn malformed(rule: RuleId, detail: impl Into<String>) -> CalcError {
    CalcError::MalformedInstance {
        rule,
        detail: detail.into(),
    }
}

fn get(s: &Sequent, side: Side, i: usize, rule: RuleId) -> Result<&Formula, CalcError> {
    s.side(side).get(i).ok_or_else(|| {
        let name = match side {
            Side::Antecedent => "antecedent",
            Side::Succedent => "succedent",
        };
        malformed(rule, format!("{name} index {i} out of range"))
    })
}

fn principal(inst: &RuleInstance, n: usize) -> Result<&[usize], CalcError> {
    if inst.principal.len() != n {
        return Err(malformed(inst.rule, format!("expected {n} principal indices")));
    }
    Ok(&inst.principal)
}

/// The replaced term (in the conclusion) and the replacing term (in the
/// premiss) of a replacement instance.
pub fn replacement_terms(conclusion: &Sequent, inst: &RuleInstance) -> Result<(Term, Term), CalcError> {
    let rule = inst.rule;
    let rep = inst
        .replacement
        .as_ref()
        .ok_or_else(|| malformed(rule, "missing replacement"))?;
    if rule == CNG {
        let ctx = get(conclusion, Side::Succedent, rep.context, rule)?;
        let first = rep.paths.first().ok_or_else(|| malformed(rule, "no paths"))?;
        let from = ctx
            .term_at(first)
            .ok_or_else(|| shape(rule, format!("no term at path {}", paths_text(&rep.paths))))?;
        let to = inst.witness.clone().ok_or_else(|| malformed(rule, "missing term t="))?;
        return Ok((from.clone(), to));
    }
    let op = rep
        .op
        .ok_or_else(|| malformed(rule, "missing operating equality op="))?;
    let (l, r) = get(conclusion, Side::Antecedent, op, rule)?
        .as_eq()
        .ok_or_else(|| shape(rule, "operating formula is not an equality"))?;
    match rule.index() {
        Some(1) => Ok((r.clone(), l.clone())),
        Some(2) => Ok((l.clone(), r.clone())),
        _ => Err(malformed(rule, "not a replacement rule")),
    }
}

fn check_flags(
    spec: &CalculusSpec,
    inst: &RuleInstance,
    ctx: &Formula,
    from: &Term,
    to: &Term,
) -> Result<(), CalcError> {
    let rule = inst.rule;
    let paths = &inst.replacement.as_ref().expect("replacement checked").paths;
    if spec.has_flag(Flag::SingleOccurrence) && paths.len() != 1 {
        return Err(CalcError::FlagViolation(format!(
            "{rule} replaces {} occurrences",
            paths.len()
        )));
    }
    if rule.rewrites_succedent() {
        if spec.has_flag(Flag::ContextEqOnly) && !ctx.is_equality() {
            return Err(CalcError::FlagViolation(format!(
                "{rule} context `{ctx}` is not an equality"
            )));
        }
        if spec.has_flag(Flag::RightHandOnly) && ctx.is_equality() && paths.iter().any(|p| p.first() != Some(&1)) {
            return Err(CalcError::FlagViolation(format!(
                "{rule} rewrites the left-hand side of `{ctx}`"
            )));
        }
    }
    if rule.rewrites_antecedent() && spec.has_flag(Flag::ContextNonEqOnly) && ctx.is_equality() {
        return Err(CalcError::FlagViolation(format!(
            "{rule} context `{ctx}` is an equality"
        )));
    }
    if spec.has_flag(Flag::Oriented) {
        let prec = spec.precedence.as_ref().expect("validated spec");
        match rule.index() {
            Some(1) if !prec.precedes(to, from) => {
                return Err(CalcError::OrientationViolation(format!(
                    "{rule} replacing {from} by {to} is not shortening"
                )))
            }
            Some(2) if prec.precedes(from, to) => {
                return Err(CalcError::OrientationViolation(format!(
                    "{rule} replacing {from} by {to} is lengthening"
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

fn fresh_eigen(conclusion: &Sequent, inst: &RuleInstance) -> Result<Term, CalcError> {
    let a = inst
        .eigen
        .as_ref()
        .ok_or_else(|| malformed(inst.rule, "missing eigen="))?;
    if conclusion.params().contains(a) {
        return Err(CalcError::EigenvariableViolation(a.clone()));
    }
    Ok(Term::Param(a.clone()))
}

fn witness(inst: &RuleInstance) -> Result<&Term, CalcError> {
    inst.witness
        .as_ref()
        .ok_or_else(|| malformed(inst.rule, "missing term t="))
}

fn split_sides(
    conclusion: &Sequent,
    inst: &RuleInstance,
    exclude_succedent: Option<usize>,
) -> Result<(Sequent, Sequent), CalcError> {
    let split = inst.split.clone().unwrap_or_default();
    let mut left = Sequent::default();
    let mut right = Sequent::default();
    for side in [Side::Antecedent, Side::Succedent] {
        let chosen = match side {
            Side::Antecedent => &split.antecedent,
            Side::Succedent => &split.succedent,
        };
        let items = conclusion.side(side);
        for (k, &i) in chosen.iter().enumerate() {
            if i >= items.len() || chosen[..k].contains(&i) {
                return Err(malformed(inst.rule, "bad split index"));
            }
            if side == Side::Succedent && Some(i) == exclude_succedent {
                return Err(malformed(inst.rule, "split contains the context formula"));
            }
        }
        for &i in chosen {
            left.side_mut(side).push(items[i].clone());
        }
        for (i, f) in items.iter().enumerate() {
            if !chosen.contains(&i) {
                right.side_mut(side).push(f.clone());
            }
        }
    }
    Ok((left, right))
}

/// Premisses of `inst` applied backwards to `conclusion`, in display order.
pub fn premisses_of(conclusion: &Sequent, inst: &RuleInstance, spec: &CalculusSpec) -> Result<Vec<Sequent>, CalcError> {
    let rule = inst.rule;
    if !spec.has(rule) {
        return Err(CalcError::RuleNotInCalculus(rule));
    }
    if rule.is_replacement() {
        return replacement_premisses(conclusion, inst, spec);
    }
    let ant = |i| get(conclusion, Side::Antecedent, i, rule);
    let suc = |j| get(conclusion, Side::Succedent, j, rule);
    let s = conclusion;
    Ok(match rule {
        Init => {
            let p = principal(inst, 2)?;
            let (a, b) = (ant(p[0])?, suc(p[1])?);
            if !a.is_atomic() || a != b {
                return Err(shape(rule, format!("`{a}` and `{b}` are not the same atom")));
            }
            vec![]
        }
        LBot => {
            let p = principal(inst, 1)?;
            if *ant(p[0])? != Formula::Bottom {
                return Err(shape(rule, "principal formula is not bot"));
            }
            vec![]
        }
        MinBot => {
            let p = principal(inst, 2)?;
            if *ant(p[0])? != Formula::Bottom || *suc(p[1])? != Formula::Bottom {
                return Err(shape(rule, "needs bot on both sides"));
            }
            vec![]
        }
        RefAx => {
            let p = principal(inst, 1)?;
            if !suc(p[0])?.is_identity() {
                return Err(shape(rule, format!("`{}` is not an identity", suc(p[0])?)));
            }
            vec![]
        }
        LAnd => {
            let i = principal(inst, 1)?[0];
            let Formula::And(a, b) = ant(i)? else {
                return Err(shape(rule, "principal formula is not a conjunction"));
            };
            vec![s
                .with_replaced(Side::Antecedent, i, (**a).clone())
                .with_added(Side::Antecedent, (**b).clone())]
        }
        RAnd => {
            let j = principal(inst, 1)?[0];
            let Formula::And(a, b) = suc(j)? else {
                return Err(shape(rule, "principal formula is not a conjunction"));
            };
            vec![
                s.with_replaced(Side::Succedent, j, (**a).clone()),
                s.with_replaced(Side::Succedent, j, (**b).clone()),
            ]
        }
        LOr => {
            let i = principal(inst, 1)?[0];
            let Formula::Or(a, b) = ant(i)? else {
                return Err(shape(rule, "principal formula is not a disjunction"));
            };
            vec![
                s.with_replaced(Side::Antecedent, i, (**a).clone()),
                s.with_replaced(Side::Antecedent, i, (**b).clone()),
            ]
        }
        ROr => {
            let j = principal(inst, 1)?[0];
            let Formula::Or(a, b) = suc(j)? else {
                return Err(shape(rule, "principal formula is not a disjunction"));
            };
            vec![s
                .with_replaced(Side::Succedent, j, (**a).clone())
                .with_added(Side::Succedent, (**b).clone())]
        }
        LImp | LImpI => {
            let i = principal(inst, 1)?[0];
            let Formula::Imp(a, b) = ant(i)? else {
                return Err(shape(rule, "principal formula is not an implication"));
            };
            let first = if rule == LImp {
                s.without(Side::Antecedent, i)
            } else {
                s.clone()
            };
            vec![
                first.with_added(Side::Succedent, (**a).clone()),
                s.with_replaced(Side::Antecedent, i, (**b).clone()),
            ]
        }
        RImp => {
            let j = principal(inst, 1)?[0];
            let Formula::Imp(a, b) = suc(j)? else {
                return Err(shape(rule, "principal formula is not an implication"));
            };
            vec![s
                .with_replaced(Side::Succedent, j, (**b).clone())
                .with_added(Side::Antecedent, (**a).clone())]
        }
        RImpI => {
            let j = principal(inst, 1)?[0];
            let Formula::Imp(a, b) = suc(j)? else {
                return Err(shape(rule, "principal formula is not an implication"));
            };
            let mut p = Sequent::new(s.antecedent.clone(), vec![(**b).clone()]);
            p.antecedent.push((**a).clone());
            vec![p]
        }
        LForall => {
            let i = principal(inst, 1)?[0];
            let Formula::Forall(x, a) = ant(i)? else {
                return Err(shape(rule, "principal formula is not universal"));
            };
            let inst_f = substitute(a, x, witness(inst)?)?;
            vec![s.with_added(Side::Antecedent, inst_f)]
        }
        RExists => {
            let j = principal(inst, 1)?[0];
            let Formula::Exists(x, a) = suc(j)? else {
                return Err(shape(rule, "principal formula is not existential"));
            };
            let inst_f = substitute(a, x, witness(inst)?)?;
            vec![s.with_added(Side::Succedent, inst_f)]
        }
        RForall | RForallI => {
            let j = principal(inst, 1)?[0];
            let Formula::Forall(x, a) = suc(j)? else {
                return Err(shape(rule, "principal formula is not universal"));
            };
            let body = substitute(a, x, &fresh_eigen(s, inst)?)?;
            if rule == RForall {
                vec![s.with_replaced(Side::Succedent, j, body)]
            } else {
                vec![Sequent::new(s.antecedent.clone(), vec![body])]
            }
        }
        LExists => {
            let i = principal(inst, 1)?[0];
            let Formula::Exists(x, a) = ant(i)? else {
                return Err(shape(rule, "principal formula is not existential"));
            };
            let body = substitute(a, x, &fresh_eigen(s, inst)?)?;
            vec![s.with_replaced(Side::Antecedent, i, body)]
        }
        LW => {
            let i = principal(inst, 1)?[0];
            ant(i)?;
            vec![s.without(Side::Antecedent, i)]
        }
        RW => {
            let j = principal(inst, 1)?[0];
            suc(j)?;
            vec![s.without(Side::Succedent, j)]
        }
        LC | LCeq => {
            let i = principal(inst, 1)?[0];
            let f = ant(i)?;
            if rule == LCeq && !f.is_equality() {
                return Err(shape(rule, format!("`{f}` is not an equality")));
            }
            vec![s.with_added(Side::Antecedent, f.clone())]
        }
        RC => {
            let j = principal(inst, 1)?[0];
            let f = suc(j)?;
            vec![s.with_added(Side::Succedent, f.clone())]
        }
        Cut => {
            let a = inst
                .cut_formula
                .clone()
                .ok_or_else(|| malformed(rule, "missing cut="))?;
            if !a.unbound_variables().is_empty() {
                return Err(shape(rule, "cut formula has unbound variables"));
            }
            let (left, right) = split_sides(s, inst, None)?;
            vec![
                left.with_added(Side::Succedent, a.clone()),
                right.with_added(Side::Antecedent, a),
            ]
        }
        RefL => {
            let t = witness(inst)?;
            vec![s.with_added(Side::Antecedent, Formula::eq(t.clone(), t.clone()))]
        }
        Symm => {
            let i = principal(inst, 1)?[0];
            let (l, r) = ant(i)?
                .as_eq()
                .ok_or_else(|| shape(rule, "principal formula is not an equality"))?;
            vec![s.with_replaced(Side::Antecedent, i, Formula::eq(r.clone(), l.clone()))]
        }
        _ => unreachable!("replacement rules handled above"),
    })
}

fn replacement_premisses(s: &Sequent, inst: &RuleInstance, spec: &CalculusSpec) -> Result<Vec<Sequent>, CalcError> {
    let rule = inst.rule;
    if !inst.principal.is_empty() {
        return Err(malformed(rule, "replacement rules take keyed arguments"));
    }
    let rep = inst
        .replacement
        .as_ref()
        .ok_or_else(|| malformed(rule, "missing replacement"))?;
    let ctx_side = if rule.rewrites_succedent() {
        Side::Succedent
    } else {
        Side::Antecedent
    };
    let ctx = get(s, ctx_side, rep.context, rule)?;
    if !ctx.is_atomic() {
        return Err(shape(rule, format!("context `{ctx}` is not atomic")));
    }
    if let Some(op) = rep.op {
        if ctx_side == Side::Antecedent && op == rep.context {
            return Err(malformed(rule, "operating equality and context coincide"));
        }
    } else if rule != CNG {
        return Err(malformed(rule, "missing operating equality op="));
    }
    if rule == CNG && rep.op.is_some() {
        return Err(malformed(rule, "CNG takes no operating equality"));
    }
    let (from, to) = replacement_terms(s, inst)?;
    if let Some(t) = &inst.witness {
        if rule != CNG && *t != to {
            return Err(malformed(rule, "term does not match the operating equality"));
        }
    }
    let rewritten = replace_at(ctx, &rep.paths, &from, &to)?;
    check_flags(spec, inst, ctx, &from, &to)?;
    Ok(match rule {
        Rep1R | Rep2R => vec![s.with_replaced(Side::Succedent, rep.context, rewritten)],
        Eq1 | Eq2 => {
            let op = rep.op.expect("checked");
            vec![s
                .with_replaced(Side::Succedent, rep.context, rewritten)
                .without(Side::Antecedent, op)]
        }
        Rep1L | Rep2L | Rep | RepPrime | Rep1Lplus | Rep2Lplus => {
            if rule.repeats_context(ctx.is_equality()) {
                vec![s.with_added(Side::Antecedent, rewritten)]
            } else {
                vec![s.with_replaced(Side::Antecedent, rep.context, rewritten)]
            }
        }
        CNG => {
            let (left, _) = split_sides(s, inst, Some(rep.context))?;
            let mut right = s.clone();
            right.succedent[rep.context] = rewritten;
            let split = inst.split.clone().unwrap_or_default();
            let mut keep = Sequent::default();
            for side in [Side::Antecedent, Side::Succedent] {
                let chosen = match side {
                    Side::Antecedent => &split.antecedent,
                    Side::Succedent => &split.succedent,
                };
                for (i, f) in right.side(side).iter().enumerate() {
                    if !chosen.contains(&i) {
                        keep.side_mut(side).push(f.clone());
                    }
                }
            }
            vec![left.with_added(Side::Succedent, Formula::eq(to, from)), keep]
        }
        _ => unreachable!(),
    })
}
