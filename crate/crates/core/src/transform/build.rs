//! Node builders. Each constructor derives the conclusion from its children
//! and replays the instance, so a malformed step fails where it is built.

use crate::calculus::{premisses_of, replacement_terms, RuleId, RuleInstance, Split};
use crate::checker::Derivation;
use crate::syntax::{replace_at, Formula, Path, Sequent, Side, Term};

use super::{permissive, TransformError};

fn missing(what: &str, f: &Formula, s: &Sequent) -> TransformError {
    TransformError::Precondition(format!("{what} `{f}` not found in `{s}`"))
}

/// Replays `inst` at `conclusion` and checks the children against its premisses.
pub(crate) fn node(
    conclusion: Sequent,
    inst: RuleInstance,
    children: Vec<Derivation>,
) -> Result<Derivation, TransformError> {
    let premisses = premisses_of(&conclusion, &inst, &permissive())?;
    if premisses.len() != children.len() || premisses.iter().zip(&children).any(|(p, c)| *p != c.sequent) {
        let found: Vec<String> = children.iter().map(|c| c.sequent.to_string()).collect();
        let want: Vec<String> = premisses.iter().map(|p| p.to_string()).collect();
        return Err(TransformError::InvalidOutput(format!(
            "{} at `{conclusion}` needs [{}], built [{}]",
            inst.rule,
            want.join(" ; "),
            found.join(" ; ")
        )));
    }
    Ok(Derivation::new(conclusion, inst, children))
}

pub(crate) fn find(s: &Sequent, side: Side, f: &Formula) -> Result<usize, TransformError> {
    s.find(side, f).ok_or_else(|| missing("formula", f, s))
}

/// Index of `f` in the antecedent other than `avoid`.
fn find_other(s: &Sequent, f: &Formula, avoid: usize) -> Result<usize, TransformError> {
    (0..s.antecedent.len())
        .find(|&i| i != avoid && s.antecedent[i] == *f)
        .ok_or_else(|| missing("operating equality", f, s))
}

/// (from, to) of a replacement with operating equality `op` and `rule`'s index.
pub(crate) fn orient(rule: RuleId, op: &Formula) -> Result<(Term, Term), TransformError> {
    let (l, r) = op
        .as_eq()
        .ok_or_else(|| TransformError::Precondition(format!("`{op}` is not an equality")))?;
    match rule.index() {
        Some(1) => Ok((r.clone(), l.clone())),
        Some(2) => Ok((l.clone(), r.clone())),
        _ => Err(TransformError::Precondition(format!(
            "{rule} is not an oriented replacement"
        ))),
    }
}

pub(crate) fn init(s: Sequent, f: &Formula) -> Result<Derivation, TransformError> {
    let i = find(&s, Side::Antecedent, f)?;
    let j = find(&s, Side::Succedent, f)?;
    node(s, RuleInstance::new(RuleId::Init, vec![i, j]), vec![])
}

pub(crate) fn refax(s: Sequent, f: &Formula) -> Result<Derivation, TransformError> {
    let j = find(&s, Side::Succedent, f)?;
    node(s, RuleInstance::new(RuleId::RefAx, vec![j]), vec![])
}

/// Rep1R, Rep2R, Eq1 or Eq2 on succedent formula `ctx` of the child, whose
/// occurrences at `paths` hold the replacing term.
pub(crate) fn rep_right(
    child: Derivation,
    rule: RuleId,
    op: &Formula,
    ctx: usize,
    paths: Vec<Path>,
) -> Result<Derivation, TransformError> {
    let (from, to) = orient(rule, op)?;
    let mut s = child.sequent.clone();
    let f = s
        .succedent
        .get(ctx)
        .ok_or_else(|| TransformError::Precondition(format!("no succedent formula {ctx} in `{}`", child.sequent)))?;
    s.succedent[ctx] = replace_at(f, &paths, &to, &from).map_err(crate::calculus::CalcError::from)?;
    if matches!(rule, RuleId::Eq1 | RuleId::Eq2) {
        s.antecedent.push(op.clone());
    }
    let o = find(&s, Side::Antecedent, op)?;
    node(s, RuleInstance::replacing(rule, Some(o), ctx, paths), vec![child])
}

/// A left replacement whose premiss is the child: antecedent formula `k` of
/// the child holds the replacing term at `paths`. For repeating instances
/// the child must also contain the rewritten-back formula.
pub(crate) fn rep_left(
    child: Derivation,
    rule: RuleId,
    op: &Formula,
    k: usize,
    paths: Vec<Path>,
) -> Result<Derivation, TransformError> {
    let (from, to) = orient(rule, op)?;
    let premiss_ctx = &child.sequent.antecedent[k];
    let ctx_f = replace_at(premiss_ctx, &paths, &to, &from).map_err(crate::calculus::CalcError::from)?;
    let (s, ctx) = if rule.repeats_context(ctx_f.is_equality()) {
        let s = child.sequent.without(Side::Antecedent, k);
        let c = find(&s, Side::Antecedent, &ctx_f)?;
        (s, c)
    } else {
        (child.sequent.with_replaced(Side::Antecedent, k, ctx_f), k)
    };
    let o = find_other(&s, op, ctx)?;
    node(s, RuleInstance::replacing(rule, Some(o), ctx, paths), vec![child])
}

pub(crate) fn lw(child: Derivation, f: Formula) -> Result<Derivation, TransformError> {
    let s = child.sequent.with_added(Side::Antecedent, f);
    let i = s.antecedent.len() - 1;
    node(s, RuleInstance::new(RuleId::LW, vec![i]), vec![child])
}

/// Contracts two antecedent copies of `f` with `rule` (LC or LCeq).
pub(crate) fn contract(child: Derivation, rule: RuleId, f: &Formula) -> Result<Derivation, TransformError> {
    let last = child
        .sequent
        .antecedent
        .iter()
        .rposition(|g| g == f)
        .ok_or_else(|| missing("formula", f, &child.sequent))?;
    let s = child.sequent.without(Side::Antecedent, last);
    let i = find(&s, Side::Antecedent, f)?;
    node(s, RuleInstance::new(rule, vec![i]), vec![child])
}

pub(crate) fn lc(child: Derivation, f: &Formula) -> Result<Derivation, TransformError> {
    contract(child, RuleId::LC, f)
}

/// RefL discharging an antecedent `t=t` of the child.
pub(crate) fn refl(child: Derivation, t: &Term) -> Result<Derivation, TransformError> {
    let f = Formula::eq(t.clone(), t.clone());
    let k = child
        .sequent
        .antecedent
        .iter()
        .rposition(|g| *g == f)
        .ok_or_else(|| missing("identity", &f, &child.sequent))?;
    let s = child.sequent.without(Side::Antecedent, k);
    node(
        s,
        RuleInstance::new(RuleId::RefL, vec![]).with_witness(t.clone()),
        vec![child],
    )
}

/// Cut of `a` between the succedent of `left` and the antecedent of `right`.
pub(crate) fn cut(left: Derivation, right: Derivation, a: &Formula) -> Result<Derivation, TransformError> {
    let j = find(&left.sequent, Side::Succedent, a)?;
    let i = find(&right.sequent, Side::Antecedent, a)?;
    let l = left.sequent.without(Side::Succedent, j);
    let r = right.sequent.without(Side::Antecedent, i);
    let split = Split {
        antecedent: (0..l.antecedent.len()).collect(),
        succedent: (0..l.succedent.len()).collect(),
    };
    let mut s = l;
    s.antecedent.extend(r.antecedent);
    s.succedent.extend(r.succedent);
    node(
        s,
        RuleInstance::new(RuleId::Cut, vec![]).with_cut(a.clone(), split),
        vec![left, right],
    )
}

/// CNG with first premiss `left` (succedent `eq`, read `r=s`) and second
/// premiss `right` whose succedent formula `ctx` holds `r` at `paths`.
pub(crate) fn cng(
    left: Derivation,
    eq: &Formula,
    right: Derivation,
    ctx: usize,
    paths: Vec<Path>,
) -> Result<Derivation, TransformError> {
    let (r, s_term) = eq
        .as_eq()
        .ok_or_else(|| TransformError::Precondition(format!("`{eq}` is not an equality")))?;
    let j = find(&left.sequent, Side::Succedent, eq)?;
    let l = left.sequent.without(Side::Succedent, j);
    let split = Split {
        antecedent: (0..l.antecedent.len()).collect(),
        succedent: (0..l.succedent.len()).collect(),
    };
    let mut rs = right.sequent.clone();
    rs.succedent[ctx] = replace_at(&rs.succedent[ctx], &paths, r, s_term).map_err(crate::calculus::CalcError::from)?;
    let c = l.succedent.len() + ctx;
    let mut s = l;
    s.antecedent.extend(rs.antecedent);
    s.succedent.extend(rs.succedent);
    let inst = RuleInstance::replacing(RuleId::CNG, None, c, paths)
        .with_witness(r.clone())
        .with_split(split);
    node(s, inst, vec![left, right])
}

/// The same derivation with parameter `from` renamed to `to` everywhere.
pub(crate) fn rename(d: &Derivation, from: &str, to: &str) -> Derivation {
    let mut inst = d.rule.clone();
    inst.witness = inst.witness.map(|t| t.rename_param(from, to));
    inst.cut_formula = inst.cut_formula.map(|f| f.rename_param(from, to));
    if inst.eigen.as_deref() == Some(from) {
        inst.eigen = Some(to.to_string());
    }
    Derivation::new(
        d.sequent.rename_param(from, to),
        inst,
        d.children.iter().map(|c| rename(c, from, to)).collect(),
    )
}

/// Replacement terms of a replacement node.
pub(crate) fn terms_of(d: &Derivation) -> Result<(Term, Term), TransformError> {
    Ok(replacement_terms(&d.sequent, &d.rule)?)
}
