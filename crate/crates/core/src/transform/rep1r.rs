//! Removal of replacements with one index from calculi whose left rules
//! keep equalities: each offending inference is pushed towards the leaves
//! and resolved there by replacements with the other index.

use crate::calculus::{premisses_of, preset, CalculusSpec, Precedence, RuleId, RuleInstance};
use crate::checker::Derivation;
use crate::search::{prove, SearchLimits, SearchOutcome};
use crate::syntax::{is_prefix, replace_at, Formula, Path, Sequent, Side, Term};

use super::build::{init, node, orient, refax, rep_left, rep_right};
use super::orient::split_all;
use super::weaken::{require_valid, weaken};
use super::{reorder, TransformError, TransformReport};

fn put(f: &Formula, path: &[usize], old: &Term, new: &Term) -> Result<Formula, TransformError> {
    Ok(replace_at(f, &[path.to_vec()], old, new).map_err(crate::calculus::CalcError::from)?)
}

fn left_rule(index: u8) -> RuleId {
    if index == 1 {
        RuleId::Rep1Lplus
    } else {
        RuleId::Rep2Lplus
    }
}

fn right_rule(index: u8) -> RuleId {
    if index == 1 {
        RuleId::Rep1R
    } else {
        RuleId::Rep2R
    }
}

/// Side (0 or 1) of an equality holding the replacing term of `rule`.
fn to_side(rule: RuleId) -> usize {
    if rule.index() == Some(1) {
        0
    } else {
        1
    }
}

struct Pusher {
    target: CalculusSpec,
    steps: Vec<String>,
}

impl Pusher {
    /// Whether `inst` at `conclusion` is an inference of the target.
    fn legal(&self, conclusion: &Sequent, inst: &RuleInstance) -> bool {
        premisses_of(conclusion, inst, &self.target).is_ok()
    }

    /// `rule` (a right replacement with operating equality `e`) applied to
    /// `child` at succedent formula `c`, path `p`; pushed upwards when it is
    /// not an inference of the target.
    fn apply_or_push(
        &mut self,
        child: Derivation,
        rule: RuleId,
        e: &Formula,
        c: usize,
        p: &Path,
        bound: usize,
    ) -> Result<Derivation, TransformError> {
        if child.height() >= bound {
            return Err(TransformError::NoProgress(format!("push above `{}`", child.sequent)));
        }
        let built = rep_right(child.clone(), rule, e, c, vec![p.clone()])?;
        let inst = built.rule.clone();
        if self.legal(&built.sequent, &inst) {
            return Ok(built);
        }
        self.push(&child, c, p, e, rule)
    }

    /// Searches for a target derivation of `s` in the cases where the
    /// operating equality and the formula to be rewritten coincide.
    fn fallback(&mut self, s: &Sequent, height: usize) -> Result<Derivation, TransformError> {
        self.steps.push("search".into());
        match prove(s, &self.target, &SearchLimits::depth(height + 3)) {
            SearchOutcome::Proved(d) => Ok(d),
            _ => Err(TransformError::NoProgress(format!(
                "no target derivation of `{s}` found"
            ))),
        }
    }
}

impl Pusher {
    /// From `d1`, whose succedent formula `c` holds at `p` the replacing term
    /// of `rule` with operating equality `e`, a target derivation of the
    /// conclusion of that inference.
    fn push(
        &mut self,
        d1: &Derivation,
        c: usize,
        p: &Path,
        e: &Formula,
        rule: RuleId,
    ) -> Result<Derivation, TransformError> {
        let (b, a) = orient(rule, e)?;
        let s1 = &d1.sequent;
        let goal = s1.with_replaced(Side::Succedent, c, put(&s1.succedent[c], p, &a, &b)?);
        let back = 3 - rule.index().expect("oriented");
        let rev_l = left_rule(back);
        let x = &d1.rule;
        let bound = d1.height();
        let out = match x.rule {
            RuleId::RefAx | RuleId::Init if x.principal[x.principal.len() - 1] != c => {
                node(goal.clone(), x.clone(), vec![])?
            }
            RuleId::RefAx | RuleId::Init => {
                self.steps.push("leaf".into());
                self.resolve_leaf(d1, &goal, c, p, e, rule)?
            }
            r if r.rewrites_antecedent() => {
                let above = self.push(&d1.children[0], c, p, e, rule)?;
                node(goal.clone(), x.clone(), vec![above])?
            }
            RuleId::Rep1R | RuleId::Rep2R => {
                let rep = x.replacement.as_ref().expect("replacement");
                let q = &rep.paths[0];
                let d2 = &d1.children[0];
                let ex = s1.antecedent[rep.op.expect("op")].clone();
                let (from_x, to_x) = orient(x.rule, &ex)?;
                if rep.context != c || !(is_prefix(q, p) || is_prefix(p, q)) {
                    let above = self.push(d2, c, p, e, rule)?;
                    node(goal.clone(), x.clone(), vec![above])?
                } else if is_prefix(q, p) {
                    self.steps.push("inside".into());
                    let rest = &p[q.len()..];
                    let moved = from_x.with_at(rest, &b).expect("path inside the replaced term");
                    if moved == to_x {
                        reorder(d2, &goal)?
                    } else {
                        let at = std::iter::once(1 - to_side(x.rule))
                            .chain(rest.iter().copied())
                            .collect::<Path>();
                        let ex2 = put(&ex, &at, &a, &b)?;
                        let mid = self.apply_or_push(weaken(d2, &ex2, Side::Antecedent), x.rule, &ex2, c, q, bound)?;
                        let k = mid
                            .sequent
                            .antecedent
                            .iter()
                            .rposition(|f| *f == ex2)
                            .expect("weakened");
                        match rep_left(mid, rev_l, e, k, vec![at]) {
                            Ok(d) => reorder(&d, &goal)?,
                            Err(_) => self.fallback(&goal, bound)?,
                        }
                    }
                } else {
                    self.steps.push("around".into());
                    let rest = &q[p.len()..];
                    let a2 = a.with_at(rest, &to_x).expect("path inside the replacing term");
                    let sa = to_side(rule);
                    let e2 = put(e, &[sa], &a, &a2)?;
                    let mid = self.apply_or_push(weaken(d2, &e2, Side::Antecedent), rule, &e2, c, p, bound)?;
                    let k = mid.sequent.antecedent.iter().rposition(|f| *f == e2).expect("weakened");
                    let at = std::iter::once(sa).chain(rest.iter().copied()).collect::<Path>();
                    match rep_left(mid, left_rule(x.rule.index().expect("oriented")), &ex, k, vec![at]) {
                        Ok(d) => reorder(&d, &goal)?,
                        Err(_) => self.fallback(&goal, bound)?,
                    }
                }
            }
            other => {
                return Err(TransformError::Precondition(format!(
                    "{other} does not occur in the calculi with plus rules"
                )))
            }
        };
        Ok(out)
    }
}

impl Pusher {
    /// The base cases: `d1` is an initial sequent whose principal succedent
    /// formula is the one being rewritten.
    fn resolve_leaf(
        &mut self,
        d1: &Derivation,
        goal: &Sequent,
        c: usize,
        p: &Path,
        e: &Formula,
        rule: RuleId,
    ) -> Result<Derivation, TransformError> {
        let (b, a) = orient(rule, e)?;
        let back = 3 - rule.index().expect("oriented");
        let (rev_r, rev_l) = (right_rule(back), left_rule(back));
        let cb = goal.succedent[c].clone();
        if cb.is_identity() {
            return refax(goal.clone(), &cb);
        }
        let d = if d1.rule.rule == RuleId::RefAx {
            let other: Path = std::iter::once(1 - p[0]).chain(p[1..].iter().copied()).collect();
            let top = goal.with_replaced(Side::Succedent, c, put(&cb, &other, &a, &b)?);
            let leaf = refax(top.clone(), &top.succedent[c])?;
            rep_right(leaf, rev_r, e, c, vec![other])?
        } else {
            let i = d1.rule.principal[0];
            let ca = &d1.sequent.antecedent[i];
            if ca == e && d1.sequent.count(Side::Antecedent, e) == 1 {
                let sa = to_side(rule);
                let (l, r) = cb.as_eq().expect("equality");
                let t = if sa == 0 { r.clone() } else { l.clone() };
                let top = goal.with_replaced(Side::Succedent, c, Formula::eq(t.clone(), t));
                let mut d = refax(top.clone(), &top.succedent[c])?;
                let inner: Path = std::iter::once(sa).chain(p[1..].iter().copied()).collect();
                d = rep_right(d, rev_r, e, c, vec![inner])?;
                rep_right(d, rev_r, e, c, vec![vec![sa]])?
            } else {
                let repeats = rev_l.repeats_context(ca.is_equality());
                let (premiss, k) = if repeats {
                    (goal.with_added(Side::Antecedent, cb.clone()), goal.antecedent.len())
                } else {
                    (goal.with_replaced(Side::Antecedent, i, cb.clone()), i)
                };
                match rep_left(init(premiss, &cb)?, rev_l, e, k, vec![p.clone()]) {
                    Ok(d) => d,
                    Err(_) => return self.fallback(goal, d1.height()),
                }
            }
        };
        reorder(&d, goal)
    }
}

impl Pusher {
    /// Rebuilds `d` bottom-up, pushing every right replacement that is not an
    /// inference of the target.
    fn run(&mut self, d: &Derivation) -> Result<Derivation, TransformError> {
        let children: Vec<Derivation> = d.children.iter().map(|c| self.run(c)).collect::<Result<_, _>>()?;
        let inst = &d.rule;
        if matches!(inst.rule, RuleId::Rep1R | RuleId::Rep2R) && !self.legal(&d.sequent, inst) {
            let rep = inst.replacement.as_ref().expect("replacement");
            let e = d.sequent.antecedent[rep.op.expect("op")].clone();
            self.steps.push(format!("push {}", inst.rule));
            return self.push(&children[0], rep.context, &rep.paths[0], &e, inst.rule);
        }
        node(d.sequent.clone(), inst.clone(), children)
    }
}

fn single_occurrence(d: &Derivation) -> Result<(), TransformError> {
    let mut multi = false;
    d.visit(&mut |n| {
        multi |= n.rule.replacement.as_ref().is_some_and(|r| r.paths.len() != 1);
    });
    if multi {
        Err(TransformError::MultiOccurrence)
    } else {
        Ok(())
    }
}

fn eliminate(d: &Derivation, index: u8) -> Result<TransformReport, TransformError> {
    let (name, extra) = if index == 1 {
        ("R2rlPlus", RuleId::Rep1R)
    } else {
        ("R1rlPlus", RuleId::Rep2R)
    };
    let target = preset(name).expect("preset").spec;
    require_valid(d, &target.with_rules([extra]))?;
    single_occurrence(d)?;
    let mut pusher = Pusher {
        target: target.clone(),
        steps: vec![],
    };
    let out = pusher.run(d)?;
    TransformReport::finish(d, out, target, pusher.steps)
}

/// A derivation in R2rlPlus from one that also uses Rep1R.
pub fn eliminate_rep1r_plus(d: &Derivation) -> Result<TransformReport, TransformError> {
    eliminate(d, 1)
}

/// A derivation in R1rlPlus from one that also uses Rep2R.
pub fn eliminate_rep2r_plus(d: &Derivation) -> Result<TransformReport, TransformError> {
    eliminate(d, 2)
}

/// A derivation in R12prec_rlPlus under `prec`: index-2 inferences are
/// nonlengthening and index-1 inferences shortening.
pub fn semishorten(d: &Derivation, prec: &Precedence) -> Result<TransformReport, TransformError> {
    require_valid(d, &preset("R12r").expect("preset").spec)?;
    let target = preset("R12prec_rlPlus")
        .expect("preset")
        .spec
        .with_precedence(prec.clone());
    if crate::checker::check(d, &target).valid {
        return TransformReport::finish(d, d.clone(), target, vec![]);
    }
    let mut pusher = Pusher {
        target: target.clone(),
        steps: vec![],
    };
    let out = pusher.run(&split_all(d)?)?;
    TransformReport::finish(d, out, target, pusher.steps)
}
