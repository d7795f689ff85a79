use crate::calculus::{premisses_of, CalculusSpec, RuleId};
use crate::checker::{check, Derivation};
use crate::syntax::{replace_at, Formula, Path, Sequent, Side, Term};

use super::build::{cng, cut, find, init, lc, lw, node, refax, refl, rep_left, rep_right};
use super::{permissive, reorder, TransformError, TransformReport};
use RuleId::*;

type Res = Result<Derivation, TransformError>;

fn flip(e: &Formula) -> Formula {
    let (l, r) = e.as_eq().expect("equality");
    Formula::eq(r.clone(), l.clone())
}

struct Translator {
    target: CalculusSpec,
}

impl Translator {
    fn has(&self, r: RuleId) -> bool {
        self.target.has(r)
    }

    /// `Γ |- t=t` alone on the right.
    fn identity(&self, ant: Vec<Formula>, t: &Term) -> Res {
        let f = Formula::eq(t.clone(), t.clone());
        let s = Sequent::new(ant, vec![f.clone()]);
        if self.has(RefAx) {
            return refax(s, &f);
        }
        self.discharge(init(s.with_added(Side::Antecedent, f.clone()), &f)?, t)
    }

    /// Removes an antecedent `t=t` by RefL, or by a cut against RefAx.
    fn discharge(&self, d: Derivation, t: &Term) -> Res {
        if self.has(RefL) {
            return refl(d, t);
        }
        if self.has(RefAx) {
            let f = Formula::eq(t.clone(), t.clone());
            return cut(refax(Sequent::new(vec![], vec![f.clone()]), &f)?, d, &f);
        }
        Err(TransformError::Untranslatable(RefL))
    }

    /// From a derivation of `r=s, Γ |- Δ` one of `s=r, Γ |- Δ` using a left
    /// rule, LW and reflexivity, without Cut.
    fn symm_left(&self, d: Derivation, r: &Term, s: &Term) -> Res {
        let rs = Formula::eq(r.clone(), s.clone());
        let sr = Formula::eq(s.clone(), r.clone());
        let rr = Formula::eq(r.clone(), r.clone());
        let ss = Formula::eq(s.clone(), s.clone());
        let last = |d: &Derivation| d.sequent.antecedent.len() - 1;
        let at = |d: &Derivation, f: &Formula| find(&d.sequent, Side::Antecedent, f);
        let strict = |rule: RuleId| self.has(rule);
        if strict(Rep1L) || strict(Rep2L) {
            let two = !strict(Rep1L);
            let (rule, fresh, t) = if two {
                (Rep2L, ss.clone(), s)
            } else {
                (Rep1L, rr.clone(), r)
            };
            let (p1, p2) = if two { (vec![1], vec![0]) } else { (vec![0], vec![1]) };
            let d = lw(d, fresh)?;
            let k = last(&d);
            let d = rep_left(d, rule, &rs, k, vec![p1])?;
            let k = at(&d, &rs)?;
            let d = rep_left(d, rule, &sr, k, vec![p2])?;
            return self.discharge(d, t);
        }
        for (rule, two) in [(Rep, true), (Rep2Lplus, true), (RepPrime, false), (Rep1Lplus, false)] {
            if !self.has(rule) {
                continue;
            }
            let (fresh, t, path) = if two {
                (ss.clone(), s, vec![0])
            } else {
                (rr.clone(), r, vec![1])
            };
            let d = lw(lw(d, fresh)?, sr.clone())?;
            let k = at(&d, &rs)?;
            let d = rep_left(d, rule, &sr, k, vec![path])?;
            return self.discharge(d, t);
        }
        Err(TransformError::Untranslatable(Symm))
    }

    /// `a=b |- b=a` by one replacement, or through the left templates.
    fn sym_lemma(&self, e: &Formula) -> Res {
        let (a, b) = e.as_eq().expect("equality");
        if self.has(Rep1R) {
            return rep_right(self.identity(vec![e.clone()], a)?, Rep1R, e, 0, vec![vec![0]]);
        }
        if self.has(Rep2R) {
            return rep_right(self.identity(vec![e.clone()], b)?, Rep2R, e, 0, vec![vec![1]]);
        }
        if self.has(Eq1) {
            return rep_right(self.identity(vec![], a)?, Eq1, e, 0, vec![vec![0]]);
        }
        if self.has(Eq2) {
            return rep_right(self.identity(vec![], b)?, Eq2, e, 0, vec![vec![1]]);
        }
        if self.has(CNG) {
            let left = init(Sequent::new(vec![e.clone()], vec![e.clone()]), e)?;
            return cng(left, e, self.identity(vec![], a)?, 0, vec![vec![0]]);
        }
        let f = flip(e);
        self.symm_left(init(Sequent::new(vec![f.clone()], vec![f.clone()]), &f)?, b, a)
    }

    /// From `Γ |- Δ` with succedent `j` holding `p` at `paths`, the same
    /// sequent with `c` there; `e` in Γ relates `c` and `p`.
    fn rewrite_succ(&self, d: Derivation, j: usize, e: &Formula, paths: Vec<Path>, c: &Term, cross: bool) -> Res {
        let (l, r) = e.as_eq().expect("equality");
        let p = d.sequent.succedent[j].term_at(&paths[0]).expect("path").clone();
        let index2 = *l == *c && *r == p;
        let (same, other) = if index2 { (Rep2R, Rep1R) } else { (Rep1R, Rep2R) };
        if self.has(same) {
            return rep_right(d, same, e, j, paths);
        }
        let eq = if index2 { Eq2 } else { Eq1 };
        if self.has(eq) {
            return lc(rep_right(d, eq, e, j, paths)?, e);
        }
        if self.has(CNG) {
            let pc = Formula::eq(p.clone(), c.clone());
            let left = if *e == pc {
                init(Sequent::new(vec![e.clone()], vec![pc.clone()]), &pc)?
            } else {
                self.sym_lemma(e)?
            };
            return lc(cng(left, &pc, d, j, paths)?, e);
        }
        if self.has(other) {
            let f = flip(e);
            let d = rep_right(lw(d, f.clone())?, other, &f, j, paths)?;
            return lc(cut(self.sym_lemma(e)?, d, &f)?, e);
        }
        if cross {
            let target = d.sequent.succedent[j].clone();
            let goal = replace_at(&target, &paths, &p, c).map_err(crate::calculus::CalcError::from)?;
            let base = init(Sequent::new(vec![e.clone(), goal.clone()], vec![goal.clone()]), &goal)?;
            let lemma = self.rewrite_ant(base, 1, e, paths, &p, false, false)?;
            return lc(cut(d, lemma, &target)?, e);
        }
        Err(TransformError::Untranslatable(same))
    }

    /// From a derivation whose antecedent formula `k` holds `p` at `paths`,
    /// one where that formula holds `c` instead; with `keep` the rewritten
    /// formula must already be present and formula `k` is dropped.
    #[allow(clippy::too_many_arguments)]
    fn rewrite_ant(
        &self,
        d: Derivation,
        k: usize,
        e: &Formula,
        paths: Vec<Path>,
        c: &Term,
        keep: bool,
        cross: bool,
    ) -> Res {
        let (l, r) = e.as_eq().expect("equality");
        let pf = d.sequent.antecedent[k].clone();
        let p = pf.term_at(&paths[0]).expect("path").clone();
        let cf = replace_at(&pf, &paths, &p, c).map_err(crate::calculus::CalcError::from)?;
        let index2 = *l == *c && *r == p;
        if let Some(out) = self.left_step(d.clone(), k, e, &paths, &cf, keep, index2)? {
            return Ok(out);
        }
        let f = flip(e);
        if let Some(out) = self.left_step(lw(d.clone(), f.clone())?, k, &f, &paths, &cf, keep, !index2)? {
            return lc(cut(self.sym_lemma(e)?, out, &f)?, e);
        }
        if cross {
            let base = init(Sequent::new(vec![e.clone(), cf.clone()], vec![cf.clone()]), &cf)?;
            let lemma = self.rewrite_succ(base, 0, e, paths, &p, false)?;
            let out = lc(cut(lemma, d, &pf)?, e)?;
            return if keep { lc(out, &cf) } else { Ok(out) };
        }
        Err(TransformError::Untranslatable(if index2 { Rep2L } else { Rep1L }))
    }

    #[allow(clippy::too_many_arguments)]
    fn left_step(
        &self,
        d: Derivation,
        k: usize,
        e: &Formula,
        paths: &[Path],
        cf: &Formula,
        keep: bool,
        index2: bool,
    ) -> Result<Option<Derivation>, TransformError> {
        let family: [RuleId; 3] = if index2 {
            [Rep2L, Rep, Rep2Lplus]
        } else {
            [Rep1L, RepPrime, Rep1Lplus]
        };
        for rule in family {
            if !self.has(rule) {
                continue;
            }
            let repeats = rule.repeats_context(cf.is_equality());
            let out = match (keep, repeats) {
                (true, true) | (false, false) => rep_left(d, rule, e, k, paths.to_vec())?,
                (true, false) => lc(rep_left(d, rule, e, k, paths.to_vec())?, cf)?,
                (false, true) => rep_left(lw(d, cf.clone())?, rule, e, k, paths.to_vec())?,
            };
            return Ok(Some(out));
        }
        Ok(None)
    }

    fn translate(&self, d: &Derivation) -> Res {
        let premisses = premisses_of(&d.sequent, &d.rule, &permissive())?;
        let children = d
            .children
            .iter()
            .zip(&premisses)
            .map(|(c, p)| reorder(&self.translate(c)?, p))
            .collect::<Result<Vec<_>, _>>()?;
        let rule = d.rule.rule;
        if self.has(rule) {
            return node(d.sequent.clone(), d.rule.clone(), children);
        }
        let s = &d.sequent;
        let mut children = children.into_iter();
        let out = match rule {
            RefAx => {
                let j = d.rule.principal[0];
                let (t, _) = s.succedent[j].as_eq().expect("identity");
                let f = s.succedent[j].clone();
                if !self.has(RefL) {
                    return Err(TransformError::Untranslatable(RefAx));
                }
                refl(init(s.with_added(Side::Antecedent, f.clone()), &f)?, t)?
            }
            RefL => {
                let t = d.rule.witness.clone().expect("witness");
                if !self.has(RefAx) {
                    return Err(TransformError::Untranslatable(RefL));
                }
                self.discharge(children.next().expect("premiss"), &t)?
            }
            Symm => {
                let child = children.next().expect("premiss");
                let conclusion_eq = &s.antecedent[d.rule.principal[0]];
                let (sv, rv) = conclusion_eq.as_eq().expect("equality");
                let premiss_eq = Formula::eq(rv.clone(), sv.clone());
                if sv == rv {
                    child
                } else if let Ok(out) = self.symm_left(child.clone(), rv, sv) {
                    out
                } else {
                    cut(self.sym_lemma(conclusion_eq)?, child, &premiss_eq)?
                }
            }
            Rep1R | Rep2R | Eq1 | Eq2 => {
                let rep = d.rule.replacement.clone().expect("replacement");
                let op = s.antecedent[rep.op.expect("op")].clone();
                let (from, _) = super::build::terms_of(d)?;
                let mut child = children.next().expect("premiss");
                if matches!(rule, Eq1 | Eq2) {
                    child = lw(child, op.clone())?;
                }
                self.rewrite_succ(child, rep.context, &op, rep.paths, &from, true)?
            }
            Rep1L | Rep2L | Rep | RepPrime | Rep1Lplus | Rep2Lplus => {
                let rep = d.rule.replacement.clone().expect("replacement");
                let op = s.antecedent[rep.op.expect("op")].clone();
                let (from, _) = super::build::terms_of(d)?;
                let keep = rule.repeats_context(s.antecedent[rep.context].is_equality());
                let child = children.next().expect("premiss");
                let k = if keep {
                    child.sequent.antecedent.len() - 1
                } else {
                    rep.context
                };
                self.rewrite_ant(child, k, &op, rep.paths, &from, keep, true)?
            }
            CNG => {
                let rep = d.rule.replacement.clone().expect("replacement");
                let (from, to) = super::build::terms_of(d)?;
                let left = children.next().expect("premiss");
                let right = children.next().expect("premiss");
                let eq = Formula::eq(to, from.clone());
                let split = d.rule.split.clone().unwrap_or_default();
                let ctx = (0..rep.context).filter(|j| !split.succedent.contains(j)).count();
                let right = lw(right, eq.clone())?;
                let right = self.rewrite_succ(right, ctx, &eq, rep.paths, &from, true)?;
                cut(left, right, &eq)?
            }
            other => return Err(TransformError::Untranslatable(other)),
        };
        reorder(&out, s)
    }
}

/// Replaces every inference of `d` whose rule is missing from `to` by a
/// derivation of the same conclusion in `to` extended with Cut, LC and LW.
pub fn equivalence_translate(
    d: &Derivation,
    from: &CalculusSpec,
    to: &CalculusSpec,
) -> Result<TransformReport, TransformError> {
    let source = from.with_rules([Cut, LC, LW]);
    if let Some(e) = check(d, &source).first_error {
        return Err(TransformError::Precondition(format!(
            "input invalid at {:?}: {}",
            e.path, e.error
        )));
    }
    let target = to.with_rules([Cut, LC, LW]);
    let t = Translator { target: target.clone() };
    let out = t.translate(d)?;
    TransformReport::finish(d, out, target, vec!["translate".into()])
}
