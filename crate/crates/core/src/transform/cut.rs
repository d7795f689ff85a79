//! Cut and contraction elimination for R12r. Cut-free R12r derivations are
//! linear with a fixed antecedent, so they are handled as chains whose
//! operating equalities are kept by value.

use crate::calculus::{preset, RuleId, RuleInstance};
use crate::checker::Derivation;
use crate::syntax::{replace_at, Formula, Path, Sequent, Side};

use super::build::{find, node, orient};
use super::weaken::require_valid;
use super::{matching, TransformError, TransformReport};

#[derive(Debug, Clone)]
pub(crate) struct Step {
    pub rule: RuleId,
    pub op: Formula,
    pub ctx: usize,
    pub paths: Vec<Path>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Leaf {
    RefAx(usize),
    Init(Formula, usize),
}

impl Leaf {
    fn index(&self) -> usize {
        match self {
            Leaf::RefAx(j) | Leaf::Init(_, j) => *j,
        }
    }

    fn shifted(&self, by: usize) -> Leaf {
        match self {
            Leaf::RefAx(j) => Leaf::RefAx(j + by),
            Leaf::Init(f, j) => Leaf::Init(f.clone(), j + by),
        }
    }
}

/// A cut-free R12r derivation: succedent rewrites from the root upwards.
#[derive(Debug, Clone)]
pub(crate) struct Chain {
    pub ant: Vec<Formula>,
    pub succ: Vec<Formula>,
    pub steps: Vec<Step>,
    pub leaf: Leaf,
}

fn unsupported(rule: RuleId) -> TransformError {
    TransformError::Precondition(format!("{rule} is outside R12r with Cut, LC and LW"))
}

impl Chain {
    pub(crate) fn of(d: &Derivation) -> Result<Chain, TransformError> {
        let s = &d.sequent;
        let mut chain = match d.rule.rule {
            RuleId::RefAx => Chain {
                ant: vec![],
                succ: vec![],
                steps: vec![],
                leaf: Leaf::RefAx(d.rule.principal[0]),
            },
            RuleId::Init => {
                let f = s.antecedent[d.rule.principal[0]].clone();
                Chain {
                    ant: vec![],
                    succ: vec![],
                    steps: vec![],
                    leaf: Leaf::Init(f, d.rule.principal[1]),
                }
            }
            RuleId::Rep1R | RuleId::Rep2R => {
                let mut c = Chain::of(&d.children[0])?;
                let rep = d.rule.replacement.as_ref().expect("replacement");
                c.steps.insert(
                    0,
                    Step {
                        rule: d.rule.rule,
                        op: s.antecedent[rep.op.expect("op")].clone(),
                        ctx: rep.context,
                        paths: rep.paths.clone(),
                    },
                );
                c
            }
            RuleId::LW | RuleId::LC => Chain::of(&d.children[0])?,
            RuleId::Cut => {
                let left = Chain::of(&d.children[0])?;
                let right = Chain::of(&d.children[1])?;
                let a = d.rule.cut_formula.as_ref().expect("cut formula");
                let c = splice(left, right, a);
                c.permuted(s)?
            }
            other => return Err(unsupported(other)),
        };
        chain.ant = s.antecedent.clone();
        chain.succ = s.succedent.clone();
        Ok(chain)
    }

    /// The same chain with its root succedent in the order of `target`.
    fn permuted(mut self, target: &Sequent) -> Result<Chain, TransformError> {
        let here = Sequent::new(target.antecedent.clone(), self.succ.clone());
        let m = matching(&here, target)
            .ok_or_else(|| TransformError::InvalidOutput(format!("`{here}` is not `{target}`")))?;
        let map = &m[1];
        for s in &mut self.steps {
            s.ctx = map[s.ctx];
        }
        self.leaf = match self.leaf {
            Leaf::RefAx(j) => Leaf::RefAx(map[j]),
            Leaf::Init(f, j) => Leaf::Init(f, map[j]),
        };
        self.succ = target.succedent.clone();
        Ok(self)
    }

    pub(crate) fn to_derivation(&self) -> Result<Derivation, TransformError> {
        let mut levels = vec![self.succ.clone()];
        for s in &self.steps {
            let (from, to) = orient(s.rule, &s.op)?;
            let mut next = levels.last().expect("root").clone();
            next[s.ctx] = replace_at(&next[s.ctx], &s.paths, &from, &to).map_err(crate::calculus::CalcError::from)?;
            levels.push(next);
        }
        let top = Sequent::new(self.ant.clone(), levels.pop().expect("root"));
        let inst = match &self.leaf {
            Leaf::RefAx(j) => RuleInstance::new(RuleId::RefAx, vec![*j]),
            Leaf::Init(f, j) => RuleInstance::new(RuleId::Init, vec![find(&top, Side::Antecedent, f)?, *j]),
        };
        let mut d = node(top, inst, vec![])?;
        for (s, succ) in self.steps.iter().zip(levels).rev() {
            let conclusion = Sequent::new(self.ant.clone(), succ);
            let o = find(&conclusion, Side::Antecedent, &s.op)?;
            let inst = RuleInstance::replacing(s.rule, Some(o), s.ctx, s.paths.clone());
            d = node(conclusion, inst, vec![d])?;
        }
        Ok(d)
    }
}

fn below(paths: &[Path], k: usize) -> Vec<Path> {
    paths
        .iter()
        .filter(|p| p.first() == Some(&k))
        .map(|p| p[1..].to_vec())
        .collect()
}

/// Rewrites turning one side of the cut equality into the other, read off
/// the left chain: (rule, operating equality, paths relative to the term).
fn bridge(a_steps: &[Step], leaf_eq: Option<&Formula>, forward: bool) -> Vec<(RuleId, Formula, Vec<Path>)> {
    let (first, second, jump) = if forward {
        (0, 1, RuleId::Rep2R)
    } else {
        (1, 0, RuleId::Rep1R)
    };
    let mut out: Vec<(RuleId, Formula, Vec<Path>)> = a_steps
        .iter()
        .filter_map(|s| {
            let q = below(&s.paths, first);
            (!q.is_empty()).then(|| (s.rule, s.op.clone(), q))
        })
        .collect();
    if let Some(e) = leaf_eq {
        out.push((jump, e.clone(), vec![vec![]]));
    }
    out.extend(a_steps.iter().rev().filter_map(|s| {
        let q = below(&s.paths, second);
        (!q.is_empty()).then(|| (s.rule.mirrored(), s.op.clone(), q))
    }));
    out
}

/// Cut of `a` between two cut-free chains.
fn splice(left: Chain, right: Chain, a: &Formula) -> Chain {
    let ai = left.succ.iter().rposition(|f| f == a).expect("cut formula on the left");
    let mut succ: Vec<Formula> = left.succ.clone();
    succ.remove(ai);
    let off = succ.len();
    succ.extend(right.succ.iter().cloned());
    if left.leaf.index() != ai {
        let down = |j: usize| if j > ai { j - 1 } else { j };
        let steps = left
            .steps
            .into_iter()
            .filter(|s| s.ctx != ai)
            .map(|s| Step { ctx: down(s.ctx), ..s })
            .collect();
        let leaf = match left.leaf {
            Leaf::RefAx(j) => Leaf::RefAx(down(j)),
            Leaf::Init(f, j) => Leaf::Init(f, down(j)),
        };
        return Chain {
            ant: vec![],
            succ,
            steps,
            leaf,
        };
    }
    let uses = right.steps.iter().any(|s| s.op == *a) || matches!(&right.leaf, Leaf::Init(f, _) if f == a);
    let copies = right.ant.iter().filter(|f| *f == a).count();
    let shift = |s: &Step| Step {
        ctx: s.ctx + off,
        ..s.clone()
    };
    if !uses || copies > 1 {
        let steps = right.steps.iter().map(shift).collect();
        return Chain {
            ant: vec![],
            succ,
            steps,
            leaf: right.leaf.shifted(off),
        };
    }
    let a_steps: Vec<Step> = left.steps.iter().filter(|s| s.ctx == ai).cloned().collect();
    let leaf_eq = match &left.leaf {
        Leaf::Init(f, _) if !f.is_identity() => Some(f.clone()),
        _ => None,
    };
    let mut steps = Vec::new();
    for s in &right.steps {
        if s.op != *a {
            steps.push(shift(s));
            continue;
        }
        for (rule, op, qs) in bridge(&a_steps, leaf_eq.as_ref(), s.rule == RuleId::Rep2R) {
            let paths = s
                .paths
                .iter()
                .flat_map(|p| qs.iter().map(move |q| p.iter().chain(q).copied().collect()))
                .collect();
            steps.push(Step {
                rule,
                op,
                ctx: s.ctx + off,
                paths,
            });
        }
    }
    let leaf = match &right.leaf {
        Leaf::Init(f, j) if f == a => {
            steps.extend(a_steps.iter().map(|s| Step {
                ctx: j + off,
                ..s.clone()
            }));
            left.leaf.shifted(j + off - ai)
        }
        other => other.shifted(off),
    };
    Chain {
        ant: vec![],
        succ,
        steps,
        leaf,
    }
}

/// A cut-free, contraction-free R12r derivation of the same endsequent.
pub fn cut_eliminate_pipeline(d: &Derivation) -> Result<TransformReport, TransformError> {
    let r12r = preset("R12r").expect("preset").spec;
    require_valid(d, &r12r.with_rules([RuleId::Cut, RuleId::LC, RuleId::LW]))?;
    let out = Chain::of(d)?.to_derivation()?;
    TransformReport::finish(d, out, r12r, vec!["splice".into()])
}
