//! Derivation-to-derivation rewrites. Every output is re-checked in the
//! target calculus before it is returned.
//!
#![doc = include_str!("../../../../book/src/snippets/transforms.md")]

pub(crate) mod build;
mod cut;
mod orient;
mod rep1r;
mod right;
mod translate;
pub(crate) mod weaken;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::calculus::{premisses_of, Base, CalcError, CalculusSpec, RuleId, RuleInstance};
use crate::checker::{check, Derivation};
use crate::syntax::{Sequent, Side};

pub use cut::cut_eliminate_pipeline;
pub use orient::{orient_function_free, single_occurrence_normalize};
pub use rep1r::{eliminate_rep1r_plus, eliminate_rep2r_plus, semishorten};
pub use right::{right_normalize, scope_restrict};
pub use translate::equivalence_translate;
pub use weaken::{project_succedent, weaken_hp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no translation of {0} into the target calculus")]
    Untranslatable(RuleId),
    #[error("replacement of several occurrences at once; normalize first")]
    MultiOccurrence,
    #[error("`{0}` is not derivable")]
    Underivable(String),
    #[error("output failed to check: {0}")]
    InvalidOutput(String),
    #[error("rewrite did not decrease its measure: {0}")]
    NoProgress(String),
    #[error(transparent)]
    Calc(#[from] CalcError),
}

/// Result of a transformation together with its target calculus.
#[derive(Debug, Clone)]
pub struct TransformReport {
    pub output: Derivation,
    pub target: CalculusSpec,
    pub input_height: usize,
    pub output_height: usize,
    pub steps: Vec<String>,
}

impl TransformReport {
    pub(crate) fn finish(
        input: &Derivation,
        output: Derivation,
        target: CalculusSpec,
        steps: Vec<String>,
    ) -> Result<TransformReport, TransformError> {
        let report = check(&output, &target);
        if let Some(e) = report.first_error {
            return Err(TransformError::InvalidOutput(format!("at {:?}: {}", e.path, e.error)));
        }
        Ok(TransformReport {
            input_height: input.height(),
            output_height: output.height(),
            output,
            target,
            steps,
        })
    }
}

/// Every rule, no restrictions; used to replay instances whose legality was
/// established elsewhere.
pub(crate) fn permissive() -> CalculusSpec {
    CalculusSpec {
        base: Base::G3c,
        rules: RuleId::ALL.iter().copied().collect::<BTreeSet<_>>(),
        flags: BTreeSet::new(),
        precedence: None,
    }
}

/// Sides addressed by the positional indices of `rule`.
pub(crate) fn principal_sides(rule: RuleId) -> &'static [Side] {
    use RuleId::*;
    match rule {
        Init | MinBot => &[Side::Antecedent, Side::Succedent],
        LBot | LAnd | LOr | LImp | LImpI | LForall | LExists | LW | LC | LCeq | Symm => &[Side::Antecedent],
        RefAx | RAnd | ROr | RImp | RImpI | RForall | RForallI | RExists | RW | RC => &[Side::Succedent],
        _ => &[],
    }
}

/// Rewrites the indices of `inst` through `map(side, old) = new`.
pub(crate) fn remap_instance(inst: &RuleInstance, map: &dyn Fn(Side, usize) -> usize) -> RuleInstance {
    let mut out = inst.clone();
    let sides = principal_sides(inst.rule);
    for (k, i) in out.principal.iter_mut().enumerate() {
        *i = map(sides[k.min(sides.len() - 1)], *i);
    }
    if let Some(rep) = &mut out.replacement {
        rep.op = rep.op.map(|o| map(Side::Antecedent, o));
        let side = if inst.rule.rewrites_succedent() {
            Side::Succedent
        } else {
            Side::Antecedent
        };
        rep.context = map(side, rep.context);
    }
    if let Some(split) = &mut out.split {
        split.antecedent = split.antecedent.iter().map(|&i| map(Side::Antecedent, i)).collect();
        split.succedent = split.succedent.iter().map(|&i| map(Side::Succedent, i)).collect();
        split.antecedent.sort_unstable();
        split.succedent.sort_unstable();
    }
    out
}

/// For each index of `from`, an index of an equal formula in `to`.
pub(crate) fn matching(from: &Sequent, to: &Sequent) -> Option<[Vec<usize>; 2]> {
    let mut out = [Vec::new(), Vec::new()];
    for (k, side) in [Side::Antecedent, Side::Succedent].into_iter().enumerate() {
        let mut used = vec![false; to.side(side).len()];
        for f in from.side(side) {
            let j = (0..used.len()).find(|&j| !used[j] && to.side(side)[j] == *f)?;
            used[j] = true;
            out[k].push(j);
        }
    }
    Some(out)
}

/// The same derivation with its endsequent written in the formula order of
/// `target`, which must be equal to it as a multiset.
pub fn reorder(d: &Derivation, target: &Sequent) -> Result<Derivation, TransformError> {
    if d.sequent != *target {
        return Err(TransformError::Precondition(format!(
            "`{}` and `{}` differ",
            d.sequent, target
        )));
    }
    if d.sequent.antecedent == target.antecedent && d.sequent.succedent == target.succedent {
        return Ok(d.clone());
    }
    let m = matching(&d.sequent, target).expect("multiset-equal");
    let inst = remap_instance(&d.rule, &|side, i| match side {
        Side::Antecedent => m[0][i],
        Side::Succedent => m[1][i],
    });
    let premisses = premisses_of(target, &inst, &permissive())?;
    let children = d
        .children
        .iter()
        .zip(&premisses)
        .map(|(c, p)| reorder(c, p))
        .collect::<Result<_, _>>()?;
    Ok(Derivation::new(target.clone(), inst, children))
}

#[cfg(test)]
mod tests;
