//! Shape invariants that certify underivability.
//!
//! A hook describes a set of sequents none of which is a leaf of the
//! calculus and which is closed under backward rule application: every
//! instance with a conclusion in the set has at least one premiss in the
//! set. Every sequent of such a set is underivable.

use crate::calculus::{Base, CalculusSpec, RuleId};
use crate::syntax::{Formula, Sequent, Term};
use RuleId::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hook {
    /// `a=c, ..., b=c, ..., c=c, ... |- a=b` for distinct parameters.
    LeftChain,
    /// `c=a, ..., c=b, ..., c=c, ... |- a=b` for distinct parameters.
    RightChain,
    /// Only identities on the left, no identity on the right.
    Identities,
}

impl Hook {
    pub const ALL: [Hook; 3] = [Hook::LeftChain, Hook::RightChain, Hook::Identities];

    pub fn name(self) -> &'static str {
        match self {
            Hook::LeftChain => "left-chain shape",
            Hook::RightChain => "right-chain shape",
            Hook::Identities => "identity antecedent",
        }
    }

    fn allowed(self) -> &'static [RuleId] {
        match self {
            Hook::LeftChain => &[Init, RefAx, LC, LCeq, Rep2Lplus, Rep2L, Rep, Rep1R],
            Hook::RightChain => &[Init, RefAx, LC, LCeq, Rep1Lplus, Rep1L, RepPrime, Rep2R],
            Hook::Identities => &[Init, RefAx, Eq1, Eq2, Cut],
        }
    }

    /// Whether the closure argument covers every rule of `spec`.
    pub fn applies_to(self, spec: &CalculusSpec) -> bool {
        spec.base == Base::None && spec.rules.iter().all(|r| self.allowed().contains(r))
    }

    pub fn holds(self, s: &Sequent) -> bool {
        match self {
            Hook::LeftChain => chain_shape(s, false),
            Hook::RightChain => chain_shape(s, true),
            Hook::Identities => {
                s.antecedent.iter().all(Formula::is_identity) && !s.succedent.iter().any(Formula::is_identity)
            }
        }
    }
}

fn chain_shape(s: &Sequent, mirrored: bool) -> bool {
    let [goal] = s.succedent.as_slice() else { return false };
    let Some((Term::Param(a), Term::Param(b))) = goal.as_eq() else {
        return false;
    };
    if a == b {
        return false;
    }
    let mut hub: Option<&str> = None;
    for f in &s.antecedent {
        let Some((l, r)) = f.as_eq() else { return false };
        let (u, c) = if mirrored { (r, l) } else { (l, r) };
        let (Term::Param(u), Term::Param(c)) = (u, c) else {
            return false;
        };
        if c == a || c == b || hub.is_some_and(|h| h != c) {
            return false;
        }
        hub = Some(c);
        if u != a && u != b && u != c {
            return false;
        }
    }
    true
}

/// The first hook that applies to `spec` and holds at `s`.
pub fn refuting_hook(s: &Sequent, spec: &CalculusSpec) -> Option<Hook> {
    Hook::ALL.into_iter().find(|h| h.applies_to(spec) && h.holds(s))
}
