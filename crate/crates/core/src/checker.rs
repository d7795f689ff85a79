//! Derivation trees and the proof checker.
//!
#![doc = include_str!("../../../book/src/snippets/checking.md")]

use std::collections::BTreeMap;
use std::fmt;

use crate::calculus::{premisses_of, CalcError, CalculusSpec, RuleId, RuleInstance};
use crate::syntax::Sequent;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub sequent: Sequent,
    pub rule: RuleInstance,
    pub children: Vec<Derivation>,
}

impl Derivation {
    pub fn new(sequent: Sequent, rule: RuleInstance, children: Vec<Derivation>) -> Derivation {
        Derivation {
            sequent,
            rule,
            children,
        }
    }

    pub fn leaf(sequent: Sequent, rule: RuleInstance) -> Derivation {
        Derivation::new(sequent, rule, vec![])
    }

    /// Leaves have height 0.
    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn rule_counts(&self) -> BTreeMap<RuleId, usize> {
        let mut out = BTreeMap::new();
        self.visit(&mut |d| *out.entry(d.rule.rule).or_insert(0) += 1);
        out
    }

    pub fn uses(&self, rule: RuleId) -> bool {
        self.rule.rule == rule || self.children.iter().any(|c| c.uses(rule))
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Derivation)) {
        f(self);
        for c in &self.children {
            c.visit(f);
        }
    }
}

/// The first failure found by [`check`], with the child-index path from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeError {
    pub path: Vec<usize>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub valid: bool,
    pub height: usize,
    pub rule_counts: BTreeMap<RuleId, usize>,
    pub first_error: Option<NodeError>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "result: {}", if self.valid { "valid" } else { "invalid" })?;
        writeln!(f, "height: {}", self.height)?;
        let counts: Vec<String> = self.rule_counts.iter().map(|(r, n)| format!("{r}={n}")).collect();
        writeln!(f, "counts: {}", counts.join(","))?;
        if let Some(e) = &self.first_error {
            let path: Vec<String> = e.path.iter().map(|i| i.to_string()).collect();
            writeln!(f, "error_node: /{}", path.join("/"))?;
            writeln!(f, "error: {}", e.error)?;
        }
        Ok(())
    }
}

/// Height and rule usage without checking.
pub fn stats(d: &Derivation) -> CheckReport {
    CheckReport {
        valid: false,
        height: d.height(),
        rule_counts: d.rule_counts(),
        first_error: None,
    }
}

fn node_error(d: &Derivation, spec: &CalculusSpec) -> Option<String> {
    let premisses = match premisses_of(&d.sequent, &d.rule, spec) {
        Ok(p) => p,
        Err(e) => return Some(e.to_string()),
    };
    if premisses.len() != d.children.len() {
        return Some(format!(
            "{} needs {} premisses, found {}",
            d.rule.rule,
            premisses.len(),
            d.children.len()
        ));
    }
    for (k, (p, c)) in premisses.iter().zip(&d.children).enumerate() {
        if *p != c.sequent {
            return Some(format!("premiss {k} should be `{p}`, found `{}`", c.sequent));
        }
    }
    None
}

fn first_error(d: &Derivation, spec: &CalculusSpec, path: &mut Vec<usize>) -> Option<NodeError> {
    if let Some(error) = node_error(d, spec) {
        return Some(NodeError {
            path: path.clone(),
            error,
        });
    }
    for (k, c) in d.children.iter().enumerate() {
        path.push(k);
        let e = first_error(c, spec, path);
        path.pop();
        if e.is_some() {
            return e;
        }
    }
    None
}

/// Checks every inference of `d` against `spec`; premisses must match exactly
/// as multisets.
pub fn check(d: &Derivation, spec: &CalculusSpec) -> CheckReport {
    let first_error = first_error(d, spec, &mut Vec::new());
    CheckReport {
        valid: first_error.is_none(),
        height: d.height(),
        rule_counts: d.rule_counts(),
        first_error,
    }
}

/// Builds a node whose children are derivations of exactly the premisses of
/// `rule` at `sequent`.
pub fn infer(
    sequent: Sequent,
    rule: RuleInstance,
    children: Vec<Derivation>,
    spec: &CalculusSpec,
) -> Result<Derivation, CalcError> {
    let premisses = premisses_of(&sequent, &rule, spec)?;
    if premisses.len() != children.len() || premisses.iter().zip(&children).any(|(p, c)| *p != c.sequent) {
        return Err(CalcError::MalformedInstance {
            rule: rule.rule,
            detail: "children do not match the premisses".into(),
        });
    }
    Ok(Derivation::new(sequent, rule, children))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::preset;
    use crate::parser::parse_derivation;

    const EXPANSION: &str =
        "(eq1 [op=0;ctx=0;at=1.0] \"a = f(a), a = f(a) |- a = f(f(a))\"\n  (init [0;0] \"a = f(a) |- a = f(a)\"))\n";

    #[test]
    fn expansion_step_checks_only_with_eq_rules() {
        let d = parse_derivation(EXPANSION).unwrap();
        let ok = check(&d, &preset("EqCutFree").unwrap().spec);
        assert!(ok.valid, "{ok}");
        assert_eq!(ok.height, 1);
        let bad = check(&d, &preset("R12r").unwrap().spec);
        assert!(!bad.valid);
        let e = bad.first_error.unwrap();
        assert!(e.path.is_empty() && e.error.contains("Eq1"));
    }

    #[test]
    fn errors_are_located() {
        let d = parse_derivation(
            "(rep2r [op=1;ctx=0;at=1] \"a = c, b = c |- a = b\"\n  (init [0;0] \"a = c, b = c |- b = c\"))",
        )
        .unwrap();
        let r = check(&d, &preset("R12r").unwrap().spec);
        assert!(!r.valid);
        assert_eq!(r.first_error.unwrap().path, Vec::<usize>::new());
        let d = parse_derivation(
            "(rep2r [op=1;ctx=0;at=1] \"a = c, b = c |- a = b\"\n  (init [1;0] \"a = c, b = c |- a = c\"))",
        )
        .unwrap();
        let r = check(&d, &preset("R12r").unwrap().spec);
        assert_eq!(r.first_error.as_ref().unwrap().path, vec![0]);
        assert!(r.to_string().contains("error_node: /0"));
    }

    #[test]
    fn stats_count_rules() {
        let d = parse_derivation(EXPANSION).unwrap();
        let s = stats(&d);
        assert_eq!(s.height, 1);
        assert_eq!(s.rule_counts[&RuleId::Eq1], 1);
        assert_eq!(stats(&d.children[0]).height, 0);
        assert_eq!(d.size(), 2);
    }

    #[test]
    fn adding_rules_keeps_validity() {
        let d = parse_derivation(EXPANSION).unwrap();
        let spec = preset("EqCutFree")
            .unwrap()
            .spec
            .with_rules([RuleId::Cut, RuleId::Rep1R]);
        assert!(check(&d, &spec).valid);
    }
}
