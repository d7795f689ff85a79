//! Terms, formulas and sequents.
//!
//! Parameters stand uniformly for constants and free variables. Bound
//! variables only appear below a quantifier that binds them. A [`Path`] walks
//! from an atomic formula down to one term occurrence: for an equality index
//! `0` is the left-hand side and `1` the right-hand side, for a predicate atom
//! and a function application the index selects the argument.
//!
#![doc = include_str!("../../../book/src/snippets/sequents.md")]

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

/// Child indices from an atomic formula to a term occurrence.
pub type Path = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("term contains the unbound variable `{0}`")]
    UnboundVarInTerm(String),
    #[error("expected an atomic formula, found `{0}`")]
    NonAtomicFormula(String),
    #[error("path {path} does not address an occurrence of `{expected}`")]
    PathMismatch { path: String, expected: String },
    #[error("replacement paths overlap: {0} and {1}")]
    OverlappingPaths(String, String),
    #[error("replacement needs at least one path")]
    EmptyPaths,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Param(String),
    Bound(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn param(name: &str) -> Term {
        Term::Param(name.to_string())
    }

    pub fn app(symbol: &str, args: Vec<Term>) -> Term {
        Term::App(symbol.to_string(), args)
    }

    /// Height of the formation tree; parameters and constants have height 0.
    pub fn height(&self) -> usize {
        match self {
            Term::Param(_) | Term::Bound(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.height() + 1).max().unwrap_or(0),
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => match self {
                Term::App(_, args) => args.get(i)?.at(rest),
                _ => None,
            },
        }
    }

    pub fn with_at(&self, path: &[usize], by: &Term) -> Option<Term> {
        match path.split_first() {
            None => Some(by.clone()),
            Some((&i, rest)) => match self {
                Term::App(f, args) if i < args.len() => {
                    let mut args = args.clone();
                    args[i] = args[i].with_at(rest, by)?;
                    Some(Term::App(f.clone(), args))
                }
                _ => None,
            },
        }
    }

    pub fn contains(&self, t: &Term) -> bool {
        self == t
            || match self {
                Term::App(_, args) => args.iter().any(|a| a.contains(t)),
                _ => false,
            }
    }

    pub fn is_function_free(&self) -> bool {
        !matches!(self, Term::App(..))
    }

    fn collect_occurrences(&self, t: &Term, prefix: &mut Path, out: &mut Vec<Path>) {
        if self == t {
            out.push(prefix.clone());
        }
        if let Term::App(_, args) = self {
            for (i, a) in args.iter().enumerate() {
                prefix.push(i);
                a.collect_occurrences(t, prefix, out);
                prefix.pop();
            }
        }
    }

    pub fn subterms_into(&self, out: &mut BTreeSet<Term>) {
        out.insert(self.clone());
        if let Term::App(_, args) = self {
            for a in args {
                a.subterms_into(out);
            }
        }
    }

    pub fn params_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Param(p) => {
                out.insert(p.clone());
            }
            Term::Bound(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.params_into(out)),
        }
    }

    fn first_bound(&self) -> Option<&str> {
        match self {
            Term::Bound(x) => Some(x),
            Term::Param(_) => None,
            Term::App(_, args) => args.iter().find_map(|a| a.first_bound()),
        }
    }

    fn substitute_var(&self, var: &str, t: &Term) -> Term {
        match self {
            Term::Param(x) | Term::Bound(x) if x == var => t.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.substitute_var(var, t)).collect()),
            other => other.clone(),
        }
    }

    pub(crate) fn rename_param(&self, from: &str, to: &str) -> Term {
        match self {
            Term::Param(x) if x == from => Term::Param(to.to_string()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.rename_param(from, to)).collect()),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Param(x) | Term::Bound(x) => write!(f, "{x}"),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Bottom,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs, rhs)
    }

    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(pred.to_string(), args)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(..) | Formula::Eq(..))
    }

    pub fn is_equality(&self) -> bool {
        matches!(self, Formula::Eq(..))
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Formula::Eq(l, r) if l == r)
    }

    /// The two sides of an equality.
    pub fn as_eq(&self) -> Option<(&Term, &Term)> {
        match self {
            Formula::Eq(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// Top-level terms of an atomic formula, in path order.
    pub fn atomic_args(&self) -> Option<Vec<&Term>> {
        match self {
            Formula::Atom(_, args) => Some(args.iter().collect()),
            Formula::Eq(l, r) => Some(vec![l, r]),
            _ => None,
        }
    }

    pub fn term_at(&self, path: &[usize]) -> Option<&Term> {
        let (&i, rest) = path.split_first()?;
        match self {
            Formula::Atom(_, args) => args.get(i)?.at(rest),
            Formula::Eq(l, r) => match i {
                0 => l.at(rest),
                1 => r.at(rest),
                _ => None,
            },
            _ => None,
        }
    }

    fn with_term_at(&self, path: &[usize], by: &Term) -> Option<Formula> {
        let (&i, rest) = path.split_first()?;
        match self {
            Formula::Atom(p, args) if i < args.len() => {
                let mut args = args.clone();
                args[i] = args[i].with_at(rest, by)?;
                Some(Formula::Atom(p.clone(), args))
            }
            Formula::Eq(l, r) => match i {
                0 => Some(Formula::Eq(l.with_at(rest, by)?, r.clone())),
                1 => Some(Formula::Eq(l.clone(), r.with_at(rest, by)?)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn subterms_into(&self, out: &mut BTreeSet<Term>) {
        self.for_each_term(&mut |t| t.subterms_into(out));
    }

    pub fn params_into(&self, out: &mut BTreeSet<String>) {
        self.for_each_term(&mut |t| t.params_into(out));
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.params_into(&mut out);
        out
    }

    pub fn is_function_free(&self) -> bool {
        let mut free = true;
        self.for_each_term(&mut |t| free &= t.is_function_free());
        free
    }

    /// Function symbols with their arities, in first-use order of a traversal.
    pub fn function_symbols_into(&self, out: &mut BTreeSet<(String, usize)>) {
        fn walk(t: &Term, out: &mut BTreeSet<(String, usize)>) {
            if let Term::App(f, args) = t {
                out.insert((f.clone(), args.len()));
                args.iter().for_each(|a| walk(a, out));
            }
        }
        self.for_each_term(&mut |t| walk(t, out));
    }

    pub fn for_each_term(&self, visit: &mut dyn FnMut(&Term)) {
        match self {
            Formula::Atom(_, args) => args.iter().for_each(&mut *visit),
            Formula::Eq(l, r) => {
                visit(l);
                visit(r);
            }
            Formula::Bottom => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.for_each_term(visit);
                b.for_each_term(visit);
            }
            Formula::Forall(_, a) | Formula::Exists(_, a) => a.for_each_term(visit),
        }
    }

    pub fn map_terms(&self, f: &dyn Fn(&Term) -> Term) -> Formula {
        match self {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(f).collect()),
            Formula::Eq(l, r) => Formula::Eq(f(l), f(r)),
            Formula::Bottom => Formula::Bottom,
            Formula::And(a, b) => Formula::And(Box::new(a.map_terms(f)), Box::new(b.map_terms(f))),
            Formula::Or(a, b) => Formula::Or(Box::new(a.map_terms(f)), Box::new(b.map_terms(f))),
            Formula::Imp(a, b) => Formula::Imp(Box::new(a.map_terms(f)), Box::new(b.map_terms(f))),
            Formula::Forall(x, a) => Formula::Forall(x.clone(), Box::new(a.map_terms(f))),
            Formula::Exists(x, a) => Formula::Exists(x.clone(), Box::new(a.map_terms(f))),
        }
    }

    pub(crate) fn rename_param(&self, from: &str, to: &str) -> Formula {
        self.map_terms(&|t| t.rename_param(from, to))
    }

    /// Bound variables that occur outside the scope of a binder for them.
    pub fn unbound_variables(&self) -> BTreeSet<String> {
        fn term(t: &Term, scope: &[String], out: &mut BTreeSet<String>) {
            match t {
                Term::Bound(x) if !scope.contains(x) => {
                    out.insert(x.clone());
                }
                Term::App(_, args) => args.iter().for_each(|a| term(a, scope, out)),
                _ => {}
            }
        }
        fn walk(f: &Formula, scope: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Atom(_, args) => args.iter().for_each(|t| term(t, scope, out)),
                Formula::Eq(l, r) => {
                    term(l, scope, out);
                    term(r, scope, out);
                }
                Formula::Bottom => {}
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                    walk(a, scope, out);
                    walk(b, scope, out);
                }
                Formula::Forall(x, a) | Formula::Exists(x, a) => {
                    scope.push(x.clone());
                    walk(a, scope, out);
                    scope.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }
}

/// Replaces every free occurrence of `var` in `f` by `t`.
///
/// Occurrences below a quantifier that rebinds `var` are left alone. Both a
/// parameter and a bound variable named `var` count as occurrences, so the
/// same operation serves quantifier instantiation and parameter substitution.
pub fn substitute(f: &Formula, var: &str, t: &Term) -> Result<Formula, SyntaxError> {
    if let Some(x) = t.first_bound() {
        return Err(SyntaxError::UnboundVarInTerm(x.to_string()));
    }
    Ok(subst_unchecked(f, var, t))
}

fn subst_unchecked(f: &Formula, var: &str, t: &Term) -> Formula {
    match f {
        Formula::Forall(x, _) | Formula::Exists(x, _) if x == var => f.clone(),
        Formula::Forall(x, a) => Formula::Forall(x.clone(), Box::new(subst_unchecked(a, var, t))),
        Formula::Exists(x, a) => Formula::Exists(x.clone(), Box::new(subst_unchecked(a, var, t))),
        Formula::And(a, b) => Formula::And(
            Box::new(subst_unchecked(a, var, t)),
            Box::new(subst_unchecked(b, var, t)),
        ),
        Formula::Or(a, b) => Formula::Or(
            Box::new(subst_unchecked(a, var, t)),
            Box::new(subst_unchecked(b, var, t)),
        ),
        Formula::Imp(a, b) => Formula::Imp(
            Box::new(subst_unchecked(a, var, t)),
            Box::new(subst_unchecked(b, var, t)),
        ),
        other => other.map_terms(&|u| u.substitute_var(var, t)),
    }
}

/// All paths at which `t` occurs in the atomic formula `f`, left to right.
pub fn occurrences(f: &Formula, t: &Term) -> Result<Vec<Path>, SyntaxError> {
    let args = f
        .atomic_args()
        .ok_or_else(|| SyntaxError::NonAtomicFormula(f.to_string()))?;
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    for (i, a) in args.into_iter().enumerate() {
        prefix.push(i);
        a.collect_occurrences(t, &mut prefix, &mut out);
        prefix.pop();
    }
    Ok(out)
}

pub fn is_prefix(a: &[usize], b: &[usize]) -> bool {
    a.len() <= b.len() && b[..a.len()] == *a
}

pub fn path_to_string(p: &[usize]) -> String {
    p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
}

/// Replaces the occurrences of `from` at `paths` in the atomic formula `f` by `to`.
pub fn replace_at(f: &Formula, paths: &[Path], from: &Term, to: &Term) -> Result<Formula, SyntaxError> {
    if !f.is_atomic() {
        return Err(SyntaxError::NonAtomicFormula(f.to_string()));
    }
    if paths.is_empty() {
        return Err(SyntaxError::EmptyPaths);
    }
    for (i, p) in paths.iter().enumerate() {
        for q in &paths[i + 1..] {
            if is_prefix(p, q) || is_prefix(q, p) {
                return Err(SyntaxError::OverlappingPaths(path_to_string(p), path_to_string(q)));
            }
        }
    }
    let mut out = f.clone();
    for p in paths {
        if f.term_at(p) != Some(from) {
            return Err(SyntaxError::PathMismatch {
                path: path_to_string(p),
                expected: from.to_string(),
            });
        }
        out = out.with_term_at(p, to).expect("path resolved above");
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Antecedent,
    Succedent,
}

/// One term occurrence inside a sequent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Position {
    pub side: Side,
    pub index: usize,
    pub path: Path,
}

/// A pair of formula multisets.
///
/// The vectors keep insertion order so that indices stay meaningful in
/// derivation files; equality and hashing ignore that order.
#[derive(Debug, Clone, Default)]
pub struct Sequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Vec<Formula>,
}

impl Sequent {
    pub fn new(antecedent: Vec<Formula>, succedent: Vec<Formula>) -> Sequent {
        Sequent { antecedent, succedent }
    }

    pub fn side(&self, side: Side) -> &Vec<Formula> {
        match side {
            Side::Antecedent => &self.antecedent,
            Side::Succedent => &self.succedent,
        }
    }

    pub fn side_mut(&mut self, side: Side) -> &mut Vec<Formula> {
        match side {
            Side::Antecedent => &mut self.antecedent,
            Side::Succedent => &mut self.succedent,
        }
    }

    /// Copy with both sides sorted; two sequents are equal iff their
    /// canonical forms coincide.
    pub fn canonical(&self) -> Sequent {
        let mut s = self.clone();
        s.antecedent.sort();
        s.succedent.sort();
        s
    }

    pub fn resolve(&self, pos: &Position) -> Option<&Term> {
        self.side(pos.side).get(pos.index)?.term_at(&pos.path)
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.antecedent.iter().chain(self.succedent.iter())
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.formulas().for_each(|f| f.params_into(&mut out));
        out
    }

    pub fn subterms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        self.formulas().for_each(|f| f.subterms_into(&mut out));
        out
    }

    pub fn is_function_free(&self) -> bool {
        self.formulas().all(|f| f.is_function_free())
    }

    pub fn count(&self, side: Side, f: &Formula) -> usize {
        self.side(side).iter().filter(|g| *g == f).count()
    }

    pub fn find(&self, side: Side, f: &Formula) -> Option<usize> {
        self.side(side).iter().position(|g| g == f)
    }

    pub fn with_added(&self, side: Side, f: Formula) -> Sequent {
        let mut s = self.clone();
        s.side_mut(side).push(f);
        s
    }

    pub fn without(&self, side: Side, index: usize) -> Sequent {
        let mut s = self.clone();
        s.side_mut(side).remove(index);
        s
    }

    pub fn with_replaced(&self, side: Side, index: usize, f: Formula) -> Sequent {
        let mut s = self.clone();
        s.side_mut(side)[index] = f;
        s
    }

    pub(crate) fn rename_param(&self, from: &str, to: &str) -> Sequent {
        Sequent {
            antecedent: self.antecedent.iter().map(|f| f.rename_param(from, to)).collect(),
            succedent: self.succedent.iter().map(|f| f.rename_param(from, to)).collect(),
        }
    }
}

fn sorted(fs: &[Formula]) -> Vec<&Formula> {
    let mut v: Vec<&Formula> = fs.iter().collect();
    v.sort();
    v
}

impl PartialEq for Sequent {
    fn eq(&self, other: &Self) -> bool {
        self.antecedent.len() == other.antecedent.len()
            && self.succedent.len() == other.succedent.len()
            && sorted(&self.antecedent) == sorted(&other.antecedent)
            && sorted(&self.succedent) == sorted(&other.succedent)
    }
}

impl Eq for Sequent {}

impl Hash for Sequent {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let digest = |fs: &[Formula]| {
            let mut hs: Vec<u64> = fs
                .iter()
                .map(|f| {
                    let mut h = std::collections::hash_map::DefaultHasher::new();
                    f.hash(&mut h);
                    h.finish()
                })
                .collect();
            hs.sort_unstable();
            hs
        };
        digest(&self.antecedent).hash(state);
        digest(&self.succedent).hash(state);
    }
}

impl PartialOrd for Sequent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sequent {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (sorted(&self.antecedent), sorted(&self.succedent)).cmp(&(sorted(&other.antecedent), sorted(&other.succedent)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Term {
        Term::param("a")
    }
    fn b() -> Term {
        Term::param("b")
    }
    fn fa() -> Term {
        Term::app("f", vec![a()])
    }

    #[test]
    fn substitute_replaces_free_occurrences() {
        let f = Formula::eq(Term::param("x"), b());
        assert_eq!(substitute(&f, "x", &a()).unwrap(), Formula::eq(a(), b()));

        let p = Formula::atom("P", vec![Term::param("x"), Term::param("x")]);
        assert_eq!(
            substitute(&p, "x", &fa()).unwrap(),
            Formula::atom("P", vec![fa(), fa()])
        );

        let q = Formula::Forall(
            "y".into(),
            Box::new(Formula::atom("P", vec![Term::param("x"), Term::Bound("y".into())])),
        );
        let expected = Formula::Forall(
            "y".into(),
            Box::new(Formula::atom("P", vec![a(), Term::Bound("y".into())])),
        );
        assert_eq!(substitute(&q, "x", &a()).unwrap(), expected);
    }

    #[test]
    fn substitute_rejects_bound_variable_terms() {
        let f = Formula::eq(Term::param("x"), b());
        assert_eq!(
            substitute(&f, "x", &Term::Bound("z".into())),
            Err(SyntaxError::UnboundVarInTerm("z".into()))
        );
    }

    #[test]
    fn occurrences_enumerates_left_to_right() {
        assert_eq!(
            occurrences(&Formula::eq(a(), fa()), &a()).unwrap(),
            vec![vec![0], vec![1, 0]]
        );
        assert!(occurrences(&Formula::eq(a(), b()), &Term::param("c"))
            .unwrap()
            .is_empty());
        let ffa = Term::app("f", vec![fa()]);
        assert_eq!(
            occurrences(&Formula::atom("P", vec![ffa]), &fa()).unwrap(),
            vec![vec![0, 0]]
        );
        assert!(matches!(
            occurrences(&Formula::Bottom, &a()),
            Err(SyntaxError::NonAtomicFormula(_))
        ));
    }

    #[test]
    fn replace_at_examples() {
        let ffa = Term::app("f", vec![fa()]);
        assert_eq!(
            replace_at(&Formula::eq(a(), fa()), &[vec![1, 0]], &a(), &fa()).unwrap(),
            Formula::eq(a(), ffa)
        );
        let c = Term::param("c");
        assert_eq!(
            replace_at(&Formula::eq(a(), c.clone()), &[vec![1]], &c, &b()).unwrap(),
            Formula::eq(a(), b())
        );
        let r = Term::param("r");
        let p = Formula::atom("P", vec![r.clone()]);
        assert_eq!(replace_at(&p, &[vec![0]], &r, &r).unwrap(), p);
    }

    #[test]
    fn replace_at_errors() {
        let f = Formula::eq(a(), fa());
        assert!(matches!(
            replace_at(&f, &[vec![0]], &b(), &a()),
            Err(SyntaxError::PathMismatch { .. })
        ));
        assert!(matches!(
            replace_at(&f, &[vec![1], vec![1, 0]], &fa(), &a()),
            Err(SyntaxError::OverlappingPaths(..))
        ));
        assert_eq!(replace_at(&f, &[], &a(), &b()), Err(SyntaxError::EmptyPaths));
    }

    #[test]
    fn sequents_compare_as_multisets() {
        let pa = Formula::atom("P", vec![a()]);
        let e = Formula::eq(a(), b());
        let s1 = Sequent::new(vec![pa.clone(), e.clone()], vec![pa.clone()]);
        let s2 = Sequent::new(vec![e.clone(), pa.clone()], vec![pa.clone()]);
        let s3 = Sequent::new(vec![e, pa.clone(), pa.clone()], vec![pa]);
        assert_eq!(s1, s2);
        assert_ne!(s1, s3);
        let mut set = std::collections::HashSet::new();
        set.insert(s1);
        assert!(set.contains(&s2));
    }

    #[test]
    fn term_height() {
        assert_eq!(a().height(), 0);
        assert_eq!(Term::app("f", vec![fa(), b()]).height(), 2);
        assert_eq!(Term::app("c", vec![]).height(), 0);
    }
}
