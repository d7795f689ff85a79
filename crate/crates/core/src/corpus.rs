//! Seeded random corpora: derivations built forwards from initial sequents
//! for each transformation, and sequents for search experiments.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::calculus::{preset, CalculusSpec, RuleId, RuleInstance};
use crate::checker::{check, Derivation};
use crate::syntax::{occurrences, replace_at, Formula, Path, Sequent, Side, Term};
use crate::transform::build::{cut, lc, lw, node, orient};
use crate::transform::weaken::weaken;

/// Input class of a transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pipeline {
    CutElimination,
    RightNormalize,
    ScopeRestrict,
    Rep1rElimination,
    Semishorten,
}

impl Pipeline {
    pub const ALL: [Pipeline; 5] = [
        Pipeline::CutElimination,
        Pipeline::RightNormalize,
        Pipeline::ScopeRestrict,
        Pipeline::Rep1rElimination,
        Pipeline::Semishorten,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::CutElimination => "cut_eliminate_pipeline",
            Pipeline::RightNormalize => "right_normalize",
            Pipeline::ScopeRestrict => "scope_restrict",
            Pipeline::Rep1rElimination => "eliminate_rep1r_plus",
            Pipeline::Semishorten => "semishorten",
        }
    }

    /// The calculus the generated derivations are valid in.
    pub fn source(self) -> CalculusSpec {
        let r12r = preset("R12r").expect("preset").spec;
        match self {
            Pipeline::CutElimination => r12r.with_rules([RuleId::Cut, RuleId::LC, RuleId::LW]),
            Pipeline::Rep1rElimination => preset("R2rlPlus").expect("preset").spec.with_rules([RuleId::Rep1R]),
            _ => r12r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Goal {
    Any,
    Equality,
    Atom,
}

const MAX_HEIGHT: usize = 5;

struct Gen {
    rng: StdRng,
    params: &'static [&'static str],
}

impl Gen {
    fn new(seed: u64) -> Gen {
        Gen {
            rng: StdRng::seed_from_u64(seed),
            params: &["a", "b", "c"],
        }
    }

    fn param(&mut self) -> Term {
        Term::param(self.params.choose(&mut self.rng).expect("nonempty"))
    }

    fn term(&mut self, height: usize) -> Term {
        if height == 0 || self.rng.gen_bool(0.6) {
            self.param()
        } else if self.rng.gen_bool(0.7) {
            Term::app("f", vec![self.term(height - 1)])
        } else {
            Term::app("g", vec![self.term(height - 1), self.term(height - 1)])
        }
    }

    fn equality(&mut self) -> Formula {
        loop {
            let (l, r) = (self.term(1), self.term(1));
            if l != r {
                return Formula::eq(l, r);
            }
        }
    }

    fn atom(&mut self) -> Formula {
        if self.rng.gen_bool(0.6) {
            Formula::atom("P", vec![self.term(1)])
        } else {
            Formula::atom("Q", vec![self.term(1), self.term(1)])
        }
    }

    fn context(&mut self) -> Vec<Formula> {
        let mut ant: Vec<Formula> = (0..self.rng.gen_range(1..=3)).map(|_| self.equality()).collect();
        ant.extend((0..self.rng.gen_range(0..=2)).map(|_| self.atom()));
        ant.shuffle(&mut self.rng);
        ant
    }

    /// An initial sequent over `ant`, optionally with a second succedent formula.
    fn leaf(&mut self, mut ant: Vec<Formula>, goal: Goal, extra: bool, on: Option<&Formula>) -> Derivation {
        let init_on = |ant: &[Formula], f: &Formula| ant.iter().position(|g| g == f);
        let goal = if goal == Goal::Any {
            if self.rng.gen_bool(0.5) {
                Goal::Equality
            } else {
                Goal::Atom
            }
        } else {
            goal
        };
        let main = match on {
            Some(f) => f.clone(),
            None if goal == Goal::Atom => {
                let atoms: Vec<Formula> = ant.iter().filter(|f| !f.is_equality()).cloned().collect();
                match atoms.choose(&mut self.rng) {
                    Some(f) => f.clone(),
                    None => {
                        let f = self.atom();
                        ant.push(f.clone());
                        f
                    }
                }
            }
            None => {
                let eqs: Vec<Formula> = ant.iter().filter(|f| f.is_equality()).cloned().collect();
                match eqs.choose(&mut self.rng) {
                    Some(f) if self.rng.gen_bool(0.4) => f.clone(),
                    _ => {
                        let t = self.term(1);
                        Formula::eq(t.clone(), t)
                    }
                }
            }
        };
        let mut succ = vec![main.clone()];
        if extra {
            let f = if self.rng.gen_bool(0.5) {
                self.atom()
            } else {
                self.equality()
            };
            succ.insert(self.rng.gen_range(0..=1), f);
        }
        let j = succ.iter().position(|f| *f == main).expect("main formula");
        let s = Sequent::new(ant.clone(), succ);
        let inst = match init_on(&ant, &main) {
            Some(i) if !main.is_identity() => RuleInstance::new(RuleId::Init, vec![i, j]),
            _ => RuleInstance::new(RuleId::RefAx, vec![j]),
        };
        Derivation::leaf(s, inst)
    }
}

impl Gen {
    fn paths(&mut self, occ: Vec<Path>, single: bool) -> Vec<Path> {
        if single || occ.len() == 1 || self.rng.gen_bool(0.5) {
            vec![occ.choose(&mut self.rng).expect("nonempty").clone()]
        } else {
            occ
        }
    }

    /// Operating equalities of `s` that are not identities.
    fn ops(s: &Sequent) -> Vec<usize> {
        (0..s.antecedent.len())
            .filter(|&i| s.antecedent[i].is_equality() && !s.antecedent[i].is_identity())
            .collect()
    }

    /// A right replacement below `d`: occurrences of the replacing term in a
    /// succedent formula are turned back into the replaced term.
    fn right_step(
        &mut self,
        d: &Derivation,
        rules: &[RuleId],
        single: bool,
        only: Option<usize>,
    ) -> Option<Derivation> {
        let s = &d.sequent;
        let mut options = Vec::new();
        for c in 0..s.succedent.len() {
            if only.is_some_and(|k| k != c) {
                continue;
            }
            for o in Self::ops(s) {
                for &rule in rules {
                    let (_, to) = orient(rule, &s.antecedent[o]).ok()?;
                    let occ = occurrences(&s.succedent[c], &to).ok()?;
                    if !occ.is_empty() {
                        options.push((c, o, rule, occ));
                    }
                }
            }
        }
        let (c, o, rule, occ) = options.choose(&mut self.rng)?.clone();
        let paths = self.paths(occ, single);
        let (from, to) = orient(rule, &s.antecedent[o]).ok()?;
        let f = replace_at(&s.succedent[c], &paths, &to, &from).ok()?;
        let conclusion = s.with_replaced(Side::Succedent, c, f);
        node(
            conclusion,
            RuleInstance::replacing(rule, Some(o), c, paths),
            vec![d.clone()],
        )
        .ok()
    }

    /// A left replacement below `d`; a repeated equality context is first
    /// added throughout `d` by weakening.
    fn left_step(&mut self, d: &Derivation, rules: &[RuleId], single: bool) -> Option<Derivation> {
        let s = &d.sequent;
        let mut options = Vec::new();
        for g in 0..s.antecedent.len() {
            for o in Self::ops(s) {
                for &rule in rules {
                    if o == g {
                        continue;
                    }
                    let (_, to) = orient(rule, &s.antecedent[o]).ok()?;
                    let occ = occurrences(&s.antecedent[g], &to).ok()?;
                    if !occ.is_empty() {
                        options.push((g, o, rule, occ));
                    }
                }
            }
        }
        let (g, o, rule, occ) = options.choose(&mut self.rng)?.clone();
        let paths = self.paths(occ, single);
        let (from, to) = orient(rule, &s.antecedent[o]).ok()?;
        let ctx = replace_at(&s.antecedent[g], &paths, &to, &from).ok()?;
        let (premiss, conclusion, c, op) = if rule.repeats_context(ctx.is_equality()) {
            let premiss = weaken(d, &ctx, Side::Antecedent);
            let conclusion = premiss.sequent.without(Side::Antecedent, g);
            let c = conclusion.antecedent.len() - 1;
            (premiss, conclusion, c, if o > g { o - 1 } else { o })
        } else {
            (d.clone(), s.with_replaced(Side::Antecedent, g, ctx), g, o)
        };
        node(
            conclusion,
            RuleInstance::replacing(rule, Some(op), c, paths),
            vec![premiss],
        )
        .ok()
    }

    /// Up to `steps` replacements below an initial sequent.
    #[allow(clippy::too_many_arguments)]
    fn chain(
        &mut self,
        ant: Vec<Formula>,
        goal: Goal,
        extra: bool,
        on: Option<&Formula>,
        steps: usize,
        right: &[RuleId],
        left: &[RuleId],
        single: bool,
    ) -> Derivation {
        let only = (!extra).then_some(0);
        let mut d = self.leaf(ant, goal, extra, on);
        let mut done = 0;
        for _ in 0..3 * steps {
            if done == steps {
                break;
            }
            let next = if !left.is_empty() && self.rng.gen_bool(0.4) {
                self.left_step(&d, left, single)
            } else {
                self.right_step(&d, right, single, only)
            };
            if let Some(n) = next {
                d = n;
                done += 1;
            }
        }
        d
    }
}

const BOTH: [RuleId; 2] = [RuleId::Rep1R, RuleId::Rep2R];

impl Gen {
    fn with_cuts(&mut self, height: usize) -> Derivation {
        let extra = self.rng.gen_bool(0.3);
        if height < 2 || self.rng.gen_bool(0.3) {
            let steps = self.rng.gen_range(0..=height);
            let ant = self.context();
            return self.chain(ant, Goal::Any, extra, None, steps, &BOTH, &[], false);
        }
        let h = self.rng.gen_range(0..height);
        let left = self.with_cuts(h);
        let a = left.sequent.succedent.choose(&mut self.rng).expect("nonempty").clone();
        let mut ant = self.context();
        ant.insert(self.rng.gen_range(0..=ant.len()), a.clone());
        let on = self.rng.gen_bool(0.4).then_some(&a);
        let steps = self.rng.gen_range(0..height);
        let right = self.chain(ant, Goal::Any, extra, on, steps, &BOTH, &[], false);
        let mut d = cut(left, right, &a).expect("cut of matching formulas");
        let dup = d
            .sequent
            .antecedent
            .iter()
            .find(|f| d.sequent.count(Side::Antecedent, f) > 1)
            .cloned();
        if let Some(f) = dup.filter(|_| self.rng.gen_bool(0.7)) {
            d = lc(d, &f).expect("duplicate present");
        }
        if self.rng.gen_bool(0.2) {
            let f = self.atom();
            d = lw(d, f).expect("weakening");
        }
        if d.height() < height {
            if let Some(n) = self.right_step(&d, &BOTH, false, None) {
                d = n;
            }
        }
        d
    }

    fn derivation(&mut self, p: Pipeline) -> Derivation {
        let steps = self.rng.gen_range(1..=MAX_HEIGHT);
        let ant = self.context();
        let extra = self.rng.gen_bool(0.3);
        match p {
            Pipeline::CutElimination => self.with_cuts(MAX_HEIGHT),
            Pipeline::RightNormalize => self.chain(ant, Goal::Equality, false, None, steps, &BOTH, &[], false),
            Pipeline::ScopeRestrict => self.chain(ant, Goal::Atom, false, None, steps, &BOTH, &[], false),
            Pipeline::Rep1rElimination => {
                self.chain(ant, Goal::Any, extra, None, steps, &BOTH, &[RuleId::Rep2Lplus], true)
            }
            Pipeline::Semishorten => self.chain(ant, Goal::Any, extra, None, steps, &BOTH, &[], false),
        }
    }
}

/// `count` derivations of height at most 5, valid in `p.source()`, with at
/// least one inference each (and a cut for cut elimination, an index-1
/// replacement for Rep1R elimination).
pub fn derivations(p: Pipeline, count: usize, seed: u64) -> Vec<Derivation> {
    let mut g = Gen::new(seed);
    let spec = p.source();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d = g.derivation(p);
        let wanted = match p {
            Pipeline::CutElimination => d.uses(RuleId::Cut),
            Pipeline::Rep1rElimination => d.uses(RuleId::Rep1R),
            _ => d.height() > 0,
        };
        if wanted && d.height() <= MAX_HEIGHT && check(&d, &spec).valid {
            out.push(d);
        }
    }
    out
}

/// Function-free atomic sequents over at most six parameters with at most
/// four antecedent equalities and three atoms.
pub fn function_free_sequents(count: usize, seed: u64) -> Vec<Sequent> {
    let mut g = Gen::new(seed);
    g.params = &["a", "b", "c", "d", "e", "f"];
    (0..count)
        .map(|_| {
            let n = g.rng.gen_range(2..=6);
            let ps: Vec<Term> = g.params[..n].iter().map(|p| Term::param(p)).collect();
            let pick = |g: &mut Gen| ps.choose(&mut g.rng).expect("nonempty").clone();
            let mut ant: Vec<Formula> = (0..g.rng.gen_range(0..=4))
                .map(|_| Formula::eq(pick(&mut g), pick(&mut g)))
                .collect();
            let atoms = g.rng.gen_range(0..=2);
            ant.extend((0..atoms).map(|_| Formula::atom("P", vec![pick(&mut g), pick(&mut g)])));
            ant.shuffle(&mut g.rng);
            let goal = if g.rng.gen_bool(0.5) {
                Formula::eq(pick(&mut g), pick(&mut g))
            } else {
                Formula::atom("P", vec![pick(&mut g), pick(&mut g)])
            };
            Sequent::new(ant, vec![goal])
        })
        .collect()
}

/// Single-succedent equality sequents: endsequents of generated R12r
/// derivations mixed with unrelated goals over the same contexts.
pub fn equality_sequents(count: usize, seed: u64) -> Vec<Sequent> {
    let mut g = Gen::new(seed);
    (0..count)
        .map(|k| {
            let ant = g.context();
            let steps = g.rng.gen_range(1..=3);
            if k % 2 == 0 {
                g.chain(ant, Goal::Any, false, None, steps, &BOTH, &[], false).sequent
            } else {
                let goal = if g.rng.gen_bool(0.5) { g.equality() } else { g.atom() };
                Sequent::new(ant, vec![goal])
            }
        })
        .collect()
}
