//! Abstract syntax for linear temporal logic with past operators and for
//! first-order logic over finite words, plus the structural transformations
//! (negation normal form, duals, past/future mirror) shared by the rest of
//! the crate.

pub mod parse;
pub mod print;

pub use parse::{parse_fo, parse_ltl, ParseError};

use std::collections::BTreeSet;

/// LTL formula with past operators. `Eventually`/`Globally`/`Once`/
/// `Historically` are first-class nodes and are only expanded on demand, so
/// classifiers can still see the original shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    WeakNext(Box<Formula>),
    Yesterday(Box<Formula>),
    WeakYesterday(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Since(Box<Formula>, Box<Formula>),
    Triggered(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Globally(Box<Formula>),
    Once(Box<Formula>),
    Historically(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }
    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }
    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }
    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }
    pub fn weak_next(f: Formula) -> Formula {
        Formula::WeakNext(Box::new(f))
    }
    pub fn yesterday(f: Formula) -> Formula {
        Formula::Yesterday(Box::new(f))
    }
    pub fn weak_yesterday(f: Formula) -> Formula {
        Formula::WeakYesterday(Box::new(f))
    }
    pub fn until(l: Formula, r: Formula) -> Formula {
        Formula::Until(Box::new(l), Box::new(r))
    }
    pub fn release(l: Formula, r: Formula) -> Formula {
        Formula::Release(Box::new(l), Box::new(r))
    }
    pub fn since(l: Formula, r: Formula) -> Formula {
        Formula::Since(Box::new(l), Box::new(r))
    }
    pub fn triggered(l: Formula, r: Formula) -> Formula {
        Formula::Triggered(Box::new(l), Box::new(r))
    }
    pub fn eventually(f: Formula) -> Formula {
        Formula::Eventually(Box::new(f))
    }
    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f))
    }
    pub fn once(f: Formula) -> Formula {
        Formula::Once(Box::new(f))
    }
    pub fn historically(f: Formula) -> Formula {
        Formula::Historically(Box::new(f))
    }

    /// Number of symbols: one per node.
    pub fn size(&self) -> usize {
        use Formula::*;
        match self {
            True | False | Atom(_) => 1,
            Not(a) | Next(a) | WeakNext(a) | Yesterday(a) | WeakYesterday(a) | Eventually(a)
            | Globally(a) | Once(a) | Historically(a) => 1 + a.size(),
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b) | Since(a, b)
            | Triggered(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Set of proposition letters occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        use Formula::*;
        match self {
            True | False => {}
            Atom(p) => {
                out.insert(p.clone());
            }
            Not(a) | Next(a) | WeakNext(a) | Yesterday(a) | WeakYesterday(a) | Eventually(a)
            | Globally(a) | Once(a) | Historically(a) => a.collect_atoms(out),
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b) | Since(a, b)
            | Triggered(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// First subterm rooted at a past operator, if any.
    pub fn first_past_subterm(&self) -> Option<&Formula> {
        use Formula::*;
        match self {
            Yesterday(_) | WeakYesterday(_) | Since(_, _) | Triggered(_, _) | Once(_)
            | Historically(_) => Some(self),
            True | False | Atom(_) => None,
            Not(a) | Next(a) | WeakNext(a) | Eventually(a) | Globally(a) => a.first_past_subterm(),
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b) => {
                a.first_past_subterm().or_else(|| b.first_past_subterm())
            }
        }
    }

    /// First subterm rooted at a future operator, if any.
    pub fn first_future_subterm(&self) -> Option<&Formula> {
        use Formula::*;
        match self {
            Next(_) | WeakNext(_) | Until(_, _) | Release(_, _) | Eventually(_) | Globally(_) => {
                Some(self)
            }
            True | False | Atom(_) => None,
            Not(a) | Yesterday(a) | WeakYesterday(a) | Once(a) | Historically(a) => {
                a.first_future_subterm()
            }
            And(a, b) | Or(a, b) | Implies(a, b) | Since(a, b) | Triggered(a, b) => {
                a.first_future_subterm().or_else(|| b.first_future_subterm())
            }
        }
    }

    pub fn is_pure_future(&self) -> bool {
        self.first_past_subterm().is_none()
    }

    pub fn is_pure_past(&self) -> bool {
        self.first_future_subterm().is_none()
    }
}

/// Negation normal form: implications eliminated, negation pushed onto
/// atoms. Shortcut operators stay in place (their duals are shortcuts too).
pub fn nnf(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True | False | Atom(_) => f.clone(),
        Not(a) => nnf_neg(a),
        And(a, b) => Formula::and(nnf(a), nnf(b)),
        Or(a, b) => Formula::or(nnf(a), nnf(b)),
        Implies(a, b) => Formula::or(nnf_neg(a), nnf(b)),
        Next(a) => Formula::next(nnf(a)),
        WeakNext(a) => Formula::weak_next(nnf(a)),
        Yesterday(a) => Formula::yesterday(nnf(a)),
        WeakYesterday(a) => Formula::weak_yesterday(nnf(a)),
        Until(a, b) => Formula::until(nnf(a), nnf(b)),
        Release(a, b) => Formula::release(nnf(a), nnf(b)),
        Since(a, b) => Formula::since(nnf(a), nnf(b)),
        Triggered(a, b) => Formula::triggered(nnf(a), nnf(b)),
        Eventually(a) => Formula::eventually(nnf(a)),
        Globally(a) => Formula::globally(nnf(a)),
        Once(a) => Formula::once(nnf(a)),
        Historically(a) => Formula::historically(nnf(a)),
    }
}

fn nnf_neg(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True => False,
        False => True,
        Atom(_) => Formula::not(f.clone()),
        Not(a) => nnf(a),
        And(a, b) => Formula::or(nnf_neg(a), nnf_neg(b)),
        Or(a, b) => Formula::and(nnf_neg(a), nnf_neg(b)),
        Implies(a, b) => Formula::and(nnf(a), nnf_neg(b)),
        // the weak and strict variants are each other's duals on finite words
        Next(a) => Formula::weak_next(nnf_neg(a)),
        WeakNext(a) => Formula::next(nnf_neg(a)),
        Yesterday(a) => Formula::weak_yesterday(nnf_neg(a)),
        WeakYesterday(a) => Formula::yesterday(nnf_neg(a)),
        Until(a, b) => Formula::release(nnf_neg(a), nnf_neg(b)),
        Release(a, b) => Formula::until(nnf_neg(a), nnf_neg(b)),
        Since(a, b) => Formula::triggered(nnf_neg(a), nnf_neg(b)),
        Triggered(a, b) => Formula::since(nnf_neg(a), nnf_neg(b)),
        Eventually(a) => Formula::globally(nnf_neg(a)),
        Globally(a) => Formula::eventually(nnf_neg(a)),
        Once(a) => Formula::historically(nnf_neg(a)),
        Historically(a) => Formula::once(nnf_neg(a)),
    }
}

/// NNF of the negation: at every position of every word the result is the
/// complement of `f`.
pub fn negate_nnf(f: &Formula) -> Formula {
    nnf_neg(f)
}

/// Expand the shortcut operators: `F φ` to `true U φ`, `G φ` to
/// `false R φ`, `O φ` to `true S φ`, `H φ` to `false T φ`.
pub fn expand_shortcuts(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True | False | Atom(_) => f.clone(),
        Not(a) => Formula::not(expand_shortcuts(a)),
        And(a, b) => Formula::and(expand_shortcuts(a), expand_shortcuts(b)),
        Or(a, b) => Formula::or(expand_shortcuts(a), expand_shortcuts(b)),
        Implies(a, b) => Formula::implies(expand_shortcuts(a), expand_shortcuts(b)),
        Next(a) => Formula::next(expand_shortcuts(a)),
        WeakNext(a) => Formula::weak_next(expand_shortcuts(a)),
        Yesterday(a) => Formula::yesterday(expand_shortcuts(a)),
        WeakYesterday(a) => Formula::weak_yesterday(expand_shortcuts(a)),
        Until(a, b) => Formula::until(expand_shortcuts(a), expand_shortcuts(b)),
        Release(a, b) => Formula::release(expand_shortcuts(a), expand_shortcuts(b)),
        Since(a, b) => Formula::since(expand_shortcuts(a), expand_shortcuts(b)),
        Triggered(a, b) => Formula::triggered(expand_shortcuts(a), expand_shortcuts(b)),
        Eventually(a) => Formula::until(Formula::True, expand_shortcuts(a)),
        Globally(a) => Formula::release(Formula::False, expand_shortcuts(a)),
        Once(a) => Formula::since(Formula::True, expand_shortcuts(a)),
        Historically(a) => Formula::triggered(Formula::False, expand_shortcuts(a)),
    }
}

/// Replace every weak tomorrow with a strict tomorrow. Over infinite words
/// the two operators agree, so this is semantics-preserving there.
pub fn weak_next_to_next(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True | False | Atom(_) => f.clone(),
        Not(a) => Formula::not(weak_next_to_next(a)),
        And(a, b) => Formula::and(weak_next_to_next(a), weak_next_to_next(b)),
        Or(a, b) => Formula::or(weak_next_to_next(a), weak_next_to_next(b)),
        Implies(a, b) => Formula::implies(weak_next_to_next(a), weak_next_to_next(b)),
        Next(a) | WeakNext(a) => Formula::next(weak_next_to_next(a)),
        Yesterday(a) => Formula::yesterday(weak_next_to_next(a)),
        WeakYesterday(a) => Formula::weak_yesterday(weak_next_to_next(a)),
        Until(a, b) => Formula::until(weak_next_to_next(a), weak_next_to_next(b)),
        Release(a, b) => Formula::release(weak_next_to_next(a), weak_next_to_next(b)),
        Since(a, b) => Formula::since(weak_next_to_next(a), weak_next_to_next(b)),
        Triggered(a, b) => Formula::triggered(weak_next_to_next(a), weak_next_to_next(b)),
        Eventually(a) => Formula::eventually(weak_next_to_next(a)),
        Globally(a) => Formula::globally(weak_next_to_next(a)),
        Once(a) => Formula::once(weak_next_to_next(a)),
        Historically(a) => Formula::historically(weak_next_to_next(a)),
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum MirrorError {
    #[error("formula mixes past and future operators: {0}")]
    MixedTense(String),
}

/// Swap every temporal operator with its time-reversed counterpart
/// (U with S, X with Y, wX with Z, R with T, F with O, G with H).
/// Only defined for pure-past or pure-future input.
pub fn mirror(f: &Formula) -> Result<Formula, MirrorError> {
    if !f.is_pure_future() && !f.is_pure_past() {
        return Err(MirrorError::MixedTense(f.to_string()));
    }
    Ok(mirror_rec(f))
}

fn mirror_rec(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True | False | Atom(_) => f.clone(),
        Not(a) => Formula::not(mirror_rec(a)),
        And(a, b) => Formula::and(mirror_rec(a), mirror_rec(b)),
        Or(a, b) => Formula::or(mirror_rec(a), mirror_rec(b)),
        Implies(a, b) => Formula::implies(mirror_rec(a), mirror_rec(b)),
        Next(a) => Formula::yesterday(mirror_rec(a)),
        Yesterday(a) => Formula::next(mirror_rec(a)),
        WeakNext(a) => Formula::weak_yesterday(mirror_rec(a)),
        WeakYesterday(a) => Formula::weak_next(mirror_rec(a)),
        Until(a, b) => Formula::since(mirror_rec(a), mirror_rec(b)),
        Since(a, b) => Formula::until(mirror_rec(a), mirror_rec(b)),
        Release(a, b) => Formula::triggered(mirror_rec(a), mirror_rec(b)),
        Triggered(a, b) => Formula::release(mirror_rec(a), mirror_rec(b)),
        Eventually(a) => Formula::once(mirror_rec(a)),
        Once(a) => Formula::eventually(mirror_rec(a)),
        Globally(a) => Formula::historically(mirror_rec(a)),
        Historically(a) => Formula::globally(mirror_rec(a)),
    }
}

/// First-order formula over the word signature: order and equality atoms,
/// one monadic predicate per letter, Boolean connectives and quantifiers.
/// Variables are plain names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FoFormula {
    True,
    False,
    Less(String, String),
    Eq(String, String),
    Neq(String, String),
    Pred(String, String),
    NegPred(String, String),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Implies(Box<FoFormula>, Box<FoFormula>),
    Exists(String, Box<FoFormula>),
    Forall(String, Box<FoFormula>),
}

impl FoFormula {
    pub fn less(a: impl Into<String>, b: impl Into<String>) -> FoFormula {
        FoFormula::Less(a.into(), b.into())
    }
    pub fn eq(a: impl Into<String>, b: impl Into<String>) -> FoFormula {
        FoFormula::Eq(a.into(), b.into())
    }
    pub fn neq(a: impl Into<String>, b: impl Into<String>) -> FoFormula {
        FoFormula::Neq(a.into(), b.into())
    }
    pub fn pred(p: impl Into<String>, v: impl Into<String>) -> FoFormula {
        FoFormula::Pred(p.into(), v.into())
    }
    pub fn neg_pred(p: impl Into<String>, v: impl Into<String>) -> FoFormula {
        FoFormula::NegPred(p.into(), v.into())
    }
    pub fn not(f: FoFormula) -> FoFormula {
        FoFormula::Not(Box::new(f))
    }
    pub fn and(l: FoFormula, r: FoFormula) -> FoFormula {
        FoFormula::And(Box::new(l), Box::new(r))
    }
    pub fn or(l: FoFormula, r: FoFormula) -> FoFormula {
        FoFormula::Or(Box::new(l), Box::new(r))
    }
    pub fn implies(l: FoFormula, r: FoFormula) -> FoFormula {
        FoFormula::Implies(Box::new(l), Box::new(r))
    }
    pub fn exists(v: impl Into<String>, body: FoFormula) -> FoFormula {
        FoFormula::Exists(v.into(), Box::new(body))
    }
    pub fn forall(v: impl Into<String>, body: FoFormula) -> FoFormula {
        FoFormula::Forall(v.into(), Box::new(body))
    }

    /// Nonstrict order as a formula: `a < b | a = b`.
    pub fn leq(a: impl Into<String> + Clone, b: impl Into<String> + Clone) -> FoFormula {
        FoFormula::or(
            FoFormula::less(a.clone(), b.clone()),
            FoFormula::eq(a, b),
        )
    }

    /// Number of symbols: one per node plus one per variable occurrence in
    /// an atom.
    pub fn size(&self) -> usize {
        use FoFormula::*;
        match self {
            True | False => 1,
            Less(_, _) | Eq(_, _) | Neq(_, _) => 3,
            Pred(_, _) | NegPred(_, _) => 2,
            Not(a) => 1 + a.size(),
            And(a, b) | Or(a, b) | Implies(a, b) => 1 + a.size() + b.size(),
            Exists(_, b) | Forall(_, b) => 1 + b.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        use FoFormula::*;
        let add = |v: &String, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            True | False => {}
            Less(a, b) | Eq(a, b) | Neq(a, b) => {
                add(a, bound, out);
                add(b, bound, out);
            }
            Pred(_, v) | NegPred(_, v) => add(v, bound, out),
            Not(a) => a.collect_free(bound, out),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Exists(v, b) | Forall(v, b) => {
                bound.push(v.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Set of letter predicates occurring in the formula.
    pub fn letters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut BTreeSet<String>) {
        use FoFormula::*;
        match self {
            True | False | Less(_, _) | Eq(_, _) | Neq(_, _) => {}
            Pred(p, _) | NegPred(p, _) => {
                out.insert(p.clone());
            }
            Not(a) => a.collect_letters(out),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                a.collect_letters(out);
                b.collect_letters(out);
            }
            Exists(_, b) | Forall(_, b) => b.collect_letters(out),
        }
    }

    /// Replace free occurrences of variable `from` by `to`. Stops at
    /// binders for `from`; callers keep bound names disjoint from `to`.
    pub fn subst_var(&self, from: &str, to: &str) -> FoFormula {
        use FoFormula::*;
        let s = |v: &String| {
            if v == from {
                to.to_string()
            } else {
                v.clone()
            }
        };
        match self {
            True | False => self.clone(),
            Less(a, b) => FoFormula::Less(s(a), s(b)),
            Eq(a, b) => FoFormula::Eq(s(a), s(b)),
            Neq(a, b) => FoFormula::Neq(s(a), s(b)),
            Pred(p, v) => FoFormula::Pred(p.clone(), s(v)),
            NegPred(p, v) => FoFormula::NegPred(p.clone(), s(v)),
            Not(a) => FoFormula::not(a.subst_var(from, to)),
            And(a, b) => FoFormula::and(a.subst_var(from, to), b.subst_var(from, to)),
            Or(a, b) => FoFormula::or(a.subst_var(from, to), b.subst_var(from, to)),
            Implies(a, b) => FoFormula::implies(a.subst_var(from, to), b.subst_var(from, to)),
            Exists(v, b) if v == from => self.clone(),
            Forall(v, b) if v == from => self.clone(),
            Exists(v, b) => FoFormula::exists(v.clone(), b.subst_var(from, to)),
            Forall(v, b) => FoFormula::forall(v.clone(), b.subst_var(from, to)),
        }
    }
}

/// Is this a conjunction of order atoms only (the shapes that may serve as
/// quantifier guards)? Used to keep guard implications intact in NNF.
pub(crate) fn guard_like(f: &FoFormula) -> bool {
    use FoFormula::*;
    match f {
        Less(_, _) | Eq(_, _) | Neq(_, _) => true,
        And(a, b) => guard_like(a) && guard_like(b),
        Or(_, _) => is_leq_sugar(f).is_some(),
        _ => false,
    }
}

/// Match `a < b | a = b` (either operand order of the disjunction and
/// either orientation of the equality), returning `(a, b)`.
pub(crate) fn is_leq_sugar(f: &FoFormula) -> Option<(&str, &str)> {
    use FoFormula::*;
    let Or(l, r) = f else { return None };
    let (less, eq) = match (l.as_ref(), r.as_ref()) {
        (Less(a, b), Eq(c, d)) => ((a, b), (c, d)),
        (Eq(c, d), Less(a, b)) => ((a, b), (c, d)),
        _ => return None,
    };
    let ((a, b), (c, d)) = (less, eq);
    if (c == a && d == b) || (c == b && d == a) {
        Some((a, b))
    } else {
        None
    }
}

/// Negation normal form for first-order formulas. General implications and
/// negations are eliminated; the implication of a guarded universal (and the
/// conjunction of a guarded existential) is preserved so fragment shapes
/// survive the rewrite.
pub fn nnf_fo(f: &FoFormula) -> FoFormula {
    use FoFormula::*;
    match f {
        True | False | Less(_, _) | Eq(_, _) | Neq(_, _) | Pred(_, _) | NegPred(_, _) => f.clone(),
        Not(a) => negate_fo_nnf(a),
        And(a, b) => FoFormula::and(nnf_fo(a), nnf_fo(b)),
        Or(a, b) => FoFormula::or(nnf_fo(a), nnf_fo(b)),
        Implies(a, b) => FoFormula::or(negate_fo_nnf(a), nnf_fo(b)),
        Exists(v, b) => FoFormula::exists(v.clone(), nnf_fo(b)),
        Forall(v, b) => match b.as_ref() {
            Implies(g, c) if guard_like(g) => FoFormula::forall(
                v.clone(),
                FoFormula::implies((**g).clone(), nnf_fo(c)),
            ),
            _ => FoFormula::forall(v.clone(), nnf_fo(b)),
        },
    }
}

/// NNF of the negation. Complements atoms (`¬(x<y)` becomes `y<x | y=x`)
/// and dualizes quantifiers; a guarded `∃y(g ∧ φ)` becomes `∀y(g → ¬φ)`
/// and vice versa, so the safety and co-safety fragments map onto each
/// other.
pub fn negate_fo_nnf(f: &FoFormula) -> FoFormula {
    use FoFormula::*;
    match f {
        True => False,
        False => True,
        Less(a, b) => FoFormula::or(FoFormula::less(b.clone(), a.clone()), FoFormula::eq(b.clone(), a.clone())),
        Eq(a, b) => FoFormula::Neq(a.clone(), b.clone()),
        Neq(a, b) => FoFormula::Eq(a.clone(), b.clone()),
        Pred(p, v) => FoFormula::NegPred(p.clone(), v.clone()),
        NegPred(p, v) => FoFormula::Pred(p.clone(), v.clone()),
        Not(a) => nnf_fo(a),
        And(a, b) => FoFormula::or(negate_fo_nnf(a), negate_fo_nnf(b)),
        Or(_, _) => {
            // the complement of the nonstrict-order sugar is a strict atom
            if let Some((a, b)) = is_leq_sugar(f) {
                return FoFormula::less(b, a);
            }
            let Or(a, b) = f else { unreachable!() };
            FoFormula::and(negate_fo_nnf(a), negate_fo_nnf(b))
        }
        Implies(a, b) => FoFormula::and(nnf_fo(a), negate_fo_nnf(b)),
        Exists(v, b) => match b.as_ref() {
            And(g, c) if guard_like(g) => FoFormula::forall(
                v.clone(),
                FoFormula::implies((**g).clone(), negate_fo_nnf(c)),
            ),
            _ => FoFormula::forall(v.clone(), negate_fo_nnf(b)),
        },
        Forall(v, b) => match b.as_ref() {
            Implies(g, c) if guard_like(g) => FoFormula::exists(
                v.clone(),
                FoFormula::and((**g).clone(), negate_fo_nnf(c)),
            ),
            _ => FoFormula::exists(v.clone(), negate_fo_nnf(b)),
        },
    }
}

/// Rename bound variables so that no name is bound twice anywhere in the
/// formula and no bound name collides with a free one. Renamed variables
/// get a numeric suffix from a monotone counter. Idempotent.
pub fn normalize_bound_vars(f: &FoFormula) -> FoFormula {
    normalize_bound_vars_avoiding(f, &BTreeSet::new())
}

/// Like [`normalize_bound_vars`], additionally steering clear of a caller's
/// reserved names.
pub fn normalize_bound_vars_avoiding(f: &FoFormula, avoid: &BTreeSet<String>) -> FoFormula {
    let mut used: BTreeSet<String> = f.free_vars();
    used.extend(avoid.iter().cloned());
    let mut counter = 0usize;
    rename_rec(f, &mut Vec::new(), &mut used, &mut counter)
}

fn rename_rec(
    f: &FoFormula,
    env: &mut Vec<(String, String)>,
    used: &mut BTreeSet<String>,
    counter: &mut usize,
) -> FoFormula {
    use FoFormula::*;
    let look = |v: &String, env: &Vec<(String, String)>| {
        env.iter()
            .rev()
            .find(|(from, _)| from == v)
            .map(|(_, to)| to.clone())
            .unwrap_or_else(|| v.clone())
    };
    match f {
        True | False => f.clone(),
        Less(a, b) => FoFormula::Less(look(a, env), look(b, env)),
        Eq(a, b) => FoFormula::Eq(look(a, env), look(b, env)),
        Neq(a, b) => FoFormula::Neq(look(a, env), look(b, env)),
        Pred(p, v) => FoFormula::Pred(p.clone(), look(v, env)),
        NegPred(p, v) => FoFormula::NegPred(p.clone(), look(v, env)),
        Not(a) => FoFormula::not(rename_rec(a, env, used, counter)),
        And(a, b) => FoFormula::and(
            rename_rec(a, env, used, counter),
            rename_rec(b, env, used, counter),
        ),
        Or(a, b) => FoFormula::or(
            rename_rec(a, env, used, counter),
            rename_rec(b, env, used, counter),
        ),
        Implies(a, b) => FoFormula::implies(
            rename_rec(a, env, used, counter),
            rename_rec(b, env, used, counter),
        ),
        Exists(v, b) | Forall(v, b) => {
            let fresh = if used.contains(v) {
                let mut name;
                loop {
                    *counter += 1;
                    name = format!("{v}_{counter}");
                    if !used.contains(&name) {
                        break;
                    }
                }
                name
            } else {
                v.clone()
            };
            used.insert(fresh.clone());
            env.push((v.clone(), fresh.clone()));
            let body = rename_rec(b, env, used, counter);
            env.pop();
            match f {
                Exists(_, _) => FoFormula::exists(fresh, body),
                _ => FoFormula::forall(fresh, body),
            }
        }
    }
}
