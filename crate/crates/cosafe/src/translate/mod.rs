//! The constructive transformations: finite-word operator eliminations,
//! the LTL to first-order compilation, the prefix-closure wrapper, both
//! directions of the bounded-fragment bridge, and (in the submodules) the
//! normal-form engine with its LTL back end.

use crate::fragments::{classify_fo, classify_ltl, FragmentId};
use crate::syntax::{
    expand_shortcuts, nnf, nnf_fo, normalize_bound_vars, normalize_bound_vars_avoiding,
    weak_next_to_next, FoFormula, Formula,
};
use std::collections::BTreeSet;

pub mod enf;
pub mod engine;

pub use enf::{check_invariants, eval_normal_form, normalform_to_ltl, ExistsNormalForm, NormalForm, StateProp};
pub use engine::{cosafetyfo_to_ltl, normal_form};

#[derive(Debug, Clone, thiserror::Error)]
pub enum TranslateError {
    #[error("input is not in {fragment}: offending subterm {offender}")]
    Fragment { fragment: FragmentId, offender: String },
    #[error("past operator not supported here: {0}")]
    PastOperator(String),
    #[error("expected {need} free variable(s), found {found:?}")]
    FreeVars { need: &'static str, found: Vec<String> },
    #[error("node budget exhausted after {disjuncts} disjuncts and {nodes} chain nodes")]
    Budget { disjuncts: usize, nodes: usize },
    #[error("not expressible by this engine: {0}")]
    Unsupported(String),
}

/// Which word semantics a translation should target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semantics {
    Finite,
    Infinite,
}

/// Fresh-variable supply that never collides with a set of reserved names.
struct VarGen {
    used: BTreeSet<String>,
    counter: usize,
}

impl VarGen {
    fn new(used: BTreeSet<String>) -> VarGen {
        VarGen { used, counter: 0 }
    }

    fn fresh(&mut self, prefix: &str) -> String {
        if self.used.insert(prefix.to_string()) {
            return prefix.to_string();
        }
        loop {
            let name = format!("{prefix}{}", self.counter);
            self.counter += 1;
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }
}

fn all_vars(f: &FoFormula) -> BTreeSet<String> {
    use FoFormula::*;
    fn walk(f: &FoFormula, out: &mut BTreeSet<String>) {
        match f {
            True | False => {}
            Less(a, b) | Eq(a, b) | Neq(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Pred(_, v) | NegPred(_, v) => {
                out.insert(v.clone());
            }
            Not(a) => walk(a, out),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            Exists(v, b) | Forall(v, b) => {
                out.insert(v.clone());
                walk(b, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(f, &mut out);
    out
}

/// Constant folding for temporal formulas. Length-sensitive shapes are left
/// alone: `X true`, `wX false`, `Y true`, `Z false` all depend on where the
/// word ends or starts, so only their duals fold.
pub(crate) fn fold_ltl(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True | False | Atom(_) => f.clone(),
        Not(a) => match fold_ltl(a) {
            True => False,
            False => True,
            x => Formula::not(x),
        },
        And(a, b) => match (fold_ltl(a), fold_ltl(b)) {
            (False, _) | (_, False) => False,
            (True, x) | (x, True) => x,
            (x, y) if x == y => x,
            (x, y) => Formula::and(x, y),
        },
        Or(a, b) => match (fold_ltl(a), fold_ltl(b)) {
            (True, _) | (_, True) => True,
            (False, x) | (x, False) => x,
            (x, y) if x == y => x,
            (x, y) => Formula::or(x, y),
        },
        Implies(a, b) => match (fold_ltl(a), fold_ltl(b)) {
            (False, _) => True,
            (True, x) => x,
            (_, True) => True,
            (x, y) => Formula::implies(x, y),
        },
        Next(a) => match fold_ltl(a) {
            False => False,
            x => Formula::next(x),
        },
        WeakNext(a) => match fold_ltl(a) {
            True => True,
            x => Formula::weak_next(x),
        },
        Yesterday(a) => match fold_ltl(a) {
            False => False,
            x => Formula::yesterday(x),
        },
        WeakYesterday(a) => match fold_ltl(a) {
            True => True,
            x => Formula::weak_yesterday(x),
        },
        Until(a, b) => match (fold_ltl(a), fold_ltl(b)) {
            (_, False) => False,
            (_, True) => True,
            (False, y) => y,
            (x, y) => Formula::until(x, y),
        },
        Release(a, b) => match (fold_ltl(a), fold_ltl(b)) {
            (_, True) => True,
            (_, False) => False,
            (True, y) => y,
            (x, y) => Formula::release(x, y),
        },
        Since(a, b) => match (fold_ltl(a), fold_ltl(b)) {
            (_, False) => False,
            (_, True) => True,
            (False, y) => y,
            (x, y) => Formula::since(x, y),
        },
        Triggered(a, b) => match (fold_ltl(a), fold_ltl(b)) {
            (_, True) => True,
            (_, False) => False,
            (True, y) => y,
            (x, y) => Formula::triggered(x, y),
        },
        Eventually(a) => match fold_ltl(a) {
            True => True,
            False => False,
            x => Formula::eventually(x),
        },
        Globally(a) => match fold_ltl(a) {
            True => True,
            False => False,
            x => Formula::globally(x),
        },
        Once(a) => match fold_ltl(a) {
            True => True,
            False => False,
            x => Formula::once(x),
        },
        Historically(a) => match fold_ltl(a) {
            True => True,
            False => False,
            x => Formula::historically(x),
        },
    }
}

/// Constant folding for first-order formulas. Quantifiers over constants
/// fold because the position domain of a nonempty word is nonempty.
pub fn fold_fo(f: &FoFormula) -> FoFormula {
    use FoFormula::*;
    match f {
        True | False | Pred(_, _) | NegPred(_, _) => f.clone(),
        Less(a, b) if a == b => False,
        Eq(a, b) if a == b => True,
        Neq(a, b) if a == b => False,
        Less(_, _) | Eq(_, _) | Neq(_, _) => f.clone(),
        Not(a) => match fold_fo(a) {
            True => False,
            False => True,
            x => FoFormula::not(x),
        },
        And(a, b) => match (fold_fo(a), fold_fo(b)) {
            (False, _) | (_, False) => False,
            (True, x) | (x, True) => x,
            (x, y) if x == y => x,
            (x, y) => FoFormula::and(x, y),
        },
        Or(a, b) => match (fold_fo(a), fold_fo(b)) {
            (True, _) | (_, True) => True,
            (False, x) | (x, False) => x,
            (x, y) if x == y => x,
            (x, y) => FoFormula::or(x, y),
        },
        Implies(a, b) => match (fold_fo(a), fold_fo(b)) {
            (False, _) => True,
            (True, x) => x,
            (_, True) => True,
            (x, y) => FoFormula::implies(x, y),
        },
        Exists(v, b) => match fold_fo(b) {
            True => True,
            False => False,
            x => FoFormula::exists(v.clone(), x),
        },
        Forall(v, b) => match fold_fo(b) {
            True => True,
            False => False,
            x => FoFormula::forall(v.clone(), x),
        },
    }
}

/// Rewrite a pure-future formula so that its finite-word language is kept
/// but only `X`, `wX` and `U` remain as temporal operators. `R` is replaced
/// by the two-until disjunction that spells out "φ₂ holds to the end, or
/// φ₂ holds until both arguments meet".
pub fn eliminate_for_finite_to_cosafety(f: &Formula) -> Result<Formula, TranslateError> {
    if let Some(p) = f.first_past_subterm() {
        return Err(TranslateError::PastOperator(p.to_string()));
    }
    let g = expand_shortcuts(&nnf(f));
    Ok(fold_ltl(&strip_release(&g)))
}

fn strip_release(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        Release(a, b) => {
            let (a, b) = (strip_release(a), strip_release(b));
            Formula::or(
                Formula::until(
                    b.clone(),
                    Formula::and(b.clone(), Formula::weak_next(False)),
                ),
                Formula::until(b.clone(), Formula::and(a, b)),
            )
        }
        True | False | Atom(_) => f.clone(),
        Not(a) => Formula::not(strip_release(a)),
        And(a, b) => Formula::and(strip_release(a), strip_release(b)),
        Or(a, b) => Formula::or(strip_release(a), strip_release(b)),
        Next(a) => Formula::next(strip_release(a)),
        WeakNext(a) => Formula::weak_next(strip_release(a)),
        Until(a, b) => Formula::until(strip_release(a), strip_release(b)),
        _ => unreachable!("expanded pure-future normal form"),
    }
}

/// Dual elimination: keep only `X`, `wX` and `R`, replacing `U` by the
/// two-release conjunction.
pub fn eliminate_for_finite_to_safety(f: &Formula) -> Result<Formula, TranslateError> {
    if let Some(p) = f.first_past_subterm() {
        return Err(TranslateError::PastOperator(p.to_string()));
    }
    let g = expand_shortcuts(&nnf(f));
    Ok(fold_ltl(&strip_until(&g)))
}

fn strip_until(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        Until(a, b) => {
            let (a, b) = (strip_until(a), strip_until(b));
            Formula::and(
                Formula::release(
                    b.clone(),
                    Formula::or(b.clone(), Formula::next(True)),
                ),
                Formula::release(b.clone(), Formula::or(a, b)),
            )
        }
        True | False | Atom(_) => f.clone(),
        Not(a) => Formula::not(strip_until(a)),
        And(a, b) => Formula::and(strip_until(a), strip_until(b)),
        Or(a, b) => Formula::or(strip_until(a), strip_until(b)),
        Next(a) => Formula::next(strip_until(a)),
        WeakNext(a) => Formula::weak_next(strip_until(a)),
        Release(a, b) => Formula::release(strip_until(a), strip_until(b)),
        _ => unreachable!("expanded pure-future normal form"),
    }
}

/// Compile a co-safety temporal formula to a first-order formula with one
/// free variable `v` marking the evaluation position. The successor inside
/// the `X` encoding is expressed with an empty-interval universal rather
/// than a successor symbol, and `≤` is written as the `<`-or-`=` split.
pub fn ltl_to_fo(f: &Formula, v: &str, mode: Semantics) -> Result<FoFormula, TranslateError> {
    let required = match mode {
        Semantics::Finite => FragmentId::CosafetyLtlNoWx,
        Semantics::Infinite => FragmentId::CosafetyLtl,
    };
    let cls = classify_ltl(f);
    let verdict = &cls.entries[&required];
    if !verdict.holds {
        return Err(TranslateError::Fragment {
            fragment: required,
            offender: verdict.offender.clone().unwrap_or_else(|| f.to_string()),
        });
    }
    let g = match mode {
        Semantics::Finite => f.clone(),
        // over infinite words the weak and strict tomorrow coincide
        Semantics::Infinite => weak_next_to_next(f),
    };
    let g = expand_shortcuts(&nnf(&g));
    let mut used: BTreeSet<String> = g.atoms();
    used.insert(v.to_string());
    let mut vars = VarGen::new(used);
    Ok(fo_of(&g, v, &mut vars))
}

fn fo_of(f: &Formula, x: &str, vars: &mut VarGen) -> FoFormula {
    use Formula::*;
    match f {
        True => FoFormula::True,
        False => FoFormula::False,
        Atom(p) => FoFormula::Pred(p.clone(), x.to_string()),
        Not(a) => match a.as_ref() {
            Atom(p) => FoFormula::NegPred(p.clone(), x.to_string()),
            _ => unreachable!("negation normal form keeps negation on atoms"),
        },
        And(a, b) => FoFormula::and(fo_of(a, x, vars), fo_of(b, x, vars)),
        Or(a, b) => FoFormula::or(fo_of(a, x, vars), fo_of(b, x, vars)),
        Next(a) => {
            let y = vars.fresh("y");
            let z = vars.fresh("z");
            let succ = FoFormula::forall(
                z.clone(),
                FoFormula::implies(
                    FoFormula::and(
                        FoFormula::less(x.to_string(), z.clone()),
                        FoFormula::less(z, y.clone()),
                    ),
                    FoFormula::False,
                ),
            );
            let body = FoFormula::and(
                FoFormula::and(FoFormula::less(x.to_string(), y.clone()), succ),
                fo_of(a, &y, vars),
            );
            FoFormula::exists(y, body)
        }
        Until(a, b) => {
            let y = vars.fresh("y");
            let z = vars.fresh("z");
            let left = fo_of(a, &z, vars);
            let right = fo_of(b, &y, vars);
            let window = FoFormula::forall(
                z.clone(),
                FoFormula::implies(
                    FoFormula::and(
                        FoFormula::leq(x.to_string(), z.clone()),
                        FoFormula::less(z, y.clone()),
                    ),
                    left,
                ),
            );
            FoFormula::exists(
                y.clone(),
                FoFormula::and(
                    FoFormula::and(FoFormula::leq(x.to_string(), y.clone()), right),
                    window,
                ),
            )
        }
        _ => unreachable!("gated to the expanded co-safety fragment"),
    }
}

/// Close the finite-word language of a one-free-variable formula under
/// extension: the output holds at `v` exactly when some prefix containing
/// `v` satisfies the input. Every quantifier is restricted to the window
/// `[v, y]` for an existentially chosen prefix end `y`; with the free
/// variable anchored at the first position this restriction is exactly
/// evaluation on the prefix, including its last position.
pub fn fo_to_cosafetyfo(f: &FoFormula, v: &str) -> Result<FoFormula, TranslateError> {
    let free = f.free_vars();
    if free.len() != 1 || !free.contains(v) {
        return Err(TranslateError::FreeVars {
            need: "exactly one",
            found: free.into_iter().collect(),
        });
    }
    let g = normalize_bound_vars(&nnf_fo(f));
    let mut vars = VarGen::new(all_vars(&g));
    let y = vars.fresh("y");
    let body = relativize(&g, v, &y);
    Ok(FoFormula::exists(
        y.clone(),
        FoFormula::and(FoFormula::leq(v.to_string(), y), body),
    ))
}

fn relativize(f: &FoFormula, v: &str, y: &str) -> FoFormula {
    use FoFormula::*;
    match f {
        True | False | Less(_, _) | Eq(_, _) | Neq(_, _) | Pred(_, _) | NegPred(_, _) => f.clone(),
        Not(a) => FoFormula::not(relativize(a, v, y)),
        And(a, b) => FoFormula::and(relativize(a, v, y), relativize(b, v, y)),
        Or(a, b) => FoFormula::or(relativize(a, v, y), relativize(b, v, y)),
        Implies(a, b) => FoFormula::implies(relativize(a, v, y), relativize(b, v, y)),
        Exists(z, b) => FoFormula::exists(
            z.clone(),
            FoFormula::and(
                FoFormula::leq(v.to_string(), z.clone()),
                FoFormula::and(
                    FoFormula::leq(z.clone(), y.to_string()),
                    relativize(b, v, y),
                ),
            ),
        ),
        Forall(z, b) => FoFormula::forall(
            z.clone(),
            FoFormula::implies(
                FoFormula::and(
                    FoFormula::leq(v.to_string(), z.clone()),
                    FoFormula::leq(z.clone(), y.to_string()),
                ),
                relativize(b, v, y),
            ),
        ),
    }
}

/// Turn a one-free-variable co-safety formula into a closed sentence whose
/// outermost variable bounds every quantifier. The original free variable
/// is re-bound and forced to the first position by requiring that nothing
/// lies below it.
pub fn cosafetyfo_to_ebfo(f: &FoFormula) -> Result<FoFormula, TranslateError> {
    let free = f.free_vars();
    if free.len() != 1 {
        return Err(TranslateError::FreeVars {
            need: "exactly one",
            found: free.into_iter().collect(),
        });
    }
    let x = free.into_iter().next().unwrap();
    let mut vars = VarGen::new(all_vars(f));
    let y = vars.fresh("y");
    let z = vars.fresh("z");
    let body = bound_by(f, &y);
    let nothing_below = FoFormula::forall(
        z.clone(),
        FoFormula::implies(
            FoFormula::leq(z.clone(), y.clone()),
            FoFormula::implies(
                FoFormula::less(z.clone(), x.clone()),
                FoFormula::False,
            ),
        ),
    );
    let inner = FoFormula::exists(
        x.clone(),
        FoFormula::and(
            FoFormula::and(FoFormula::leq(x, y.clone()), nothing_below),
            body,
        ),
    );
    Ok(FoFormula::exists(y, inner))
}

fn bound_by(f: &FoFormula, y: &str) -> FoFormula {
    use FoFormula::*;
    match f {
        True | False | Less(_, _) | Eq(_, _) | Neq(_, _) | Pred(_, _) | NegPred(_, _) => f.clone(),
        Not(a) => FoFormula::not(bound_by(a, y)),
        And(a, b) => FoFormula::and(bound_by(a, y), bound_by(b, y)),
        Or(a, b) => FoFormula::or(bound_by(a, y), bound_by(b, y)),
        Implies(a, b) => FoFormula::implies(bound_by(a, y), bound_by(b, y)),
        Exists(k, b) => FoFormula::exists(
            k.clone(),
            FoFormula::and(FoFormula::leq(k.clone(), y.to_string()), bound_by(b, y)),
        ),
        Forall(k, b) => FoFormula::forall(
            k.clone(),
            FoFormula::implies(FoFormula::leq(k.clone(), y.to_string()), bound_by(b, y)),
        ),
    }
}

/// Open a bounded sentence back into a one-free-variable co-safety formula:
/// every quantifier, the re-opened root included, is restricted to the
/// window `[v, y]` for an existentially chosen prefix end `y`. With `v`
/// anchored at the first position the body is then evaluated exactly on
/// that prefix, which matches the finite-witness reading of the sentence.
pub fn ebfo_to_cosafetyfo(f: &FoFormula, v: &str) -> Result<FoFormula, TranslateError> {
    let cls = classify_fo(f);
    let verdict = &cls.entries[&FragmentId::Ebfo];
    if !verdict.holds {
        return Err(TranslateError::Fragment {
            fragment: FragmentId::Ebfo,
            offender: verdict.offender.clone().unwrap_or_else(|| f.to_string()),
        });
    }
    let mut avoid = BTreeSet::new();
    avoid.insert(v.to_string());
    let g = normalize_bound_vars_avoiding(&nnf_fo(f), &avoid);
    let mut vars = VarGen::new(all_vars(&g));
    vars.used.insert(v.to_string());
    let y = vars.fresh("y");
    let body = relativize(&g, v, &y);
    Ok(FoFormula::exists(
        y.clone(),
        FoFormula::and(FoFormula::leq(v.to_string(), y), body),
    ))
}
