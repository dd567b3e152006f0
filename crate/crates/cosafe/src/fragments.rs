//! Fragment classification for both logics and the guard rewrite that
//! removes nonstrict bounds from quantifier guards.
//!
//! Temporal formulas are classified twice: once literally as written, and
//! once after negation normal form and shortcut expansion. The two readings
//! differ, e.g. `G a` is a safety formula after expansion but its literal
//! shape uses the `G` shortcut, so both verdicts are reported.

use crate::syntax::{
    expand_shortcuts, guard_like, is_leq_sugar, nnf, nnf_fo, FoFormula, Formula,
};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FragmentId {
    LtlPureFuture,
    Ltlp,
    LtlPurePast,
    SafetyLtl,
    CosafetyLtl,
    CosafetyLtlNoWx,
    SafetyLtlNoX,
    GAlpha,
    FAlpha,
    Fo,
    SafetyFo,
    CosafetyFo,
    BoundedFo,
    Ebfo,
    Ubfo,
}

impl fmt::Display for FragmentId {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FragmentId::LtlPureFuture => "LTL-pure-future",
            FragmentId::Ltlp => "LTL+P",
            FragmentId::LtlPurePast => "LTL-pure-past",
            FragmentId::SafetyLtl => "safetyLTL",
            FragmentId::CosafetyLtl => "cosafetyLTL",
            FragmentId::CosafetyLtlNoWx => "cosafetyLTL-no-wX",
            FragmentId::SafetyLtlNoX => "safetyLTL-no-X",
            FragmentId::GAlpha => "G-alpha",
            FragmentId::FAlpha => "F-alpha",
            FragmentId::Fo => "FO",
            FragmentId::SafetyFo => "SafetyFO",
            FragmentId::CosafetyFo => "coSafetyFO",
            FragmentId::BoundedFo => "bounded-FO",
            FragmentId::Ebfo => "EBFO",
            FragmentId::Ubfo => "UBFO",
        };
        write!(out, "{s}")
    }
}

/// One fragment's answer: membership plus, on failure, the first offending
/// subterm in preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub offender: Option<String>,
}

impl Verdict {
    fn yes() -> Verdict {
        Verdict { holds: true, offender: None }
    }
    fn no(offender: impl ToString) -> Verdict {
        Verdict {
            holds: false,
            offender: Some(offender.to_string()),
        }
    }
    fn from_offender<T: ToString>(off: Option<T>) -> Verdict {
        match off {
            None => Verdict::yes(),
            Some(o) => Verdict::no(o),
        }
    }
}

/// Classification result: `entries` holds the verdicts. For the temporal
/// safety and co-safety variants, `raw_entries` additionally reports the
/// literal reading of the formula as written, without normal form or
/// shortcut expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentVerdict {
    pub entries: BTreeMap<FragmentId, Verdict>,
    pub raw_entries: BTreeMap<FragmentId, Verdict>,
}

impl FragmentVerdict {
    pub fn holds(&self, id: FragmentId) -> bool {
        self.entries.get(&id).is_some_and(|v| v.holds)
    }
}

/// Temporal operators admitted by one of the syntactic fragments.
#[derive(Clone, Copy)]
struct TemporalSet {
    next: bool,
    weak_next: bool,
    until: bool,
    release: bool,
}

const SAFETY_OPS: TemporalSet = TemporalSet { next: true, weak_next: true, until: false, release: true };
const COSAFETY_OPS: TemporalSet = TemporalSet { next: true, weak_next: true, until: true, release: false };
const COSAFETY_NO_WX_OPS: TemporalSet = TemporalSet { next: true, weak_next: false, until: true, release: false };
const SAFETY_NO_X_OPS: TemporalSet = TemporalSet { next: false, weak_next: true, until: false, release: true };

/// First subterm of an NNF formula outside the fragment given by `ops`:
/// anything that is not a literal, conjunction, disjunction, or an admitted
/// temporal operator.
fn scan_nnf(f: &Formula, ops: TemporalSet) -> Option<&Formula> {
    use Formula::*;
    match f {
        True | False | Atom(_) => None,
        Not(a) if matches!(a.as_ref(), Atom(_)) => None,
        And(a, b) | Or(a, b) => scan_nnf(a, ops).or_else(|| scan_nnf(b, ops)),
        Next(a) if ops.next => scan_nnf(a, ops),
        WeakNext(a) if ops.weak_next => scan_nnf(a, ops),
        Until(a, b) if ops.until => scan_nnf(a, ops).or_else(|| scan_nnf(b, ops)),
        Release(a, b) if ops.release => scan_nnf(a, ops).or_else(|| scan_nnf(b, ops)),
        _ => Some(f),
    }
}

/// Classify an LTL formula against every temporal fragment.
pub fn classify_ltl(f: &Formula) -> FragmentVerdict {
    let mut entries = BTreeMap::new();
    let mut raw_entries = BTreeMap::new();

    entries.insert(FragmentId::Ltlp, Verdict::yes());
    entries.insert(
        FragmentId::LtlPureFuture,
        Verdict::from_offender(f.first_past_subterm()),
    );
    entries.insert(
        FragmentId::LtlPurePast,
        Verdict::from_offender(f.first_future_subterm()),
    );

    let g = expand_shortcuts(&nnf(f));
    let variants = [
        (FragmentId::SafetyLtl, SAFETY_OPS),
        (FragmentId::CosafetyLtl, COSAFETY_OPS),
        (FragmentId::CosafetyLtlNoWx, COSAFETY_NO_WX_OPS),
        (FragmentId::SafetyLtlNoX, SAFETY_NO_X_OPS),
    ];
    for (id, ops) in variants {
        entries.insert(id, Verdict::from_offender(scan_nnf(&g, ops)));
        raw_entries.insert(id, Verdict::from_offender(scan_nnf(f, ops)));
    }

    entries.insert(
        FragmentId::GAlpha,
        match f {
            Formula::Globally(b) => Verdict::from_offender(b.first_future_subterm()),
            _ => Verdict::no(f),
        },
    );
    entries.insert(
        FragmentId::FAlpha,
        match f {
            Formula::Eventually(b) => Verdict::from_offender(b.first_future_subterm()),
            _ => Verdict::no(f),
        },
    );

    FragmentVerdict { entries, raw_entries }
}

/// Flatten a conjunction tree into its conjuncts, left to right.
pub(crate) fn flatten_and(f: &FoFormula) -> Vec<&FoFormula> {
    match f {
        FoFormula::And(a, b) => {
            let mut out = flatten_and(a);
            out.extend(flatten_and(b));
            out
        }
        _ => vec![f],
    }
}

/// Right-associated conjunction of one or more formulas.
pub(crate) fn rejoin_and(mut parts: Vec<FoFormula>) -> FoFormula {
    let last = parts.pop().expect("rejoin_and of nothing");
    parts
        .into_iter()
        .rev()
        .fold(last, |acc, p| FoFormula::and(p, acc))
}

/// Match a lower guard on `v`: `a < v` or `a <= v` (as the `<`-or-`=`
/// disjunction). Returns the bounding variable and whether the bound is
/// strict.
pub(crate) fn match_lower(g: &FoFormula, v: &str) -> Option<(String, bool)> {
    match g {
        FoFormula::Less(a, b) if b == v && a != v => Some((a.clone(), true)),
        _ => match is_leq_sugar(g) {
            Some((a, b)) if b == v && a != v => Some((a.to_string(), false)),
            _ => None,
        },
    }
}

/// Match an upper guard on `v`: `v < b` or `v <= b`.
pub(crate) fn match_upper(g: &FoFormula, v: &str) -> Option<(String, bool)> {
    match g {
        FoFormula::Less(a, b) if a == v && b != v => Some((b.clone(), true)),
        _ => match is_leq_sugar(g) {
            Some((a, b)) if a == v && b != v => Some((b.to_string(), false)),
            _ => None,
        },
    }
}

/// The window guard of an existential body: conjuncts `[lower]` or
/// `[lower, upper]` (in either order) followed by at least one more
/// conjunct, the actual body.
pub(crate) struct ExistsShape {
    pub lower: (String, bool),
    pub upper: Option<(String, bool)>,
    pub body: FoFormula,
}

pub(crate) fn split_exists_body(v: &str, body: &FoFormula) -> Option<ExistsShape> {
    let parts = flatten_and(body);
    if parts.len() >= 3 {
        let pair = match (match_lower(parts[0], v), match_upper(parts[1], v)) {
            (Some(l), Some(u)) => Some((l, u)),
            _ => match (match_upper(parts[0], v), match_lower(parts[1], v)) {
                (Some(u), Some(l)) => Some((l, u)),
                _ => None,
            },
        };
        if let Some((lower, upper)) = pair {
            return Some(ExistsShape {
                lower,
                upper: Some(upper),
                body: rejoin_and(parts[2..].iter().map(|p| (*p).clone()).collect()),
            });
        }
    }
    if parts.len() >= 2 {
        if let Some(lower) = match_lower(parts[0], v) {
            return Some(ExistsShape {
                lower,
                upper: None,
                body: rejoin_and(parts[1..].iter().map(|p| (*p).clone()).collect()),
            });
        }
    }
    None
}

/// The window guard of a universal: the implication's antecedent must be
/// `[lower]` or `[lower, upper]` (either order).
pub(crate) struct ForallShape {
    pub lower: (String, bool),
    pub upper: Option<(String, bool)>,
    pub body: FoFormula,
}

pub(crate) fn split_forall_body(v: &str, body: &FoFormula) -> Option<ForallShape> {
    let FoFormula::Implies(guard, consequent) = body else {
        return None;
    };
    let parts = flatten_and(guard);
    match parts.len() {
        1 => match_lower(parts[0], v).map(|lower| ForallShape {
            lower,
            upper: None,
            body: (**consequent).clone(),
        }),
        2 => {
            let pair = match (match_lower(parts[0], v), match_upper(parts[1], v)) {
                (Some(l), Some(u)) => Some((l, u)),
                _ => match (match_upper(parts[0], v), match_lower(parts[1], v)) {
                    (Some(u), Some(l)) => Some((l, u)),
                    _ => None,
                },
            };
            pair.map(|(lower, upper)| ForallShape {
                lower,
                upper: Some(upper),
                body: (**consequent).clone(),
            })
        }
        _ => None,
    }
}

/// First subterm of an NNF first-order formula outside the safety or
/// co-safety grammar. `cosafety` selects which of the two dual grammars:
/// the co-safety one admits lower-guarded existentials and window-guarded
/// universals, the safety one the duals.
///
/// Two shapes beyond the literal grammar are admitted because the grammar
/// generates their equivalents anyway: a guard implication `g -> φ` in body
/// position (the disjunction of the complemented guard with φ, all order
/// atoms), and an upper bound inside a guarded existential (an order atom
/// of the body). A universal with a full window likewise counts for the
/// safety grammar, read as `∀y(x<y → (y<z → φ))`.
fn scan_fo<'a>(f: &'a FoFormula, cosafety: bool) -> Option<&'a FoFormula> {
    use FoFormula::*;
    match f {
        True | False | Less(_, _) | Eq(_, _) | Neq(_, _) | Pred(_, _) | NegPred(_, _) => None,
        And(a, b) | Or(a, b) => scan_fo(a, cosafety).or_else(|| scan_fo(b, cosafety)),
        Implies(g, b) if guard_like(g) => scan_fo(b, cosafety),
        Exists(v, body) => {
            let Some(shape) = split_exists_body(v, body) else {
                return Some(f);
            };
            if !cosafety && shape.upper.is_none() {
                // a safety existential needs the full window
                return Some(f);
            }
            match scan_fo(&shape.body, cosafety) {
                // the returned reference must outlive the local clone
                None => None,
                Some(_) => Some(f),
            }
        }
        Forall(v, body) => {
            let Some(shape) = split_forall_body(v, body) else {
                return Some(f);
            };
            if cosafety && shape.upper.is_none() {
                // a co-safety universal needs the full window
                return Some(f);
            }
            match scan_fo(&shape.body, cosafety) {
                None => None,
                Some(_) => Some(f),
            }
        }
        Not(_) | Implies(_, _) => Some(f),
    }
}

/// Are all quantifiers in `f` bounded from above by the designated
/// variable, i.e. of the shapes `∃v(v ≤ x ∧ …)` and `∀v(v ≤ x → …)`?
fn scan_bounded<'a>(f: &'a FoFormula, x: &str) -> Option<&'a FoFormula> {
    use FoFormula::*;
    match f {
        True | False | Less(_, _) | Eq(_, _) | Neq(_, _) | Pred(_, _) | NegPred(_, _) => None,
        Not(a) => scan_bounded(a, x),
        And(a, b) | Or(a, b) | Implies(a, b) => {
            scan_bounded(a, x).or_else(|| scan_bounded(b, x))
        }
        Exists(v, body) => {
            let parts = flatten_and(body);
            let guard_ok = parts.len() >= 2
                && matches!(match_upper(parts[0], v), Some((b, false)) if b == x);
            if !guard_ok {
                return Some(f);
            }
            parts[1..].iter().find_map(|p| scan_bounded(p, x))
        }
        Forall(v, body) => {
            let Implies(guard, consequent) = body.as_ref() else {
                return Some(f);
            };
            let guard_ok = matches!(match_upper(guard, v), Some((b, false)) if b == x);
            if !guard_ok {
                return Some(f);
            }
            scan_bounded(consequent, x)
        }
    }
}

/// Classify a first-order formula against every first-order fragment.
/// Safety and co-safety membership is decided on the negation normal form;
/// the bounded fragments are matched literally.
pub fn classify_fo(f: &FoFormula) -> FragmentVerdict {
    let mut entries = BTreeMap::new();
    entries.insert(FragmentId::Fo, Verdict::yes());

    let g = nnf_fo(f);
    entries.insert(
        FragmentId::CosafetyFo,
        Verdict::from_offender(scan_fo(&g, true)),
    );
    entries.insert(
        FragmentId::SafetyFo,
        Verdict::from_offender(scan_fo(&g, false)),
    );

    let free: Vec<String> = f.free_vars().into_iter().collect();
    entries.insert(
        FragmentId::BoundedFo,
        match free.as_slice() {
            [x] => Verdict::from_offender(scan_bounded(f, x)),
            _ => Verdict::no(f),
        },
    );
    entries.insert(
        FragmentId::Ebfo,
        match f {
            FoFormula::Exists(x, body) if free.is_empty() => {
                Verdict::from_offender(scan_bounded(body, x))
            }
            _ => Verdict::no(f),
        },
    );
    entries.insert(
        FragmentId::Ubfo,
        match f {
            FoFormula::Forall(x, body) if free.is_empty() => {
                Verdict::from_offender(scan_bounded(body, x))
            }
            _ => Verdict::no(f),
        },
    );

    FragmentVerdict {
        entries,
        raw_entries: BTreeMap::new(),
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum DesugarError {
    #[error("quantifier guard not of an admitted shape: {0}")]
    GuardShape(String),
}

/// Replace nonstrict guard bounds by case splits so that every quantifier
/// guard uses strict order only. A nonstrict bound contributes the boundary
/// position as an explicit disjunct (for existentials) or conjunct (for
/// universals); windowed guards keep a side condition that the boundary
/// actually lies inside the window, so the rewrite is sound under every
/// assignment. Preserves finite-word semantics and fragment membership.
pub fn desugar_nonstrict_guards(f: &FoFormula) -> Result<FoFormula, DesugarError> {
    use FoFormula::*;
    match f {
        True | False | Less(_, _) | Eq(_, _) | Neq(_, _) | Pred(_, _) | NegPred(_, _) => {
            Ok(f.clone())
        }
        And(a, b) => Ok(FoFormula::and(
            desugar_nonstrict_guards(a)?,
            desugar_nonstrict_guards(b)?,
        )),
        Or(a, b) => Ok(FoFormula::or(
            desugar_nonstrict_guards(a)?,
            desugar_nonstrict_guards(b)?,
        )),
        Exists(v, body) => {
            let Some(shape) = split_exists_body(v, body) else {
                return Err(DesugarError::GuardShape(f.to_string()));
            };
            let inner = desugar_nonstrict_guards(&shape.body)?;
            let (a, lower_strict) = shape.lower;
            match shape.upper {
                None => {
                    let strict = FoFormula::exists(
                        v.clone(),
                        FoFormula::and(FoFormula::less(a.clone(), v.clone()), inner.clone()),
                    );
                    if lower_strict {
                        Ok(strict)
                    } else {
                        // v = a is always inside the one-sided window
                        Ok(FoFormula::or(inner.subst_var(v, &a), strict))
                    }
                }
                Some((b, upper_strict)) => {
                    let strict = FoFormula::exists(
                        v.clone(),
                        FoFormula::and(
                            FoFormula::less(a.clone(), v.clone()),
                            FoFormula::and(FoFormula::less(v.clone(), b.clone()), inner.clone()),
                        ),
                    );
                    let mut cases = Vec::new();
                    // boundary cases need the window to be nonempty
                    if !lower_strict {
                        let nonempty = if upper_strict {
                            FoFormula::less(a.clone(), b.clone())
                        } else {
                            FoFormula::leq(a.clone(), b.clone())
                        };
                        cases.push(FoFormula::and(nonempty, inner.subst_var(v, &a)));
                    }
                    if !upper_strict {
                        let nonempty = if lower_strict {
                            FoFormula::less(a.clone(), b.clone())
                        } else {
                            FoFormula::leq(a.clone(), b.clone())
                        };
                        cases.push(FoFormula::and(nonempty, inner.subst_var(v, &b)));
                    }
                    Ok(cases
                        .into_iter()
                        .rev()
                        .fold(strict, |acc, c| FoFormula::or(c, acc)))
                }
            }
        }
        Forall(v, body) => {
            let Some(shape) = split_forall_body(v, body) else {
                return Err(DesugarError::GuardShape(f.to_string()));
            };
            let inner = desugar_nonstrict_guards(&shape.body)?;
            let (a, lower_strict) = shape.lower;
            match shape.upper {
                None => {
                    let strict = FoFormula::forall(
                        v.clone(),
                        FoFormula::implies(FoFormula::less(a.clone(), v.clone()), inner.clone()),
                    );
                    if lower_strict {
                        Ok(strict)
                    } else {
                        Ok(FoFormula::and(inner.subst_var(v, &a), strict))
                    }
                }
                Some((b, upper_strict)) => {
                    let strict = FoFormula::forall(
                        v.clone(),
                        FoFormula::implies(
                            FoFormula::and(
                                FoFormula::less(a.clone(), v.clone()),
                                FoFormula::less(v.clone(), b.clone()),
                            ),
                            inner.clone(),
                        ),
                    );
                    let mut cases = Vec::new();
                    // `window nonempty -> boundary obligation`, with the
                    // complement of the window condition spelled in NNF
                    if !lower_strict {
                        let empty = if upper_strict {
                            // not (a < b) is b < a or b = a
                            FoFormula::or(
                                FoFormula::less(b.clone(), a.clone()),
                                FoFormula::eq(b.clone(), a.clone()),
                            )
                        } else {
                            FoFormula::less(b.clone(), a.clone())
                        };
                        cases.push(FoFormula::or(empty, inner.subst_var(v, &a)));
                    }
                    if !upper_strict {
                        let empty = if lower_strict {
                            FoFormula::or(
                                FoFormula::less(b.clone(), a.clone()),
                                FoFormula::eq(b.clone(), a.clone()),
                            )
                        } else {
                            FoFormula::less(b.clone(), a.clone())
                        };
                        cases.push(FoFormula::or(empty, inner.subst_var(v, &b)));
                    }
                    Ok(cases
                        .into_iter()
                        .rev()
                        .fold(strict, |acc, c| FoFormula::and(c, acc)))
                }
            }
        }
        Not(_) | Implies(_, _) => Err(DesugarError::GuardShape(f.to_string())),
    }
}
