//! Seeded random formula corpora for the oracle suites. Each generator
//! draws a node budget uniformly up to its cap and builds a formula within
//! it, so corpora mix trivial and full-size members. Everything is
//! deterministic in the seed.

use crate::syntax::{FoFormula, Formula};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Plain node count of a first-order formula, one per constructor. This is
/// the budget the generators work in; note it differs from
/// [`FoFormula::size`], which also counts variable occurrences.
pub fn fo_node_count(f: &FoFormula) -> usize {
    use FoFormula::*;
    match f {
        True | False | Less(_, _) | Eq(_, _) | Neq(_, _) | Pred(_, _) | NegPred(_, _) => 1,
        Not(a) | Exists(_, a) | Forall(_, a) => 1 + fo_node_count(a),
        And(a, b) | Or(a, b) | Implies(a, b) => 1 + fo_node_count(a) + fo_node_count(b),
    }
}

fn letter<'a>(rng: &mut impl Rng, letters: &[&'a str]) -> &'a str {
    letters[rng.gen_range(0..letters.len())]
}

fn leaf(rng: &mut impl Rng, letters: &[&str]) -> Formula {
    match rng.gen_range(0..8) {
        0 => Formula::True,
        1 => Formula::False,
        _ => Formula::atom(letter(rng, letters)),
    }
}

/// Random pure-future formula of at most `max_size` nodes.
pub fn gen_pure_future(rng: &mut impl Rng, max_size: usize, letters: &[&str]) -> Formula {
    let budget = rng.gen_range(1..=max_size);
    pure_future(rng, budget, letters)
}

fn pure_future(rng: &mut impl Rng, budget: usize, letters: &[&str]) -> Formula {
    if budget <= 1 {
        return leaf(rng, letters);
    }
    if budget == 2 || rng.gen_bool(0.4) {
        let inner = pure_future(rng, budget - 1, letters);
        return match rng.gen_range(0..6) {
            0 => Formula::not(inner),
            1 => Formula::next(inner),
            2 => Formula::weak_next(inner),
            3 => Formula::eventually(inner),
            _ => Formula::globally(inner),
        };
    }
    let left = rng.gen_range(1..=budget - 2);
    let l = pure_future(rng, left, letters);
    let r = pure_future(rng, budget - 1 - left, letters);
    match rng.gen_range(0..4) {
        0 => Formula::and(l, r),
        1 => Formula::or(l, r),
        2 => Formula::until(l, r),
        _ => Formula::release(l, r),
    }
}

/// Random pure-past formula of at most `max_size` nodes.
pub fn gen_pure_past(rng: &mut impl Rng, max_size: usize, letters: &[&str]) -> Formula {
    let budget = rng.gen_range(1..=max_size);
    pure_past(rng, budget, letters)
}

fn pure_past(rng: &mut impl Rng, budget: usize, letters: &[&str]) -> Formula {
    if budget <= 1 {
        return leaf(rng, letters);
    }
    if budget == 2 || rng.gen_bool(0.4) {
        let inner = pure_past(rng, budget - 1, letters);
        return match rng.gen_range(0..6) {
            0 => Formula::not(inner),
            1 => Formula::yesterday(inner),
            2 => Formula::weak_yesterday(inner),
            3 => Formula::once(inner),
            _ => Formula::historically(inner),
        };
    }
    let left = rng.gen_range(1..=budget - 2);
    let l = pure_past(rng, left, letters);
    let r = pure_past(rng, budget - 1 - left, letters);
    match rng.gen_range(0..4) {
        0 => Formula::and(l, r),
        1 => Formula::or(l, r),
        2 => Formula::since(l, r),
        _ => Formula::triggered(l, r),
    }
}

/// Random co-safety formula without the weak tomorrow: negation normal
/// form over literals with `X`, `F`, `U`, conjunction and disjunction.
pub fn gen_cosafety_nowx(rng: &mut impl Rng, max_size: usize, letters: &[&str]) -> Formula {
    let budget = rng.gen_range(1..=max_size);
    cosafety_nowx(rng, budget, letters)
}

fn cosafety_nowx(rng: &mut impl Rng, budget: usize, letters: &[&str]) -> Formula {
    if budget <= 1 {
        return leaf(rng, letters);
    }
    if budget == 2 || rng.gen_bool(0.4) {
        return match rng.gen_range(0..5) {
            0 => Formula::not(Formula::atom(letter(rng, letters))),
            1 | 2 => Formula::next(cosafety_nowx(rng, budget - 1, letters)),
            _ => Formula::eventually(cosafety_nowx(rng, budget - 1, letters)),
        };
    }
    let left = rng.gen_range(1..=budget - 2);
    let l = cosafety_nowx(rng, left, letters);
    let r = cosafety_nowx(rng, budget - 1 - left, letters);
    match rng.gen_range(0..4) {
        0 => Formula::and(l, r),
        1 => Formula::or(l, r),
        _ => Formula::until(l, r),
    }
}

fn prop_at(rng: &mut impl Rng, budget: usize, v: &str, letters: &[&str]) -> FoFormula {
    if budget >= 3 && rng.gen_bool(0.3) {
        let l = prop_literal(rng, v, letters);
        let r = prop_literal(rng, v, letters);
        if rng.gen_bool(0.5) {
            return FoFormula::and(l, r);
        }
        return FoFormula::or(l, r);
    }
    prop_literal(rng, v, letters)
}

fn prop_literal(rng: &mut impl Rng, v: &str, letters: &[&str]) -> FoFormula {
    match rng.gen_range(0..8) {
        0 => FoFormula::True,
        1 => FoFormula::False,
        2 | 3 => FoFormula::neg_pred(letter(rng, letters), v),
        _ => FoFormula::pred(letter(rng, letters), v),
    }
}

/// Random guarded co-safety first-order formula with the single free
/// variable `x`: lower-guarded existentials over earlier variables,
/// window-guarded universals whose bodies are propositional in their own
/// variable, conjunction and disjunction. The budget is in plain AST nodes.
pub fn gen_cosafetyfo(rng: &mut impl Rng, max_nodes: usize, letters: &[&str]) -> FoFormula {
    loop {
        let budget = rng.gen_range(1..=max_nodes);
        let mut scope = vec!["x".to_string()];
        let mut counter = 0usize;
        let f = cosafety_fo(rng, budget, &mut scope, &mut counter, letters);
        let free = f.free_vars();
        if free.len() == 1 && free.contains("x") {
            return f;
        }
    }
}

fn pick(rng: &mut impl Rng, scope: &[String]) -> String {
    scope[rng.gen_range(0..scope.len())].clone()
}

fn cosafety_fo(
    rng: &mut impl Rng,
    budget: usize,
    scope: &mut Vec<String>,
    counter: &mut usize,
    letters: &[&str],
) -> FoFormula {
    let choice = rng.gen_range(0..12);
    if budget >= 4 && (5..9).contains(&choice) {
        // ∃w(base ≤ w ∧ …), the nonstrict guard when the budget allows it
        let base = pick(rng, scope);
        let w = format!("y{counter}");
        *counter += 1;
        let sugar = budget >= 6 && rng.gen_bool(0.4);
        let guard = if sugar {
            FoFormula::leq(base, w.clone())
        } else {
            FoFormula::less(base, w.clone())
        };
        let body_budget = budget - 2 - if sugar { 3 } else { 1 };
        scope.push(w.clone());
        let body = cosafety_fo(rng, body_budget, scope, counter, letters);
        scope.pop();
        return FoFormula::exists(w, FoFormula::and(guard, body));
    }
    if budget >= 6 && (9..11).contains(&choice) {
        // ∀z((lo ≤ z ∧ z ≤ hi) → prop(z)); both bounds from the scope, and
        // they may coincide
        let lo = pick(rng, scope);
        let hi = pick(rng, scope);
        let z = format!("y{counter}");
        *counter += 1;
        let mut left = budget - 3;
        let lo_sugar = left >= 3 + 1 + 1 + 2 && rng.gen_bool(0.4);
        let g1 = if lo_sugar {
            left -= 3;
            FoFormula::leq(lo, z.clone())
        } else {
            left -= 1;
            FoFormula::less(lo, z.clone())
        };
        let hi_sugar = left >= 3 + 1 + 2 && rng.gen_bool(0.4);
        let g2 = if hi_sugar {
            left -= 3;
            FoFormula::leq(z.clone(), hi)
        } else {
            left -= 1;
            FoFormula::less(z.clone(), hi)
        };
        let body = prop_at(rng, left, &z, letters);
        return FoFormula::forall(z, FoFormula::implies(FoFormula::and(g1, g2), body));
    }
    if budget >= 3 && choice >= 3 {
        let left = rng.gen_range(1..=budget - 2);
        let l = cosafety_fo(rng, left, scope, counter, letters);
        let r = cosafety_fo(rng, budget - 1 - left, scope, counter, letters);
        if rng.gen_bool(0.5) {
            return FoFormula::and(l, r);
        }
        return FoFormula::or(l, r);
    }
    let v = pick(rng, scope);
    prop_at(rng, budget, &v, letters)
}

/// Random unconstrained first-order formula whose free variables are
/// exactly `{x}`, in negation normal form apart from freely mixed
/// implications. The budget is in plain AST nodes.
pub fn gen_fo_one_free(rng: &mut impl Rng, max_nodes: usize, letters: &[&str]) -> FoFormula {
    loop {
        let budget = rng.gen_range(1..=max_nodes);
        let mut scope = vec!["x".to_string()];
        let mut counter = 0usize;
        let f = plain_fo(rng, budget, &mut scope, &mut counter, letters);
        let free = f.free_vars();
        if free.len() == 1 && free.contains("x") {
            return f;
        }
    }
}

fn plain_fo(
    rng: &mut impl Rng,
    budget: usize,
    scope: &mut Vec<String>,
    counter: &mut usize,
    letters: &[&str],
) -> FoFormula {
    if budget <= 1 {
        return match rng.gen_range(0..10) {
            0 => FoFormula::True,
            1 => FoFormula::False,
            2 => FoFormula::less(pick(rng, scope), pick(rng, scope)),
            3 => FoFormula::eq(pick(rng, scope), pick(rng, scope)),
            4 => FoFormula::neq(pick(rng, scope), pick(rng, scope)),
            5 => FoFormula::neg_pred(letter(rng, letters), pick(rng, scope)),
            _ => FoFormula::pred(letter(rng, letters), pick(rng, scope)),
        };
    }
    let choice = rng.gen_range(0..10);
    if choice < 2 {
        return FoFormula::not(plain_fo(rng, budget - 1, scope, counter, letters));
    }
    if choice < 6 {
        let v = format!("y{counter}");
        *counter += 1;
        scope.push(v.clone());
        let body = plain_fo(rng, budget - 1, scope, counter, letters);
        scope.pop();
        if choice < 4 {
            return FoFormula::exists(v, body);
        }
        return FoFormula::forall(v, body);
    }
    if budget == 2 {
        return plain_fo(rng, budget - 1, scope, counter, letters);
    }
    let left = rng.gen_range(1..=budget - 2);
    let l = plain_fo(rng, left, scope, counter, letters);
    let r = plain_fo(rng, budget - 1 - left, scope, counter, letters);
    match rng.gen_range(0..5) {
        0 | 1 => FoFormula::and(l, r),
        2 | 3 => FoFormula::or(l, r),
        _ => FoFormula::implies(l, r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fragments::{classify_fo, classify_ltl, FragmentId};
    use crate::translate::normal_form;

    const AB: [&str; 2] = ["a", "b"];

    #[test]
    fn generators_are_deterministic_in_the_seed() {
        let mut r1 = seeded(7);
        let mut r2 = seeded(7);
        for _ in 0..50 {
            assert_eq!(
                gen_pure_future(&mut r1, 10, &AB),
                gen_pure_future(&mut r2, 10, &AB)
            );
            assert_eq!(
                gen_cosafetyfo(&mut r1, 6, &AB),
                gen_cosafetyfo(&mut r2, 6, &AB)
            );
            assert_eq!(
                gen_fo_one_free(&mut r1, 7, &AB),
                gen_fo_one_free(&mut r2, 7, &AB)
            );
        }
    }

    #[test]
    fn budgets_bound_the_node_counts() {
        let mut rng = seeded(11);
        for _ in 0..200 {
            assert!(gen_pure_future(&mut rng, 10, &AB).size() <= 10);
            assert!(gen_pure_past(&mut rng, 8, &AB).size() <= 8);
            assert!(gen_cosafety_nowx(&mut rng, 7, &AB).size() <= 7);
            assert!(fo_node_count(&gen_cosafetyfo(&mut rng, 6, &AB)) <= 6);
            assert!(fo_node_count(&gen_fo_one_free(&mut rng, 7, &AB)) <= 7);
        }
    }

    #[test]
    fn corpora_land_in_their_fragments() {
        let mut rng = seeded(23);
        for _ in 0..200 {
            let f = gen_pure_future(&mut rng, 10, &AB);
            assert!(f.is_pure_future(), "{f}");
            let p = gen_pure_past(&mut rng, 8, &AB);
            assert!(p.is_pure_past(), "{p}");
            let c = gen_cosafety_nowx(&mut rng, 10, &AB);
            assert!(
                classify_ltl(&c).holds(FragmentId::CosafetyLtlNoWx),
                "{c}"
            );
            let g = gen_cosafetyfo(&mut rng, 6, &AB);
            assert!(classify_fo(&g).holds(FragmentId::CosafetyFo), "{g}");
            assert_eq!(g.free_vars().into_iter().collect::<Vec<_>>(), vec!["x"]);
            let u = gen_fo_one_free(&mut rng, 7, &AB);
            assert_eq!(u.free_vars().into_iter().collect::<Vec<_>>(), vec!["x"]);
        }
    }

    #[test]
    fn guarded_corpus_formulas_reach_the_packed_normal_form() {
        let mut rng = seeded(31);
        for _ in 0..60 {
            let f = gen_cosafetyfo(&mut rng, 6, &AB);
            normal_form(&f, 1_000_000).unwrap_or_else(|e| panic!("{f}: {e}"));
        }
    }
}
