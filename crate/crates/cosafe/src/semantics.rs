//! Words, lasso words, variable assignments, and the evaluators for both
//! logics: pointwise LTL over finite words, LTL over ultimately periodic
//! infinite words, and Tarskian first-order evaluation over finite words.

use crate::syntax::{FoFormula, Formula};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

pub type State = BTreeSet<String>;
pub type Assignment = BTreeMap<String, usize>;

/// Nonempty finite word: a sequence of states, each a set of letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    states: Vec<State>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum WordError {
    #[error("a word must have at least one state")]
    Empty,
    #[error("malformed word {0:?}: expected states like {{a,b}} separated by ';'")]
    Malformed(String),
    #[error("letter {0:?} is not in the declared alphabet")]
    UnknownLetter(String),
}

impl Word {
    pub fn new(states: Vec<State>) -> Result<Word, WordError> {
        if states.is_empty() {
            return Err(WordError::Empty);
        }
        Ok(Word { states })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn state(&self, i: usize) -> &State {
        &self.states[i]
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn has(&self, i: usize, letter: &str) -> bool {
        self.states[i].contains(letter)
    }

    /// The prefix of the first `len` states (`1 <= len <= self.len()`).
    pub fn prefix(&self, len: usize) -> Word {
        Word {
            states: self.states[..len].to_vec(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut states = self.states.clone();
        states.extend(other.states.iter().cloned());
        Word { states }
    }

    pub fn push(&mut self, state: State) {
        self.states.push(state);
    }

    /// Parse `{a,b};{};{a}`. An alphabet, when given, bounds the letters.
    pub fn parse(input: &str, alphabet: Option<&BTreeSet<String>>) -> Result<Word, WordError> {
        let input = input.trim();
        if input.is_empty() {
            return Err(WordError::Empty);
        }
        let mut states = Vec::new();
        for part in input.split(';') {
            let part = part.trim();
            let inner = part
                .strip_prefix('{')
                .and_then(|p| p.strip_suffix('}'))
                .ok_or_else(|| WordError::Malformed(part.to_string()))?;
            let mut state = State::new();
            for letter in inner.split(',') {
                let letter = letter.trim();
                if letter.is_empty() {
                    continue;
                }
                if let Some(sigma) = alphabet {
                    if !sigma.contains(letter) {
                        return Err(WordError::UnknownLetter(letter.to_string()));
                    }
                }
                state.insert(letter.to_string());
            }
            states.push(state);
        }
        Word::new(states)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, state) in self.states.iter().enumerate() {
            if i > 0 {
                write!(out, ";")?;
            }
            write!(out, "{{")?;
            for (j, letter) in state.iter().enumerate() {
                if j > 0 {
                    write!(out, ",")?;
                }
                write!(out, "{letter}")?;
            }
            write!(out, "}}")?;
        }
        Ok(())
    }
}

/// Ultimately periodic infinite word `u · v^ω` given by a finite prefix `u`
/// (possibly empty) and a nonempty loop `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoWord {
    pub prefix: Vec<State>,
    pub cycle: Vec<State>,
}

impl LassoWord {
    pub fn new(prefix: Vec<State>, cycle: Vec<State>) -> Result<LassoWord, WordError> {
        if cycle.is_empty() {
            return Err(WordError::Empty);
        }
        Ok(LassoWord { prefix, cycle })
    }

    /// Parse `u | v` where `u` may be empty, e.g. `{a};{} | {b}`.
    pub fn parse(input: &str, alphabet: Option<&BTreeSet<String>>) -> Result<LassoWord, WordError> {
        let Some((u, v)) = input.split_once('|') else {
            return Err(WordError::Malformed(input.to_string()));
        };
        let prefix = if u.trim().is_empty() {
            Vec::new()
        } else {
            Word::parse(u, alphabet)?.states.clone()
        };
        let cycle = Word::parse(v, alphabet)?.states.clone();
        LassoWord::new(prefix, cycle)
    }

    /// State at position `i` of the infinite word.
    pub fn state(&self, i: usize) -> &State {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The finite word made of the first `len` states (`len >= 1`).
    pub fn unroll(&self, len: usize) -> Word {
        let states = (0..len).map(|i| self.state(i).clone()).collect();
        Word { states }
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, state) in self.prefix.iter().enumerate() {
            if i > 0 {
                write!(out, ";")?;
            }
            let w = Word {
                states: vec![state.clone()],
            };
            write!(out, "{w}")?;
        }
        write!(out, " | ")?;
        let v = Word {
            states: self.cycle.clone(),
        };
        write!(out, "{v}")
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum EvalError {
    #[error("position {pos} out of range for a word of length {len}")]
    OutOfRange { pos: usize, len: usize },
    #[error("variable {0:?} has no value in the assignment")]
    UnassignedVar(String),
    #[error("past operator not supported here: {0}")]
    PastOperator(String),
    #[error("not a co-safety first-order formula: offending subterm {0}")]
    NotCosafety(String),
    #[error("expected exactly one free variable, found {0:?}")]
    FreeVars(Vec<String>),
}

/// Pointwise finite-word satisfaction: does `w, i` satisfy `f`?
pub fn eval_ltl_fin(f: &Formula, w: &Word, i: usize) -> Result<bool, EvalError> {
    if i >= w.len() {
        return Err(EvalError::OutOfRange { pos: i, len: w.len() });
    }
    Ok(eval_ltl_rec(f, w, i))
}

fn eval_ltl_rec(f: &Formula, w: &Word, i: usize) -> bool {
    use Formula::*;
    let n = w.len();
    match f {
        True => true,
        False => false,
        Atom(p) => w.has(i, p),
        Not(a) => !eval_ltl_rec(a, w, i),
        And(a, b) => eval_ltl_rec(a, w, i) && eval_ltl_rec(b, w, i),
        Or(a, b) => eval_ltl_rec(a, w, i) || eval_ltl_rec(b, w, i),
        Implies(a, b) => !eval_ltl_rec(a, w, i) || eval_ltl_rec(b, w, i),
        Next(a) => i + 1 < n && eval_ltl_rec(a, w, i + 1),
        WeakNext(a) => i + 1 == n || eval_ltl_rec(a, w, i + 1),
        Yesterday(a) => i > 0 && eval_ltl_rec(a, w, i - 1),
        WeakYesterday(a) => i == 0 || eval_ltl_rec(a, w, i - 1),
        Until(a, b) => (i..n).any(|j| {
            eval_ltl_rec(b, w, j) && (i..j).all(|k| eval_ltl_rec(a, w, k))
        }),
        Since(a, b) => (0..=i).any(|j| {
            eval_ltl_rec(b, w, j) && (j + 1..=i).all(|k| eval_ltl_rec(a, w, k))
        }),
        Release(a, b) => {
            (i..n).all(|j| eval_ltl_rec(b, w, j))
                || (i..n).any(|k| {
                    eval_ltl_rec(a, w, k) && (i..=k).all(|j| eval_ltl_rec(b, w, j))
                })
        }
        Triggered(a, b) => {
            (0..=i).all(|j| eval_ltl_rec(b, w, j))
                || (0..=i).any(|k| {
                    eval_ltl_rec(a, w, k) && (k..=i).all(|j| eval_ltl_rec(b, w, j))
                })
        }
        Eventually(a) => (i..n).any(|j| eval_ltl_rec(a, w, j)),
        Globally(a) => (i..n).all(|j| eval_ltl_rec(a, w, j)),
        Once(a) => (0..=i).any(|j| eval_ltl_rec(a, w, j)),
        Historically(a) => (0..=i).all(|j| eval_ltl_rec(a, w, j)),
    }
}

/// Satisfaction at every position at once, by one bottom-up sweep per
/// subformula. Agrees with `eval_ltl_fin`; used where many positions or
/// many words are queried.
pub fn eval_ltl_all(f: &Formula, w: &Word) -> Vec<bool> {
    use Formula::*;
    let n = w.len();
    match f {
        True => vec![true; n],
        False => vec![false; n],
        Atom(p) => (0..n).map(|i| w.has(i, p)).collect(),
        Not(a) => {
            let mut v = eval_ltl_all(a, w);
            v.iter_mut().for_each(|x| *x = !*x);
            v
        }
        And(a, b) => zip_with(eval_ltl_all(a, w), eval_ltl_all(b, w), |x, y| x && y),
        Or(a, b) => zip_with(eval_ltl_all(a, w), eval_ltl_all(b, w), |x, y| x || y),
        Implies(a, b) => zip_with(eval_ltl_all(a, w), eval_ltl_all(b, w), |x, y| !x || y),
        Next(a) => {
            let c = eval_ltl_all(a, w);
            (0..n).map(|i| i + 1 < n && c[i + 1]).collect()
        }
        WeakNext(a) => {
            let c = eval_ltl_all(a, w);
            (0..n).map(|i| i + 1 == n || c[i + 1]).collect()
        }
        Yesterday(a) => {
            let c = eval_ltl_all(a, w);
            (0..n).map(|i| i > 0 && c[i - 1]).collect()
        }
        WeakYesterday(a) => {
            let c = eval_ltl_all(a, w);
            (0..n).map(|i| i == 0 || c[i - 1]).collect()
        }
        Until(a, b) => {
            let (va, vb) = (eval_ltl_all(a, w), eval_ltl_all(b, w));
            let mut out = vec![false; n];
            for i in (0..n).rev() {
                out[i] = vb[i] || (va[i] && i + 1 < n && out[i + 1]);
            }
            out
        }
        Release(a, b) => {
            let (va, vb) = (eval_ltl_all(a, w), eval_ltl_all(b, w));
            let mut out = vec![false; n];
            for i in (0..n).rev() {
                out[i] = vb[i] && (va[i] || i + 1 == n || out[i + 1]);
            }
            out
        }
        Since(a, b) => {
            let (va, vb) = (eval_ltl_all(a, w), eval_ltl_all(b, w));
            let mut out = vec![false; n];
            for i in 0..n {
                out[i] = vb[i] || (va[i] && i > 0 && out[i - 1]);
            }
            out
        }
        Triggered(a, b) => {
            let (va, vb) = (eval_ltl_all(a, w), eval_ltl_all(b, w));
            let mut out = vec![false; n];
            for i in 0..n {
                out[i] = vb[i] && (va[i] || i == 0 || out[i - 1]);
            }
            out
        }
        Eventually(a) => {
            let c = eval_ltl_all(a, w);
            let mut out = vec![false; n];
            for i in (0..n).rev() {
                out[i] = c[i] || (i + 1 < n && out[i + 1]);
            }
            out
        }
        Globally(a) => {
            let c = eval_ltl_all(a, w);
            let mut out = vec![false; n];
            for i in (0..n).rev() {
                out[i] = c[i] && (i + 1 == n || out[i + 1]);
            }
            out
        }
        Once(a) => {
            let c = eval_ltl_all(a, w);
            let mut out = vec![false; n];
            for i in 0..n {
                out[i] = c[i] || (i > 0 && out[i - 1]);
            }
            out
        }
        Historically(a) => {
            let c = eval_ltl_all(a, w);
            let mut out = vec![false; n];
            for i in 0..n {
                out[i] = c[i] && (i == 0 || out[i - 1]);
            }
            out
        }
    }
}

fn zip_with(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

/// Satisfaction of a pure-future formula at position `i` of the infinite
/// word `u · v^ω`, by fixpoint iteration over the positions
/// `0 .. |u|+|v|` with the successor of the last looping back to `|u|`.
/// Positions past the table fold onto their residual in the loop. Past
/// operators are rejected.
pub fn eval_ltl_lasso(f: &Formula, w: &LassoWord, i: usize) -> Result<bool, EvalError> {
    if let Some(p) = f.first_past_subterm() {
        return Err(EvalError::PastOperator(p.to_string()));
    }
    let n = w.prefix.len() + w.cycle.len();
    let i = if i < n {
        i
    } else {
        w.prefix.len() + (i - w.prefix.len()) % w.cycle.len()
    };
    let succ = |i: usize| if i + 1 == n { w.prefix.len() } else { i + 1 };
    let mut cache: HashMap<*const Formula, Vec<bool>> = HashMap::new();
    let table = lasso_table(f, w, n, &succ, &mut cache);
    Ok(table[i])
}

fn lasso_table(
    f: &Formula,
    w: &LassoWord,
    n: usize,
    succ: &impl Fn(usize) -> usize,
    cache: &mut HashMap<*const Formula, Vec<bool>>,
) -> Vec<bool> {
    use Formula::*;
    let key = f as *const Formula;
    if let Some(v) = cache.get(&key) {
        return v.clone();
    }
    let out = match f {
        True => vec![true; n],
        False => vec![false; n],
        Atom(p) => (0..n).map(|i| w.state(i).contains(p)).collect(),
        Not(a) => lasso_table(a, w, n, succ, cache)
            .into_iter()
            .map(|x| !x)
            .collect(),
        And(a, b) => zip_with(
            lasso_table(a, w, n, succ, cache),
            lasso_table(b, w, n, succ, cache),
            |x, y| x && y,
        ),
        Or(a, b) => zip_with(
            lasso_table(a, w, n, succ, cache),
            lasso_table(b, w, n, succ, cache),
            |x, y| x || y,
        ),
        Implies(a, b) => zip_with(
            lasso_table(a, w, n, succ, cache),
            lasso_table(b, w, n, succ, cache),
            |x, y| !x || y,
        ),
        // on infinite words the weak and strict tomorrow coincide
        Next(a) | WeakNext(a) => {
            let c = lasso_table(a, w, n, succ, cache);
            (0..n).map(|i| c[succ(i)]).collect()
        }
        Until(a, b) => {
            let (va, vb) = (
                lasso_table(a, w, n, succ, cache),
                lasso_table(b, w, n, succ, cache),
            );
            fixpoint(n, succ, false, |out, i| vb[i] || (va[i] && out[succ(i)]))
        }
        Eventually(a) => {
            let c = lasso_table(a, w, n, succ, cache);
            fixpoint(n, succ, false, |out, i| c[i] || out[succ(i)])
        }
        Release(a, b) => {
            let (va, vb) = (
                lasso_table(a, w, n, succ, cache),
                lasso_table(b, w, n, succ, cache),
            );
            fixpoint(n, succ, true, |out, i| vb[i] && (va[i] || out[succ(i)]))
        }
        Globally(a) => {
            let c = lasso_table(a, w, n, succ, cache);
            fixpoint(n, succ, true, |out, i| c[i] && out[succ(i)])
        }
        Yesterday(_) | WeakYesterday(_) | Since(_, _) | Triggered(_, _) | Once(_)
        | Historically(_) => unreachable!("past operators rejected up front"),
    };
    cache.insert(key, out.clone());
    out
}

fn fixpoint(
    n: usize,
    _succ: &impl Fn(usize) -> usize,
    init: bool,
    step: impl Fn(&[bool], usize) -> bool,
) -> Vec<bool> {
    let mut out = vec![init; n];
    loop {
        let mut changed = false;
        for i in (0..n).rev() {
            let v = step(&out, i);
            if v != out[i] {
                out[i] = v;
                changed = true;
            }
        }
        if !changed {
            return out;
        }
    }
}

/// Tarskian satisfaction of a first-order formula on a finite word under an
/// assignment covering its free variables.
pub fn eval_fo_fin(f: &FoFormula, w: &Word, asg: &Assignment) -> Result<bool, EvalError> {
    for v in f.free_vars() {
        match asg.get(&v) {
            None => return Err(EvalError::UnassignedVar(v)),
            Some(&p) if p >= w.len() => {
                return Err(EvalError::OutOfRange { pos: p, len: w.len() })
            }
            _ => {}
        }
    }
    let mut env: Vec<(String, usize)> = asg.iter().map(|(k, &v)| (k.clone(), v)).collect();
    Ok(eval_fo_rec(f, w, &mut env))
}

fn eval_fo_rec(f: &FoFormula, w: &Word, env: &mut Vec<(String, usize)>) -> bool {
    use FoFormula::*;
    let get = |v: &String, env: &Vec<(String, usize)>| -> usize {
        env.iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|(_, p)| *p)
            .expect("free variables were checked before evaluation")
    };
    match f {
        True => true,
        False => false,
        Less(a, b) => get(a, env) < get(b, env),
        Eq(a, b) => get(a, env) == get(b, env),
        Neq(a, b) => get(a, env) != get(b, env),
        Pred(p, v) => w.has(get(v, env), p),
        NegPred(p, v) => !w.has(get(v, env), p),
        Not(a) => !eval_fo_rec(a, w, env),
        And(a, b) => eval_fo_rec(a, w, env) && eval_fo_rec(b, w, env),
        Or(a, b) => eval_fo_rec(a, w, env) || eval_fo_rec(b, w, env),
        Implies(a, b) => !eval_fo_rec(a, w, env) || eval_fo_rec(b, w, env),
        Exists(v, b) => (0..w.len()).any(|p| {
            env.push((v.clone(), p));
            let r = eval_fo_rec(b, w, env);
            env.pop();
            r
        }),
        Forall(v, b) => (0..w.len()).all(|p| {
            env.push((v.clone(), p));
            let r = eval_fo_rec(b, w, env);
            env.pop();
            r
        }),
    }
}

/// Truth table of a first-order formula over all assignments to its free
/// variables: a mixed-radix table indexed by positions, one digit per free
/// variable in sorted order.
#[derive(Debug, Clone)]
pub struct FoTable {
    pub vars: Vec<String>,
    pub vals: Vec<bool>,
}

impl FoTable {
    fn constant(value: bool) -> FoTable {
        FoTable {
            vars: Vec::new(),
            vals: vec![value],
        }
    }

    pub fn get(&self, asg: &Assignment, n: usize) -> bool {
        let mut idx = 0usize;
        for v in &self.vars {
            idx = idx * n + asg[v];
        }
        self.vals[idx]
    }
}

/// Evaluate a first-order formula on `w` for every assignment at once.
/// Exponential in the number of free variables of the largest subformula,
/// which the fragments of interest keep small.
pub fn eval_fo_table(f: &FoFormula, w: &Word) -> FoTable {
    use FoFormula::*;
    let n = w.len();
    match f {
        True => FoTable::constant(true),
        False => FoTable::constant(false),
        Less(a, b) => atom_table(n, a, b, |x, y| x < y),
        Eq(a, b) => atom_table(n, a, b, |x, y| x == y),
        Neq(a, b) => atom_table(n, a, b, |x, y| x != y),
        Pred(p, v) => FoTable {
            vars: vec![v.clone()],
            vals: (0..n).map(|i| w.has(i, p)).collect(),
        },
        NegPred(p, v) => FoTable {
            vars: vec![v.clone()],
            vals: (0..n).map(|i| !w.has(i, p)).collect(),
        },
        Not(a) => {
            let mut t = eval_fo_table(a, w);
            t.vals.iter_mut().for_each(|x| *x = !*x);
            t
        }
        And(a, b) => combine(eval_fo_table(a, w), eval_fo_table(b, w), n, |x, y| x && y),
        Or(a, b) => combine(eval_fo_table(a, w), eval_fo_table(b, w), n, |x, y| x || y),
        Implies(a, b) => combine(eval_fo_table(a, w), eval_fo_table(b, w), n, |x, y| !x || y),
        Exists(v, b) => project(eval_fo_table(b, w), v, n, false),
        Forall(v, b) => project(eval_fo_table(b, w), v, n, true),
    }
}

fn atom_table(n: usize, a: &str, b: &str, f: impl Fn(usize, usize) -> bool) -> FoTable {
    if a == b {
        return FoTable {
            vars: vec![a.to_string()],
            vals: (0..n).map(|i| f(i, i)).collect(),
        };
    }
    let (first, second) = if a < b { (a, b) } else { (b, a) };
    let mut vals = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (x, y) = if a < b { (i, j) } else { (j, i) };
            vals.push(f(x, y));
        }
    }
    FoTable {
        vars: vec![first.to_string(), second.to_string()],
        vals,
    }
}

fn combine(a: FoTable, b: FoTable, n: usize, f: impl Fn(bool, bool) -> bool) -> FoTable {
    let mut vars: Vec<String> = a.vars.clone();
    for v in &b.vars {
        if !vars.contains(v) {
            vars.push(v.clone());
        }
    }
    vars.sort();
    let size = n.pow(vars.len() as u32);
    let stride = |t: &FoTable| -> Vec<Option<usize>> {
        // per output variable, the weight of that digit in t's index
        vars.iter()
            .map(|v| {
                t.vars
                    .iter()
                    .position(|tv| tv == v)
                    .map(|pos| n.pow((t.vars.len() - 1 - pos) as u32))
            })
            .collect()
    };
    let (sa, sb) = (stride(&a), stride(&b));
    let mut vals = Vec::with_capacity(size);
    let mut digits = vec![0usize; vars.len()];
    for _ in 0..size {
        let mut ia = 0;
        let mut ib = 0;
        for (d, &digit) in digits.iter().enumerate() {
            if let Some(s) = sa[d] {
                ia += digit * s;
            }
            if let Some(s) = sb[d] {
                ib += digit * s;
            }
        }
        vals.push(f(a.vals[ia], b.vals[ib]));
        for d in (0..digits.len()).rev() {
            digits[d] += 1;
            if digits[d] < n {
                break;
            }
            digits[d] = 0;
        }
    }
    FoTable { vars, vals }
}

fn project(t: FoTable, v: &str, n: usize, forall: bool) -> FoTable {
    let Some(pos) = t.vars.iter().position(|tv| tv == v) else {
        // vacuous quantifier over a nonempty domain
        return t;
    };
    let mut vars = t.vars.clone();
    vars.remove(pos);
    let inner = n.pow((t.vars.len() - 1 - pos) as u32);
    let outer_stride = inner * n;
    let size = t.vals.len() / n;
    let mut vals = Vec::with_capacity(size);
    for out_idx in 0..size {
        let base = (out_idx / inner) * outer_stride + (out_idx % inner);
        let slice = (0..n).map(|k| t.vals[base + k * inner]);
        vals.push(if forall {
            slice.into_iter().all(|x| x)
        } else {
            slice.into_iter().any(|x| x)
        });
    }
    FoTable { vars, vals }
}

/// Memoizing first-order evaluator for a fixed word. Results are keyed on
/// subformula identity plus the values of that subformula's free variables,
/// which keeps nested quantifiers polynomial instead of multiplying out
/// the whole quantifier tree on every branch.
pub struct FoEval<'a> {
    w: &'a Word,
    free: HashMap<*const FoFormula, Rc<Vec<String>>>,
    memo: HashMap<(*const FoFormula, Vec<usize>), bool>,
}

impl<'a> FoEval<'a> {
    pub fn new(w: &'a Word) -> FoEval<'a> {
        FoEval {
            w,
            free: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    pub fn eval(&mut self, f: &FoFormula, asg: &Assignment) -> Result<bool, EvalError> {
        for v in f.free_vars() {
            match asg.get(&v) {
                None => return Err(EvalError::UnassignedVar(v)),
                Some(&p) if p >= self.w.len() => {
                    return Err(EvalError::OutOfRange { pos: p, len: self.w.len() })
                }
                _ => {}
            }
        }
        let mut env: Vec<(String, usize)> = asg.iter().map(|(k, &v)| (k.clone(), v)).collect();
        Ok(self.rec(f, &mut env))
    }

    fn vars_of(&mut self, f: &FoFormula) -> Rc<Vec<String>> {
        let key = f as *const FoFormula;
        if let Some(vs) = self.free.get(&key) {
            return Rc::clone(vs);
        }
        let vs: Rc<Vec<String>> = Rc::new(f.free_vars().into_iter().collect());
        self.free.insert(key, Rc::clone(&vs));
        vs
    }

    fn rec(&mut self, f: &FoFormula, env: &mut Vec<(String, usize)>) -> bool {
        use FoFormula::*;
        let get = |v: &String, env: &Vec<(String, usize)>| -> usize {
            env.iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|(_, p)| *p)
                .expect("free variables were checked before evaluation")
        };
        match f {
            True => return true,
            False => return false,
            Less(a, b) => return get(a, env) < get(b, env),
            Eq(a, b) => return get(a, env) == get(b, env),
            Neq(a, b) => return get(a, env) != get(b, env),
            Pred(p, v) => return self.w.has(get(v, env), p),
            NegPred(p, v) => return !self.w.has(get(v, env), p),
            _ => {}
        }
        let node = f as *const FoFormula;
        let vars = self.vars_of(f);
        let key_vals: Vec<usize> = vars.iter().map(|v| get(v, env)).collect();
        if let Some(&r) = self.memo.get(&(node, key_vals.clone())) {
            return r;
        }
        let r = match f {
            Not(a) => !self.rec(a, env),
            And(a, b) => self.rec(a, env) && self.rec(b, env),
            Or(a, b) => self.rec(a, env) || self.rec(b, env),
            Implies(a, b) => !self.rec(a, env) || self.rec(b, env),
            Exists(v, b) => (0..self.w.len()).any(|p| {
                env.push((v.clone(), p));
                let r = self.rec(b, env);
                env.pop();
                r
            }),
            Forall(v, b) => (0..self.w.len()).all(|p| {
                env.push((v.clone(), p));
                let r = self.rec(b, env);
                env.pop();
                r
            }),
            _ => unreachable!("atoms handled above"),
        };
        self.memo.insert((node, key_vals), r);
        r
    }
}

/// Outcome of the bounded prefix search on a lasso word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundedVerdict {
    /// A satisfying prefix of this length was found; any finite witness
    /// settles membership for the whole infinite word.
    TrueWithPrefix(usize),
    /// No prefix of length up to the bound satisfied the formula.
    UnknownAt(usize),
}

/// Bounded satisfaction of a co-safety first-order formula on the infinite
/// word `u · v^ω`: tries the unrolled prefixes of length 1 through `k` and
/// reports the first one that satisfies `f` under `a`. A finite witness is
/// conclusive for the infinite word, but its absence below the bound is
/// not, hence the three-valued result.
pub fn eval_cosafetyfo_lasso(
    f: &FoFormula,
    w: &LassoWord,
    a: &Assignment,
    k: usize,
) -> Result<BoundedVerdict, EvalError> {
    let cls = crate::fragments::classify_fo(f);
    let verdict = &cls.entries[&crate::fragments::FragmentId::CosafetyFo];
    if !verdict.holds {
        return Err(EvalError::NotCosafety(
            verdict.offender.clone().unwrap_or_else(|| f.to_string()),
        ));
    }
    // prefixes too short to contain an assigned position cannot be models
    let floor = a.values().map(|&p| p + 1).max().unwrap_or(1);
    for len in 1..=k {
        if len < floor {
            continue;
        }
        let prefix = w.unroll(len);
        let mut ev = FoEval::new(&prefix);
        if ev.eval(f, a)? {
            return Ok(BoundedVerdict::TrueWithPrefix(len));
        }
    }
    Ok(BoundedVerdict::UnknownAt(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_fo, parse_ltl};

    fn w(s: &str) -> Word {
        Word::parse(s, None).unwrap()
    }
    fn ltl(s: &str) -> Formula {
        parse_ltl(s, None).unwrap()
    }
    fn fo(s: &str) -> FoFormula {
        parse_fo(s, None).unwrap()
    }
    fn at(f: &Formula, word: &Word, i: usize) -> bool {
        eval_ltl_fin(f, word, i).unwrap()
    }

    #[test]
    fn strong_next_fails_at_the_last_position() {
        let word = w("{a};{a}");
        assert!(at(&ltl("X a"), &word, 0));
        assert!(!at(&ltl("X a"), &word, 1));
        assert!(at(&ltl("wX false"), &word, 1));
        assert!(!at(&ltl("wX false"), &word, 0));
    }

    #[test]
    fn yesterday_and_weak_yesterday_at_the_origin() {
        let word = w("{a};{a}");
        assert!(!at(&ltl("Y a"), &word, 0));
        assert!(at(&ltl("Y a"), &word, 1));
        assert!(at(&ltl("Z false"), &word, 0));
        assert!(!at(&ltl("Z false"), &word, 1));
    }

    #[test]
    fn until_needs_a_witness() {
        let word = w("{a};{a};{b}");
        assert!(at(&ltl("a U b"), &word, 0));
        assert!(!at(&ltl("a U c"), &word, 0));
        let no_witness = w("{a};{a}");
        assert!(!at(&ltl("a U b"), &no_witness, 0));
    }

    #[test]
    fn release_on_finite_words_can_hold_to_the_end() {
        let word = w("{b};{b}");
        assert!(at(&ltl("a R b"), &word, 0));
        let word2 = w("{b};{a,b};{}");
        assert!(at(&ltl("a R b"), &word2, 0));
        let word3 = w("{b};{};{a,b}");
        assert!(!at(&ltl("a R b"), &word3, 0));
    }

    #[test]
    fn since_and_triggered_look_back() {
        let word = w("{b};{a};{a}");
        assert!(at(&ltl("a S b"), &word, 2));
        assert!(!at(&ltl("a S b"), &w("{};{a};{a}"), 2));
        assert!(at(&ltl("a T b"), &w("{b};{b};{b}"), 2));
        assert!(at(&ltl("a T b"), &w("{};{a,b};{b}"), 2));
        assert!(!at(&ltl("a T b"), &w("{};{b};{b}"), 2));
    }

    #[test]
    fn shortcuts_match_their_expansions() {
        use crate::syntax::expand_shortcuts;
        let word = w("{a};{};{b};{a,b}");
        for s in ["F b", "G(a | b)", "O a", "H(a | b)", "F(a & b)", "H a"] {
            let f = ltl(s);
            let g = expand_shortcuts(&f);
            for i in 0..word.len() {
                assert_eq!(at(&f, &word, i), at(&g, &word, i), "{s} at {i}");
            }
        }
    }

    #[test]
    fn bulk_ltl_agrees_with_pointwise() {
        let word = w("{a};{};{a,b};{b};{}");
        for s in [
            "a U b",
            "a R b",
            "(a | b) U (a & b)",
            "X a U wX b",
            "a S b",
            "a T b",
            "Y a | Z b",
            "F(a & X b)",
            "G(a -> F b)",
            "O a & H(a | b)",
        ] {
            let f = ltl(s);
            let bulk = eval_ltl_all(&f, &word);
            for i in 0..word.len() {
                assert_eq!(bulk[i], at(&f, &word, i), "{s} at {i}");
            }
        }
    }

    #[test]
    fn lasso_satisfaction_on_simple_loops() {
        let lasso = LassoWord::parse("{a} | {b}", None).unwrap();
        assert!(eval_ltl_lasso(&ltl("a U b"), &lasso, 0).unwrap());
        assert!(eval_ltl_lasso(&ltl("F b"), &lasso, 0).unwrap());
        assert!(eval_ltl_lasso(&ltl("X G b"), &lasso, 0).unwrap());
        assert!(!eval_ltl_lasso(&ltl("G a"), &lasso, 0).unwrap());

        let only_a = LassoWord::parse("| {a}", None).unwrap();
        assert!(eval_ltl_lasso(&ltl("G a"), &only_a, 0).unwrap());
        assert!(!eval_ltl_lasso(&ltl("F b"), &only_a, 0).unwrap());
        // on infinite words the weak tomorrow never saves anything
        assert!(!eval_ltl_lasso(&ltl("F wX false"), &only_a, 0).unwrap());
    }

    #[test]
    fn lasso_rejects_past_operators() {
        let lasso = LassoWord::parse("| {a}", None).unwrap();
        assert!(matches!(
            eval_ltl_lasso(&ltl("F Y a"), &lasso, 0),
            Err(EvalError::PastOperator(_))
        ));
    }

    #[test]
    fn lasso_agrees_with_long_unrollings_on_cosafety() {
        // for formulas whose truth is settled by a finite prefix, lasso
        // satisfaction matches satisfaction of a long unrolling
        let lasso = LassoWord::parse("{a};{} | {b};{a}", None).unwrap();
        for s in ["a U b", "F(a & X b)", "b | X X b", "a & X true"] {
            let f = ltl(s);
            let long = lasso.unroll(12);
            assert_eq!(
                eval_ltl_lasso(&f, &lasso, 0).unwrap(),
                eval_ltl_fin(&f, &long, 0).unwrap(),
                "{s}"
            );
        }
    }

    #[test]
    fn fo_quantifiers_follow_the_order() {
        let word = w("{a};{};{b}");
        let f = fo("exists y . x < y & b(y)");
        let mut asg = Assignment::new();
        asg.insert("x".to_string(), 0);
        assert!(eval_fo_fin(&f, &word, &asg).unwrap());
        asg.insert("x".to_string(), 2);
        assert!(!eval_fo_fin(&f, &word, &asg).unwrap());
    }

    #[test]
    fn fo_reports_missing_assignments() {
        let word = w("{a}");
        let f = fo("a(x)");
        assert!(matches!(
            eval_fo_fin(&f, &word, &Assignment::new()),
            Err(EvalError::UnassignedVar(_))
        ));
    }

    #[test]
    fn fo_table_agrees_with_recursive_evaluation() {
        let word = w("{a};{b};{a,b};{}");
        let formulas = [
            "exists y . x < y & b(y)",
            "forall z . x < z & z < y -> a(z)",
            "x < y | (exists t . y < t & a(t) & x != t)",
            "exists u . exists v . u < v & a(u) & b(v)",
            "true",
            "x = x",
        ];
        for s in formulas {
            let f = fo(s);
            let t = eval_fo_table(&f, &word);
            let fv: Vec<String> = f.free_vars().into_iter().collect();
            let n = word.len();
            let mut asg = Assignment::new();
            let mut idx = vec![0usize; fv.len()];
            loop {
                for (v, &i) in fv.iter().zip(&idx) {
                    asg.insert(v.clone(), i);
                }
                assert_eq!(
                    t.get(&asg, n),
                    eval_fo_fin(&f, &word, &asg).unwrap(),
                    "{s} under {asg:?}"
                );
                let mut d = idx.len();
                loop {
                    if d == 0 {
                        break;
                    }
                    d -= 1;
                    idx[d] += 1;
                    if idx[d] < n {
                        break;
                    }
                    idx[d] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
                if fv.is_empty() {
                    break;
                }
            }
        }
    }

    #[test]
    fn word_parsing_and_display_round_trip() {
        for s in ["{a}", "{a,b};{}", "{};{};{a}"] {
            let word = w(s);
            assert_eq!(word.to_string(), s);
        }
        assert!(Word::parse("", None).is_err());
        assert!(Word::parse("a;b", None).is_err());
        let sigma: BTreeSet<String> = ["a".to_string()].into_iter().collect();
        assert!(Word::parse("{b}", Some(&sigma)).is_err());
    }

    #[test]
    fn lasso_positions_wrap_into_the_cycle() {
        let lasso = LassoWord::parse("{a} | {b};{}", None).unwrap();
        assert!(lasso.state(0).contains("a"));
        assert!(lasso.state(1).contains("b"));
        assert!(lasso.state(2).is_empty());
        assert!(lasso.state(3).contains("b"));
        assert_eq!(lasso.unroll(4).to_string(), "{a};{b};{};{b}");
    }

    #[test]
    fn lasso_evaluation_at_inner_positions() {
        let lasso = LassoWord::parse("{a} | {b}", None).unwrap();
        assert!(!eval_ltl_lasso(&ltl("b"), &lasso, 0).unwrap());
        assert!(eval_ltl_lasso(&ltl("b"), &lasso, 1).unwrap());
        assert!(eval_ltl_lasso(&ltl("G b"), &lasso, 1).unwrap());
        // positions past the table land on their loop residual
        assert!(eval_ltl_lasso(&ltl("b"), &lasso, 2).unwrap());
        let two = LassoWord::parse("{a} | {b};{}", None).unwrap();
        assert!(eval_ltl_lasso(&ltl("b"), &two, 5).unwrap());
        assert!(!eval_ltl_lasso(&ltl("b"), &two, 6).unwrap());
    }

    #[test]
    fn memo_evaluator_matches_plain_recursion() {
        let word = w("{a};{b};{a,b};{}");
        for s in [
            "exists y . x < y & b(y)",
            "forall z . x < z & z < y -> a(z)",
            "exists u . (u < x | u = x) & forall t . (t < u -> b(t))",
        ] {
            let f = fo(s);
            let n = word.len();
            let fv: Vec<String> = f.free_vars().into_iter().collect();
            let mut ev = FoEval::new(&word);
            // exercise the memo across assignments of up to two variables
            for i in 0..n {
                for j in 0..n {
                    let mut asg = Assignment::new();
                    if let Some(v) = fv.first() {
                        asg.insert(v.clone(), i);
                    }
                    if let Some(v) = fv.get(1) {
                        asg.insert(v.clone(), j);
                    }
                    assert_eq!(
                        ev.eval(&f, &asg).unwrap(),
                        eval_fo_fin(&f, &word, &asg).unwrap(),
                        "{s} at {i},{j}"
                    );
                }
            }
        }
    }

    #[test]
    fn bounded_prefix_search_finds_the_shortest_witness() {
        let f = fo("exists y . (x < y | x = y) & p(y)");
        let lasso = LassoWord::parse("| {p}", None).unwrap();
        let mut asg = Assignment::new();
        asg.insert("x".to_string(), 0);
        assert_eq!(
            eval_cosafetyfo_lasso(&f, &lasso, &asg, 4).unwrap(),
            BoundedVerdict::TrueWithPrefix(1)
        );

        // the first p-state is position 1, so the witness prefix has length 2
        let lasso = LassoWord::parse("{} | {p}", None).unwrap();
        assert_eq!(
            eval_cosafetyfo_lasso(&f, &lasso, &asg, 4).unwrap(),
            BoundedVerdict::TrueWithPrefix(2)
        );

        let strict = fo("exists y . x < y & p(y)");
        let empty = LassoWord::parse("| {}", None).unwrap();
        assert_eq!(
            eval_cosafetyfo_lasso(&strict, &empty, &asg, 8).unwrap(),
            BoundedVerdict::UnknownAt(8)
        );

        let atom = fo("p(x)");
        let lasso = LassoWord::parse("| {p}", None).unwrap();
        assert_eq!(
            eval_cosafetyfo_lasso(&atom, &lasso, &asg, 1).unwrap(),
            BoundedVerdict::TrueWithPrefix(1)
        );

        // universal quantification is outside the fragment
        let bad = fo("forall y . x < y -> p(y)");
        assert!(matches!(
            eval_cosafetyfo_lasso(&bad, &lasso, &asg, 2),
            Err(EvalError::NotCosafety(_))
        ));
    }
}
