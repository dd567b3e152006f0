//! The brute-force verification layer: bounded word enumeration, language
//! equivalence up to a length, prefix-extension probes, good-prefix search
//! on lasso words, and the two-letter separation witness.

use crate::semantics::{
    eval_fo_table, eval_ltl_all, eval_ltl_fin, eval_ltl_lasso, Assignment, EvalError, LassoWord,
    State, Word,
};
use crate::syntax::{FoFormula, Formula};
use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    EquivalentUpToBound,
    Counterexample,
    PropertyHoldsUpToBound,
    PropertyViolated,
}

impl Verdict {
    pub fn passed(self) -> bool {
        matches!(
            self,
            Verdict::EquivalentUpToBound | Verdict::PropertyHoldsUpToBound
        )
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::EquivalentUpToBound => "equivalent-up-to-bound",
            Verdict::Counterexample => "counterexample",
            Verdict::PropertyHoldsUpToBound => "property-holds-up-to-bound",
            Verdict::PropertyViolated => "property-violated",
        };
        write!(out, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    At { word: Word, position: usize },
    Extension { word: Word, extension: Word },
    Lasso { word: LassoWord, position: usize },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::At { word, position } => write!(out, "{word} at {position}"),
            Counterexample::Extension { word, extension } => {
                write!(out, "{word} extended by {extension}")
            }
            Counterexample::Lasso { word, position } => write!(out, "{word} at {position}"),
        }
    }
}

/// Outcome of one bounded check: the verdict, the bounds it was run at, the
/// first counterexample or witness index when there is one, and how much was
/// explored. Two runs on the same inputs produce the same report apart from
/// the wall time, which therefore stays out of the structured form.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub alphabet: BTreeSet<String>,
    pub max_len: usize,
    pub max_ext: usize,
    pub counterexample: Option<Counterexample>,
    pub witness: Option<usize>,
    pub words_explored: usize,
    pub wall: Duration,
}

impl CheckReport {
    fn new(alphabet: &BTreeSet<String>, max_len: usize, max_ext: usize) -> CheckReport {
        CheckReport {
            verdict: Verdict::PropertyHoldsUpToBound,
            alphabet: alphabet.clone(),
            max_len,
            max_ext,
            counterexample: None,
            witness: None,
            words_explored: 0,
            wall: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    /// The line-oriented report format: `key: value` lines closed by a
    /// single `verdict:` line.
    pub fn structured(&self) -> String {
        let mut out = String::new();
        let letters: Vec<&str> = self.alphabet.iter().map(String::as_str).collect();
        out.push_str(&format!("alphabet: {{{}}}\n", letters.join(",")));
        out.push_str(&format!("max-len: {}\n", self.max_len));
        if self.max_ext > 0 {
            out.push_str(&format!("max-ext: {}\n", self.max_ext));
        }
        out.push_str(&format!("words-explored: {}\n", self.words_explored));
        if let Some(c) = &self.counterexample {
            out.push_str(&format!("counterexample: {c}\n"));
        }
        if let Some(i) = self.witness {
            out.push_str(&format!("witness: {i}\n"));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.verdict)?;
        if let Some(i) = self.witness {
            write!(out, " (witness index {i})")?;
        }
        if let Some(c) = &self.counterexample {
            write!(out, "\ncounterexample: {c}")?;
        }
        write!(
            out,
            "\nexplored {} words in {:.1?}",
            self.words_explored, self.wall
        )
    }
}

/// Every state over the alphabet: the empty state first, then ascending in
/// the bitmask order induced by the sorted letters.
pub fn all_states(alphabet: &BTreeSet<String>) -> Vec<State> {
    let letters: Vec<&String> = alphabet.iter().collect();
    (0..1usize << letters.len())
        .map(|mask| {
            letters
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, l)| (*l).clone())
                .collect()
        })
        .collect()
}

fn tuples(states: &[State], len: usize) -> Vec<Vec<State>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * states.len());
        for t in &out {
            for s in states {
                let mut t2 = t.clone();
                t2.push(s.clone());
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Every word of length `1..=max_len`, shorter words first, words of equal
/// length in lexicographic order of their state sequence.
pub fn enumerate_words(alphabet: &BTreeSet<String>, max_len: usize) -> Vec<Word> {
    let states = all_states(alphabet);
    let mut out = Vec::new();
    for len in 1..=max_len {
        for t in tuples(&states, len) {
            out.push(Word::new(t).unwrap());
        }
    }
    out
}

/// Every lasso presentation `u | v` with `|u| + |v| <= max_total`, ordered
/// by prefix length, prefix, cycle length, cycle.
pub fn enumerate_lassos(alphabet: &BTreeSet<String>, max_total: usize) -> Vec<LassoWord> {
    let states = all_states(alphabet);
    let mut out = Vec::new();
    for ulen in 0..max_total {
        for u in tuples(&states, ulen) {
            for vlen in 1..=max_total - ulen {
                for v in tuples(&states, vlen) {
                    out.push(LassoWord::new(u.clone(), v).unwrap());
                }
            }
        }
    }
    out
}

/// One side of a language comparison: a temporal formula, or a first-order
/// formula whose single free variable marks the evaluation position.
#[derive(Debug, Clone)]
pub enum LangSpec {
    Ltl(Formula),
    Fo(FoFormula),
}

impl LangSpec {
    fn validate(&self) -> Result<(), EvalError> {
        if let LangSpec::Fo(f) = self {
            let free = f.free_vars();
            if free.len() != 1 {
                return Err(EvalError::FreeVars(free.into_iter().collect()));
            }
        }
        Ok(())
    }

    fn eval_all(&self, w: &Word) -> Vec<bool> {
        match self {
            LangSpec::Ltl(f) => eval_ltl_all(f, w),
            LangSpec::Fo(f) => {
                let v = f.free_vars().into_iter().next().expect("validated");
                let table = eval_fo_table(f, w);
                (0..w.len())
                    .map(|i| {
                        let mut asg = Assignment::new();
                        asg.insert(v.clone(), i);
                        table.get(&asg, w.len())
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositionPolicy {
    AtZero,
    AllPositions,
}

/// Compare two formulas on every word up to the length bound, at position 0
/// or at every position. The first disagreement in enumeration order is the
/// counterexample.
pub fn lang_equiv_fin(
    f1: &LangSpec,
    f2: &LangSpec,
    alphabet: &BTreeSet<String>,
    max_len: usize,
    policy: PositionPolicy,
) -> Result<CheckReport, EvalError> {
    f1.validate()?;
    f2.validate()?;
    let start = Instant::now();
    let mut report = CheckReport::new(alphabet, max_len, 0);
    for w in enumerate_words(alphabet, max_len) {
        report.words_explored += 1;
        let a = f1.eval_all(&w);
        let b = f2.eval_all(&w);
        let upto = match policy {
            PositionPolicy::AtZero => 1,
            PositionPolicy::AllPositions => w.len(),
        };
        for i in 0..upto {
            if a[i] != b[i] {
                report.verdict = Verdict::Counterexample;
                report.counterexample = Some(Counterexample::At { word: w, position: i });
                report.wall = start.elapsed();
                return Ok(report);
            }
        }
    }
    report.verdict = Verdict::EquivalentUpToBound;
    report.wall = start.elapsed();
    Ok(report)
}

/// Extensions for the prefix-closure probe, letter-rich states first: a
/// refuting extension that actually contains letters is more telling than
/// the all-empty one, so it is the one reported.
fn enumerate_extensions(alphabet: &BTreeSet<String>, max_ext: usize) -> Vec<Word> {
    let mut states = all_states(alphabet);
    states.reverse();
    let mut out = Vec::new();
    for len in 1..=max_ext {
        for t in tuples(&states, len) {
            out.push(Word::new(t).unwrap());
        }
    }
    out
}

/// Does every satisfying word stay satisfying under every extension? Holds
/// for the whole co-safety side; a weak-tomorrow probe for the last position
/// is the standard way to break it.
pub fn prefix_closure_check(
    f: &Formula,
    alphabet: &BTreeSet<String>,
    max_len: usize,
    max_ext: usize,
) -> CheckReport {
    let start = Instant::now();
    let mut report = CheckReport::new(alphabet, max_len, max_ext);
    let extensions = enumerate_extensions(alphabet, max_ext);
    for w in enumerate_words(alphabet, max_len) {
        report.words_explored += 1;
        if !eval_ltl_fin(f, &w, 0).expect("position 0 of a nonempty word") {
            continue;
        }
        for e in &extensions {
            report.words_explored += 1;
            if !eval_ltl_fin(f, &w.concat(e), 0).expect("position 0 of a nonempty word") {
                report.verdict = Verdict::PropertyViolated;
                report.counterexample = Some(Counterexample::Extension {
                    word: w,
                    extension: e.clone(),
                });
                report.wall = start.elapsed();
                return report;
            }
        }
    }
    report.wall = start.elapsed();
    report
}

fn lasso_letters(w: &LassoWord) -> BTreeSet<String> {
    w.prefix
        .iter()
        .chain(w.cycle.iter())
        .flat_map(|s| s.iter().cloned())
        .collect()
}

/// Search for a good prefix of a satisfying lasso word: an index `i <= k`
/// such that the prefix up to `i` followed by any continuation lasso of
/// total size `<= ext_bound` still satisfies the formula. Finding one is
/// evidence, not proof; failing to find one refutes co-safety behaviour up
/// to the bound.
pub fn good_prefix_evidence(
    f: &Formula,
    w: &LassoWord,
    k: usize,
    ext_bound: usize,
) -> Result<CheckReport, EvalError> {
    if let Some(p) = f.first_past_subterm() {
        return Err(EvalError::PastOperator(p.to_string()));
    }
    let mut alphabet = f.atoms();
    alphabet.extend(lasso_letters(w));
    let start = Instant::now();
    let mut report = CheckReport::new(&alphabet, k, ext_bound);
    report.words_explored = 1;
    if !eval_ltl_lasso(f, w, 0)? {
        report.verdict = Verdict::PropertyViolated;
        report.counterexample = Some(Counterexample::Lasso {
            word: w.clone(),
            position: 0,
        });
        report.wall = start.elapsed();
        return Ok(report);
    }
    let continuations = enumerate_lassos(&alphabet, ext_bound);
    let mut last_fail = None;
    'prefixes: for i in 0..=k {
        let prefix = w.unroll(i + 1);
        for rho in &continuations {
            report.words_explored += 1;
            let mut states = prefix.states().to_vec();
            states.extend(rho.prefix.iter().cloned());
            let cand = LassoWord::new(states, rho.cycle.clone()).expect("nonempty cycle");
            if !eval_ltl_lasso(f, &cand, 0)? {
                last_fail = Some(cand);
                continue 'prefixes;
            }
        }
        report.witness = Some(i);
        report.wall = start.elapsed();
        return Ok(report);
    }
    report.verdict = Verdict::PropertyViolated;
    report.counterexample = last_fail.map(|word| Counterexample::Lasso { word, position: 0 });
    report.wall = start.elapsed();
    Ok(report)
}

/// Is some finite prefix of the lasso's unrolling in the finite-word
/// language of `f`? Probed to depth `|u| + 2|v| + 2`, far beyond the two
/// positions that decide both formulas this witness compares.
fn anchored_member(f: &Formula, w: &LassoWord) -> bool {
    let depth = w.prefix.len() + 2 * w.cycle.len() + 2;
    (1..=depth).any(|l| eval_ltl_fin(f, &w.unroll(l), 0).expect("in range"))
}

/// The separation story on the singleton alphabet: the finite-word language
/// of `a ∧ X(a ∧ wX false)` is exactly {{a}{a}}, it is not closed under
/// extension, and yet its prefix-anchored infinite language agrees with the
/// one of `a ∧ X a` on every bounded lasso.
pub fn separation_witness_aa() -> CheckReport {
    let alphabet: BTreeSet<String> = ["a".to_string()].into();
    let a = Formula::atom("a");
    let phi = Formula::and(
        a.clone(),
        Formula::next(Formula::and(a.clone(), Formula::weak_next(Formula::False))),
    );
    let psi = Formula::and(a.clone(), Formula::next(a));
    let start = Instant::now();
    let mut report = CheckReport::new(&alphabet, 4, 2);

    let target = Word::parse("{a};{a}", Some(&alphabet)).unwrap();
    for w in enumerate_words(&alphabet, 4) {
        report.words_explored += 1;
        let sat = eval_ltl_fin(&phi, &w, 0).unwrap();
        if sat != (w == target) {
            report.verdict = Verdict::PropertyViolated;
            report.counterexample = Some(Counterexample::At { word: w, position: 0 });
            report.wall = start.elapsed();
            return report;
        }
    }

    let closure = prefix_closure_check(&phi, &alphabet, 4, 2);
    report.words_explored += closure.words_explored;
    if closure.verdict != Verdict::PropertyViolated {
        report.verdict = Verdict::PropertyViolated;
        report.wall = start.elapsed();
        return report;
    }

    for lasso in enumerate_lassos(&alphabet, 4) {
        report.words_explored += 1;
        if anchored_member(&phi, &lasso) != anchored_member(&psi, &lasso) {
            report.verdict = Verdict::PropertyViolated;
            report.counterexample = Some(Counterexample::Lasso {
                word: lasso,
                position: 0,
            });
            report.wall = start.elapsed();
            return report;
        }
    }

    report.wall = start.elapsed();
    report
}
