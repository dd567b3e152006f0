//! The acceptance gate: every release-blocking property, one test per
//! criterion, each printing a single PASS or FAIL line with its runtime.
//! The corpora are seeded per criterion, so failures reproduce exactly.
//! Run with `--nocapture` to see the lines for passing criteria too.

use std::collections::BTreeSet;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use cosafe::check::{
    enumerate_lassos, enumerate_words, lang_equiv_fin, prefix_closure_check,
    separation_witness_aa, Counterexample, LangSpec, PositionPolicy,
};
use cosafe::corpus;
use cosafe::fragments::{classify_fo, classify_ltl, FragmentId};
use cosafe::semantics::{
    eval_cosafetyfo_lasso, eval_fo_fin, eval_fo_table, eval_ltl_fin, eval_ltl_lasso, Assignment,
    Word,
};
use cosafe::syntax::{mirror, parse_ltl, weak_next_to_next, Formula};
use cosafe::translate::{
    check_invariants, cosafetyfo_to_ebfo, cosafetyfo_to_ltl, ebfo_to_cosafetyfo,
    eliminate_for_finite_to_cosafety, eliminate_for_finite_to_safety, eval_normal_form,
    fo_to_cosafetyfo, ltl_to_fo, normal_form, Semantics,
};

const AB: [&str; 2] = ["a", "b"];
const BUDGET: usize = 1_000_000;

// Criteria run one at a time so the printed runtimes are not skewed by the
// test harness running them in parallel.
static SERIAL: Mutex<()> = Mutex::new(());

fn sigma(letters: &[&str]) -> BTreeSet<String> {
    letters.iter().map(|s| s.to_string()).collect()
}

fn at(v: &str, i: usize) -> Assignment {
    let mut asg = Assignment::new();
    asg.insert(v.to_string(), i);
    asg
}

fn run(n: usize, target: Option<Duration>, body: impl FnOnce() -> Result<(), String>) {
    let _serial = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    match &result {
        Ok(()) => println!("criterion {n}: PASS ({elapsed:.1?})"),
        Err(e) => println!("criterion {n}: FAIL ({elapsed:.1?}) {e}"),
    }
    if let Err(e) = result {
        panic!("criterion {n}: {e}");
    }
    if let Some(t) = target {
        assert!(
            elapsed < t,
            "criterion {n}: passed but took {elapsed:.1?}, budget {t:?}"
        );
    }
}

#[test]
fn criterion_01_finite_elimination_laws() {
    run(1, Some(Duration::from_secs(60)), || {
        let mut rng = corpus::seeded(1);
        let ab = sigma(&AB);
        for _ in 0..300 {
            let f = corpus::gen_pure_future(&mut rng, 10, &AB);
            let c = eliminate_for_finite_to_cosafety(&f).map_err(|e| format!("{f}: {e}"))?;
            let s = eliminate_for_finite_to_safety(&f).map_err(|e| format!("{f}: {e}"))?;
            if !classify_ltl(&c).holds(FragmentId::CosafetyLtl) {
                return Err(format!("{f}: image {c} is not co-safety"));
            }
            if !classify_ltl(&s).holds(FragmentId::SafetyLtl) {
                return Err(format!("{f}: image {s} is not safety"));
            }
            for g in [c, s] {
                let report = lang_equiv_fin(
                    &LangSpec::Ltl(f.clone()),
                    &LangSpec::Ltl(g.clone()),
                    &ab,
                    5,
                    PositionPolicy::AllPositions,
                )
                .map_err(|e| e.to_string())?;
                if !report.passed() {
                    return Err(format!(
                        "{f} vs {g}: {}",
                        report.counterexample.unwrap()
                    ));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_02_ltl_to_fo_agreement_and_size() {
    run(2, Some(Duration::from_secs(90)), || {
        let mut rng = corpus::seeded(2);
        let words = enumerate_words(&sigma(&AB), 5);
        for _ in 0..300 {
            let f = corpus::gen_cosafety_nowx(&mut rng, 10, &AB);
            let g = ltl_to_fo(&f, "x", Semantics::Finite).map_err(|e| format!("{f}: {e}"))?;
            if g.size() > 25 * f.size() {
                return Err(format!(
                    "{f}: image size {} exceeds 25 * {}",
                    g.size(),
                    f.size()
                ));
            }
            for w in &words {
                let table = eval_fo_table(&g, w);
                for i in 0..w.len() {
                    let fo_val = table.get(&at("x", i), w.len());
                    let ltl_val = eval_ltl_fin(&f, w, i).map_err(|e| e.to_string())?;
                    if fo_val != ltl_val {
                        return Err(format!("{f} vs {g}: disagreement on {w} at {i}"));
                    }
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_03_normal_form_engine() {
    run(3, Some(Duration::from_secs(300)), || {
        let mut rng = corpus::seeded(3);
        let ab = sigma(&AB);
        let words = enumerate_words(&ab, 4);
        for _ in 0..100 {
            let f = corpus::gen_cosafetyfo(&mut rng, 6, &AB);
            let nf = normal_form(&f, BUDGET).map_err(|e| format!("{f}: {e}"))?;
            check_invariants(&nf).map_err(|e| format!("{f}: {e}"))?;
            for w in &words {
                for i in 0..w.len() {
                    let direct =
                        eval_fo_fin(&f, w, &at("x", i)).map_err(|e| e.to_string())?;
                    let packed =
                        eval_normal_form(&nf, w, &at("x", i)).map_err(|e| e.to_string())?;
                    if direct != packed {
                        return Err(format!("{f}: disagreement on {w} at {i}"));
                    }
                }
            }
        }
        Ok(())
    });
}

fn contains_weak_next(f: &Formula) -> bool {
    use Formula::*;
    match f {
        True | False | Atom(_) => false,
        WeakNext(_) => true,
        Not(a) | Next(a) | Yesterday(a) | WeakYesterday(a) | Eventually(a) | Globally(a)
        | Once(a) | Historically(a) => contains_weak_next(a),
        And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b) | Since(a, b)
        | Triggered(a, b) => contains_weak_next(a) || contains_weak_next(b),
    }
}

#[test]
fn criterion_04_kamp_style_round_trip() {
    run(4, None, || {
        let mut rng = corpus::seeded(4);
        let ab = sigma(&AB);
        for _ in 0..100 {
            let f = corpus::gen_cosafety_nowx(&mut rng, 7, &AB);
            let g = ltl_to_fo(&f, "x", Semantics::Finite).map_err(|e| format!("{f}: {e}"))?;
            let back = cosafetyfo_to_ltl(&g, BUDGET).map_err(|e| format!("{f}: {e}"))?;
            if contains_weak_next(&back) {
                return Err(format!("{f}: round trip {back} contains a weak tomorrow"));
            }
            let report = lang_equiv_fin(
                &LangSpec::Ltl(f.clone()),
                &LangSpec::Ltl(back.clone()),
                &ab,
                5,
                PositionPolicy::AtZero,
            )
            .map_err(|e| e.to_string())?;
            if !report.passed() {
                return Err(format!(
                    "{f} vs {back}: {}",
                    report.counterexample.unwrap()
                ));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_05_prefix_extension_property() {
    run(5, None, || {
        let mut rng = corpus::seeded(4);
        let ab = sigma(&AB);
        for _ in 0..100 {
            let f = corpus::gen_cosafety_nowx(&mut rng, 7, &AB);
            let report = prefix_closure_check(&f, &ab, 4, 2);
            if !report.passed() {
                return Err(format!(
                    "{f}: extension property failed, {}",
                    report.counterexample.unwrap()
                ));
            }
        }
        let probe = parse_ltl("a & X(a & wX false)", None).unwrap();
        let report = prefix_closure_check(&probe, &sigma(&["a"]), 4, 2);
        if report.passed() {
            return Err(format!("{probe}: extension property unexpectedly holds"));
        }
        let expected = Counterexample::Extension {
            word: Word::parse("{a};{a}", None).unwrap(),
            extension: Word::parse("{a}", None).unwrap(),
        };
        match report.counterexample {
            Some(ref c) if *c == expected => Ok(()),
            other => Err(format!("{probe}: wrong counterexample {other:?}")),
        }
    });
}

#[test]
fn criterion_06_separation_witness() {
    run(6, None, || {
        let phi = parse_ltl("a & X(a & wX false)", None).unwrap();
        let lang: Vec<String> = enumerate_words(&sigma(&["a"]), 4)
            .into_iter()
            .filter(|w| eval_ltl_fin(&phi, w, 0).unwrap())
            .map(|w| w.to_string())
            .collect();
        if lang != ["{a};{a}"] {
            return Err(format!("finite language within length 4 is {lang:?}"));
        }
        let report = separation_witness_aa();
        if !report.passed() {
            return Err(format!(
                "witness check failed: {:?}",
                report.counterexample
            ));
        }
        Ok(())
    });
}

#[test]
fn criterion_07_weak_tomorrow_on_lassos() {
    run(7, None, || {
        let mut rng = corpus::seeded(7);
        let lassos = enumerate_lassos(&sigma(&["a"]), 4);
        for _ in 0..200 {
            let f = corpus::gen_pure_future(&mut rng, 8, &["a"]);
            let g = weak_next_to_next(&f);
            for l in &lassos {
                for i in 0..l.prefix.len() + l.cycle.len() {
                    let a = eval_ltl_lasso(&f, l, i).map_err(|e| e.to_string())?;
                    let b = eval_ltl_lasso(&g, l, i).map_err(|e| e.to_string())?;
                    if a != b {
                        return Err(format!("{f} vs {g}: disagreement on {l} at {i}"));
                    }
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_08_mirror_reverses_evaluation() {
    run(8, None, || {
        let mut rng = corpus::seeded(8);
        let words = enumerate_words(&sigma(&AB), 5);
        for _ in 0..200 {
            let f = corpus::gen_pure_past(&mut rng, 8, &AB);
            let m = mirror(&f).map_err(|e| format!("{f}: {e}"))?;
            for w in &words {
                let mut states = w.states().to_vec();
                states.reverse();
                let rev = Word::new(states).unwrap();
                let at_end = eval_ltl_fin(&f, w, w.len() - 1).map_err(|e| e.to_string())?;
                let at_start = eval_ltl_fin(&m, &rev, 0).map_err(|e| e.to_string())?;
                if at_end != at_start {
                    return Err(format!("{f} vs {m}: disagreement on {w}"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_09_bounded_quantifier_bridge() {
    run(9, None, || {
        let mut rng = corpus::seeded(9);
        let lassos = enumerate_lassos(&sigma(&AB), 4);
        for _ in 0..100 {
            let f = corpus::gen_cosafetyfo(&mut rng, 6, &AB);
            let e = cosafetyfo_to_ebfo(&f).map_err(|err| format!("{f}: {err}"))?;
            if !classify_fo(&e).holds(FragmentId::Ebfo) {
                return Err(format!("{f}: image {e} is not a bounded sentence"));
            }
            if e.size() > 10 * f.size() + 30 {
                return Err(format!(
                    "{f}: sentence size {} exceeds 10 * {} + 30",
                    e.size(),
                    f.size()
                ));
            }
            let b = ebfo_to_cosafetyfo(&e, "v").map_err(|err| format!("{f}: {err}"))?;
            if !classify_fo(&b).holds(FragmentId::CosafetyFo) {
                return Err(format!("{f}: image {b} left the guarded fragment"));
            }
            if b.size() > 4 * e.size() + 10 {
                return Err(format!(
                    "{f}: return size {} exceeds 4 * {} + 10",
                    b.size(),
                    e.size()
                ));
            }
            for l in &lassos {
                let va = eval_cosafetyfo_lasso(&f, l, &at("x", 0), 8)
                    .map_err(|err| err.to_string())?;
                let vb = eval_cosafetyfo_lasso(&b, l, &at("v", 0), 8)
                    .map_err(|err| err.to_string())?;
                if va != vb {
                    return Err(format!("{f} vs {b}: {va:?} vs {vb:?} on {l}"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_10_fo_prefix_closure() {
    run(10, None, || {
        let mut rng = corpus::seeded(10);
        let ab = sigma(&AB);
        let words = enumerate_words(&ab, 5);
        for _ in 0..100 {
            let f = corpus::gen_fo_one_free(&mut rng, 7, &AB);
            let g = fo_to_cosafetyfo(&f, "x").map_err(|e| format!("{f}: {e}"))?;
            // membership of each word, memoised so each prefix is evaluated once
            let mut holds: std::collections::HashMap<String, bool> = Default::default();
            for w in &words {
                let closed = {
                    let table = eval_fo_table(&g, w);
                    table.get(&at("x", 0), w.len())
                };
                let mut some_prefix = false;
                for p in 1..=w.len() {
                    let prefix = w.prefix(p);
                    let key = prefix.to_string();
                    let hit = *holds.entry(key).or_insert_with(|| {
                        eval_fo_table(&f, &prefix).get(&at("x", 0), prefix.len())
                    });
                    if hit {
                        some_prefix = true;
                        break;
                    }
                }
                if closed != some_prefix {
                    return Err(format!(
                        "{f}: image {g} disagrees with prefix search on {w}"
                    ));
                }
            }
        }
        Ok(())
    });
}
