//! Batch command line front end. One subcommand per library operation, two
//! output shapes (plain text and the line-oriented `key: value` report),
//! and exit codes fit for scripting: 0 for success or a passing check, 1
//! for a counterexample or violated property, 2 for usage and fragment
//! errors. A formula argument of the form `@path` is read from a file.

use std::collections::BTreeSet;

use clap::{Parser, Subcommand, ValueEnum};

use crate::check::{
    enumerate_words, lang_equiv_fin, prefix_closure_check, separation_witness_aa, CheckReport,
    LangSpec, PositionPolicy,
};
use crate::corpus;
use crate::fragments::{classify_fo, classify_ltl, FragmentId};
use crate::semantics::{
    eval_cosafetyfo_lasso, eval_fo_fin, eval_fo_table, eval_ltl_fin, eval_ltl_lasso, Assignment,
    BoundedVerdict, LassoWord, Word,
};
use crate::syntax::{mirror, parse_fo, parse_ltl, weak_next_to_next, FoFormula, Formula};
use crate::translate::{
    check_invariants, cosafetyfo_to_ebfo, cosafetyfo_to_ltl, ebfo_to_cosafetyfo,
    eliminate_for_finite_to_cosafety, eliminate_for_finite_to_safety, eval_normal_form,
    fo_to_cosafetyfo, ltl_to_fo, normal_form, Semantics,
};

#[derive(Parser)]
#[command(name = "cosafe", version, about = "Safety and co-safety fragments of temporal and first-order logic on words", max_term_width = 100)]
struct Cli {
    /// Output shape: `text`, or `structured` key:value lines closed by a
    /// verdict line
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print it back in canonical syntax
    Parse {
        /// Read the input as a first-order formula
        #[arg(long)]
        fo: bool,
        formula: String,
    },
    /// Report which fragments a formula falls in
    Classify {
        /// Read the input as a first-order formula
        #[arg(long)]
        fo: bool,
        formula: String,
    },
    /// Translate between the temporal and first-order presentations
    Translate {
        #[arg(long, value_enum)]
        from: SourceKind,
        #[arg(long, value_enum)]
        to: TargetKind,
        /// Word semantics for the temporal-to-first-order direction
        #[arg(long, value_enum, default_value_t = Sem::Finite)]
        semantics: Sem,
        /// Designated free variable of the first-order side
        #[arg(long)]
        var: Option<String>,
        /// Work cap for the normal-form engine
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
        formula: String,
    },
    /// Evaluate a formula on a finite word or a lasso
    Eval {
        /// Read the input as a first-order formula
        #[arg(long)]
        fo: bool,
        /// Finite word, e.g. `{a};{a,b};{}`
        #[arg(long)]
        word: Option<String>,
        /// Lasso presentation `u | v` of an ultimately periodic word
        #[arg(long)]
        lasso: Option<String>,
        /// Evaluation position for temporal formulas
        #[arg(long, default_value_t = 0)]
        position: usize,
        /// First-order assignment, e.g. `x=0,y=2`
        #[arg(long)]
        assign: Option<String>,
        /// Prefix bound for first-order evaluation on a lasso
        #[arg(long, default_value_t = 8)]
        bound: usize,
        formula: String,
    },
    /// Compare two formulas on every word up to a length bound
    CheckEquiv {
        /// Read both inputs as first-order formulas
        #[arg(long)]
        fo: bool,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
        /// Comma-separated alphabet; defaults to the letters of the inputs
        #[arg(long)]
        alphabet: Option<String>,
        /// Compare at every position instead of position 0 only
        #[arg(long)]
        all_positions: bool,
        left: String,
        right: String,
    },
    /// Check that satisfaction survives every extension of a word
    PrefixClosure {
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 2)]
        max_ext: usize,
        /// Comma-separated alphabet; defaults to the letters of the input
        #[arg(long)]
        alphabet: Option<String>,
        formula: String,
    },
    /// Compile a guarded first-order formula to the packed chain form
    NormalForm {
        /// Work cap for the normal-form engine
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
        formula: String,
    },
    /// List every finite word a formula accepts up to a length bound
    EnumerateLang {
        /// Read the input as a first-order formula
        #[arg(long)]
        fo: bool,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        /// Comma-separated alphabet; defaults to the letters of the input
        #[arg(long)]
        alphabet: Option<String>,
        formula: String,
    },
    /// Run the packaged two-letter separation example
    WitnessAa,
    /// Regenerate the random corpora and re-run the bundled invariants
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceKind {
    Ltl,
    Cosafetyfo,
    Fo,
    Ebfo,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetKind {
    Cosafetyfo,
    CosafetyltlNowx,
    Ebfo,
    CosafetyfoPrefix,
    CosafetyFin,
    SafetyFin,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sem {
    Finite,
    Infinite,
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let format = cli.format;
    match dispatch(cli.command, format) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn formula_text(arg: &str) -> Result<String, String> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| format!("{path}: {e}")),
        None => Ok(arg.to_string()),
    }
}

fn ltl(arg: &str) -> Result<Formula, String> {
    parse_ltl(&formula_text(arg)?, None).map_err(|e| e.to_string())
}

fn fo(arg: &str) -> Result<FoFormula, String> {
    parse_fo(&formula_text(arg)?, None).map_err(|e| e.to_string())
}

fn parse_alphabet(flag: &Option<String>, inferred: BTreeSet<String>) -> BTreeSet<String> {
    match flag {
        Some(s) => s
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(str::to_string)
            .collect(),
        None => inferred,
    }
}

fn parse_assignment(flag: &Option<String>) -> Result<Assignment, String> {
    let mut asg = Assignment::new();
    let Some(s) = flag else { return Ok(asg) };
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (var, pos) = part
            .split_once('=')
            .ok_or_else(|| format!("malformed assignment `{part}`, expected `var=position`"))?;
        let pos = pos
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("malformed position in `{part}`: {e}"))?;
        asg.insert(var.trim().to_string(), pos);
    }
    Ok(asg)
}

fn unique_free_var(f: &FoFormula) -> Result<String, String> {
    let free = f.free_vars();
    if free.len() == 1 {
        return Ok(free.into_iter().next().unwrap());
    }
    Err(format!(
        "expected exactly one free variable, found {{{}}}",
        free.into_iter().collect::<Vec<_>>().join(",")
    ))
}

/// Print a finished report and turn its verdict into an exit code.
fn finish_report(report: &CheckReport, format: Format, text: String) -> i32 {
    match format {
        Format::Text => println!("{text}"),
        Format::Structured => print!("{}", report.structured()),
    }
    if report.passed() {
        0
    } else {
        1
    }
}

fn dispatch(command: Command, format: Format) -> Result<i32, String> {
    match command {
        Command::Parse { fo: as_fo, formula } => {
            let (printed, size) = if as_fo {
                let f = fo(&formula)?;
                (f.to_string(), f.size())
            } else {
                let f = ltl(&formula)?;
                (f.to_string(), f.size())
            };
            match format {
                Format::Text => println!("{printed}"),
                Format::Structured => {
                    println!("formula: {printed}");
                    println!("size: {size}");
                    println!("verdict: ok");
                }
            }
            Ok(0)
        }
        Command::Classify { fo: as_fo, formula } => {
            let verdict = if as_fo {
                classify_fo(&fo(&formula)?)
            } else {
                classify_ltl(&ltl(&formula)?)
            };
            for (id, v) in &verdict.entries {
                match &v.offender {
                    None => println!("{id}: yes"),
                    Some(off) => println!("{id}: no, offender {off}"),
                }
            }
            for (id, v) in &verdict.raw_entries {
                match &v.offender {
                    None => println!("{id} as written: yes"),
                    Some(off) => println!("{id} as written: no, offender {off}"),
                }
            }
            if format == Format::Structured {
                println!("verdict: ok");
            }
            Ok(0)
        }
        Command::Translate {
            from,
            to,
            semantics,
            var,
            budget,
            formula,
        } => {
            let sem = match semantics {
                Sem::Finite => Semantics::Finite,
                Sem::Infinite => Semantics::Infinite,
            };
            let (input, output) = match (from, to) {
                (SourceKind::Ltl, TargetKind::CosafetyFin) => {
                    let f = ltl(&formula)?;
                    let g = eliminate_for_finite_to_cosafety(&f).map_err(|e| e.to_string())?;
                    (f.to_string(), g.to_string())
                }
                (SourceKind::Ltl, TargetKind::SafetyFin) => {
                    let f = ltl(&formula)?;
                    let g = eliminate_for_finite_to_safety(&f).map_err(|e| e.to_string())?;
                    (f.to_string(), g.to_string())
                }
                (SourceKind::Ltl, TargetKind::Cosafetyfo) => {
                    let f = ltl(&formula)?;
                    let v = var.unwrap_or_else(|| "x".to_string());
                    let g = ltl_to_fo(&f, &v, sem).map_err(|e| e.to_string())?;
                    (f.to_string(), g.to_string())
                }
                (SourceKind::Fo, TargetKind::Cosafetyfo) => {
                    let f = fo(&formula)?;
                    let v = match var {
                        Some(v) => v,
                        None => unique_free_var(&f)?,
                    };
                    let g = fo_to_cosafetyfo(&f, &v).map_err(|e| e.to_string())?;
                    (f.to_string(), g.to_string())
                }
                (SourceKind::Cosafetyfo, TargetKind::CosafetyltlNowx) => {
                    let f = fo(&formula)?;
                    let g = cosafetyfo_to_ltl(&f, budget).map_err(|e| e.to_string())?;
                    (f.to_string(), g.to_string())
                }
                (SourceKind::Cosafetyfo, TargetKind::Ebfo) => {
                    let f = fo(&formula)?;
                    let g = cosafetyfo_to_ebfo(&f).map_err(|e| e.to_string())?;
                    (f.to_string(), g.to_string())
                }
                (SourceKind::Ebfo, TargetKind::CosafetyfoPrefix) => {
                    let f = fo(&formula)?;
                    let v = var.unwrap_or_else(|| "v".to_string());
                    let g = ebfo_to_cosafetyfo(&f, &v).map_err(|e| e.to_string())?;
                    (f.to_string(), g.to_string())
                }
                _ => {
                    return Err(format!(
                        "no translation from `{}` to `{}`",
                        from.to_possible_value().unwrap().get_name(),
                        to.to_possible_value().unwrap().get_name()
                    ))
                }
            };
            match format {
                Format::Text => println!("{output}"),
                Format::Structured => {
                    println!("input: {input}");
                    println!("output: {output}");
                    println!("verdict: ok");
                }
            }
            Ok(0)
        }
        Command::Eval {
            fo: as_fo,
            word,
            lasso,
            position,
            assign,
            bound,
            formula,
        } => {
            let mut lines = Vec::new();
            let value = match (as_fo, &word, &lasso) {
                (false, Some(w), None) => {
                    let f = ltl(&formula)?;
                    let w = Word::parse(w, None).map_err(|e| e.to_string())?;
                    eval_ltl_fin(&f, &w, position).map_err(|e| e.to_string())?
                }
                (false, None, Some(l)) => {
                    let f = ltl(&formula)?;
                    let l = LassoWord::parse(l, None).map_err(|e| e.to_string())?;
                    eval_ltl_lasso(&f, &l, position).map_err(|e| e.to_string())?
                }
                (true, Some(w), None) => {
                    let f = fo(&formula)?;
                    let w = Word::parse(w, None).map_err(|e| e.to_string())?;
                    let asg = parse_assignment(&assign)?;
                    eval_fo_fin(&f, &w, &asg).map_err(|e| e.to_string())?
                }
                (true, None, Some(l)) => {
                    let f = fo(&formula)?;
                    let l = LassoWord::parse(l, None).map_err(|e| e.to_string())?;
                    let asg = parse_assignment(&assign)?;
                    match eval_cosafetyfo_lasso(&f, &l, &asg, bound).map_err(|e| e.to_string())? {
                        BoundedVerdict::TrueWithPrefix(n) => {
                            lines.push(format!("witness-prefix: {n}"));
                            true
                        }
                        BoundedVerdict::UnknownAt(k) => {
                            match format {
                                Format::Text => println!("unknown up to prefix length {k}"),
                                Format::Structured => {
                                    println!("value: unknown");
                                    println!("bound: {k}");
                                    println!("verdict: ok");
                                }
                            }
                            return Ok(0);
                        }
                    }
                }
                _ => return Err("pass exactly one of --word and --lasso".to_string()),
            };
            match format {
                Format::Text => println!("{value}"),
                Format::Structured => {
                    println!("value: {value}");
                    for line in lines {
                        println!("{line}");
                    }
                    println!("verdict: ok");
                }
            }
            Ok(0)
        }
        Command::CheckEquiv {
            fo: as_fo,
            max_len,
            alphabet,
            all_positions,
            left,
            right,
        } => {
            let (l, r, inferred) = if as_fo {
                let l = fo(&left)?;
                let r = fo(&right)?;
                let sigma: BTreeSet<String> =
                    l.letters().union(&r.letters()).cloned().collect();
                (LangSpec::Fo(l), LangSpec::Fo(r), sigma)
            } else {
                let l = ltl(&left)?;
                let r = ltl(&right)?;
                let sigma: BTreeSet<String> = l.atoms().union(&r.atoms()).cloned().collect();
                (LangSpec::Ltl(l), LangSpec::Ltl(r), sigma)
            };
            let sigma = parse_alphabet(&alphabet, inferred);
            let policy = if all_positions {
                PositionPolicy::AllPositions
            } else {
                PositionPolicy::AtZero
            };
            let report =
                lang_equiv_fin(&l, &r, &sigma, max_len, policy).map_err(|e| e.to_string())?;
            let text = if report.passed() {
                format!("equivalent up to length {max_len}")
            } else {
                format!(
                    "not equivalent: {}",
                    report.counterexample.as_ref().unwrap()
                )
            };
            Ok(finish_report(&report, format, text))
        }
        Command::PrefixClosure {
            max_len,
            max_ext,
            alphabet,
            formula,
        } => {
            let f = ltl(&formula)?;
            let sigma = parse_alphabet(&alphabet, f.atoms());
            let report = prefix_closure_check(&f, &sigma, max_len, max_ext);
            let text = if report.passed() {
                format!("every satisfying word stays satisfying up to length {max_len} plus {max_ext}")
            } else {
                format!("violated: {}", report.counterexample.as_ref().unwrap())
            };
            Ok(finish_report(&report, format, text))
        }
        Command::NormalForm { budget, formula } => {
            let f = fo(&formula)?;
            let nf = normal_form(&f, budget).map_err(|e| e.to_string())?;
            print!("{nf}");
            if format == Format::Structured {
                println!("verdict: ok");
            }
            Ok(0)
        }
        Command::EnumerateLang {
            fo: as_fo,
            max_len,
            alphabet,
            formula,
        } => {
            let mut count = 0usize;
            if as_fo {
                let f = fo(&formula)?;
                let v = unique_free_var(&f)?;
                let sigma = parse_alphabet(&alphabet, f.letters());
                for w in enumerate_words(&sigma, max_len) {
                    let table = eval_fo_table(&f, &w);
                    let mut asg = Assignment::new();
                    asg.insert(v.clone(), 0);
                    if table.get(&asg, w.len()) {
                        println!("{w}");
                        count += 1;
                    }
                }
            } else {
                let f = ltl(&formula)?;
                let sigma = parse_alphabet(&alphabet, f.atoms());
                for w in enumerate_words(&sigma, max_len) {
                    if eval_ltl_fin(&f, &w, 0).map_err(|e| e.to_string())? {
                        println!("{w}");
                        count += 1;
                    }
                }
            }
            if format == Format::Structured {
                println!("count: {count}");
                println!("verdict: ok");
            }
            Ok(0)
        }
        Command::WitnessAa => {
            let report = separation_witness_aa();
            Ok(finish_report(&report, format, report.to_string()))
        }
        Command::Selftest { seed } => selftest(seed, format),
    }
}

/// A fixed batch of the library's oracle invariants on fresh seeded
/// corpora, sized to finish in seconds. The acceptance suite runs the same
/// properties at full scale.
fn selftest(seed: u64, format: Format) -> Result<i32, String> {
    let suites: Vec<(&str, fn(u64) -> Result<usize, String>)> = vec![
        ("elimination laws", st_eliminations),
        ("temporal to first-order", st_ltl_to_fo),
        ("normal-form engine", st_normal_form),
        ("first-order round trip", st_round_trip),
        ("strong and weak tomorrow on lassos", st_lasso),
        ("mirror", st_mirror),
        ("bounded-quantifier bridge", st_ebfo),
    ];
    let mut failed = false;
    for (name, suite) in suites {
        match suite(seed) {
            Ok(n) => println!("{name}: ok ({n} formulas)"),
            Err(msg) => {
                failed = true;
                println!("{name}: FAILED, {msg}");
            }
        }
    }
    let code = if failed { 1 } else { 0 };
    if format == Format::Structured {
        println!("verdict: {}", if failed { "failed" } else { "ok" });
    }
    Ok(code)
}

const AB: [&str; 2] = ["a", "b"];

fn ab_set() -> BTreeSet<String> {
    AB.iter().map(|s| s.to_string()).collect()
}

fn st_eliminations(seed: u64) -> Result<usize, String> {
    let mut rng = corpus::seeded(seed.wrapping_add(1));
    let sigma = ab_set();
    for _ in 0..30 {
        let f = corpus::gen_pure_future(&mut rng, 8, &AB);
        for g in [
            eliminate_for_finite_to_cosafety(&f).map_err(|e| format!("{f}: {e}"))?,
            eliminate_for_finite_to_safety(&f).map_err(|e| format!("{f}: {e}"))?,
        ] {
            let report = lang_equiv_fin(
                &LangSpec::Ltl(f.clone()),
                &LangSpec::Ltl(g.clone()),
                &sigma,
                4,
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
    Ok(30)
}

fn st_ltl_to_fo(seed: u64) -> Result<usize, String> {
    let mut rng = corpus::seeded(seed.wrapping_add(2));
    let sigma = ab_set();
    for _ in 0..30 {
        let f = corpus::gen_cosafety_nowx(&mut rng, 7, &AB);
        let g = ltl_to_fo(&f, "x", Semantics::Finite).map_err(|e| format!("{f}: {e}"))?;
        for w in enumerate_words(&sigma, 4) {
            let table = eval_fo_table(&g, &w);
            for i in 0..w.len() {
                let mut asg = Assignment::new();
                asg.insert("x".to_string(), i);
                let fo_val = table.get(&asg, w.len());
                let ltl_val = eval_ltl_fin(&f, &w, i).map_err(|e| e.to_string())?;
                if fo_val != ltl_val {
                    return Err(format!("{f} vs {g} on {w} at {i}"));
                }
            }
        }
    }
    Ok(30)
}

fn st_normal_form(seed: u64) -> Result<usize, String> {
    let mut rng = corpus::seeded(seed.wrapping_add(3));
    let sigma = ab_set();
    for _ in 0..20 {
        let f = corpus::gen_cosafetyfo(&mut rng, 6, &AB);
        let nf = normal_form(&f, 1_000_000).map_err(|e| format!("{f}: {e}"))?;
        check_invariants(&nf).map_err(|e| format!("{f}: {e}"))?;
        for w in enumerate_words(&sigma, 3) {
            for i in 0..w.len() {
                let mut asg = Assignment::new();
                asg.insert("x".to_string(), i);
                let direct = eval_fo_fin(&f, &w, &asg).map_err(|e| e.to_string())?;
                let packed = eval_normal_form(&nf, &w, &asg).map_err(|e| e.to_string())?;
                if direct != packed {
                    return Err(format!("{f} on {w} at {i}"));
                }
            }
        }
    }
    Ok(20)
}

fn st_round_trip(seed: u64) -> Result<usize, String> {
    let mut rng = corpus::seeded(seed.wrapping_add(4));
    let sigma = ab_set();
    for _ in 0..20 {
        let f = corpus::gen_cosafety_nowx(&mut rng, 6, &AB);
        let g = ltl_to_fo(&f, "x", Semantics::Finite).map_err(|e| format!("{f}: {e}"))?;
        let back = cosafetyfo_to_ltl(&g, 1_000_000).map_err(|e| format!("{f}: {e}"))?;
        let report = lang_equiv_fin(
            &LangSpec::Ltl(f.clone()),
            &LangSpec::Ltl(back.clone()),
            &sigma,
            4,
            PositionPolicy::AtZero,
        )
        .map_err(|e| e.to_string())?;
        if !report.passed() {
            return Err(format!("{f} vs {back}: {}", report.counterexample.unwrap()));
        }
    }
    Ok(20)
}

fn st_lasso(seed: u64) -> Result<usize, String> {
    let mut rng = corpus::seeded(seed.wrapping_add(5));
    let sigma: BTreeSet<String> = ["a".to_string()].into();
    let lassos = crate::check::enumerate_lassos(&sigma, 4);
    for _ in 0..30 {
        let f = corpus::gen_pure_future(&mut rng, 8, &["a"]);
        let g = weak_next_to_next(&f);
        for l in &lassos {
            for i in 0..l.prefix.len() + l.cycle.len() {
                let a = eval_ltl_lasso(&f, l, i).map_err(|e| e.to_string())?;
                let b = eval_ltl_lasso(&g, l, i).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!("{f} vs {g} on {l} at {i}"));
                }
            }
        }
    }
    Ok(30)
}

fn st_mirror(seed: u64) -> Result<usize, String> {
    let mut rng = corpus::seeded(seed.wrapping_add(6));
    let sigma = ab_set();
    for _ in 0..30 {
        let f = corpus::gen_pure_past(&mut rng, 8, &AB);
        let m = mirror(&f).map_err(|e| format!("{f}: {e}"))?;
        for w in enumerate_words(&sigma, 4) {
            let mut rev = w.states().to_vec();
            rev.reverse();
            let rev = Word::new(rev).unwrap();
            let at_end = eval_ltl_fin(&f, &w, w.len() - 1).map_err(|e| e.to_string())?;
            let at_start = eval_ltl_fin(&m, &rev, 0).map_err(|e| e.to_string())?;
            if at_end != at_start {
                return Err(format!("{f} vs {m} on {w}"));
            }
        }
    }
    Ok(30)
}

fn st_ebfo(seed: u64) -> Result<usize, String> {
    let mut rng = corpus::seeded(seed.wrapping_add(7));
    for _ in 0..20 {
        let f = corpus::gen_cosafetyfo(&mut rng, 6, &AB);
        let e = cosafetyfo_to_ebfo(&f).map_err(|err| format!("{f}: {err}"))?;
        if !classify_fo(&e).holds(FragmentId::Ebfo) {
            return Err(format!("{f}: image {e} left the bounded fragment"));
        }
        let b = ebfo_to_cosafetyfo(&e, "v").map_err(|err| format!("{f}: {err}"))?;
        if !classify_fo(&b).holds(FragmentId::CosafetyFo) {
            return Err(format!("{f}: image {b} left the guarded fragment"));
        }
    }
    Ok(20)
}
