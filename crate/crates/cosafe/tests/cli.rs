//! End-to-end runs of the binary: golden outputs, exit codes, and the
//! reparse guarantee for translated formulas.

use std::process::Command;

use cosafe::syntax::{parse_fo, parse_ltl};

fn cosafe(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cosafe"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

#[test]
fn parse_prints_the_canonical_form() {
    let (code, stdout, _) = cosafe(&["parse", "a U (b & X a)"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "a U (b & X a)\n");

    let (code, stdout, _) = cosafe(&["--format", "structured", "parse", "(a)"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "formula: a\nsize: 1\nverdict: ok\n");
}

#[test]
fn parse_errors_exit_with_usage_status() {
    let (code, stdout, stderr) = cosafe(&["parse", "a U"]);
    assert_eq!(code, 2);
    assert_eq!(stdout, "");
    assert!(stderr.contains("parse error"), "{stderr}");
}

#[test]
fn unknown_flags_exit_with_usage_status() {
    let (code, _, _) = cosafe(&["parse", "--definitely-not-a-flag", "a"]);
    assert_eq!(code, 2);
}

#[test]
fn translate_matches_the_documented_encoding() {
    let (code, stdout, _) = cosafe(&[
        "translate",
        "--from",
        "ltl",
        "--to",
        "cosafetyfo",
        "--semantics",
        "finite",
        "a U b",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "exists y . (x < y | x = y) & b(y) & (forall z . (x < z | x = z) & z < y -> a(z))\n"
    );
}

#[test]
fn translated_formulas_reparse_to_equal_trees() {
    for (args, fo_output) in [
        (
            vec!["translate", "--from", "ltl", "--to", "cosafetyfo", "a U (b & X a)"],
            true,
        ),
        (
            vec!["translate", "--from", "ltl", "--to", "cosafety-fin", "G (a -> F b)"],
            false,
        ),
        (
            vec!["translate", "--from", "ltl", "--to", "safety-fin", "G (a -> F b)"],
            false,
        ),
        (
            vec![
                "translate",
                "--from",
                "cosafetyfo",
                "--to",
                "cosafetyltl-nowx",
                "exists y . x < y & b(y)",
            ],
            false,
        ),
        (
            vec![
                "translate",
                "--from",
                "cosafetyfo",
                "--to",
                "ebfo",
                "exists y . x < y & b(y)",
            ],
            true,
        ),
    ] {
        let shown = args.join(" ");
        let (code, stdout, stderr) = cosafe(&args);
        assert_eq!(code, 0, "`{shown}`: {stderr}");
        let printed = stdout.trim_end();
        if fo_output {
            let f = parse_fo(printed, None).unwrap_or_else(|e| panic!("`{shown}`: {e}"));
            assert_eq!(f.to_string(), printed, "`{shown}`");
        } else {
            let f = parse_ltl(printed, None).unwrap_or_else(|e| panic!("`{shown}`: {e}"));
            assert_eq!(f.to_string(), printed, "`{shown}`");
        }
    }
}

#[test]
fn translate_rejects_formulas_outside_the_fragment() {
    let (code, _, stderr) = cosafe(&["translate", "--from", "ltl", "--to", "cosafetyfo", "a R b"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("cosafetyLTL-no-wX"), "{stderr}");
}

#[test]
fn translate_rejects_unsupported_direction() {
    let (code, _, stderr) = cosafe(&["translate", "--from", "ebfo", "--to", "ebfo", "true"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("no translation"), "{stderr}");
}

#[test]
fn eval_answers_on_words_and_lassos() {
    let (code, stdout, _) = cosafe(&["eval", "--word", "{a};{a}", "a & X(a & wX false)"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "true\n");

    let (code, stdout, _) = cosafe(&["eval", "--word", "{a};{a};{}", "a & X(a & wX false)"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "false\n");

    let (code, stdout, _) = cosafe(&["eval", "--lasso", "{a} | {b}", "--position", "3", "G b"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "true\n");

    let (code, stdout, _) = cosafe(&[
        "--format",
        "structured",
        "eval",
        "--fo",
        "--word",
        "{a};{a,b}",
        "--assign",
        "x=0",
        "exists y . x < y & b(y)",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "value: true\nverdict: ok\n");
}

#[test]
fn check_equiv_reports_the_verdict_through_the_exit_code() {
    let (code, stdout, _) = cosafe(&["check-equiv", "--max-len", "5", "G a", "a U (a & wX false)"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "equivalent up to length 5\n");

    let (code, stdout, _) = cosafe(&["--format", "structured", "check-equiv", "--max-len", "3", "a", "b"]);
    assert_eq!(code, 1);
    assert_eq!(
        stdout,
        "alphabet: {a,b}\nmax-len: 3\nwords-explored: 2\ncounterexample: {a} at 0\nverdict: counterexample\n"
    );
}

#[test]
fn prefix_closure_flags_the_separating_formula() {
    let (code, stdout, _) = cosafe(&["prefix-closure", "a U b"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("stays satisfying"), "{stdout}");

    let (code, stdout, _) = cosafe(&["prefix-closure", "a & X(a & wX false)"]);
    assert_eq!(code, 1);
    assert_eq!(stdout, "violated: {a};{a} extended by {a}\n");
}

#[test]
fn normal_form_prints_the_chain_report() {
    let (code, stdout, _) = cosafe(&["normal-form", "exists y . x < y & p(y)"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "free: x\ndisjuncts: 1\ndisjunct 0:\n  vars: 2\n  bind: x=x0\n  alpha: [true, p]\n  beta: [true]\n"
    );
}

#[test]
fn enumerate_lang_lists_the_exact_language() {
    let (code, stdout, _) = cosafe(&[
        "--format",
        "structured",
        "enumerate-lang",
        "--max-len",
        "4",
        "a & X(a & wX false)",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "{a};{a}\ncount: 1\nverdict: ok\n");
}

#[test]
fn witness_subcommand_passes() {
    let (code, stdout, _) = cosafe(&["--format", "structured", "witness-aa"]);
    assert_eq!(code, 0);
    assert!(stdout.ends_with("verdict: property-holds-up-to-bound\n"), "{stdout}");
}

#[test]
fn formulas_can_be_read_from_files() {
    let dir = std::env::temp_dir().join("cosafe-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("formula.ltl");
    std::fs::write(&path, "a U b\n").unwrap();
    let arg = format!("@{}", path.display());
    let (code, stdout, _) = cosafe(&["parse", &arg]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "a U b\n");
    std::fs::remove_file(&path).unwrap();
}
