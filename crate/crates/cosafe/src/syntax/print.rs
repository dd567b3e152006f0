//! Display implementations emitting the same surface syntax the parsers
//! accept, with minimal parentheses.

use super::{FoFormula, Formula};
use std::fmt;

// precedence levels: -> 0, | 1, & 2, U/R/S/T 3, unary 4, atoms 5
fn ltl_prec(f: &Formula) -> u8 {
    use Formula::*;
    match f {
        Implies(_, _) => 0,
        Or(_, _) => 1,
        And(_, _) => 2,
        Until(_, _) | Release(_, _) | Since(_, _) | Triggered(_, _) => 3,
        Not(_) | Next(_) | WeakNext(_) | Yesterday(_) | WeakYesterday(_) | Eventually(_)
        | Globally(_) | Once(_) | Historically(_) => 4,
        True | False | Atom(_) => 5,
    }
}

fn write_ltl(f: &Formula, ctx: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    use Formula::*;
    let prec = ltl_prec(f);
    if prec < ctx {
        write!(out, "(")?;
        write_ltl(f, 0, out)?;
        return write!(out, ")");
    }
    match f {
        True => write!(out, "true"),
        False => write!(out, "false"),
        Atom(p) => write!(out, "{p}"),
        Not(a) => write_ltl_unary("!", a, out),
        Next(a) => write_ltl_unary("X", a, out),
        WeakNext(a) => write_ltl_unary("wX", a, out),
        Yesterday(a) => write_ltl_unary("Y", a, out),
        WeakYesterday(a) => write_ltl_unary("Z", a, out),
        Eventually(a) => write_ltl_unary("F", a, out),
        Globally(a) => write_ltl_unary("G", a, out),
        Once(a) => write_ltl_unary("O", a, out),
        Historically(a) => write_ltl_unary("H", a, out),
        Until(a, b) => write_ltl_binary(a, "U", b, prec, out),
        Release(a, b) => write_ltl_binary(a, "R", b, prec, out),
        Since(a, b) => write_ltl_binary(a, "S", b, prec, out),
        Triggered(a, b) => write_ltl_binary(a, "T", b, prec, out),
        And(a, b) => {
            // left associative: the right operand needs the tighter context
            write_ltl(a, prec, out)?;
            write!(out, " & ")?;
            write_ltl(b, prec + 1, out)
        }
        Or(a, b) => {
            write_ltl(a, prec, out)?;
            write!(out, " | ")?;
            write_ltl(b, prec + 1, out)
        }
        Implies(a, b) => {
            write_ltl(a, prec + 1, out)?;
            write!(out, " -> ")?;
            write_ltl(b, prec, out)
        }
    }
}

fn write_ltl_binary(
    a: &Formula,
    op: &str,
    b: &Formula,
    prec: u8,
    out: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    // right associative
    write_ltl(a, prec + 1, out)?;
    write!(out, " {op} ")?;
    write_ltl(b, prec, out)
}

fn write_ltl_unary(op: &str, child: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if ltl_prec(child) < 4 {
        write!(out, "{op}(")?;
        write_ltl(child, 0, out)?;
        write!(out, ")")
    } else {
        // temporal operators take a space before an unparenthesized operand
        let sep = if op == "!" { "" } else { " " };
        write!(out, "{op}{sep}")?;
        write_ltl(child, 4, out)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ltl(self, 0, out)
    }
}

// precedence levels: -> and quantifiers 0, | 1, & 2, ! 3, atoms 4
fn fo_prec(f: &FoFormula) -> u8 {
    use FoFormula::*;
    match f {
        Implies(_, _) | Exists(_, _) | Forall(_, _) => 0,
        Or(_, _) => 1,
        And(_, _) => 2,
        Not(_) => 3,
        True | False | Less(_, _) | Eq(_, _) | Neq(_, _) | Pred(_, _) | NegPred(_, _) => 4,
    }
}

fn write_fo(f: &FoFormula, ctx: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    use FoFormula::*;
    let prec = fo_prec(f);
    if prec < ctx {
        write!(out, "(")?;
        write_fo(f, 0, out)?;
        return write!(out, ")");
    }
    match f {
        True => write!(out, "true"),
        False => write!(out, "false"),
        Less(a, b) => write!(out, "{a} < {b}"),
        Eq(a, b) => write!(out, "{a} = {b}"),
        Neq(a, b) => write!(out, "{a} != {b}"),
        Pred(p, v) => write!(out, "{p}({v})"),
        NegPred(p, v) => write!(out, "!{p}({v})"),
        Not(a) => {
            // always parenthesized: the only unparenthesized operands would
            // be order atoms, which read ambiguously after a bang
            write!(out, "!(")?;
            write_fo(a, 0, out)?;
            write!(out, ")")
        }
        And(a, b) => {
            write_fo(a, prec, out)?;
            write!(out, " & ")?;
            write_fo(b, prec + 1, out)
        }
        Or(a, b) => {
            write_fo(a, prec, out)?;
            write!(out, " | ")?;
            write_fo(b, prec + 1, out)
        }
        Implies(a, b) => {
            write_fo(a, prec + 1, out)?;
            write!(out, " -> ")?;
            write_fo(b, prec, out)
        }
        Exists(v, b) => {
            write!(out, "exists {v} . ")?;
            write_fo(b, 0, out)
        }
        Forall(v, b) => {
            write!(out, "forall {v} . ")?;
            write_fo(b, 0, out)
        }
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_fo(self, 0, out)
    }
}
