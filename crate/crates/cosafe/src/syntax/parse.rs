//! Hand-rolled lexer and recursive-descent parsers for the LTL and
//! first-order surface syntax.
//!
//! Operator precedence, loosest to tightest: `->` (right associative),
//! `|`, `&`, the binary temporal operators `U R S T` (right associative),
//! then the unary operators. Quantifier bodies extend as far to the right
//! as possible.

use super::{normalize_bound_vars, FoFormula, Formula};
use std::collections::BTreeSet;

#[derive(Debug, Clone, thiserror::Error)]
pub enum ParseError {
    #[error("parse error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown atom {0:?} (not in the declared alphabet)")]
    UnknownAtom(String),
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Syntax {
        line,
        col,
        msg: msg.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    KwTrue,
    KwFalse,
    KwExists,
    KwForall,
    WeakNext,
    UnaryOp(char),  // X Y Z F G O H
    BinaryOp(char), // U R S T
    Not,
    And,
    Or,
    Arrow,
    Less,
    Equal,
    NotEqual,
    LParen,
    RParen,
    Dot,
    End,
}

#[derive(Debug, Clone)]
struct Lexeme {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(input: &str) -> Result<Vec<Lexeme>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump(&mut chars);
                continue;
            }
            '(' => {
                bump(&mut chars);
                out.push(Lexeme { tok: Tok::LParen, line: tl, col: tc });
            }
            ')' => {
                bump(&mut chars);
                out.push(Lexeme { tok: Tok::RParen, line: tl, col: tc });
            }
            '.' => {
                bump(&mut chars);
                out.push(Lexeme { tok: Tok::Dot, line: tl, col: tc });
            }
            '&' => {
                bump(&mut chars);
                out.push(Lexeme { tok: Tok::And, line: tl, col: tc });
            }
            '|' => {
                bump(&mut chars);
                out.push(Lexeme { tok: Tok::Or, line: tl, col: tc });
            }
            '<' => {
                bump(&mut chars);
                out.push(Lexeme { tok: Tok::Less, line: tl, col: tc });
            }
            '=' => {
                bump(&mut chars);
                out.push(Lexeme { tok: Tok::Equal, line: tl, col: tc });
            }
            '!' => {
                bump(&mut chars);
                if chars.peek() == Some(&'=') {
                    bump(&mut chars);
                    out.push(Lexeme { tok: Tok::NotEqual, line: tl, col: tc });
                } else {
                    out.push(Lexeme { tok: Tok::Not, line: tl, col: tc });
                }
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    out.push(Lexeme { tok: Tok::Arrow, line: tl, col: tc });
                } else {
                    return err(tl, tc, "expected '->'");
                }
            }
            'A'..='Z' => {
                bump(&mut chars);
                let tok = match c {
                    'X' | 'Y' | 'Z' | 'F' | 'G' | 'O' | 'H' => Tok::UnaryOp(c),
                    'U' | 'R' | 'S' | 'T' => Tok::BinaryOp(c),
                    _ => return err(tl, tc, format!("unknown operator {c:?}")),
                };
                out.push(Lexeme { tok, line: tl, col: tc });
            }
            'a'..='z' => {
                let mut name = String::new();
                name.push(bump(&mut chars));
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                let tok = match name.as_str() {
                    "true" => Tok::KwTrue,
                    "false" => Tok::KwFalse,
                    "exists" => Tok::KwExists,
                    "forall" => Tok::KwForall,
                    "wX" => Tok::WeakNext,
                    _ => Tok::Ident(name),
                };
                out.push(Lexeme { tok, line: tl, col: tc });
            }
            _ => return err(tl, tc, format!("unexpected character {c:?}")),
        }
    }
    out.push(Lexeme { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexeme>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Lexeme {
        &self.toks[self.pos]
    }
    fn next(&mut self) -> Lexeme {
        let l = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        l
    }
    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let l = self.next();
        if l.tok == want {
            Ok(())
        } else {
            err(l.line, l.col, format!("expected {what}"))
        }
    }

    // ---- LTL ----

    fn ltl_implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.ltl_or()?;
        if self.peek().tok == Tok::Arrow {
            self.next();
            let rhs = self.ltl_implies()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ltl_or(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.ltl_and()?;
        while self.peek().tok == Tok::Or {
            self.next();
            f = Formula::or(f, self.ltl_and()?);
        }
        Ok(f)
    }

    fn ltl_and(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.ltl_binary_temporal()?;
        while self.peek().tok == Tok::And {
            self.next();
            f = Formula::and(f, self.ltl_binary_temporal()?);
        }
        Ok(f)
    }

    fn ltl_binary_temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.ltl_unary()?;
        if let Tok::BinaryOp(op) = self.peek().tok {
            self.next();
            let rhs = self.ltl_binary_temporal()?;
            let f = match op {
                'U' => Formula::until(lhs, rhs),
                'R' => Formula::release(lhs, rhs),
                'S' => Formula::since(lhs, rhs),
                _ => Formula::triggered(lhs, rhs),
            };
            Ok(f)
        } else {
            Ok(lhs)
        }
    }

    fn ltl_unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().tok.clone() {
            Tok::Not => {
                self.next();
                Ok(Formula::not(self.ltl_unary()?))
            }
            Tok::WeakNext => {
                self.next();
                Ok(Formula::weak_next(self.ltl_unary()?))
            }
            Tok::UnaryOp(op) => {
                self.next();
                let body = self.ltl_unary()?;
                Ok(match op {
                    'X' => Formula::next(body),
                    'Y' => Formula::yesterday(body),
                    'Z' => Formula::weak_yesterday(body),
                    'F' => Formula::eventually(body),
                    'G' => Formula::globally(body),
                    'O' => Formula::once(body),
                    _ => Formula::historically(body),
                })
            }
            _ => self.ltl_primary(),
        }
    }

    fn ltl_primary(&mut self) -> Result<Formula, ParseError> {
        let l = self.next();
        match l.tok {
            Tok::KwTrue => Ok(Formula::True),
            Tok::KwFalse => Ok(Formula::False),
            Tok::Ident(name) => Ok(Formula::Atom(name)),
            Tok::LParen => {
                let f = self.ltl_implies()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            _ => err(l.line, l.col, "expected a formula"),
        }
    }

    // ---- FO ----

    fn fo_implies(&mut self) -> Result<FoFormula, ParseError> {
        let lhs = self.fo_or()?;
        if self.peek().tok == Tok::Arrow {
            self.next();
            let rhs = self.fo_implies()?;
            Ok(FoFormula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn fo_or(&mut self) -> Result<FoFormula, ParseError> {
        let mut f = self.fo_and()?;
        while self.peek().tok == Tok::Or {
            self.next();
            f = FoFormula::or(f, self.fo_and()?);
        }
        Ok(f)
    }

    fn fo_and(&mut self) -> Result<FoFormula, ParseError> {
        let mut f = self.fo_unary()?;
        while self.peek().tok == Tok::And {
            self.next();
            f = FoFormula::and(f, self.fo_unary()?);
        }
        Ok(f)
    }

    fn fo_unary(&mut self) -> Result<FoFormula, ParseError> {
        match self.peek().tok.clone() {
            Tok::Not => {
                self.next();
                let body = self.fo_unary()?;
                // fold the negation of a letter atom into the atom itself
                Ok(match body {
                    FoFormula::Pred(p, v) => FoFormula::NegPred(p, v),
                    other => FoFormula::not(other),
                })
            }
            Tok::KwExists | Tok::KwForall => self.fo_quantifier(),
            _ => self.fo_primary(),
        }
    }

    fn fo_quantifier(&mut self) -> Result<FoFormula, ParseError> {
        let l = self.next();
        let is_exists = l.tok == Tok::KwExists;
        let v = self.next();
        let Tok::Ident(var) = v.tok else {
            return err(v.line, v.col, "expected a variable name");
        };
        self.expect(Tok::Dot, "'.'")?;
        let body = self.fo_implies()?;
        Ok(if is_exists {
            FoFormula::exists(var, body)
        } else {
            FoFormula::forall(var, body)
        })
    }

    fn fo_primary(&mut self) -> Result<FoFormula, ParseError> {
        let l = self.next();
        match l.tok {
            Tok::KwTrue => Ok(FoFormula::True),
            Tok::KwFalse => Ok(FoFormula::False),
            Tok::LParen => {
                let f = self.fo_implies()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(name) => match self.peek().tok.clone() {
                Tok::LParen => {
                    self.next();
                    let v = self.next();
                    let Tok::Ident(var) = v.tok else {
                        return err(v.line, v.col, "expected a variable name");
                    };
                    self.expect(Tok::RParen, "')'")?;
                    Ok(FoFormula::Pred(name, var))
                }
                Tok::Less => {
                    self.next();
                    let rhs = self.fo_var()?;
                    Ok(FoFormula::Less(name, rhs))
                }
                Tok::Equal => {
                    self.next();
                    let rhs = self.fo_var()?;
                    Ok(FoFormula::Eq(name, rhs))
                }
                Tok::NotEqual => {
                    self.next();
                    let rhs = self.fo_var()?;
                    Ok(FoFormula::Neq(name, rhs))
                }
                _ => err(
                    l.line,
                    l.col,
                    format!("bare identifier {name:?}: expected p(x), x < y, x = y, or x != y"),
                ),
            },
            _ => err(l.line, l.col, "expected a formula"),
        }
    }

    fn fo_var(&mut self) -> Result<String, ParseError> {
        let l = self.next();
        match l.tok {
            Tok::Ident(name) => Ok(name),
            _ => err(l.line, l.col, "expected a variable name"),
        }
    }
}

fn check_alphabet(
    letters: impl IntoIterator<Item = String>,
    alphabet: Option<&BTreeSet<String>>,
) -> Result<(), ParseError> {
    if let Some(sigma) = alphabet {
        for p in letters {
            if !sigma.contains(&p) {
                return Err(ParseError::UnknownAtom(p));
            }
        }
    }
    Ok(())
}

/// Parse an LTL formula. If an alphabet is given, every proposition letter
/// must belong to it.
pub fn parse_ltl(input: &str, alphabet: Option<&BTreeSet<String>>) -> Result<Formula, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.ltl_implies()?;
    let end = p.next();
    if end.tok != Tok::End {
        return err(end.line, end.col, "unexpected trailing input");
    }
    check_alphabet(f.atoms(), alphabet)?;
    Ok(f)
}

/// Parse a first-order formula. Letter predicates are checked against the
/// alphabet when one is given; unbound variables are free, not an error.
/// Bound variables are renamed apart after parsing.
pub fn parse_fo(input: &str, alphabet: Option<&BTreeSet<String>>) -> Result<FoFormula, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.fo_implies()?;
    let end = p.next();
    if end.tok != Tok::End {
        return err(end.line, end.col, "unexpected trailing input");
    }
    check_alphabet(f.letters(), alphabet)?;
    Ok(normalize_bound_vars(&f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Formula as F;

    fn ltl(s: &str) -> Formula {
        parse_ltl(s, None).unwrap()
    }
    fn fo(s: &str) -> FoFormula {
        parse_fo(s, None).unwrap()
    }

    #[test]
    fn parses_the_two_letter_witness_formula() {
        assert_eq!(
            ltl("a & X(a & wX false)"),
            F::and(
                F::atom("a"),
                F::next(F::and(F::atom("a"), F::weak_next(F::False)))
            )
        );
    }

    #[test]
    fn until_is_right_associative_and_tighter_than_and() {
        assert_eq!(
            ltl("a U b R c"),
            F::until(F::atom("a"), F::release(F::atom("b"), F::atom("c")))
        );
        assert_eq!(
            ltl("a & b U c"),
            F::and(F::atom("a"), F::until(F::atom("b"), F::atom("c")))
        );
    }

    #[test]
    fn arrow_is_loosest_and_right_associative() {
        assert_eq!(
            ltl("a -> b -> c"),
            F::implies(F::atom("a"), F::implies(F::atom("b"), F::atom("c")))
        );
        assert_eq!(
            ltl("a | b -> c"),
            F::implies(F::or(F::atom("a"), F::atom("b")), F::atom("c"))
        );
    }

    #[test]
    fn unary_operators_chain() {
        assert_eq!(
            ltl("! X wX Y Z a"),
            F::not(F::next(F::weak_next(F::yesterday(F::weak_yesterday(
                F::atom("a")
            )))))
        );
    }

    #[test]
    fn wx_is_reserved_but_prefixes_are_atoms() {
        assert_eq!(ltl("wX a"), F::weak_next(F::atom("a")));
        assert_eq!(ltl("wXa"), F::atom("wXa"));
        assert_eq!(ltl("w"), F::atom("w"));
    }

    #[test]
    fn alphabet_is_enforced_when_given() {
        let sigma: std::collections::BTreeSet<String> =
            ["a".to_string(), "b".to_string()].into_iter().collect();
        assert!(parse_ltl("a U b", Some(&sigma)).is_ok());
        let e = parse_ltl("a U c", Some(&sigma)).unwrap_err();
        assert!(matches!(e, ParseError::UnknownAtom(ref p) if p == "c"));
    }

    #[test]
    fn reports_position() {
        let e = parse_ltl("a &\n& b", None).unwrap_err();
        let ParseError::Syntax { line, col, .. } = e else {
            panic!()
        };
        assert_eq!((line, col), (2, 1));
    }

    #[test]
    fn fo_atoms_parse() {
        assert_eq!(fo("a(x)"), FoFormula::pred("a", "x"));
        assert_eq!(fo("!a(x)"), FoFormula::neg_pred("a", "x"));
        assert_eq!(fo("x < y"), FoFormula::less("x", "y"));
        assert_eq!(fo("x = y"), FoFormula::eq("x", "y"));
        assert_eq!(fo("x != y"), FoFormula::neq("x", "y"));
    }

    #[test]
    fn quantifier_body_extends_right() {
        assert_eq!(
            fo("exists y . x < y & a(y)"),
            FoFormula::exists(
                "y",
                FoFormula::and(FoFormula::less("x", "y"), FoFormula::pred("a", "y"))
            )
        );
        assert_eq!(
            fo("a(x) & (exists y . x < y & b(y))"),
            FoFormula::and(
                FoFormula::pred("a", "x"),
                FoFormula::exists(
                    "y",
                    FoFormula::and(FoFormula::less("x", "y"), FoFormula::pred("b", "y"))
                )
            )
        );
    }

    #[test]
    fn forall_with_guard_implication() {
        assert_eq!(
            fo("forall z . x < z & z < y -> b(z)"),
            FoFormula::forall(
                "z",
                FoFormula::implies(
                    FoFormula::and(FoFormula::less("x", "z"), FoFormula::less("z", "y")),
                    FoFormula::pred("b", "z")
                )
            )
        );
    }

    #[test]
    fn shadowed_binders_are_renamed_apart() {
        let f = fo("exists y . a(y) & (exists y . b(y))");
        let FoFormula::Exists(outer, body) = &f else {
            panic!()
        };
        let FoFormula::And(_, inner) = body.as_ref() else {
            panic!()
        };
        let FoFormula::Exists(inner_v, _) = inner.as_ref() else {
            panic!()
        };
        assert_ne!(outer, inner_v);
    }

    #[test]
    fn bare_identifier_is_an_error_in_fo() {
        assert!(fo_err("x").contains("bare identifier"));
        assert!(fo_err("a(x) & y").contains("bare identifier"));
    }

    fn fo_err(s: &str) -> String {
        parse_fo(s, None).unwrap_err().to_string()
    }
}
