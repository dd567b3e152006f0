//! The chain normal form: each disjunct is an existential block over a
//! totally ordered chain of positions, with free variables pinned to chain
//! nodes, a punctual constraint per node and an interval constraint per
//! gap. A one-variable normal form compiles back to a temporal formula.

use super::{fold_ltl, TranslateError};
use crate::semantics::{Assignment, EvalError, State, Word};
use crate::syntax::Formula;
use std::collections::BTreeMap;
use std::fmt;

/// Quantifier-free, single-position constraint: a propositional formula
/// over the letters of one state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StateProp {
    True,
    False,
    Letter(String),
    Not(Box<StateProp>),
    And(Box<StateProp>, Box<StateProp>),
    Or(Box<StateProp>, Box<StateProp>),
}

impl StateProp {
    pub fn holds(&self, state: &State) -> bool {
        match self {
            StateProp::True => true,
            StateProp::False => false,
            StateProp::Letter(l) => state.contains(l),
            StateProp::Not(a) => !a.holds(state),
            StateProp::And(a, b) => a.holds(state) && b.holds(state),
            StateProp::Or(a, b) => a.holds(state) || b.holds(state),
        }
    }

    /// Read a propositional temporal formula as a state constraint.
    /// Returns `None` on anything temporal.
    pub fn from_formula(f: &Formula) -> Option<StateProp> {
        match f {
            Formula::True => Some(StateProp::True),
            Formula::False => Some(StateProp::False),
            Formula::Atom(p) => Some(StateProp::Letter(p.clone())),
            Formula::Not(a) => Some(StateProp::Not(Box::new(StateProp::from_formula(a)?))),
            Formula::And(a, b) => Some(StateProp::And(
                Box::new(StateProp::from_formula(a)?),
                Box::new(StateProp::from_formula(b)?),
            )),
            Formula::Or(a, b) => Some(StateProp::Or(
                Box::new(StateProp::from_formula(a)?),
                Box::new(StateProp::from_formula(b)?),
            )),
            _ => None,
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            StateProp::True => Formula::True,
            StateProp::False => Formula::False,
            StateProp::Letter(l) => Formula::atom(l.clone()),
            StateProp::Not(a) => Formula::not(a.to_formula()),
            StateProp::And(a, b) => Formula::and(a.to_formula(), b.to_formula()),
            StateProp::Or(a, b) => Formula::or(a.to_formula(), b.to_formula()),
        }
    }
}

impl fmt::Display for StateProp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// One disjunct: `∃x₀…x_n` with `x₀ < x₁ < … < x_n`, free variables bound
/// to chain indices, a punctual constraint `alphas[j]` at each `x_j` and an
/// interval constraint `betas[j]` on the open gap `(x_{j-1}, x_j)`.
/// `betas[0]` is an unused placeholder kept `True`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExistsNormalForm {
    pub vars: usize,
    pub bindings: BTreeMap<String, usize>,
    pub alphas: Vec<StateProp>,
    pub betas: Vec<StateProp>,
}

/// A disjunction of chain blocks over one shared free-variable signature.
/// An empty disjunct list denotes `false`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub free_vars: Vec<String>,
    pub disjuncts: Vec<ExistsNormalForm>,
}

/// Structural well-formedness of a normal form: a nonempty signature, chain
/// shapes of consistent length, in-range bindings over signature variables,
/// the first signature variable pinned to the chain root, and the gap list
/// starting with its placeholder.
pub fn check_invariants(nf: &NormalForm) -> Result<(), String> {
    if nf.free_vars.is_empty() {
        return Err("empty free-variable signature".to_string());
    }
    let anchor = &nf.free_vars[0];
    for (k, d) in nf.disjuncts.iter().enumerate() {
        if d.vars == 0 {
            return Err(format!("disjunct {k}: empty chain"));
        }
        if d.alphas.len() != d.vars || d.betas.len() != d.vars {
            return Err(format!("disjunct {k}: constraint lists do not match the chain"));
        }
        if d.betas[0] != StateProp::True {
            return Err(format!("disjunct {k}: leading interval slot must stay true"));
        }
        for (v, &i) in &d.bindings {
            if !nf.free_vars.contains(v) {
                return Err(format!("disjunct {k}: binding for unknown variable {v}"));
            }
            if i >= d.vars {
                return Err(format!("disjunct {k}: binding {v} -> {i} outside the chain"));
            }
        }
        if d.bindings.get(anchor) != Some(&0) {
            return Err(format!("disjunct {k}: {anchor} is not bound to the chain root"));
        }
    }
    Ok(())
}

/// Direct evaluation of a normal form on a finite word, used as the oracle
/// against the formula it was derived from.
pub fn eval_normal_form(
    nf: &NormalForm,
    w: &Word,
    asg: &Assignment,
) -> Result<bool, EvalError> {
    for v in &nf.free_vars {
        match asg.get(v) {
            None => return Err(EvalError::UnassignedVar(v.clone())),
            Some(&p) if p >= w.len() => {
                return Err(EvalError::OutOfRange { pos: p, len: w.len() })
            }
            _ => {}
        }
    }
    Ok(nf.disjuncts.iter().any(|d| eval_disjunct(d, w, asg)))
}

fn eval_disjunct(d: &ExistsNormalForm, w: &Word, asg: &Assignment) -> bool {
    let mut chain = vec![0usize; d.vars];
    chains(&mut chain, 0, 0, w.len(), &mut |p| {
        d.bindings.iter().all(|(v, &i)| asg[v] == p[i])
            && (0..d.vars).all(|j| d.alphas[j].holds(w.state(p[j])))
            && (1..d.vars).all(|j| {
                (p[j - 1] + 1..p[j]).all(|q| d.betas[j].holds(w.state(q)))
            })
    })
}

/// Enumerate strictly increasing position chains, short-circuiting on the
/// first hit.
fn chains(
    buf: &mut Vec<usize>,
    depth: usize,
    min: usize,
    len: usize,
    check: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if depth == buf.len() {
        return check(buf);
    }
    for p in min..len {
        buf[depth] = p;
        if chains(buf, depth + 1, p + 1, len, check) {
            return true;
        }
    }
    false
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "free:")?;
        for v in &self.free_vars {
            write!(f, " {v}")?;
        }
        writeln!(f)?;
        writeln!(f, "disjuncts: {}", self.disjuncts.len())?;
        for (k, d) in self.disjuncts.iter().enumerate() {
            writeln!(f, "disjunct {k}:")?;
            writeln!(f, "  vars: {}", d.vars)?;
            write!(f, "  bind:")?;
            if d.bindings.is_empty() {
                write!(f, " (none)")?;
            }
            for (v, i) in &d.bindings {
                write!(f, " {v}=x{i}")?;
            }
            writeln!(f)?;
            write!(f, "  alpha: [")?;
            for (j, a) in d.alphas.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{a}")?;
            }
            writeln!(f, "]")?;
            write!(f, "  beta: [")?;
            for (j, b) in d.betas.iter().enumerate().skip(1) {
                if j > 1 {
                    write!(f, ", ")?;
                }
                write!(f, "{b}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Compile one chain block anchored at the evaluation position into the
/// `A₀ ∧ X(β₁ U (A₁ ∧ X(β₂ U …)))` ladder. An empty chain means `true`.
pub(crate) fn chain_compile(alphas: &[Formula], betas: &[Formula]) -> Formula {
    let n = alphas.len();
    if n == 0 {
        return Formula::True;
    }
    let mut acc = fold_ltl(&alphas[n - 1]);
    for j in (0..n - 1).rev() {
        acc = fold_ltl(&Formula::and(
            alphas[j].clone(),
            Formula::next(Formula::until(betas[j + 1].clone(), acc)),
        ));
    }
    acc
}

/// Compile a one-variable normal form to a temporal formula that holds at
/// position `k` exactly when the form does with its variable at `k`.
pub fn normalform_to_ltl(nf: &NormalForm) -> Result<Formula, TranslateError> {
    if nf.free_vars.len() != 1 {
        return Err(TranslateError::FreeVars {
            need: "exactly one",
            found: nf.free_vars.clone(),
        });
    }
    let anchor = &nf.free_vars[0];
    let mut out = Formula::False;
    for d in &nf.disjuncts {
        if d.bindings.get(anchor) != Some(&0) {
            return Err(TranslateError::Unsupported(format!(
                "disjunct does not anchor {anchor} at the chain root"
            )));
        }
        let alphas: Vec<Formula> = d.alphas.iter().map(StateProp::to_formula).collect();
        let betas: Vec<Formula> = d.betas.iter().map(StateProp::to_formula).collect();
        out = Formula::or(out, chain_compile(&alphas, &betas));
    }
    Ok(fold_ltl(&out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::eval_ltl_fin;

    fn letter(l: &str) -> StateProp {
        StateProp::Letter(l.to_string())
    }

    fn disjunct(
        binds: &[(&str, usize)],
        alphas: Vec<StateProp>,
        betas: Vec<StateProp>,
    ) -> ExistsNormalForm {
        ExistsNormalForm {
            vars: alphas.len(),
            bindings: binds
                .iter()
                .map(|(v, i)| (v.to_string(), *i))
                .collect(),
            alphas,
            betas,
        }
    }

    #[test]
    fn degenerate_chain_compiles_to_its_constraint() {
        let nf = NormalForm {
            free_vars: vec!["x".to_string()],
            disjuncts: vec![disjunct(
                &[("x", 0)],
                vec![letter("a")],
                vec![StateProp::True],
            )],
        };
        check_invariants(&nf).unwrap();
        assert_eq!(normalform_to_ltl(&nf).unwrap().to_string(), "a");
    }

    #[test]
    fn two_node_chain_compiles_to_the_until_ladder() {
        let nf = NormalForm {
            free_vars: vec!["x".to_string()],
            disjuncts: vec![disjunct(
                &[("x", 0)],
                vec![letter("a"), letter("c")],
                vec![StateProp::True, letter("b")],
            )],
        };
        assert_eq!(normalform_to_ltl(&nf).unwrap().to_string(), "a & X(b U c)");
    }

    #[test]
    fn empty_disjunction_is_false() {
        let nf = NormalForm {
            free_vars: vec!["x".to_string()],
            disjuncts: vec![],
        };
        check_invariants(&nf).unwrap();
        assert_eq!(normalform_to_ltl(&nf).unwrap(), Formula::False);
    }

    #[test]
    fn compiled_formula_matches_direct_evaluation() {
        let nf = NormalForm {
            free_vars: vec!["x".to_string()],
            disjuncts: vec![
                disjunct(
                    &[("x", 0)],
                    vec![letter("a"), letter("b")],
                    vec![StateProp::True, letter("a")],
                ),
                disjunct(&[("x", 0)], vec![letter("b")], vec![StateProp::True]),
            ],
        };
        let f = normalform_to_ltl(&nf).unwrap();
        for ws in ["{a};{a};{b}", "{b}", "{a};{b}", "{a};{};{b}", "{};{a,b}"] {
            let w = Word::parse(ws, None).unwrap();
            for k in 0..w.len() {
                let mut asg = Assignment::new();
                asg.insert("x".to_string(), k);
                assert_eq!(
                    eval_normal_form(&nf, &w, &asg).unwrap(),
                    eval_ltl_fin(&f, &w, k).unwrap(),
                    "{ws} at {k}"
                );
            }
        }
    }

    #[test]
    fn invariants_reject_malformed_shapes() {
        let mut nf = NormalForm {
            free_vars: vec!["x".to_string()],
            disjuncts: vec![disjunct(
                &[("x", 1)],
                vec![letter("a"), StateProp::True],
                vec![StateProp::True, StateProp::True],
            )],
        };
        assert!(check_invariants(&nf).is_err());
        nf.disjuncts[0].bindings.insert("x".to_string(), 0);
        assert!(check_invariants(&nf).is_ok());
        nf.free_vars.clear();
        assert!(check_invariants(&nf).is_err());
    }

    #[test]
    fn serialization_is_stable() {
        let nf = NormalForm {
            free_vars: vec!["z0".to_string(), "z1".to_string()],
            disjuncts: vec![disjunct(
                &[("z0", 0), ("z1", 1)],
                vec![StateProp::True, StateProp::True],
                vec![StateProp::True, StateProp::True],
            )],
        };
        assert_eq!(
            nf.to_string(),
            "free: z0 z1\ndisjuncts: 1\ndisjunct 0:\n  vars: 2\n  bind: z0=x0 z1=x1\n  alpha: [true, true]\n  beta: [true]\n"
        );
    }
}
