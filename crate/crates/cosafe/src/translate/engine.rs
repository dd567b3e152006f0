//! The chain engine: structural rewriting of a guarded co-safety formula
//! into the chain normal form. Conjunctions merge two chains into every
//! order-consistent interleaving, existentials drop their binding, and a
//! window-guarded universal splits on the relative order of its two bounds
//! with the compiled body as the punctual and interval constraint.

use super::enf::{chain_compile, ExistsNormalForm, NormalForm, StateProp};
use super::{fold_fo, fold_ltl, TranslateError};
use crate::fragments::{classify_fo, split_forall_body, FragmentId};
use crate::syntax::{guard_like, negate_fo_nnf, nnf_fo, normalize_bound_vars, FoFormula, Formula};
use std::collections::{BTreeMap, HashSet};

/// Work-in-progress disjunct. Same shape as the packed normal form, but the
/// node and gap labels are full temporal formulas so a universal body can
/// carry its own compilation while the surrounding chain is still growing.
#[derive(Debug, Clone)]
struct Chain {
    binds: BTreeMap<String, usize>,
    alphas: Vec<Formula>,
    betas: Vec<Formula>,
}

impl Chain {
    fn empty() -> Chain {
        Chain { binds: BTreeMap::new(), alphas: Vec::new(), betas: Vec::new() }
    }

    fn single(vars: &[&str], alpha: Formula) -> Chain {
        Chain {
            binds: vars.iter().map(|v| (v.to_string(), 0)).collect(),
            alphas: vec![alpha],
            betas: vec![Formula::True],
        }
    }

    fn pair(lo: &str, hi: &str) -> Chain {
        let mut binds = BTreeMap::new();
        binds.insert(lo.to_string(), 0);
        binds.insert(hi.to_string(), 1);
        Chain {
            binds,
            alphas: vec![Formula::True, Formula::True],
            betas: vec![Formula::True, Formula::True],
        }
    }

    fn len(&self) -> usize {
        self.alphas.len()
    }

    fn push_node(&mut self, alpha: Formula, beta: Formula) -> usize {
        self.alphas.push(alpha);
        self.betas.push(beta);
        self.alphas.len() - 1
    }

    fn key(&self) -> String {
        format!("{:?}|{:?}|{:?}", self.binds, self.alphas, self.betas)
    }
}

struct Budget {
    left: usize,
    nodes: usize,
    disjuncts: usize,
}

impl Budget {
    fn new(limit: usize) -> Budget {
        Budget { left: limit, nodes: 0, disjuncts: 0 }
    }

    fn charge(&mut self, n: usize) -> Result<(), TranslateError> {
        if self.left < n {
            return Err(TranslateError::Budget {
                disjuncts: self.disjuncts,
                nodes: self.nodes,
            });
        }
        self.left -= n;
        self.nodes += n;
        Ok(())
    }
}

/// Fold the labels, drop the chain if a node label is unsatisfiable, dedup
/// and charge the budget. A false gap label survives: it just forces the
/// two neighbouring nodes to be adjacent.
fn push(
    out: &mut Vec<Chain>,
    seen: &mut HashSet<String>,
    mut c: Chain,
    bud: &mut Budget,
) -> Result<(), TranslateError> {
    for a in &mut c.alphas {
        *a = fold_ltl(a);
        if *a == Formula::False {
            return Ok(());
        }
    }
    for b in &mut c.betas {
        *b = fold_ltl(b);
    }
    if seen.insert(c.key()) {
        bud.charge(c.len())?;
        bud.disjuncts += 1;
        out.push(c);
    }
    Ok(())
}

fn dedup(chains: Vec<Chain>) -> Vec<Chain> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in chains {
        if seen.insert(c.key()) {
            out.push(c);
        }
    }
    out
}

fn one(c: Chain, bud: &mut Budget) -> Result<Vec<Chain>, TranslateError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    push(&mut out, &mut seen, c, bud)?;
    Ok(out)
}

fn gnf(f: &FoFormula, bud: &mut Budget) -> Result<Vec<Chain>, TranslateError> {
    use FoFormula::*;
    match f {
        True => one(Chain::empty(), bud),
        False => Ok(Vec::new()),
        Pred(p, v) => one(Chain::single(&[v], Formula::atom(p.clone())), bud),
        NegPred(p, v) => one(
            Chain::single(&[v], Formula::not(Formula::atom(p.clone()))),
            bud,
        ),
        Eq(a, b) if a == b => one(Chain::empty(), bud),
        Eq(a, b) => one(Chain::single(&[a, b], Formula::True), bud),
        Less(a, b) if a == b => Ok(Vec::new()),
        Less(a, b) => one(Chain::pair(a, b), bud),
        Neq(a, b) if a == b => Ok(Vec::new()),
        Neq(a, b) => {
            let mut out = Vec::new();
            let mut seen = HashSet::new();
            push(&mut out, &mut seen, Chain::pair(a, b), bud)?;
            push(&mut out, &mut seen, Chain::pair(b, a), bud)?;
            Ok(out)
        }
        And(a, b) => {
            let xs = gnf(a, bud)?;
            let ys = gnf(b, bud)?;
            merge_lists(&xs, &ys, bud)
        }
        Or(a, b) => {
            let mut xs = gnf(a, bud)?;
            xs.extend(gnf(b, bud)?);
            Ok(dedup(xs))
        }
        Implies(g, b) if guard_like(g) => {
            let alt = FoFormula::or(negate_fo_nnf(g), (**b).clone());
            gnf(&alt, bud)
        }
        Exists(v, body) => {
            let mut xs = gnf(body, bud)?;
            for c in &mut xs {
                c.binds.remove(v);
            }
            Ok(dedup(xs))
        }
        Forall(v, body) => solve_forall(v, body, bud),
        Not(_) | Implies(_, _) => Err(TranslateError::Unsupported(format!(
            "subformula outside the guarded grammar: {f}"
        ))),
    }
}

fn merge_lists(
    xs: &[Chain],
    ys: &[Chain],
    bud: &mut Budget,
) -> Result<Vec<Chain>, TranslateError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for a in xs {
        for b in ys {
            merge_pair(a, b, &mut out, &mut seen, bud)?;
        }
    }
    Ok(out)
}

/// All interleavings of two chains that respect both node orders and place
/// every shared variable on one common node. `aneed[i][j]` says node `i` of
/// the left chain shares a variable with some not-yet-consumed right node
/// `>= j`, in which case it cannot be emitted alone.
fn merge_pair(
    a: &Chain,
    b: &Chain,
    out: &mut Vec<Chain>,
    seen: &mut HashSet<String>,
    bud: &mut Budget,
) -> Result<(), TranslateError> {
    let an = a.len();
    let bn = b.len();
    let mut link = vec![vec![false; bn]; an];
    for (v, &i) in &a.binds {
        if let Some(&j) = b.binds.get(v) {
            link[i][j] = true;
        }
    }
    let mut aneed = vec![vec![false; bn + 1]; an];
    for i in 0..an {
        for j in (0..bn).rev() {
            aneed[i][j] = link[i][j] || aneed[i][j + 1];
        }
    }
    let mut bneed = vec![vec![false; an + 1]; bn];
    for j in 0..bn {
        for i in (0..an).rev() {
            bneed[j][i] = link[i][j] || bneed[j][i + 1];
        }
    }
    step(a, b, &aneed, &bneed, 0, 0, &Chain::empty(), out, seen, bud)
}

#[allow(clippy::too_many_arguments)]
fn step(
    a: &Chain,
    b: &Chain,
    aneed: &[Vec<bool>],
    bneed: &[Vec<bool>],
    i: usize,
    j: usize,
    cur: &Chain,
    out: &mut Vec<Chain>,
    seen: &mut HashSet<String>,
    bud: &mut Budget,
) -> Result<(), TranslateError> {
    let an = a.len();
    let bn = b.len();
    if i == an && j == bn {
        return push(out, seen, cur.clone(), bud);
    }
    // the gap before the next emitted node lies inside a span exactly when
    // that side has consumed some node and still has one pending
    let gap = if cur.len() == 0 {
        Formula::True
    } else {
        let mut g = Formula::True;
        if i > 0 && i < an {
            g = Formula::and(g, a.betas[i].clone());
        }
        if j > 0 && j < bn {
            g = Formula::and(g, b.betas[j].clone());
        }
        fold_ltl(&g)
    };
    if i < an && !aneed[i][j] {
        let straddle = if j > 0 && j < bn { b.betas[j].clone() } else { Formula::True };
        let alpha = fold_ltl(&Formula::and(a.alphas[i].clone(), straddle));
        if alpha != Formula::False {
            let mut next = cur.clone();
            let idx = next.push_node(alpha, gap.clone());
            for (v, &vi) in &a.binds {
                if vi == i {
                    next.binds.insert(v.clone(), idx);
                }
            }
            step(a, b, aneed, bneed, i + 1, j, &next, out, seen, bud)?;
        }
    }
    if j < bn && !bneed[j][i] {
        let straddle = if i > 0 && i < an { a.betas[i].clone() } else { Formula::True };
        let alpha = fold_ltl(&Formula::and(b.alphas[j].clone(), straddle));
        if alpha != Formula::False {
            let mut next = cur.clone();
            let idx = next.push_node(alpha, gap.clone());
            for (v, &vj) in &b.binds {
                if vj == j {
                    next.binds.insert(v.clone(), idx);
                }
            }
            step(a, b, aneed, bneed, i, j + 1, &next, out, seen, bud)?;
        }
    }
    if i < an && j < bn && !aneed[i][j + 1] && !bneed[j][i + 1] {
        let alpha = fold_ltl(&Formula::and(a.alphas[i].clone(), b.alphas[j].clone()));
        if alpha != Formula::False {
            let mut next = cur.clone();
            let idx = next.push_node(alpha, gap);
            for (v, &vi) in &a.binds {
                if vi == i {
                    next.binds.insert(v.clone(), idx);
                }
            }
            for (v, &vj) in &b.binds {
                if vj == j {
                    next.binds.insert(v.clone(), idx);
                }
            }
            step(a, b, aneed, bneed, i + 1, j + 1, &next, out, seen, bud)?;
        }
    }
    Ok(())
}

/// A window-guarded universal contributes three disjuncts, one per relative
/// order of its bounds. The compiled body constrains the bound positions
/// when their end of the window is inclusive and every position strictly
/// between them.
fn solve_forall(
    z: &str,
    body: &FoFormula,
    bud: &mut Budget,
) -> Result<Vec<Chain>, TranslateError> {
    let Some(shape) = split_forall_body(z, body) else {
        return Err(TranslateError::Unsupported(format!(
            "universal quantifier without a window guard: forall {z} . {body}"
        )));
    };
    let Some((u, u_strict)) = shape.upper else {
        return Err(TranslateError::Unsupported(format!(
            "universal quantifier without an upper bound: forall {z} . {body}"
        )));
    };
    let (l, l_strict) = shape.lower;
    if shape.body.free_vars().iter().any(|w| w != z) {
        return Err(TranslateError::Unsupported(format!(
            "universal body mentions more than its own variable: {}",
            shape.body
        )));
    }
    let phi = compile_at(&gnf(&shape.body, bud)?, z, "a universal body")?;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    if l == u {
        let alpha = if !l_strict && !u_strict { phi } else { Formula::True };
        push(&mut out, &mut seen, Chain::single(&[&l], alpha), bud)?;
        return Ok(out);
    }
    let mut below = Chain::pair(&l, &u);
    below.alphas[0] = if l_strict { Formula::True } else { phi.clone() };
    below.alphas[1] = if u_strict { Formula::True } else { phi.clone() };
    below.betas[1] = phi.clone();
    push(&mut out, &mut seen, below, bud)?;
    let alpha = if !l_strict && !u_strict { phi } else { Formula::True };
    push(&mut out, &mut seen, Chain::single(&[&l, &u], alpha), bud)?;
    push(&mut out, &mut seen, Chain::pair(&u, &l), bud)?;
    Ok(out)
}

/// Disjoin the chains as temporal formulas anchored at `v`: every nonempty
/// chain must carry `v` on its root node, an empty chain is `true`.
fn compile_at(chains: &[Chain], v: &str, what: &str) -> Result<Formula, TranslateError> {
    let mut out = Formula::False;
    for c in chains {
        let part = if c.len() == 0 {
            Formula::True
        } else if c.binds.get(v) == Some(&0) {
            chain_compile(&c.alphas, &c.betas)
        } else {
            return Err(TranslateError::Unsupported(format!(
                "{what} does not anchor {v} at its chain root"
            )));
        };
        out = Formula::or(out, part);
    }
    Ok(fold_ltl(&out))
}

fn gate(g: &FoFormula) -> Result<(), TranslateError> {
    let cls = classify_fo(g);
    let verdict = &cls.entries[&FragmentId::CosafetyFo];
    if !verdict.holds {
        return Err(TranslateError::Fragment {
            fragment: FragmentId::CosafetyFo,
            offender: verdict.offender.clone().unwrap_or_else(|| g.to_string()),
        });
    }
    Ok(())
}

fn props(labels: &[Formula]) -> Result<Vec<StateProp>, TranslateError> {
    labels
        .iter()
        .map(|l| {
            StateProp::from_formula(l).ok_or_else(|| {
                TranslateError::Unsupported(format!("non-propositional chain label {l}"))
            })
        })
        .collect()
}

/// Exhaustively rewrite a guarded co-safety formula into its chain normal
/// form. The budget caps the total number of chain nodes created along the
/// way, counting duplicates only once.
pub fn normal_form(f: &FoFormula, budget: usize) -> Result<NormalForm, TranslateError> {
    let free: Vec<String> = f.free_vars().into_iter().collect();
    if free.is_empty() {
        return Err(TranslateError::FreeVars {
            need: "at least one",
            found: Vec::new(),
        });
    }
    let g = normalize_bound_vars(&nnf_fo(f));
    gate(&g)?;
    let mut bud = Budget::new(budget);
    let chains = gnf(&g, &mut bud)?;
    let anchor = free[0].clone();
    let mut disjuncts = Vec::new();
    for c in chains {
        let c = if c.len() == 0 {
            Chain::single(&[&anchor], Formula::True)
        } else {
            c
        };
        if c.binds.get(&anchor) != Some(&0) {
            return Err(TranslateError::Unsupported(format!(
                "a disjunct does not pin {anchor} to its chain root"
            )));
        }
        disjuncts.push(ExistsNormalForm {
            vars: c.len(),
            bindings: c.binds.clone(),
            alphas: props(&c.alphas)?,
            betas: props(&c.betas)?,
        });
    }
    Ok(NormalForm { free_vars: free, disjuncts })
}

/// Compile a one-free-variable guarded co-safety formula to a temporal
/// formula that agrees with it at every position of every finite word. The
/// output uses only `X` and `U` besides the propositional connectives.
/// Sentences built from constants are accepted too; they fold to `true` or
/// `false` since their truth does not depend on the position.
pub fn cosafetyfo_to_ltl(f: &FoFormula, budget: usize) -> Result<Formula, TranslateError> {
    let free = f.free_vars();
    if free.is_empty() {
        return match fold_fo(f) {
            FoFormula::True => Ok(Formula::True),
            FoFormula::False => Ok(Formula::False),
            _ => Err(TranslateError::FreeVars {
                need: "exactly one",
                found: Vec::new(),
            }),
        };
    }
    if free.len() != 1 {
        return Err(TranslateError::FreeVars {
            need: "exactly one",
            found: free.into_iter().collect(),
        });
    }
    let v = free.into_iter().next().unwrap();
    let g = normalize_bound_vars(&nnf_fo(f));
    gate(&g)?;
    let mut bud = Budget::new(budget);
    let chains = gnf(&g, &mut bud)?;
    compile_at(&chains, &v, "a disjunct")
}
