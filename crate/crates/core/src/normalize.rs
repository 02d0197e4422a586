//! Detour elimination for single-conclusion derivations.
//!
//! A maximal occurrence is the conclusion of an introduction that is the
//! major premise of an elimination. Contraction chains the premises of the
//! two rules: a premise whose discharged assumptions are all available
//! yields its conclusion, with the available derivations grafted onto the
//! discharged leaves. Intro and elim premises come from complementary
//! clause sets, so the chaining reaches the elimination's conclusion or
//! `_|_` (followed by `_|_I`).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Binding, Formula};
use crate::kernel::deep;
use crate::kernel::nd::{check_derivation, graft_labels, open_assumptions, Label, NdDerivation};
use crate::rules::{NdKind, RuleSet, Side};

pub const DEFAULT_STEP_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalOccurrence {
    /// Child indices from the root to the introduction node.
    pub path: Vec<usize>,
    /// Size of the maximal formula.
    pub degree: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("input does not check: {0}")]
    NotOk(String),
    #[error("no maximal occurrence at {0:?}")]
    Stale(Vec<usize>),
    #[error("no contraction for {0}")]
    NoContraction(String),
    #[error("normalization did not finish within {0} steps")]
    CapExceeded(usize),
    #[error("reduction at {path:?} did not decrease the measure ({before:?} to {after:?})")]
    MeasureIncrease { path: Vec<usize>, before: (usize, usize), after: (usize, usize) },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

fn kind(rs: &RuleSet, d: &NdDerivation) -> Option<NdKind> {
    d.rule().and_then(|r| rs.nd_rule(r)).map(|r| r.kind)
}

/// All maximal occurrences, children before parents, left to right.
pub fn maximal_occurrences(d: &NdDerivation, rs: &RuleSet) -> Vec<MaximalOccurrence> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect(d, rs, &mut path, &mut out);
    out
}

fn collect(d: &NdDerivation, rs: &RuleSet, path: &mut Vec<usize>, out: &mut Vec<MaximalOccurrence>) {
    deep(|| {
        for (i, c) in d.children().iter().enumerate() {
            path.push(i);
            collect(c, rs, path, out);
            path.pop();
        }
        if kind(rs, d) == Some(NdKind::Elim) {
            if let Some(major) = d.children().first() {
                if kind(rs, major) == Some(NdKind::Intro) {
                    let mut p = path.clone();
                    p.push(0);
                    out.push(MaximalOccurrence { path: p, degree: major.formula().size() });
                }
            }
        }
    })
}

fn node_mut<'a>(d: &'a mut NdDerivation, path: &[usize]) -> Option<&'a mut NdDerivation> {
    let mut cur = d;
    for &i in path {
        match cur {
            NdDerivation::Inference { children, .. } => cur = children.get_mut(i)?,
            NdDerivation::Assumption { .. } => return None,
        }
    }
    Some(cur)
}

/// One premise as a conditional fact: from the discharged assumptions, its
/// conclusion.
struct Fact {
    deriv: NdDerivation,
    concl: Formula,
    hyps: BTreeMap<Formula, BTreeSet<Label>>,
}

fn facts(node: &NdDerivation, skip_major: bool) -> Vec<Fact> {
    let open_all: Vec<BTreeMap<Label, Formula>> = node.children().iter().map(open_assumptions).collect();
    node.children()
        .iter()
        .enumerate()
        .skip(skip_major as usize)
        .map(|(i, c)| {
            let mut hyps: BTreeMap<Formula, BTreeSet<Label>> = BTreeMap::new();
            for l in node.discharged_at(i) {
                if let Some(f) = open_all[i].get(&l) {
                    hyps.entry(f.clone()).or_default().insert(l);
                }
            }
            Fact { deriv: c.clone(), concl: c.formula(), hyps }
        })
        .collect()
}

fn falsum_intro_name(rs: &RuleSet) -> Option<&str> {
    rs.nd_rules.iter().find(|r| r.kind == NdKind::FalsumIntro).map(|r| r.name.as_str())
}

/// The contractum of an elimination whose major premise is an introduction.
fn contract(elim: &NdDerivation, rs: &RuleSet) -> Result<NdDerivation, NormalizeError> {
    let intro = &elim.children()[0];
    let goal = elim.formula();
    let mut pending: Vec<Fact> = facts(intro, false);
    pending.extend(facts(elim, true));
    let mut avail: BTreeMap<Formula, NdDerivation> = BTreeMap::new();
    loop {
        if let Some(d) = avail.get(&goal) {
            return Ok(d.clone());
        }
        if let Some(bot) = avail.get(&Formula::Falsum) {
            let name = falsum_intro_name(rs).ok_or_else(|| NormalizeError::NoContraction("no `_|_` introduction".into()))?;
            return Ok(NdDerivation::infer(name, goal, vec![bot.clone()]));
        }
        let Some(i) = pending.iter().position(|f| f.hyps.keys().all(|h| avail.contains_key(h))) else {
            return Err(NormalizeError::NoContraction(format!("{:?} under {:?}", elim.rule(), intro.rule())));
        };
        let f = pending.remove(i);
        if avail.contains_key(&f.concl) {
            continue;
        }
        let mut d = f.deriv;
        for (h, labels) in &f.hyps {
            d = graft_labels(&d, labels, &avail[h]);
        }
        avail.insert(f.concl, d);
    }
}

/// Contracts the maximal occurrence at `o`.
pub fn reduce_at(d: &NdDerivation, o: &MaximalOccurrence, rs: &RuleSet) -> Result<NdDerivation, NormalizeError> {
    let stale = || NormalizeError::Stale(o.path.clone());
    let (last, parent) = o.path.split_last().ok_or_else(stale)?;
    if *last != 0 {
        return Err(stale());
    }
    let elim = d.at(parent).ok_or_else(stale)?;
    if kind(rs, elim) != Some(NdKind::Elim) || elim.children().first().and_then(|m| kind(rs, m)) != Some(NdKind::Intro) {
        return Err(stale());
    }
    let contractum = contract(elim, rs)?;
    let mut out = d.clone();
    *node_mut(&mut out, parent).ok_or_else(stale)? = contractum;
    Ok(out)
}

/// `(maximal degree, number of occurrences of that degree)`.
fn measure(occ: &[MaximalOccurrence]) -> (usize, usize) {
    let top = occ.iter().map(|o| o.degree).max().unwrap_or(0);
    (top, occ.iter().filter(|o| o.degree == top).count())
}

/// Picks the rightmost maximal-degree occurrence with no other
/// maximal-degree occurrence above it.
fn choose(occ: &[MaximalOccurrence]) -> Option<&MaximalOccurrence> {
    let top = occ.iter().map(|o| o.degree).max()?;
    let tops: Vec<&MaximalOccurrence> = occ.iter().filter(|o| o.degree == top).collect();
    tops.iter()
        .rev()
        .find(|o| {
            let parent = &o.path[..o.path.len() - 1];
            !tops.iter().any(|x| x.path != o.path && x.path.len() > parent.len() && x.path.starts_with(parent))
        })
        .copied()
}

pub fn normalize(d: &NdDerivation, rs: &RuleSet) -> Result<NdDerivation, NormalizeError> {
    normalize_with_cap(d, rs, DEFAULT_STEP_CAP)
}

/// Reduces maximal occurrences until none are left; every step must lower
/// the measure.
pub fn normalize_with_cap(d: &NdDerivation, rs: &RuleSet, cap: usize) -> Result<NdDerivation, NormalizeError> {
    let v = check_derivation(d, rs);
    if !v.is_ok() {
        return Err(NormalizeError::NotOk(v.to_string()));
    }
    let mut cur = d.clone();
    let mut occ = maximal_occurrences(&cur, rs);
    for _ in 0..cap {
        let Some(o) = choose(&occ).cloned() else { return Ok(cur) };
        let before = measure(&occ);
        cur = reduce_at(&cur, &o, rs)?;
        occ = maximal_occurrences(&cur, rs);
        let after = measure(&occ);
        if after >= before {
            return Err(NormalizeError::MeasureIncrease { path: o.path, before, after });
        }
    }
    if occ.is_empty() {
        Ok(cur)
    } else {
        Err(NormalizeError::CapExceeded(cap))
    }
}

// ---------------------------------------------------------------------------
// atomization

struct Atomizer<'r> {
    rs: &'r RuleSet,
    labels: BTreeMap<Formula, Label>,
    next: Label,
}

impl Atomizer<'_> {
    fn label(&mut self, f: &Formula) -> Label {
        if let Some(l) = self.labels.get(f) {
            return *l;
        }
        let l = self.next;
        self.next += 1;
        self.labels.insert(f.clone(), l);
        l
    }

    fn fresh(&mut self) -> Label {
        self.next += 1;
        self.next - 1
    }

    fn unsupported(x: &Formula) -> NormalizeError {
        NormalizeError::Unsupported(format!("classical conclusion {x:?} has no single discharging introduction"))
    }

    /// Rewrites `E_C` over `delta` (a refutation of `¬x`) into an
    /// introduction of `x` whose premise refutes the discharged
    /// components.
    fn rewrite(&mut self, x: &Formula, delta: &NdDerivation, negs: &BTreeSet<Label>) -> Result<NdDerivation, NormalizeError> {
        let rs = self.rs;
        let conn = x.connective().ok_or_else(|| Self::unsupported(x))?;
        let intros: Vec<_> = rs.logical_rules(conn, Side::Right).collect();
        let [intro] = intros.as_slice() else { return Err(Self::unsupported(x)) };
        let mut b = Binding::new();
        if !intro.principal.as_ref().is_some_and(|p| p.match_formula(x, &mut b)) || intro.premises.len() != 1 || !intro.premises[0].right.is_empty() {
            return Err(Self::unsupported(x));
        }
        let hyps: Vec<Formula> =
            intro.premises[0].left.iter().map(|s| s.substitute(&b)).collect::<Result<_, _>>().map_err(|_| Self::unsupported(x))?;
        // an elimination of x whose minors are exactly the components
        let elim = rs
            .logical_rules(conn, Side::Left)
            .find(|r| {
                let mut bb = Binding::new();
                r.principal.as_ref().is_some_and(|p| p.match_formula(x, &mut bb))
                    && !r.conclusion.delta
                    && r.premises.iter().all(|p| {
                        p.left.is_empty() && p.right.len() == 1 && p.right[0].substitute(&bb).is_ok_and(|f| hyps.contains(&f))
                    })
            })
            .ok_or_else(|| Self::unsupported(x))?;
        let mut eb = Binding::new();
        elim.principal.as_ref().expect("principal").match_formula(x, &mut eb);
        let neg = match rs.negation() {
            Some(crate::formula::NOT) => Formula::compound(crate::formula::NOT, vec![x.clone()]),
            Some(_) => Formula::stroke_neg(x.clone()),
            None => return Err(Self::unsupported(x)),
        };
        let neg_intro = rs
            .logical_rules(neg.connective().unwrap_or_default(), Side::Right)
            .next()
            .ok_or_else(|| Self::unsupported(x))?;
        let nd_of = |seq: &str| {
            rs.nd_rules
                .iter()
                .find(|r| r.from_sequent.as_deref() == Some(seq))
                .map(|r| r.name.clone())
                .ok_or_else(|| NormalizeError::Unsupported(format!("no natural-deduction rule for {seq}")))
        };
        // [x]^lx, components ⊢ ⊥, then ¬x discharging lx
        let lx = self.fresh();
        let mut kids = vec![NdDerivation::assume(x.clone(), lx)];
        for p in &elim.premises {
            let f = p.right[0].substitute(&eb).expect("checked");
            let l = self.label(&f);
            kids.push(NdDerivation::assume(f, l));
        }
        let bot = NdDerivation::infer(&nd_of(&elim.name)?, Formula::Falsum, kids);
        let not_x = NdDerivation::infer(&nd_of(&neg_intro.name)?, neg.clone(), vec![bot]).discharging(0, [lx]);
        let refuted = graft_labels(delta, negs, &not_x);
        let open = open_assumptions(&refuted);
        let discharged: BTreeSet<Label> = hyps.iter().map(|h| self.label(h)).filter(|l| open.contains_key(l)).collect();
        Ok(NdDerivation::infer(&nd_of(&intro.name)?, x.clone(), vec![refuted]).discharging(0, discharged))
    }

    fn walk(&mut self, d: &NdDerivation) -> Result<NdDerivation, NormalizeError> {
        deep(|| match d {
            NdDerivation::Assumption { .. } => Ok(d.clone()),
            NdDerivation::Inference { rule, conclusion, children, discharged } => {
                let kids = children.iter().map(|c| self.walk(c)).collect::<Result<Vec<_>, _>>()?;
                let node = NdDerivation::Inference { rule: rule.clone(), conclusion: conclusion.clone(), children: kids, discharged: discharged.clone() };
                let x = d.formula();
                if kind(self.rs, d) == Some(NdKind::ClassicalElim) && !x.is_atomic() {
                    self.rewrite(&x, &node.children()[0], &node.discharged_at(0))
                } else {
                    Ok(node)
                }
            }
        })
    }
}

/// Rewrites every classical elimination with a compound conclusion so that
/// the remaining ones conclude atoms.
pub fn atomize_classical(d: &NdDerivation, rs: &RuleSet) -> Result<NdDerivation, NormalizeError> {
    let v = check_derivation(d, rs);
    if !v.is_ok() {
        return Err(NormalizeError::NotOk(v.to_string()));
    }
    let labels: BTreeMap<Formula, Label> = d.labels().into_iter().map(|(l, f)| (f, l)).collect();
    let next = d.max_label() + 1;
    Atomizer { rs, labels, next }.walk(d)
}

#[cfg(test)]
mod tests;
