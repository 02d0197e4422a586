//! Search in multi-succedent calculi.
//!
//! Sides are kept as sets. A connective with a single rule on a side whose
//! principal is the generic pattern is treated as invertible and its
//! principal is consumed; anything else is tried with the principal kept,
//! under a loop check. A failed branch ending in atoms yields a valuation.

use std::collections::BTreeSet;
use std::rc::Rc;

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};

use crate::formula::{Formula, Schema};
use crate::kernel::deep;
use crate::kernel::sequent::SequentProof;
use crate::rules::{RuleSchema, RuleSet, Side};
use crate::semantics::Valuation;
use crate::sequent::Sequent;

use super::{apply, classical_refuter, reject_falsum, reshape, ProofResult, ProverError, SearchBudget};

/// Formulas are interned; the search works on ids and only builds formulas
/// for the proof it returns.
type Id = u32;
/// Sorted, without repetitions.
type Side2 = Vec<Id>;
type Key = (Side2, Side2);

enum Out {
    /// The proof, when the engine builds them.
    Proved(Option<SequentProof>),
    /// Antecedent atoms of a saturated atomic leaf, when one was reached.
    Failed(Option<BTreeSet<String>>),
}

/// A rule applied to one principal: per premise the added left and right
/// formulas.
struct Step<'r> {
    rule: &'r RuleSchema,
    premises: Vec<(Vec<Id>, Vec<Id>)>,
}

struct Expansion<'r> {
    invertible: bool,
    steps: Vec<Step<'r>>,
}

struct Engine<'r> {
    rs: &'r RuleSet,
    budget: usize,
    expanded: usize,
    build: bool,
    history: HashSet<Key>,
    /// Per id: the variable name or connective index, and the argument ids.
    nodes: Vec<(Head, Vec<Id>)>,
    names: Vec<String>,
    conns: HashMap<String, u32>,
    vars: HashMap<String, Id>,
    compounds: HashMap<(u32, Vec<Id>), Id>,
    expansions: HashMap<(Id, bool), Rc<Expansion<'r>>>,
}

fn generic(p: &Schema) -> bool {
    match p {
        Schema::Compound(_, args) => {
            args.iter().enumerate().all(|(i, a)| matches!(a, Schema::Meta(m) if !args[..i].iter().any(|b| matches!(b, Schema::Meta(n) if n == m))))
        }
        _ => false,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Head {
    Var(u32),
    Falsum,
    Conn(u32),
}

fn with(base: &Side2, extra: &[Id]) -> Side2 {
    let mut out = base.clone();
    out.extend(extra.iter().copied());
    side(out)
}

fn side(mut v: Vec<Id>) -> Side2 {
    v.sort_unstable();
    v.dedup();
    v
}

fn drop_id(s: &mut Side2, i: Id) {
    if let Ok(k) = s.binary_search(&i) {
        s.remove(k);
    }
}

impl<'r> Engine<'r> {
    fn name(&mut self, n: &str) -> u32 {
        if let Some(&k) = self.conns.get(n) {
            return k;
        }
        let k = self.names.len() as u32;
        self.names.push(n.to_string());
        self.conns.insert(n.to_string(), k);
        k
    }

    /// Hash-consed: a compound is keyed by its connective and argument ids.
    fn intern(&mut self, f: &Formula) -> Id {
        let next = self.nodes.len() as Id;
        match f {
            Formula::Var(v) => {
                if let Some(&i) = self.vars.get(v) {
                    return i;
                }
                let k = self.name(v);
                self.vars.insert(v.clone(), next);
                self.nodes.push((Head::Var(k), Vec::new()));
            }
            Formula::Falsum => {
                if let Some(i) = self.nodes.iter().position(|n| n.0 == Head::Falsum) {
                    return i as Id;
                }
                self.nodes.push((Head::Falsum, Vec::new()));
            }
            Formula::Compound(c, a) => {
                let ids: Vec<Id> = a.iter().map(|x| self.intern(x)).collect();
                let key = (self.name(c), ids);
                if let Some(&i) = self.compounds.get(&key) {
                    return i;
                }
                let next = self.nodes.len() as Id;
                self.nodes.push((Head::Conn(key.0), key.1.clone()));
                self.compounds.insert(key, next);
                return next;
            }
        }
        next
    }

    fn formula(&self, i: Id) -> Formula {
        let (head, args) = &self.nodes[i as usize];
        match *head {
            Head::Var(k) => Formula::Var(self.names[k as usize].clone()),
            Head::Falsum => Formula::Falsum,
            Head::Conn(k) => Formula::Compound(self.names[k as usize].clone(), args.iter().map(|&a| self.formula(a)).collect()),
        }
    }

    fn connective(&self, i: Id) -> Option<&str> {
        match self.nodes[i as usize].0 {
            Head::Conn(k) => Some(&self.names[k as usize]),
            _ => None,
        }
    }

    fn is_atomic(&self, i: Id) -> bool {
        !matches!(self.nodes[i as usize].0, Head::Conn(_))
    }

    fn formulas(&self, s: impl IntoIterator<Item = Id>) -> Vec<Formula> {
        s.into_iter().map(|i| self.formula(i)).collect()
    }

    fn sequent(&self, ante: &Side2, succ: &Side2) -> Sequent {
        Sequent::new(self.formulas(ante.iter().copied()), self.formulas(succ.iter().copied()))
    }

    fn expansion(&mut self, i: Id, left: bool) -> Result<Rc<Expansion<'r>>, ProverError> {
        if let Some(e) = self.expansions.get(&(i, left)) {
            return Ok(e.clone());
        }
        let side = if left { Side::Left } else { Side::Right };
        let rules: Vec<&'r RuleSchema> = match self.connective(i) {
            Some(c) => self.rs.logical_rules(c, side).collect(),
            None => Vec::new(),
        };
        let invertible = matches!(rules.as_slice(), [r] if r.principal.as_ref().is_some_and(generic));
        let mut steps = Vec::new();
        for rule in rules {
            if let Some(premises) = self.direct(rule, i) {
                steps.push(Step { rule, premises });
                continue;
            }
            let Some(app) = apply(rule, &self.formula(i)) else {
                if invertible {
                    return Err(ProverError::Incomplete(format!("{} does not match", rule.name)));
                }
                continue;
            };
            let premises = app
                .premises
                .iter()
                .map(|(l, r, _)| (l.iter().map(|x| self.intern(x)).collect(), r.iter().map(|x| self.intern(x)).collect()))
                .collect();
            steps.push(Step { rule, premises });
        }
        let e = Rc::new(Expansion { invertible, steps });
        self.expansions.insert((i, left), e.clone());
        Ok(e)
    }

    /// Premises of a rule whose principal has distinct metavariables as
    /// arguments and whose premises list bare metavariables, read off the
    /// argument ids of `i` without matching.
    fn direct(&self, rule: &RuleSchema, i: Id) -> Option<Vec<(Vec<Id>, Vec<Id>)>> {
        let Some(principal @ Schema::Compound(c, params)) = &rule.principal else { return None };
        let args = &self.nodes[i as usize].1;
        if !generic(principal) || self.connective(i) != Some(c.as_str()) || params.len() != args.len() {
            return None;
        }
        let slot = |s: &Schema| match s {
            Schema::Meta(m) => params.iter().position(|p| matches!(p, Schema::Meta(q) if q == m)).map(|k| args[k]),
            _ => None,
        };
        let side = |v: &[Schema]| v.iter().map(slot).collect::<Option<Vec<Id>>>();
        rule.premises.iter().map(|p| Some((side(&p.left)?, side(&p.right)?))).collect()
    }

    fn search(&mut self, ante: Side2, succ: Side2) -> Result<Out, ProverError> {
        deep(|| self.search_inner(ante, succ))
    }

    fn search_inner(&mut self, ante: Side2, succ: Side2) -> Result<Out, ProverError> {
        self.expanded += 1;
        if self.expanded > self.budget {
            return Err(ProverError::BudgetExhausted(self.budget));
        }
        if let Some(&a) = ante.iter().find(|a| succ.binary_search(a).is_ok()) {
            if !self.build {
                return Ok(Out::Proved(None));
            }
            let here = self.sequent(&ante, &succ);
            let p = reshape(SequentProof::axiom(self.formula(a)), &here, self.rs.regime).map_err(ProverError::Incomplete)?;
            return Ok(Out::Proved(Some(p)));
        }

        // invertible step, principal consumed
        let mut pick = None;
        for (&f, left) in ante.iter().map(|f| (f, true)).chain(succ.iter().map(|f| (f, false))) {
            let e = self.expansion(f, left)?;
            if e.invertible {
                pick = Some((f, left, e));
                break;
            }
        }
        if let Some((f, left, e)) = pick {
            let step = &e.steps[0];
            let (mut a0, mut s0) = (ante.clone(), succ.clone());
            if left {
                drop_id(&mut a0, f);
            } else {
                drop_id(&mut s0, f);
            }
            let mut children = Vec::new();
            for (l, r) in &step.premises {
                let (pa, ps) = (with(&a0, l), with(&s0, r));
                let exact = pa.len() == a0.len() + l.len() && ps.len() == s0.len() + r.len();
                match self.search(pa, ps)? {
                    // sequents are multisets, so the child's own order will do
                    Out::Proved(None) => {}
                    Out::Proved(Some(p)) if exact => children.push(p),
                    Out::Proved(Some(p)) => {
                        let target = Sequent::new(
                            self.formulas(a0.iter().chain(l).copied()),
                            self.formulas(s0.iter().chain(r).copied()),
                        );
                        children.push(reshape(p, &target, self.rs.regime).map_err(ProverError::Incomplete)?);
                    }
                    failed => return Ok(failed),
                }
            }
            if !self.build {
                return Ok(Out::Proved(None));
            }
            let here = self.sequent(&ante, &succ);
            return Ok(Out::Proved(Some(SequentProof::new(&step.rule.name, here, children))));
        }

        // non-invertible options, principal kept
        let key = (ante.clone(), succ.clone());
        let mut any_option = false;
        self.history.insert(key.clone());
        let mut candidates = Vec::new();
        for (&f, left) in ante.iter().map(|f| (f, true)).chain(succ.iter().map(|f| (f, false))) {
            candidates.push((f, left, self.expansion(f, left)?));
        }
        for (f, left, e) in candidates {
            'options: for step in &e.steps {
                let prem: Vec<Key> = step.premises.iter().map(|(l, r)| (with(&ante, l), with(&succ, r))).collect();
                if prem.iter().any(|k| self.history.contains(k)) {
                    continue;
                }
                any_option = true;
                let mut children = Vec::new();
                for ((pa, ps), (l, r)) in prem.into_iter().zip(&step.premises) {
                    let exact = pa.len() == ante.len() + l.len() && ps.len() == succ.len() + r.len();
                    match self.search(pa, ps)? {
                        Out::Proved(None) => {}
                        Out::Proved(Some(p)) if exact => children.push(p),
                        Out::Proved(Some(p)) => {
                            let target = Sequent::new(
                                self.formulas(ante.iter().chain(l).copied()),
                                self.formulas(succ.iter().chain(r).copied()),
                            );
                            children.push(reshape(p, &target, self.rs.regime).map_err(ProverError::Incomplete)?);
                        }
                        Out::Failed(_) => continue 'options,
                    }
                }
                self.history.remove(&key);
                if !self.build {
                    return Ok(Out::Proved(None));
                }
                let here = self.sequent(&ante, &succ);
                let mut wide = here.clone();
                if left {
                    wide.ante.push(self.formula(f));
                } else {
                    wide.succ.push(self.formula(f));
                }
                let node = SequentProof::new(&step.rule.name, wide, children);
                return Ok(Out::Proved(Some(reshape(node, &here, self.rs.regime).map_err(ProverError::Incomplete)?)));
            }
        }
        self.history.remove(&key);
        let atomic = ante.iter().chain(&succ).all(|&i| self.is_atomic(i));
        if !any_option && atomic {
            let atoms = ante.iter().filter_map(|&i| match self.nodes[i as usize].0 {
                Head::Var(k) => Some(self.names[k as usize].clone()),
                _ => None,
            });
            return Ok(Out::Failed(Some(atoms.collect())));
        }
        Ok(Out::Failed(None))
    }
}

/// Searches a multi-succedent calculus. Provable sequents get a cut-free
/// proof; the others a two-valued counter-valuation.
pub fn prove_classical(s: &Sequent, rs: &RuleSet, b: SearchBudget) -> Result<ProofResult, ProverError> {
    reject_falsum(s)?;
    if rs.regime.is_single() {
        return Err(ProverError::Unsupported(format!("{} is single-succedent", rs.name)));
    }
    let mut e = Engine {
        rs,
        budget: b.max_expanded,
        expanded: 0,
        build: false,
        history: HashSet::default(),
        nodes: Vec::new(),
        names: Vec::new(),
        conns: HashMap::default(),
        vars: HashMap::default(),
        compounds: HashMap::default(),
        expansions: HashMap::default(),
    };
    let ante = side(s.ante.iter().map(|f| e.intern(f)).collect());
    let succ = side(s.succ.iter().map(|f| e.intern(f)).collect());
    // decide first; proofs are only built once the goal is known provable
    let out = match e.search(ante.clone(), succ.clone())? {
        Out::Proved(_) => {
            e.build = true;
            e.expanded = 0;
            e.search(ante, succ)?
        }
        failed => failed,
    };
    match out {
        Out::Proved(Some(p)) => Ok(ProofResult::Provable(reshape(p, s, rs.regime).map_err(ProverError::Incomplete)?)),
        Out::Proved(None) => unreachable!("the second pass builds proofs"),
        Out::Failed(leaf) => {
            if let Some(atoms) = leaf {
                let v: Valuation = s.vars().into_iter().map(|x| (x.clone(), atoms.contains(&x) as usize)).collect();
                let m = super::boolean_matrix(rs);
                if !crate::semantics::sequent_holds_designated(&m, &v, s)? {
                    return Ok(ProofResult::RefutedClassical(v));
                }
            }
            match classical_refuter(s, rs)? {
                Some(v) => Ok(ProofResult::RefutedClassical(v)),
                None => Err(ProverError::Incomplete(format!("no proof found in {} for a two-valued tautology", rs.name))),
            }
        }
    }
}
