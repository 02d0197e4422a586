//! Search in single-succedent calculi.
//!
//! Antecedents are sets and left principals are kept, so every branch only
//! grows its antecedent. Axioms are atomic. Left rules whose premises all
//! keep the succedent are applied eagerly. When the search fails, the
//! failed nodes where every option was tried become the worlds of a Kripke
//! countermodel ordered by antecedent inclusion.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::formula::{Binding, Formula};
use crate::kernel::deep;
use crate::kernel::sequent::SequentProof;
use crate::rules::{RuleSchema, RuleSet, Side};
use crate::semantics::KripkeModel;
use crate::sequent::Sequent;

use super::{apply, classical_refuter, reject_falsum, reshape, ProofResult, ProverError, SearchBudget};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Node {
    ante: BTreeSet<Formula>,
    succ: Option<Formula>,
}

impl Node {
    fn sequent(&self) -> Sequent {
        Sequent::new(self.ante.iter().cloned().collect(), self.succ.iter().cloned().collect())
    }
}

enum Rec {
    /// Every option failed; the failing premise of each option.
    Saturated(Node, Vec<usize>),
    /// Fails because this premise fails.
    Via(usize),
    /// Cut by the loop check against an ancestor.
    Loop(Node),
}

enum Res {
    Proved(Rc<SequentProof>),
    /// `low` is the shallowest ancestor depth a loop cut below referred to.
    Failed { rec: usize, low: usize },
}

struct Prem {
    node: Node,
    /// Keeps the succedent and only adds antecedent formulas.
    keeps: bool,
    target: Sequent,
}

struct Opt<'r> {
    rule: &'r str,
    wide: Sequent,
    premises: Vec<Prem>,
}

struct Engine<'r> {
    rs: &'r RuleSet,
    budget: usize,
    expanded: usize,
    recs: Vec<Rec>,
    rec_of: HashMap<Node, usize>,
    proved: HashMap<Node, Rc<SequentProof>>,
    failed: HashMap<Node, usize>,
    path: HashMap<Node, usize>,
    classical: Option<&'r RuleSchema>,
}

const NO_LOOP: usize = usize::MAX;

impl<'r> Engine<'r> {
    fn new_rec(&mut self, node: &Node, r: Rec) -> usize {
        let is_loop = matches!(r, Rec::Loop(_));
        self.recs.push(r);
        let id = self.recs.len() - 1;
        if !is_loop {
            self.rec_of.entry(node.clone()).or_insert(id);
        }
        id
    }

    fn left_option(&self, n: &Node, f: &Formula, rule: &'r RuleSchema) -> Option<Opt<'r>> {
        if !rule.conclusion.delta && n.succ.is_some() {
            return None;
        }
        let app = apply(rule, f)?;
        let mut premises = Vec::new();
        for (l, r, d) in app.premises.iter().map(|(l, r, d)| (l, r, *d)) {
            let succ = match (r.first(), d) {
                (Some(x), _) => Some(x.clone()),
                (None, true) => n.succ.clone(),
                (None, false) => None,
            };
            let keeps = r.is_empty() && d && rule.conclusion.delta;
            let node = Node { ante: n.ante.iter().chain(l).cloned().collect(), succ: succ.clone() };
            if node == *n {
                return None;
            }
            let target = Sequent::new(n.ante.iter().chain(l).cloned().collect(), succ.into_iter().collect());
            premises.push(Prem { node, keeps, target });
        }
        let mut wide = n.sequent();
        wide.ante.push(f.clone());
        if !rule.conclusion.delta {
            wide.succ.clear();
        }
        Some(Opt { rule: &rule.name, wide, premises })
    }

    fn right_option(&self, n: &Node, f: &Formula, rule: &'r RuleSchema) -> Option<Opt<'r>> {
        let app = apply(rule, f)?;
        let mut premises = Vec::new();
        for (l, r, _) in &app.premises {
            let node = Node { ante: n.ante.iter().chain(l).cloned().collect(), succ: r.first().cloned() };
            let target = Sequent::new(n.ante.iter().chain(l).cloned().collect(), r.clone());
            premises.push(Prem { node, keeps: false, target });
        }
        Some(Opt { rule: &rule.name, wide: n.sequent(), premises })
    }

    fn left_rules(&self, f: &Formula) -> Vec<&'r RuleSchema> {
        match f.connective() {
            Some(c) => self.rs.logical_rules(c, Side::Left).collect(),
            None => Vec::new(),
        }
    }

    fn eager(&self, n: &Node) -> Option<Opt<'r>> {
        for f in &n.ante {
            for rule in self.left_rules(f) {
                if let Some(o) = self.left_option(n, f, rule) {
                    if o.premises.iter().all(|p| p.keeps) {
                        return Some(o);
                    }
                }
            }
        }
        None
    }

    fn options(&self, n: &Node) -> Vec<Opt<'r>> {
        let mut out = Vec::new();
        if let Some(c) = &n.succ {
            if let Some(conn) = c.connective() {
                for rule in self.rs.logical_rules(conn, Side::Right) {
                    out.extend(self.right_option(n, c, rule));
                }
            }
        }
        for f in &n.ante {
            for rule in self.left_rules(f) {
                out.extend(self.left_option(n, f, rule));
            }
        }
        if let Some(c) = &n.succ {
            let node = Node { ante: n.ante.clone(), succ: None };
            out.push(Opt {
                rule: "WR'",
                wide: n.sequent(),
                premises: vec![Prem { target: node.sequent(), node, keeps: false }],
            });
            if let Some(rule) = self.classical {
                let b = Binding::from([("A".to_string(), c.clone())]);
                let neg: Vec<Formula> = rule.premises[0].left.iter().filter_map(|s| s.substitute(&b).ok()).collect();
                if neg.iter().any(|x| !n.ante.contains(x)) {
                    let node = Node { ante: n.ante.iter().chain(&neg).cloned().collect(), succ: Some(c.clone()) };
                    let target = Sequent::new(n.ante.iter().chain(&neg).cloned().collect(), vec![c.clone()]);
                    out.push(Opt { rule: &rule.name, wide: n.sequent(), premises: vec![Prem { node, keeps: false, target }] });
                }
            }
        }
        out
    }

    fn build(&self, o: &Opt<'r>, proofs: Vec<Rc<SequentProof>>, here: &Sequent) -> Result<Rc<SequentProof>, ProverError> {
        let mut children = Vec::new();
        for (p, prem) in proofs.into_iter().zip(&o.premises) {
            children.push(reshape((*p).clone(), &prem.target, self.rs.regime).map_err(ProverError::Incomplete)?);
        }
        let node = SequentProof::new(o.rule, o.wide.clone(), children);
        Ok(Rc::new(reshape(node, here, self.rs.regime).map_err(ProverError::Incomplete)?))
    }

    fn search(&mut self, n: Node) -> Result<Res, ProverError> {
        deep(|| self.search_inner(n))
    }

    fn search_inner(&mut self, n: Node) -> Result<Res, ProverError> {
        if let Some(p) = self.proved.get(&n) {
            return Ok(Res::Proved(p.clone()));
        }
        if let Some(&rec) = self.failed.get(&n) {
            return Ok(Res::Failed { rec, low: NO_LOOP });
        }
        if let Some(&d) = self.path.get(&n) {
            let rec = self.new_rec(&n, Rec::Loop(n.clone()));
            return Ok(Res::Failed { rec, low: d });
        }
        self.expanded += 1;
        if self.expanded > self.budget {
            return Err(ProverError::BudgetExhausted(self.budget));
        }
        let here = n.sequent();
        if let Some(c @ Formula::Var(_)) = &n.succ {
            if n.ante.contains(c) {
                let p = Rc::new(reshape(SequentProof::axiom(c.clone()), &here, self.rs.regime).map_err(ProverError::Incomplete)?);
                self.proved.insert(n, p.clone());
                return Ok(Res::Proved(p));
            }
        }
        let depth = self.path.len();
        self.path.insert(n.clone(), depth);
        let out = self.expand(&n, &here);
        self.path.remove(&n);
        let (res, low) = match out? {
            Ok(p) => {
                self.proved.insert(n, p.clone());
                return Ok(Res::Proved(p));
            }
            Err(x) => x,
        };
        let rec = self.new_rec(&n, res);
        if low >= depth {
            self.failed.insert(n, rec);
            Ok(Res::Failed { rec, low: NO_LOOP })
        } else {
            Ok(Res::Failed { rec, low })
        }
    }

    /// Proof, or the failure record and its loop dependency.
    #[allow(clippy::type_complexity)]
    fn expand(&mut self, n: &Node, here: &Sequent) -> Result<Result<Rc<SequentProof>, (Rec, usize)>, ProverError> {
        if let Some(o) = self.eager(n) {
            let mut proofs = Vec::new();
            for prem in &o.premises {
                match self.search(prem.node.clone())? {
                    Res::Proved(p) => proofs.push(p),
                    Res::Failed { rec, low } => return Ok(Err((Rec::Via(rec), low))),
                }
            }
            return Ok(Ok(self.build(&o, proofs, here)?));
        }
        let mut failures = Vec::new();
        let mut low = NO_LOOP;
        for o in self.options(n) {
            let mut proofs: Vec<Option<Rc<SequentProof>>> = vec![None; o.premises.len()];
            let order = (0..o.premises.len()).filter(|&i| !o.premises[i].keeps).chain((0..o.premises.len()).filter(|&i| o.premises[i].keeps));
            let mut failed = None;
            for i in order {
                match self.search(o.premises[i].node.clone())? {
                    Res::Proved(p) => proofs[i] = Some(p),
                    Res::Failed { rec, low: l } => {
                        failed = Some((i, rec, l));
                        break;
                    }
                }
            }
            match failed {
                None => {
                    let proofs = proofs.into_iter().map(|p| p.expect("all premises proved")).collect();
                    return Ok(Ok(self.build(&o, proofs, here)?));
                }
                // the node is at least as hard as a premise that only adds
                // antecedent formulas
                Some((i, rec, l)) if o.premises[i].keeps => return Ok(Err((Rec::Via(rec), l))),
                Some((_, rec, l)) => {
                    failures.push(rec);
                    low = low.min(l);
                }
            }
        }
        Ok(Err((Rec::Saturated(n.clone(), failures), low)))
    }

    fn rep(&self, mut rec: usize) -> Result<usize, ProverError> {
        for _ in 0..=self.recs.len() {
            match &self.recs[rec] {
                Rec::Saturated(..) => return Ok(rec),
                Rec::Via(p) => rec = *p,
                Rec::Loop(n) => {
                    rec = *self
                        .rec_of
                        .get(n)
                        .filter(|&&r| !matches!(self.recs[r], Rec::Loop(_)))
                        .or_else(|| self.failed.get(n))
                        .ok_or_else(|| ProverError::Incomplete("loop target has no failure record".into()))?;
                }
            }
        }
        Err(ProverError::Incomplete("cyclic failure records".into()))
    }

    /// Worlds are the saturated sequents reachable from the root, merged
    /// when their antecedents coincide (such worlds would be mutually
    /// accessible); the order is antecedent inclusion, given by its covers.
    fn countermodel(&self, root: usize) -> Result<(KripkeModel, usize), ProverError> {
        let mut seen = BTreeSet::new();
        let mut worlds: Vec<&BTreeSet<Formula>> = Vec::new();
        let mut index: HashMap<&BTreeSet<Formula>, usize> = HashMap::new();
        let mut stack = vec![self.rep(root)?];
        while let Some(r) = stack.pop() {
            if !seen.insert(r) {
                continue;
            }
            if let Rec::Saturated(n, fails) = &self.recs[r] {
                if !index.contains_key(&n.ante) {
                    index.insert(&n.ante, worlds.len());
                    worlds.push(&n.ante);
                }
                for &f in fails {
                    stack.push(self.rep(f)?);
                }
            }
        }
        let names = (0..worlds.len()).map(|i| format!("w{i}")).collect();
        let below = |a: &BTreeSet<Formula>, b: &BTreeSet<Formula>| a != b && a.is_subset(b);
        let mut order = Vec::new();
        for (i, a) in worlds.iter().enumerate() {
            for (j, b) in worlds.iter().enumerate() {
                if below(a, b) && !worlds.iter().any(|k| below(a, k) && below(k, b)) {
                    order.push((i, j));
                }
            }
        }
        let val = worlds
            .iter()
            .map(|ante| {
                ante.iter()
                    .filter_map(|f| match f {
                        Formula::Var(v) => Some(v.clone()),
                        _ => None,
                    })
                    .collect()
            })
            .collect();
        let model = KripkeModel::new(names, order, val)?;
        let Rec::Saturated(n, _) = &self.recs[self.rep(root)?] else { unreachable!() };
        Ok((model, index[&n.ante]))
    }
}

/// Searches a single-succedent calculus. Unprovable sequents get a Kripke
/// countermodel, or a two-valued one when the calculus has a classical rule.
pub fn prove_intuitionistic(s: &Sequent, rs: &RuleSet, b: SearchBudget) -> Result<ProofResult, ProverError> {
    reject_falsum(s)?;
    if !rs.regime.is_single() {
        return Err(ProverError::Unsupported(format!("{} is multi-succedent", rs.name)));
    }
    if s.succ.len() > 1 {
        return Err(ProverError::Unsupported("single-succedent search needs at most one succedent formula".into()));
    }
    let classical = rs.classical_rules().next();
    if classical.is_some() {
        // classical calculi: non-theorems are settled by a valuation
        if let Some(v) = classical_refuter(s, rs)? {
            return Ok(ProofResult::RefutedClassical(v));
        }
    }
    let mut e = Engine {
        rs,
        budget: b.max_expanded,
        expanded: 0,
        recs: Vec::new(),
        rec_of: HashMap::new(),
        proved: HashMap::new(),
        failed: HashMap::new(),
        path: HashMap::new(),
        classical,
    };
    let root = Node { ante: s.ante.iter().cloned().collect(), succ: s.succ.first().cloned() };
    match e.search(root)? {
        Res::Proved(p) => {
            let p = Rc::try_unwrap(p).unwrap_or_else(|rc| (*rc).clone());
            Ok(ProofResult::Provable(reshape(p, s, rs.regime).map_err(ProverError::Incomplete)?))
        }
        Res::Failed { rec, .. } => {
            if e.classical.is_some() {
                return Err(ProverError::Incomplete(format!("no proof found in {} for a two-valued tautology", rs.name)));
            }
            let (model, world) = e.countermodel(rec)?;
            Ok(ProofResult::RefutedIntuitionistic { model, world })
        }
    }
}
