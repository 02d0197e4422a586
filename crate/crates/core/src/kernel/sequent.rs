//! Sequent proofs and their checker.

use crate::formula::{Binding, Formula};
use crate::matching::{match_groups, Group};
use crate::rules::{RuleSchema, RuleSet, Side};
use crate::sequent::{same_multiset, Sequent};

use super::{deep, Verdict};

/// A proof tree. The instantiating binding is not stored: the checker
/// recomputes it from the sequents.
#[derive(Debug, PartialEq, Eq)]
pub struct SequentProof {
    pub conclusion: Sequent,
    pub rule: String,
    pub children: Vec<SequentProof>,
}

impl SequentProof {
    pub fn new(rule: &str, conclusion: Sequent, children: Vec<SequentProof>) -> Self {
        SequentProof { conclusion, rule: rule.to_string(), children }
    }

    pub fn axiom(f: Formula) -> Self {
        SequentProof::new("ax", Sequent::new(vec![f.clone()], vec![f]), vec![])
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            n += 1;
            stack.extend(p.children.iter());
        }
        n
    }

    pub fn height(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(self, 1)];
        while let Some((p, d)) = stack.pop() {
            best = best.max(d);
            stack.extend(p.children.iter().map(|c| (c, d + 1)));
        }
        best
    }

    /// Names of all rules used, with repetition, in preorder.
    pub fn rules_used(&self) -> Vec<&str> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            out.push(p.rule.as_str());
            stack.extend(p.children.iter().rev());
        }
        out
    }
}

impl Clone for SequentProof {
    fn clone(&self) -> Self {
        deep(|| SequentProof {
            conclusion: self.conclusion.clone(),
            rule: self.rule.clone(),
            children: self.children.clone(),
        })
    }
}

impl Drop for SequentProof {
    fn drop(&mut self) {
        let mut stack = std::mem::take(&mut self.children);
        while let Some(mut n) = stack.pop() {
            stack.append(&mut n.children);
        }
    }
}

fn match_cut(conclusion: &Sequent, premises: &[Sequent]) -> Result<Binding, String> {
    let (p1, p2) = (&premises[0], &premises[1]);
    let mut candidates: Vec<&Formula> = p1.succ.iter().filter(|f| p2.ante.contains(f)).collect();
    candidates.sort();
    candidates.dedup();
    if candidates.is_empty() {
        return Err("cut: no formula occurs in the first premise's succedent and the second premise's antecedent".into());
    }
    for a in candidates {
        let mut d1 = p1.succ.clone();
        crate::sequent::remove_one(&mut d1, a);
        let mut g2 = p2.ante.clone();
        crate::sequent::remove_one(&mut g2, a);
        let ante: Vec<Formula> = p1.ante.iter().chain(g2.iter()).cloned().collect();
        let succ: Vec<Formula> = d1.iter().chain(p2.succ.iter()).cloned().collect();
        if same_multiset(&ante, &conclusion.ante) && same_multiset(&succ, &conclusion.succ) {
            return Ok(Binding::from([("A".to_string(), a.clone())]));
        }
    }
    Err("cut: conclusion is not the union of the premise contexts".into())
}

/// Finds a binding instantiating `rule` with the given conclusion and
/// premises, or describes the first mismatch.
pub fn match_instance(rule: &RuleSchema, conclusion: &Sequent, premises: &[Sequent]) -> Result<Binding, String> {
    if premises.len() != rule.premises.len() {
        return Err(format!(
            "rule {} has {} premise(s), node has {}",
            rule.name,
            rule.premises.len(),
            premises.len()
        ));
    }
    if rule.side == Side::Cut {
        return match_cut(conclusion, premises);
    }
    let ctx = |on: bool, id: usize| on.then_some(id);
    const FIXED: [(&str, &str); 3] = [
        ("premise 1 antecedent", "premise 1 succedent"),
        ("premise 2 antecedent", "premise 2 succedent"),
        ("premise 3 antecedent", "premise 3 succedent"),
    ];
    let extra: Vec<(String, String)> =
        (FIXED.len()..premises.len()).map(|i| (format!("premise {} antecedent", i + 1), format!("premise {} succedent", i + 1))).collect();
    let names = FIXED.iter().copied().chain(extra.iter().map(|(l, r)| (l.as_str(), r.as_str())));
    let mut groups = vec![
        Group {
            what: "conclusion antecedent",
            schemas: &rule.conclusion.left,
            formulas: &conclusion.ante,
            ctx: ctx(rule.conclusion.gamma, 0),
        },
        Group {
            what: "conclusion succedent",
            schemas: &rule.conclusion.right,
            formulas: &conclusion.succ,
            ctx: ctx(rule.conclusion.delta, 1),
        },
    ];
    for ((schema, seq), (l, r)) in rule.premises.iter().zip(premises).zip(names) {
        groups.push(Group { what: l, schemas: &schema.left, formulas: &seq.ante, ctx: ctx(schema.gamma, 0) });
        groups.push(Group { what: r, schemas: &schema.right, formulas: &seq.succ, ctx: ctx(schema.delta, 1) });
    }
    let sol = match_groups(&groups, Binding::new()).map_err(|e| format!("{}: {e}", rule.name))?;
    Ok(sol.binding)
}

/// Checks every node of `p` against `rs`. Nodes are visited in preorder and
/// the first failure is reported.
pub fn check_proof(p: &SequentProof, rs: &RuleSet) -> Verdict {
    let mut stack: Vec<(&SequentProof, Vec<usize>)> = vec![(p, Vec::new())];
    while let Some((node, path)) = stack.pop() {
        if let Some(bad) = node.conclusion.formulas().find(|f| !f.well_formed(&rs.signature)) {
            return Verdict::fail(&path, format!("formula {bad:?} is not over the signature of {}", rs.name));
        }
        if rs.regime.is_single() && node.conclusion.succ.len() > 1 {
            return Verdict::fail(&path, format!("succedent has {} formulas in a single-succedent calculus", node.conclusion.succ.len()));
        }
        let Some(rule) = rs.rule(&node.rule) else {
            return Verdict::fail(&path, format!("unknown rule `{}` in {}", node.rule, rs.name));
        };
        let prem: Vec<Sequent> = node.children.iter().map(|c| c.conclusion.clone()).collect();
        if let Err(e) = match_instance(rule, &node.conclusion, &prem) {
            return Verdict::fail(&path, format!("mismatch: {e}"));
        }
        for (i, c) in node.children.iter().enumerate().rev() {
            let mut cp = path.clone();
            cp.push(i);
            stack.push((c, cp));
        }
    }
    Verdict::Ok
}
