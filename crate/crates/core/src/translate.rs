//! Translations between single-succedent sequent proofs and
//! natural-deduction derivations, and between multi-succedent proofs and
//! classical single-succedent ones.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::formula::{Binding, Formula, NOT};
use crate::kernel::deep;
use crate::kernel::nd::{check_derivation, graft, Label, NdDerivation};
use crate::kernel::sequent::{check_proof, match_instance, SequentProof};
use crate::prover::reshape;
use crate::rules::{NdKind, Regime, RuleSchema, RuleSet, Side};
use crate::sequent::{remove_one, Sequent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranslateError {
    #[error("input does not check: {0}")]
    NotOk(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("bad designation: {0}")]
    Designation(String),
}

use TranslateError::Unsupported;

fn unsupported(msg: impl Into<String>) -> TranslateError {
    Unsupported(msg.into())
}

fn reshaped(p: SequentProof, target: &Sequent, regime: Regime) -> Result<SequentProof, TranslateError> {
    reshape(p, target, regime).map_err(Unsupported)
}

fn goal(s: &Sequent) -> Formula {
    s.succ.first().cloned().unwrap_or(Formula::Falsum)
}

fn succ_of(f: &Formula) -> Vec<Formula> {
    if *f == Formula::Falsum {
        vec![]
    } else {
        vec![f.clone()]
    }
}

/// `¬a` in the vocabulary of `rs`: `~a` when negation is primitive,
/// `a | a` otherwise.
pub fn negate(rs: &RuleSet, a: &Formula) -> Result<Formula, TranslateError> {
    match rs.negation() {
        Some(NOT) => Ok(Formula::compound(NOT, vec![a.clone()])),
        Some(_) => Ok(Formula::stroke_neg(a.clone())),
        None => Err(unsupported(format!("{} has no negation", rs.name))),
    }
}

fn instantiate(rule: &RuleSchema, b: &Binding) -> Result<Vec<(Vec<Formula>, Vec<Formula>)>, TranslateError> {
    let inst = |v: &[crate::formula::Schema]| {
        v.iter().map(|s| s.substitute(b)).collect::<Result<Vec<_>, _>>().map_err(|e| unsupported(e.to_string()))
    };
    rule.premises.iter().map(|p| Ok((inst(&p.left)?, inst(&p.right)?))).collect()
}

fn principal_of(rule: &RuleSchema, b: &Binding) -> Result<Formula, TranslateError> {
    rule.principal
        .as_ref()
        .ok_or_else(|| unsupported(format!("{} has no principal formula", rule.name)))?
        .substitute(b)
        .map_err(|e| unsupported(e.to_string()))
}

fn node_binding(rule: &RuleSchema, p: &SequentProof) -> Result<Binding, TranslateError> {
    let prem: Vec<Sequent> = p.children.iter().map(|c| c.conclusion.clone()).collect();
    match_instance(rule, &p.conclusion, &prem).map_err(TranslateError::NotOk)
}

fn binding_for(rule: &RuleSchema, f: &Formula) -> Option<Binding> {
    let mut b = Binding::new();
    rule.principal.as_ref()?.match_formula(f, &mut b).then_some(b)
}

/// A left rule on `¬a` whose premises all read `Γ ⊢ a`.
fn negation_left<'r>(rs: &'r RuleSet, neg: &Formula, a: &Formula) -> Result<&'r RuleSchema, TranslateError> {
    let conn = neg.connective().unwrap_or_default();
    rs.logical_rules(conn, Side::Left)
        .find(|r| {
            binding_for(r, neg).is_some_and(|b| {
                instantiate(r, &b).is_ok_and(|ps| ps.iter().all(|(l, rr)| l.is_empty() && rr.as_slice() == [a.clone()]))
            })
        })
        .ok_or_else(|| unsupported(format!("{} has no negation left rule", rs.name)))
}

// ---------------------------------------------------------------------------
// sequent proofs to derivations

#[derive(Default)]
struct Labels(HashMap<Formula, Label>);

impl Labels {
    fn of(&mut self, f: &Formula) -> Label {
        let n = self.0.len() as Label + 1;
        *self.0.entry(f.clone()).or_insert(n)
    }
}

type Open = BTreeMap<Label, Formula>;

fn nd_name_for<'r>(rs: &'r RuleSet, seq_rule: &str) -> Result<&'r str, TranslateError> {
    rs.nd_rules
        .iter()
        .find(|r| r.from_sequent.as_deref() == Some(seq_rule))
        .map(|r| r.name.as_str())
        .ok_or_else(|| unsupported(format!("no natural-deduction counterpart of {seq_rule} in {}", rs.name)))
}

/// Translates a proof in a single-succedent calculus into a derivation of
/// its succedent (or `_|_`) from assumptions among its antecedent.
pub fn sequent_to_nd(p: &SequentProof, rs: &RuleSet) -> Result<NdDerivation, TranslateError> {
    if !rs.regime.is_single() {
        return Err(unsupported("only single-succedent calculi translate to natural deduction"));
    }
    let v = check_proof(p, rs);
    if !v.is_ok() {
        return Err(TranslateError::NotOk(v.to_string()));
    }
    let mut labels = Labels::default();
    Ok(s2n(p, rs, &mut labels)?.0)
}

fn s2n(p: &SequentProof, rs: &RuleSet, labels: &mut Labels) -> Result<(NdDerivation, Open), TranslateError> {
    deep(|| {
        let rule = rs.rule(&p.rule).ok_or_else(|| unsupported(format!("unknown rule {}", p.rule)))?;
        let here = goal(&p.conclusion);
        match rule.side {
            Side::Structural => match p.rule.as_str() {
                "ax" => {
                    let l = labels.of(&here);
                    Ok((NdDerivation::assume(here.clone(), l), Open::from([(l, here)])))
                }
                "WL" | "CL" => s2n(&p.children[0], rs, labels),
                "WR'" => {
                    let (d, o) = s2n(&p.children[0], rs, labels)?;
                    Ok((NdDerivation::infer(nd_name_for(rs, "WR'")?, here, vec![d]), o))
                }
                other => Err(unsupported(format!("structural rule {other}"))),
            },
            Side::Cut => {
                let b = node_binding(rule, p)?;
                let a = &b["A"];
                let (d1, o1) = s2n(&p.children[0], rs, labels)?;
                let (d2, mut o2) = s2n(&p.children[1], rs, labels)?;
                let la = labels.of(a);
                if o2.remove(&la).is_some() {
                    o2.extend(o1);
                    Ok((graft(&d2, a, &d1), o2))
                } else {
                    Ok((d2, o2))
                }
            }
            Side::Right | Side::Left => {
                let b = node_binding(rule, p)?;
                let principal = principal_of(rule, &b)?;
                let aux = instantiate(rule, &b)?;
                let name = nd_name_for(rs, &rule.name)?;
                let mut children = Vec::new();
                let mut open = Open::new();
                let mut discharges = Vec::new();
                let offset = if rule.side == Side::Left { 1 } else { 0 };
                if rule.side == Side::Left {
                    let l = labels.of(&principal);
                    children.push(NdDerivation::assume(principal.clone(), l));
                    open.insert(l, principal.clone());
                }
                for (i, (c, (left, _))) in p.children.iter().zip(&aux).enumerate() {
                    let (d, mut o) = s2n(c, rs, labels)?;
                    let ls: BTreeSet<Label> = left.iter().map(|f| labels.of(f)).filter(|l| o.contains_key(l)).collect();
                    for l in &ls {
                        o.remove(l);
                    }
                    open.extend(o);
                    children.push(d);
                    discharges.push((i + offset, ls));
                }
                let concl = if rule.side == Side::Right {
                    principal
                } else if rule.conclusion.delta {
                    here
                } else {
                    Formula::Falsum
                };
                let mut d = NdDerivation::infer(name, concl, children);
                for (i, ls) in discharges {
                    d = d.discharging(i, ls);
                }
                Ok((d, open))
            }
            Side::Classical => {
                let a = here;
                let neg = {
                    let b = Binding::from([("A".to_string(), a.clone())]);
                    rule.premises[0].left[0].substitute(&b).map_err(|e| unsupported(e.to_string()))?
                };
                let (d, mut o) = s2n(&p.children[0], rs, labels)?;
                let nl = negation_left(rs, &neg, &a)?;
                let ln = labels.of(&neg);
                let mut kids = vec![NdDerivation::assume(neg.clone(), ln)];
                kids.extend(std::iter::repeat_with(|| d.clone()).take(nl.premises.len()));
                let bot = NdDerivation::infer(nd_name_for(rs, &nl.name)?, Formula::Falsum, kids);
                o.remove(&ln);
                let out = NdDerivation::infer(nd_name_for(rs, &rule.name)?, a, vec![bot]).discharging(0, [ln]);
                Ok((out, o))
            }
        }
    })
}

// ---------------------------------------------------------------------------
// derivations to sequent proofs

/// Translates a derivation into a proof of `open assumptions ⊢ conclusion`
/// (empty succedent for `_|_`).
pub fn nd_to_sequent(d: &NdDerivation, rs: &RuleSet) -> Result<SequentProof, TranslateError> {
    if !rs.regime.is_single() {
        return Err(unsupported("multiple-conclusion derivations are not translated"));
    }
    let v = check_derivation(d, rs);
    if !v.is_ok() {
        return Err(TranslateError::NotOk(v.to_string()));
    }
    Ok(n2s(d, rs)?.0)
}

fn values(o: &Open) -> Vec<Formula> {
    o.values().cloned().collect()
}

fn n2s(d: &NdDerivation, rs: &RuleSet) -> Result<(SequentProof, Open), TranslateError> {
    deep(|| {
        let NdDerivation::Inference { rule, children, .. } = d else {
            let NdDerivation::Assumption { formula, label } = d else { unreachable!() };
            return Ok((SequentProof::axiom(formula.clone()), Open::from([(*label, formula.clone())])));
        };
        let nd = rs.nd_rule(rule).ok_or_else(|| unsupported(format!("unknown rule {rule}")))?;
        let seq_rule = nd
            .from_sequent
            .as_deref()
            .and_then(|n| rs.rule(n))
            .ok_or_else(|| unsupported(format!("{rule} has no sequent counterpart")))?;
        let c = d.formula();
        let regime = rs.regime;
        let mut subs = Vec::new();
        for (i, ch) in children.iter().enumerate() {
            let (p, mut o) = n2s(ch, rs)?;
            let full = o.clone();
            for l in d.discharged_at(i) {
                o.remove(&l);
            }
            subs.push((p, full, o));
        }
        let mut open = Open::new();
        for (_, _, o) in &subs {
            open.extend(o.iter().map(|(k, v)| (*k, v.clone())));
        }
        let gamma = values(&open);
        match nd.kind {
            NdKind::FalsumIntro => {
                let (p, _, _) = subs.pop().expect("one premise");
                let p = reshaped(p, &Sequent::new(gamma.clone(), vec![]), regime)?;
                Ok((SequentProof::new(&seq_rule.name, Sequent::new(gamma, vec![c]), vec![p]), open))
            }
            NdKind::Intro => {
                let b = binding_for(seq_rule, &c).ok_or_else(|| unsupported(format!("{rule} conclusion does not match")))?;
                let aux = instantiate(seq_rule, &b)?;
                let mut kids = Vec::new();
                for ((p, _, _), (l, r)) in subs.into_iter().zip(aux) {
                    let target = Sequent::new(gamma.iter().chain(&l).cloned().collect(), r);
                    kids.push(reshaped(p, &target, regime)?);
                }
                Ok((SequentProof::new(&seq_rule.name, Sequent::new(gamma, vec![c]), kids), open))
            }
            NdKind::Elim => {
                let mut it = subs.into_iter();
                let (major, o0, _) = it.next().expect("major premise");
                let principal = children[0].formula();
                let b = binding_for(seq_rule, &principal).ok_or_else(|| unsupported(format!("{rule} major premise does not match")))?;
                let aux = instantiate(seq_rule, &b)?;
                let minors: Vec<_> = it.collect();
                let mut o_minor = Open::new();
                for (_, _, o) in &minors {
                    o_minor.extend(o.iter().map(|(k, v)| (*k, v.clone())));
                }
                let g1 = values(&o_minor);
                let s = if seq_rule.conclusion.delta { succ_of(&c) } else { vec![] };
                let mut kids = Vec::new();
                for (((p, _, _), (l, r)), schema) in minors.into_iter().zip(aux).zip(&seq_rule.premises) {
                    let succ = if !r.is_empty() {
                        r
                    } else if schema.delta {
                        s.clone()
                    } else {
                        vec![]
                    };
                    let target = Sequent::new(g1.iter().chain(&l).cloned().collect(), succ);
                    kids.push(reshaped(p, &target, regime)?);
                }
                let left = SequentProof::new(
                    &seq_rule.name,
                    Sequent::new(std::iter::once(principal).chain(g1.iter().cloned()).collect(), s.clone()),
                    kids,
                );
                let cut_ante: Vec<Formula> = values(&o0).into_iter().chain(g1).collect();
                let cut = SequentProof::new("cut", Sequent::new(cut_ante, s.clone()), vec![major, left]);
                Ok((reshaped(cut, &Sequent::new(gamma, s), regime)?, open))
            }
            NdKind::ClassicalElim => {
                let (p, _, _) = subs.pop().expect("one premise");
                let neg = {
                    let b = Binding::from([("A".to_string(), c.clone())]);
                    seq_rule.premises[0].left[0].substitute(&b).map_err(|e| unsupported(e.to_string()))?
                };
                let with_neg: Vec<Formula> = gamma.iter().cloned().chain([neg]).collect();
                let p = reshaped(p, &Sequent::new(with_neg.clone(), vec![]), regime)?;
                let w = SequentProof::new("WR'", Sequent::new(with_neg, vec![c.clone()]), vec![p]);
                Ok((SequentProof::new(&seq_rule.name, Sequent::new(gamma, vec![c]), vec![w]), open))
            }
            NdKind::Structural => Err(unsupported("multiple-conclusion structural rules")),
        }
    })
}

// ---------------------------------------------------------------------------
// classical shift

fn single_counterpart<'r>(single: &'r RuleSet, multi_rule: &str) -> Option<&'r RuleSchema> {
    single.sequent_rules.iter().find(|r| r.origin.as_ref().is_some_and(|o| o.name == multi_rule))
}

/// Proof of `⊢ a, ¬a` in the multi-succedent calculus `multi`.
fn excluded_middle(multi: &RuleSet, neg: &Formula, a: &Formula) -> Result<SequentProof, TranslateError> {
    let conn = neg.connective().unwrap_or_default();
    let rule = multi
        .logical_rules(conn, Side::Right)
        .next()
        .ok_or_else(|| unsupported(format!("{} has no right rule for negation", multi.name)))?;
    let b = binding_for(rule, neg).ok_or_else(|| unsupported("negation right rule does not match"))?;
    let mut kids = Vec::new();
    for (l, r) in instantiate(rule, &b)? {
        let target = Sequent::new(l, r.into_iter().chain([a.clone()]).collect());
        kids.push(reshaped(SequentProof::axiom(a.clone()), &target, Regime::Multi)?);
    }
    Ok(SequentProof::new(&rule.name, Sequent::new(vec![], vec![neg.clone(), a.clone()]), kids))
}

/// Turns a proof in the classical single-succedent calculus `single` of
/// `Γ, ¬Δ ⊢ A` into a proof of `Γ ⊢ Δ, A` in its multi-succedent
/// counterpart; `negated` lists the occurrences of `¬Δ`.
pub fn classical_shift(p: &SequentProof, single: &RuleSet, negated: &[Formula]) -> Result<SequentProof, TranslateError> {
    let v = check_proof(p, single);
    if !v.is_ok() {
        return Err(TranslateError::NotOk(v.to_string()));
    }
    let multi = single.multi_counterpart();
    let mut rest = p.conclusion.ante.clone();
    let mut pairs = Vec::new();
    for n in negated {
        let inner = match (single.negation(), n) {
            (Some(NOT), Formula::Compound(c, args)) if c == NOT => args[0].clone(),
            (Some(_), Formula::Compound(_, args)) if args.len() == 2 && args[0] == args[1] && negate(single, &args[0])? == *n => {
                args[0].clone()
            }
            _ => return Err(TranslateError::Designation(format!("{n:?} is not a negation"))),
        };
        if !remove_one(&mut rest, n) {
            return Err(TranslateError::Designation(format!("{n:?} is not in the antecedent")));
        }
        pairs.push((n.clone(), inner));
    }
    let mut out = embed(p, single, &multi)?;
    for (n, b) in pairs {
        let em = excluded_middle(&multi, &n, &b)?;
        let mut ante = out.conclusion.ante.clone();
        remove_one(&mut ante, &n);
        let succ: Vec<Formula> = std::iter::once(b).chain(out.conclusion.succ.iter().cloned()).collect();
        out = SequentProof::new("cut", Sequent::new(ante, succ), vec![em, out]);
    }
    Ok(out)
}

fn embed(p: &SequentProof, single: &RuleSet, multi: &RuleSet) -> Result<SequentProof, TranslateError> {
    deep(|| {
        let rule = single.rule(&p.rule).ok_or_else(|| unsupported(format!("unknown rule {}", p.rule)))?;
        let kids = || p.children.iter().map(|c| embed(c, single, multi)).collect::<Result<Vec<_>, _>>();
        match rule.side {
            Side::Structural | Side::Cut => {
                let name = if p.rule == "WR'" { "WR" } else { p.rule.as_str() };
                Ok(SequentProof::new(name, p.conclusion.clone(), kids()?))
            }
            Side::Left | Side::Right => {
                let origin = rule.origin.as_deref().ok_or_else(|| unsupported(format!("{} has no multi-succedent origin", rule.name)))?;
                let b = node_binding(rule, p)?;
                let principal = principal_of(rule, &b)?;
                let ob = binding_for(origin, &principal).ok_or_else(|| unsupported("origin does not match"))?;
                let (mut gamma, mut delta) = (p.conclusion.ante.clone(), p.conclusion.succ.clone());
                if rule.side == Side::Left {
                    remove_one(&mut gamma, &principal);
                } else {
                    remove_one(&mut delta, &principal);
                }
                let mut out = Vec::new();
                for (k, (l, r)) in kids()?.into_iter().zip(instantiate(origin, &ob)?) {
                    let target = Sequent::new(gamma.iter().chain(&l).cloned().collect(), r.into_iter().chain(delta.iter().cloned()).collect());
                    out.push(reshaped(k, &target, Regime::Multi)?);
                }
                Ok(SequentProof::new(&origin.name, p.conclusion.clone(), out))
            }
            Side::Classical => {
                let a = goal(&p.conclusion);
                let child = kids()?.pop().expect("one premise");
                let neg = negate(single, &a)?;
                let em = excluded_middle(multi, &neg, &a)?;
                let twice = Sequent::new(p.conclusion.ante.clone(), vec![a.clone(), a]);
                let cut = SequentProof::new("cut", twice, vec![em, child]);
                Ok(SequentProof::new("CR", p.conclusion.clone(), vec![cut]))
            }
        }
    })
}

struct Unshift<'r> {
    multi: &'r RuleSet,
    single: &'r RuleSet,
    classical: &'r RuleSchema,
}

impl Unshift<'_> {
    fn neg(&self, a: &Formula) -> Result<Formula, TranslateError> {
        negate(self.single, a)
    }

    fn negs(&self, v: &[Formula]) -> Result<Vec<Formula>, TranslateError> {
        v.iter().map(|a| self.neg(a)).collect()
    }

    /// `Σ ⊢ a` from a proof of `Σ, ¬a ⊢`.
    fn keep(&self, q: SequentProof, a: &Formula) -> Result<SequentProof, TranslateError> {
        let n = self.neg(a)?;
        let mut sigma = q.conclusion.ante.clone();
        if !remove_one(&mut sigma, &n) {
            return Err(unsupported("keep: negation missing"));
        }
        let w = SequentProof::new("WR'", Sequent::new(q.conclusion.ante.clone(), vec![a.clone()]), vec![q]);
        Ok(SequentProof::new(&self.classical.name, Sequent::new(sigma, vec![a.clone()]), vec![w]))
    }

    /// `¬a, Σ ⊢` from a proof of `Σ ⊢ a`.
    fn move_left(&self, q: SequentProof, a: &Formula) -> Result<SequentProof, TranslateError> {
        let n = self.neg(a)?;
        let rule = negation_left(self.single, &n, a)?;
        let mut ante = q.conclusion.ante.clone();
        ante.push(n.clone());
        if rule.premises.len() < 2 || q.rule == "ax" {
            let kids = std::iter::repeat_with(|| q.clone()).take(rule.premises.len()).collect();
            return Ok(SequentProof::new(&rule.name, Sequent::new(ante, vec![]), kids));
        }
        // copying q into every premise is exponential in nested negations;
        // cut it against `a, ¬a ⊢` instead
        let ax = SequentProof::axiom(a.clone());
        let lemma = SequentProof::new(&rule.name, Sequent::new(vec![a.clone(), n], vec![]), vec![ax; rule.premises.len()]);
        Ok(SequentProof::new("cut", Sequent::new(ante, vec![]), vec![q, lemma]))
    }

    /// Proof of `Σ, ¬Π ⊢` for a multi-succedent proof of `Σ ⊢ Π`.
    fn negated(&self, p: &SequentProof) -> Result<SequentProof, TranslateError> {
        deep(|| {
            let rule = self.multi.rule(&p.rule).ok_or_else(|| unsupported(format!("unknown rule {}", p.rule)))?;
            let concl = |s: &Sequent| -> Result<Sequent, TranslateError> {
                Ok(Sequent::new(s.ante.iter().cloned().chain(self.negs(&s.succ)?).collect(), vec![]))
            };
            let here = concl(&p.conclusion)?;
            let kids = || p.children.iter().map(|c| self.negated(c)).collect::<Result<Vec<_>, _>>();
            match (rule.side, p.rule.as_str()) {
                (Side::Structural, "ax") => {
                    let a = goal(&p.conclusion);
                    self.move_left(SequentProof::axiom(a.clone()), &a)
                }
                (Side::Structural, "WL" | "WR") => Ok(SequentProof::new("WL", here, kids()?)),
                (Side::Structural, "CL" | "CR") => Ok(SequentProof::new("CL", here, kids()?)),
                (Side::Cut, _) => {
                    let a = node_binding(rule, p)?["A"].clone();
                    let mut k = kids()?;
                    let second = k.pop().expect("two premises");
                    let first = self.keep(k.pop().expect("two premises"), &a)?;
                    Ok(SequentProof::new("cut", here, vec![first, second]))
                }
                (Side::Left | Side::Right, _) => {
                    let target = single_counterpart(self.single, &rule.name)
                        .ok_or_else(|| unsupported(format!("{} has no single-succedent counterpart of {}", self.single.name, rule.name)))?;
                    let b = node_binding(rule, p)?;
                    let principal = principal_of(rule, &b)?;
                    let (mut gamma, mut delta) = (p.conclusion.ante.clone(), p.conclusion.succ.clone());
                    if rule.side == Side::Left {
                        remove_one(&mut gamma, &principal);
                    } else {
                        remove_one(&mut delta, &principal);
                    }
                    let ctx: Vec<Formula> = gamma.iter().cloned().chain(self.negs(&delta)?).collect();
                    let mut out = Vec::new();
                    for (k, (l, r)) in kids()?.into_iter().zip(instantiate(rule, &b)?) {
                        let base: Vec<Formula> = ctx.iter().chain(&l).cloned().collect();
                        let q = match r.as_slice() {
                            [] => reshaped(k, &Sequent::new(base, vec![]), Regime::Single)?,
                            [x] => {
                                let with: Vec<Formula> = base.iter().cloned().chain([self.neg(x)?]).collect();
                                self.keep(reshaped(k, &Sequent::new(with, vec![]), Regime::Single)?, x)?
                            }
                            _ => return Err(unsupported(format!("{} has premises with several right auxiliaries", rule.name))),
                        };
                        out.push(q);
                    }
                    if rule.side == Side::Left {
                        let ante: Vec<Formula> = std::iter::once(principal).chain(ctx).collect();
                        let node = SequentProof::new(&target.name, Sequent::new(ante, vec![]), out);
                        reshaped(node, &here, Regime::Single)
                    } else {
                        let node = SequentProof::new(&target.name, Sequent::new(ctx, vec![principal.clone()]), out);
                        reshaped(self.move_left(node, &principal)?, &here, Regime::Single)
                    }
                }
                _ => Err(unsupported(format!("rule {} in a multi-succedent proof", p.rule))),
            }
        })
    }
}

/// Turns a proof of `Γ ⊢ Δ, Δ′` in the multi-succedent calculus `multi`
/// into a proof of `Γ, ¬Δ ⊢ Δ′` in the classical single-succedent calculus
/// `single`; `moved` lists the occurrences of `Δ`.
pub fn classical_unshift(p: &SequentProof, multi: &RuleSet, single: &RuleSet, moved: &[Formula]) -> Result<SequentProof, TranslateError> {
    let v = check_proof(p, multi);
    if !v.is_ok() {
        return Err(TranslateError::NotOk(v.to_string()));
    }
    let classical = single
        .classical_rules()
        .next()
        .ok_or_else(|| unsupported(format!("{} has no classical rule", single.name)))?;
    let mut kept = p.conclusion.succ.clone();
    for m in moved {
        if !remove_one(&mut kept, m) {
            return Err(TranslateError::Designation(format!("{m:?} is not in the succedent")));
        }
    }
    if kept.len() > 1 {
        return Err(TranslateError::Designation(format!("{} formulas would stay in the succedent", kept.len())));
    }
    let u = Unshift { multi, single, classical };
    let q = u.negated(p)?;
    match kept.first() {
        None => Ok(q),
        Some(a) => u.keep(q, a),
    }
}

#[cfg(test)]
mod tests;
