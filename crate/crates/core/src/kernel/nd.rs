//! Natural-deduction derivations: checking, open assumptions, grafting.
//!
//! Labels are global: every leaf carrying a given label carries the same
//! formula, and the checker rejects derivations where this fails. A label
//! discharged at a premise closes all its leaves in that subderivation.

use std::collections::{BTreeMap, BTreeSet};

use crate::formula::{Binding, Formula};
use crate::matching::{match_groups, Group};
use crate::rules::{NdRuleSchema, RuleSet};

use super::{deep, Verdict};

pub type Label = u32;

#[derive(Debug, PartialEq, Eq)]
pub enum NdDerivation {
    Assumption {
        formula: Formula,
        label: Label,
    },
    Inference {
        rule: String,
        /// One formula (possibly `_|_`) in the single-conclusion calculi; a
        /// multiset in the multiple-conclusion one.
        conclusion: Vec<Formula>,
        children: Vec<NdDerivation>,
        /// Premise index to labels discharged there.
        discharged: BTreeMap<usize, BTreeSet<Label>>,
    },
}

use NdDerivation::{Assumption, Inference};

impl NdDerivation {
    pub fn assume(formula: Formula, label: Label) -> Self {
        Assumption { formula, label }
    }

    pub fn infer(rule: &str, conclusion: Formula, children: Vec<NdDerivation>) -> Self {
        Inference { rule: rule.to_string(), conclusion: vec![conclusion], children, discharged: BTreeMap::new() }
    }

    /// Sets the labels discharged at premise `i`.
    pub fn discharging(mut self, i: usize, labels: impl IntoIterator<Item = Label>) -> Self {
        if let Inference { discharged, .. } = &mut self {
            let set: BTreeSet<Label> = labels.into_iter().collect();
            if !set.is_empty() {
                discharged.entry(i).or_default().extend(set);
            }
        }
        self
    }

    pub fn conclusion(&self) -> Vec<Formula> {
        match self {
            Assumption { formula, .. } => vec![formula.clone()],
            Inference { conclusion, .. } => conclusion.clone(),
        }
    }

    /// The single conclusion formula (`_|_` for an empty conclusion list).
    pub fn formula(&self) -> Formula {
        match self {
            Assumption { formula, .. } => formula.clone(),
            Inference { conclusion, .. } => conclusion.first().cloned().unwrap_or(Formula::Falsum),
        }
    }

    pub fn rule(&self) -> Option<&str> {
        match self {
            Assumption { .. } => None,
            Inference { rule, .. } => Some(rule),
        }
    }

    pub fn children(&self) -> &[NdDerivation] {
        match self {
            Assumption { .. } => &[],
            Inference { children, .. } => children,
        }
    }

    pub fn discharged_at(&self, i: usize) -> BTreeSet<Label> {
        match self {
            Inference { discharged, .. } => discharged.get(&i).cloned().unwrap_or_default(),
            _ => BTreeSet::new(),
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            n += 1;
            stack.extend(d.children());
        }
        n
    }

    pub fn height(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(self, 1)];
        while let Some((d, h)) = stack.pop() {
            best = best.max(h);
            stack.extend(d.children().iter().map(|c| (c, h + 1)));
        }
        best
    }

    /// Node at `path`.
    pub fn at(&self, path: &[usize]) -> Option<&NdDerivation> {
        let mut d = self;
        for &i in path {
            d = d.children().get(i)?;
        }
        Some(d)
    }

    /// Every label used by a leaf, with its formula.
    pub fn labels(&self) -> BTreeMap<Label, Formula> {
        let mut out = BTreeMap::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            match d {
                Assumption { formula, label } => {
                    out.entry(*label).or_insert_with(|| formula.clone());
                }
                Inference { children, .. } => stack.extend(children),
            }
        }
        out
    }

    pub fn max_label(&self) -> Label {
        self.labels().keys().next_back().copied().unwrap_or(0)
    }

    /// Replaces labels by `map`; labels missing from the map stay.
    pub fn relabel(&self, map: &BTreeMap<Label, Label>) -> NdDerivation {
        deep(|| match self {
            Assumption { formula, label } => Assumption { formula: formula.clone(), label: *map.get(label).unwrap_or(label) },
            Inference { rule, conclusion, children, discharged } => Inference {
                rule: rule.clone(),
                conclusion: conclusion.clone(),
                children: children.iter().map(|c| c.relabel(map)).collect(),
                discharged: discharged
                    .iter()
                    .map(|(i, s)| (*i, s.iter().map(|l| *map.get(l).unwrap_or(l)).collect()))
                    .collect(),
            },
        })
    }
}

impl Clone for NdDerivation {
    fn clone(&self) -> Self {
        deep(|| match self {
            Assumption { formula, label } => Assumption { formula: formula.clone(), label: *label },
            Inference { rule, conclusion, children, discharged } => Inference {
                rule: rule.clone(),
                conclusion: conclusion.clone(),
                children: children.clone(),
                discharged: discharged.clone(),
            },
        })
    }
}

impl Drop for NdDerivation {
    fn drop(&mut self) {
        let Inference { children, .. } = self else { return };
        let mut stack = std::mem::take(children);
        while let Some(mut n) = stack.pop() {
            if let Inference { children, .. } = &mut n {
                stack.append(children);
            }
        }
    }
}

/// Open assumptions, by label.
pub fn open_assumptions(d: &NdDerivation) -> BTreeMap<Label, Formula> {
    deep(|| match d {
        Assumption { formula, label } => BTreeMap::from([(*label, formula.clone())]),
        Inference { children, discharged, .. } => {
            let mut out = BTreeMap::new();
            for (i, c) in children.iter().enumerate() {
                let closed = discharged.get(&i);
                for (l, f) in open_assumptions(c) {
                    if !closed.is_some_and(|s| s.contains(&l)) {
                        out.insert(l, f);
                    }
                }
            }
            out
        }
    })
}

/// Formulas of the open assumptions (one per label).
pub fn open_formulas(d: &NdDerivation) -> Vec<Formula> {
    open_assumptions(d).into_values().collect()
}

fn check_node(
    rule: &NdRuleSchema,
    conclusion: &[Formula],
    children: &[NdDerivation],
    discharged: &BTreeMap<usize, BTreeSet<Label>>,
    child_open: &[BTreeMap<Label, Formula>],
) -> Result<(), String> {
    if children.len() != rule.premises.len() {
        return Err(format!("rule {} has {} premise(s), node has {}", rule.name, rule.premises.len(), children.len()));
    }
    let concls: Vec<Vec<Formula>> = children.iter().map(NdDerivation::conclusion).collect();
    let names: Vec<String> = (0..children.len()).map(|i| format!("premise {}", i + 1)).collect();
    let mut groups = vec![Group {
        what: "conclusion",
        schemas: &rule.conclusion,
        formulas: conclusion,
        ctx: rule.delta.then_some(0),
    }];
    for ((p, c), n) in rule.premises.iter().zip(&concls).zip(&names) {
        groups.push(Group { what: n, schemas: &p.conclusion, formulas: c, ctx: p.delta.then_some(0) });
    }
    let binding = match_groups(&groups, Binding::new()).map_err(|e| format!("{}: {e}", rule.name))?.binding;
    for (&i, labels) in discharged {
        let Some(p) = rule.premises.get(i) else {
            return Err(format!("discharge at premise {} which does not exist", i + 1));
        };
        for l in labels {
            let Some(f) = child_open[i].get(l) else {
                return Err(format!("label {l} is not open in premise {}", i + 1));
            };
            let ok = p.discharge.iter().any(|s| s.match_formula(f, &mut binding.clone()));
            if !ok {
                return Err(format!("premise {} may not discharge label {l}", i + 1));
            }
        }
    }
    Ok(())
}

/// Checks `d` against the natural-deduction rules of `rs`.
pub fn check_derivation(d: &NdDerivation, rs: &RuleSet) -> Verdict {
    let mut label_formula: BTreeMap<Label, Formula> = BTreeMap::new();
    check_rec(d, rs, &mut Vec::new(), &mut label_formula).err().unwrap_or(Verdict::Ok)
}

fn check_rec(
    d: &NdDerivation,
    rs: &RuleSet,
    path: &mut Vec<usize>,
    labels: &mut BTreeMap<Label, Formula>,
) -> Result<BTreeMap<Label, Formula>, Verdict> {
    deep(|| {
        for f in d.conclusion() {
            if !f.well_formed(&rs.signature) {
                return Err(Verdict::fail(path, format!("formula {f:?} is not over the signature of {}", rs.name)));
            }
        }
        match d {
            Assumption { formula, label } => {
                if let Some(g) = labels.get(label) {
                    if g != formula {
                        return Err(Verdict::fail(path, format!("label {label} is used for two different formulas")));
                    }
                } else {
                    labels.insert(*label, formula.clone());
                }
                Ok(BTreeMap::from([(*label, formula.clone())]))
            }
            Inference { rule, conclusion, children, discharged } => {
                if rs.regime.is_single() && conclusion.len() != 1 {
                    return Err(Verdict::fail(path, "a single-conclusion calculus needs exactly one conclusion formula"));
                }
                let Some(schema) = rs.nd_rule(rule) else {
                    return Err(Verdict::fail(path, format!("unknown rule `{rule}` in {}", rs.name)));
                };
                let mut opens = Vec::with_capacity(children.len());
                for (i, c) in children.iter().enumerate() {
                    path.push(i);
                    let r = check_rec(c, rs, path, labels);
                    path.pop();
                    opens.push(r?);
                }
                check_node(schema, conclusion, children, discharged, &opens).map_err(|e| Verdict::fail(path, format!("mismatch: {e}")))?;
                let mut out = BTreeMap::new();
                for (i, o) in opens.into_iter().enumerate() {
                    let closed = discharged.get(&i);
                    out.extend(o.into_iter().filter(|(l, _)| !closed.is_some_and(|s| s.contains(l))));
                }
                Ok(out)
            }
        }
    })
}

/// Replaces the open leaves selected by `pick` with `source`, renaming the
/// labels of `source` that `target` uses for other formulas.
fn graft_where(target: &NdDerivation, source: &NdDerivation, pick: &dyn Fn(&Formula, Label) -> bool) -> NdDerivation {
    let tl = target.labels();
    let sl = source.labels();
    let mut next = tl.keys().chain(sl.keys()).max().copied().unwrap_or(0) + 1;
    let mut map = BTreeMap::new();
    for (l, f) in &sl {
        if tl.get(l).is_some_and(|g| g != f) {
            map.insert(*l, next);
            next += 1;
        }
    }
    let source = if map.is_empty() { source.clone() } else { source.relabel(&map) };
    let mut closed = Vec::new();
    replace(target, &source, pick, &mut closed)
}

fn replace(d: &NdDerivation, source: &NdDerivation, pick: &dyn Fn(&Formula, Label) -> bool, closed: &mut Vec<Label>) -> NdDerivation {
    deep(|| match d {
        Assumption { formula, label } => {
            if !closed.contains(label) && pick(formula, *label) {
                source.clone()
            } else {
                d.clone()
            }
        }
        Inference { rule, conclusion, children, discharged } => {
            let children = children
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let extra: Vec<Label> = discharged.get(&i).map(|s| s.iter().copied().collect()).unwrap_or_default();
                    let n = closed.len();
                    closed.extend(extra);
                    let r = replace(c, source, pick, closed);
                    closed.truncate(n);
                    r
                })
                .collect();
            Inference { rule: rule.clone(), conclusion: conclusion.clone(), children, discharged: discharged.clone() }
        }
    })
}

/// Replaces every open assumption leaf of `target` carrying `formula` by a
/// copy of `source` (which should conclude `formula`).
pub fn graft(target: &NdDerivation, formula: &Formula, source: &NdDerivation) -> NdDerivation {
    graft_where(target, source, &|f, _| f == formula)
}

/// Replaces the open leaves of `target` with a label in `labels`.
pub fn graft_labels(target: &NdDerivation, labels: &BTreeSet<Label>, source: &NdDerivation) -> NdDerivation {
    graft_where(target, source, &|_, l| labels.contains(&l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, Signature};
    use crate::rules::builtin_ruleset;

    fn f(s: &str) -> Formula {
        parse_formula(s, &Signature::standard()).unwrap()
    }

    /// The classical derivation of p from its double stroke negation.
    pub(crate) fn double_negation() -> NdDerivation {
        let nn = f("(p | p) | (p | p)");
        let n = f("p | p");
        NdDerivation::infer(
            "|E_C",
            f("p"),
            vec![NdDerivation::infer(
                "|E",
                Formula::Falsum,
                vec![NdDerivation::assume(nn, 2), NdDerivation::assume(n.clone(), 1), NdDerivation::assume(n, 1)],
            )],
        )
        .discharging(0, [1])
    }

    #[test]
    fn classical_example() {
        let d = double_negation();
        assert_eq!(check_derivation(&d, &builtin_ruleset("NSC").unwrap()), Verdict::Ok);
        assert!(matches!(
            check_derivation(&d, &builtin_ruleset("NS").unwrap()),
            Verdict::Fail { path, .. } if path.is_empty()
        ));
        let open = open_assumptions(&d);
        assert_eq!(open.into_values().collect::<Vec<_>>(), vec![f("(p | p) | (p | p)")]);
    }

    #[test]
    fn intro_discharges() {
        let d = NdDerivation::infer(
            "|I",
            f("p | q"),
            vec![NdDerivation::infer(
                "|E",
                Formula::Falsum,
                vec![NdDerivation::assume(f("p | q"), 3), NdDerivation::assume(f("p"), 1), NdDerivation::assume(f("q"), 2)],
            )],
        )
        .discharging(0, [1, 2]);
        let ns = builtin_ruleset("NS").unwrap();
        assert_eq!(check_derivation(&d, &ns), Verdict::Ok);
        assert_eq!(open_assumptions(&d).len(), 1);
        let bad = d.clone().discharging(0, [3]);
        assert!(!check_derivation(&bad, &ns).is_ok());
        let clash = NdDerivation::infer(
            "|E",
            Formula::Falsum,
            vec![NdDerivation::assume(f("p | q"), 1), NdDerivation::assume(f("p"), 1), NdDerivation::assume(f("q"), 2)],
        );
        assert!(!check_derivation(&clash, &ns).is_ok());
    }

    #[test]
    fn graft_replaces_open_leaves_only() {
        let ns = builtin_ruleset("NS").unwrap();
        let leaf = NdDerivation::assume(f("p"), 1);
        let src = NdDerivation::infer(
            "_|_I",
            f("p"),
            vec![NdDerivation::infer(
                "|E",
                Formula::Falsum,
                vec![NdDerivation::assume(f("q | q"), 7), NdDerivation::assume(f("q"), 1), NdDerivation::assume(f("q"), 1)],
            )],
        );
        let g = graft(&leaf, &f("p"), &src);
        assert_eq!(g.formula(), f("p"));
        assert_eq!(g.size(), src.size());
        assert_eq!(check_derivation(&g, &ns), Verdict::Ok);
        let untouched = graft(&src, &f("r"), &leaf);
        assert_eq!(untouched, src);
        // label 1 clashes between target (p) and source (q)
        let target = NdDerivation::infer(
            "|E",
            Formula::Falsum,
            vec![NdDerivation::assume(f("p | p"), 2), NdDerivation::assume(f("p"), 1), NdDerivation::assume(f("p"), 1)],
        );
        let g = graft(&target, &f("p"), &src);
        assert_eq!(check_derivation(&g, &ns), Verdict::Ok);
        let open: BTreeSet<Formula> = open_formulas(&g).into_iter().collect();
        assert_eq!(open, BTreeSet::from([f("p | p"), f("q | q"), f("q")]));
    }

    #[test]
    fn multiple_conclusion_rules() {
        let nsm = builtin_ruleset("NSm").unwrap();
        // p | q, p, q derive the empty conclusion list
        let d = Inference {
            rule: "|E_m".into(),
            conclusion: vec![],
            children: vec![NdDerivation::assume(f("p | q"), 1), NdDerivation::assume(f("p"), 2), NdDerivation::assume(f("q"), 3)],
            discharged: BTreeMap::new(),
        };
        assert_eq!(check_derivation(&d, &nsm), Verdict::Ok);
        let w = Inference {
            rule: "W_m".into(),
            conclusion: vec![f("r")],
            children: vec![d],
            discharged: BTreeMap::new(),
        };
        assert_eq!(check_derivation(&w, &nsm), Verdict::Ok);
        let i = Inference {
            rule: "|I_m".into(),
            conclusion: vec![f("r"), f("p | q")],
            children: vec![w.clone()],
            discharged: BTreeMap::from([(0, BTreeSet::from([2, 3]))]),
        };
        assert_eq!(check_derivation(&i, &nsm), Verdict::Ok);
    }
}
