//! Sequent rules from truth conditions, splitting, the single-succedent
//! restriction, and natural-deduction rules read off sideways.

use std::collections::{BTreeMap, BTreeSet};

use super::cnf::{truth_condition_cnf, Polarity, TruthTable};
use super::{
    arg_meta, structural_rules, NdKind, NdPremise, NdRuleSchema, Regime, RuleError, RuleSchema, RuleSet,
    SequentSchema, Side,
};
use crate::formula::{Schema, Signature};

fn principal_of(t: &TruthTable) -> Schema {
    Schema::compound(&t.connective, (0..t.arity).map(|i| Schema::meta(&arg_meta(i))).collect())
}

fn premises_from(t: &TruthTable, polarity: Polarity) -> Vec<SequentSchema> {
    truth_condition_cnf(t, polarity)
        .clauses
        .iter()
        .map(|clause| {
            let mut lits = clause.clone();
            lits.sort_by_key(|l| l.abs());
            let meta = |l: &i32| Schema::meta(&arg_meta(l.unsigned_abs() as usize - 1));
            SequentSchema::ctx(
                lits.iter().filter(|l| **l < 0).map(meta).collect(),
                lits.iter().filter(|l| **l > 0).map(meta).collect(),
            )
        })
        .collect()
}

/// Right and left rule for a connective, multi-succedent form. `symbol` is
/// used for the rule names (`|R`, `|L`).
pub fn generate_sequent_rules(t: &TruthTable, symbol: &str) -> (RuleSchema, RuleSchema) {
    let p = principal_of(t);
    let tags: BTreeSet<Regime> = [Regime::Multi].into();
    let right = RuleSchema {
        name: format!("{symbol}R"),
        side: Side::Right,
        principal: Some(p.clone()),
        conclusion: SequentSchema::ctx(vec![], vec![p.clone()]),
        premises: premises_from(t, Polarity::True),
        tags: tags.clone(),
        origin: None,
    };
    let left = RuleSchema {
        name: format!("{symbol}L"),
        side: Side::Left,
        principal: Some(p.clone()),
        conclusion: SequentSchema::ctx(vec![p], vec![]),
        premises: premises_from(t, Polarity::False),
        tags,
        origin: None,
    };
    (right, left)
}

/// One variant per choice of a single succedent auxiliary in every premise
/// that has several. Variants are numbered `_1`, `_2`, ... with the first
/// premise varying slowest.
pub fn split_multi_right_premises(r: &RuleSchema) -> Vec<RuleSchema> {
    if r.premises.iter().all(|p| p.right.len() <= 1) {
        return vec![r.clone()];
    }
    let mut variants: Vec<Vec<SequentSchema>> = vec![Vec::new()];
    for prem in &r.premises {
        let choices: Vec<SequentSchema> = if prem.right.len() <= 1 {
            vec![prem.clone()]
        } else {
            prem.right
                .iter()
                .map(|a| SequentSchema { right: vec![a.clone()], ..prem.clone() })
                .collect()
        };
        variants = variants
            .into_iter()
            .flat_map(|acc| {
                choices.iter().map(move |c| {
                    let mut v = acc.clone();
                    v.push(c.clone());
                    v
                })
            })
            .collect();
    }
    variants
        .into_iter()
        .enumerate()
        .map(|(k, premises)| RuleSchema {
            name: format!("{}_{}", r.name, k + 1),
            premises,
            ..r.clone()
        })
        .collect()
}

/// `|R` -> `|R'`, `!L_1` -> `!L'_1`.
fn primed(name: &str) -> String {
    match name.rfind('_') {
        Some(i) if name[i + 1..].chars().all(|c| c.is_ascii_digit()) && i + 1 < name.len() => {
            format!("{}'{}", &name[..i], &name[i..])
        }
        _ => format!("{name}'"),
    }
}

fn restrict_rule(r: &RuleSchema) -> Result<RuleSchema, RuleError> {
    for p in &r.premises {
        if p.right.len() > 1 {
            return Err(RuleError::NeedsSplit { rule: r.name.clone(), count: p.right.len() });
        }
    }
    let tags: BTreeSet<Regime> = [Regime::Single].into();
    let origin = Some(Box::new(r.clone()));
    Ok(match r.side {
        Side::Right => RuleSchema {
            name: primed(&r.name),
            conclusion: SequentSchema::new(r.conclusion.left.clone(), r.conclusion.right.clone(), true, false),
            premises: r
                .premises
                .iter()
                .map(|p| SequentSchema::new(p.left.clone(), p.right.clone(), true, false))
                .collect(),
            tags,
            origin,
            ..r.clone()
        },
        Side::Left => {
            // a premise without a succedent auxiliary keeps the (at most one
            // formula) succedent context, shared with the conclusion
            let premises: Vec<SequentSchema> = r
                .premises
                .iter()
                .map(|p| SequentSchema::new(p.left.clone(), p.right.clone(), true, p.right.is_empty()))
                .collect();
            let delta = premises.iter().any(|p| p.delta);
            RuleSchema {
                name: primed(&r.name),
                conclusion: SequentSchema::new(r.conclusion.left.clone(), vec![], true, delta),
                premises,
                tags,
                origin,
                ..r.clone()
            }
        }
        _ => r.clone(),
    })
}

/// Single-succedent version of a multi-succedent rule set: structural kit
/// replaced by axiom, WL, CL, WR', cut; logical rules lose the succedent
/// context except where noted in [`restrict_rule`].
pub fn restrict_single_succedent(rs: &RuleSet) -> Result<RuleSet, RuleError> {
    if rs.regime != Regime::Multi {
        return Err(RuleError::Malformed(format!("{} is not multi-succedent", rs.name)));
    }
    let mut rules = structural_rules(Regime::Single);
    for r in &rs.sequent_rules {
        if matches!(r.side, Side::Left | Side::Right) {
            rules.push(restrict_rule(r)?);
        }
    }
    Ok(RuleSet {
        name: format!("{}-single", rs.name),
        signature: rs.signature.clone(),
        regime: Regime::Single,
        sequent_rules: rules,
        nd_rules: Vec::new(),
        tables: rs.tables.clone(),
    })
}

/// Natural-deduction name of a sequent rule: the `R`/`L` after the symbol
/// becomes `I`/`E` and the first prime is dropped.
pub(crate) fn nd_name(name: &str, multi: bool) -> String {
    let chars: Vec<char> = name.chars().collect();
    let pos = (0..chars.len()).find(|&i| {
        matches!(chars[i], 'R' | 'L')
            && i > 0
            && (i + 1 == chars.len() || chars[i + 1] == '\'' || chars[i + 1] == '_')
    });
    let mut out: String = match pos {
        Some(i) => {
            let mut s: String = chars[..i].iter().collect();
            s.push(if chars[i] == 'R' { 'I' } else { 'E' });
            let rest: String = chars[i + 1..].iter().collect();
            s.push_str(&rest.replacen('\'', "", 1));
            s
        }
        None => name.to_string(),
    };
    if multi {
        out.push_str("_m");
    }
    out
}

/// First metavariable letter from `C` on that the rule does not use.
fn slot_meta(r: &RuleSchema) -> String {
    let used = r.metas();
    (b'C'..=b'Z')
        .map(|c| (c as char).to_string())
        .find(|m| !used.contains(m))
        .expect("rules use few metavariables")
}

fn nd_from_single(r: &RuleSchema) -> Option<NdRuleSchema> {
    let falsum = || vec![Schema::Falsum];
    match r.side {
        Side::Right => Some(NdRuleSchema {
            name: nd_name(&r.name, false),
            kind: NdKind::Intro,
            principal: r.principal.clone(),
            premises: r
                .premises
                .iter()
                .map(|p| NdPremise {
                    conclusion: if p.right.is_empty() { falsum() } else { p.right.clone() },
                    delta: false,
                    discharge: p.left.clone(),
                })
                .collect(),
            conclusion: r.conclusion.right.clone(),
            delta: false,
            from_sequent: Some(r.name.clone()),
        }),
        Side::Left => {
            let c = Schema::meta(&slot_meta(r));
            let principal = r.principal.clone()?;
            let mut premises = vec![NdPremise { conclusion: vec![principal.clone()], delta: false, discharge: vec![] }];
            for p in &r.premises {
                premises.push(NdPremise {
                    conclusion: if !p.right.is_empty() {
                        p.right.clone()
                    } else if p.delta {
                        vec![c.clone()]
                    } else {
                        falsum()
                    },
                    delta: false,
                    discharge: p.left.clone(),
                });
            }
            Some(NdRuleSchema {
                name: nd_name(&r.name, false),
                kind: NdKind::Elim,
                principal: Some(principal),
                premises,
                conclusion: if r.conclusion.delta { vec![c] } else { falsum() },
                delta: false,
                from_sequent: Some(r.name.clone()),
            })
        }
        Side::Structural if r.name == "WR'" => Some(NdRuleSchema {
            name: "_|_I".into(),
            kind: NdKind::FalsumIntro,
            principal: None,
            premises: vec![NdPremise { conclusion: falsum(), delta: false, discharge: vec![] }],
            conclusion: vec![Schema::meta("A")],
            delta: false,
            from_sequent: Some(r.name.clone()),
        }),
        Side::Classical => {
            // premise `~A, Γ ⊢ A`: the refutation of ~A becomes a derivation of ⊥
            let p = r.premises.first()?;
            Some(NdRuleSchema {
                name: nd_name(&r.name, false),
                kind: NdKind::ClassicalElim,
                principal: None,
                premises: vec![NdPremise { conclusion: falsum(), delta: false, discharge: p.left.clone() }],
                conclusion: r.conclusion.right.clone(),
                delta: false,
                from_sequent: Some(r.name.clone()),
            })
        }
        _ => None,
    }
}

fn nd_from_multi(r: &RuleSchema) -> Option<NdRuleSchema> {
    match r.side {
        Side::Right => Some(NdRuleSchema {
            name: nd_name(&r.name, true),
            kind: NdKind::Intro,
            principal: r.principal.clone(),
            premises: r
                .premises
                .iter()
                .map(|p| NdPremise { conclusion: p.right.clone(), delta: true, discharge: p.left.clone() })
                .collect(),
            conclusion: r.conclusion.right.clone(),
            delta: true,
            from_sequent: Some(r.name.clone()),
        }),
        Side::Left => {
            let principal = r.principal.clone()?;
            let mut premises = vec![NdPremise { conclusion: vec![principal.clone()], delta: true, discharge: vec![] }];
            premises.extend(
                r.premises
                    .iter()
                    .map(|p| NdPremise { conclusion: p.right.clone(), delta: true, discharge: p.left.clone() }),
            );
            Some(NdRuleSchema {
                name: nd_name(&r.name, true),
                kind: NdKind::Elim,
                principal: Some(principal),
                premises,
                conclusion: vec![],
                delta: true,
                from_sequent: Some(r.name.clone()),
            })
        }
        _ => None,
    }
}

/// Conclusion-side weakening and contraction of multiple-conclusion deduction.
fn multi_structural_nd() -> Vec<NdRuleSchema> {
    let a = Schema::meta("A");
    vec![
        NdRuleSchema {
            name: "W_m".into(),
            kind: NdKind::Structural,
            principal: None,
            premises: vec![NdPremise { conclusion: vec![], delta: true, discharge: vec![] }],
            conclusion: vec![a.clone()],
            delta: true,
            from_sequent: Some("WR".into()),
        },
        NdRuleSchema {
            name: "C_m".into(),
            kind: NdKind::Structural,
            principal: None,
            premises: vec![NdPremise { conclusion: vec![a.clone(), a.clone()], delta: true, discharge: vec![] }],
            conclusion: vec![a],
            delta: true,
            from_sequent: Some("CR".into()),
        },
    ]
}

/// Populates the natural-deduction rules of `rs` from its sequent rules.
pub fn derive_nd_rules(rs: &RuleSet) -> RuleSet {
    let mut out = rs.clone();
    out.nd_rules = match rs.regime {
        Regime::Multi => {
            let mut v: Vec<NdRuleSchema> = rs.sequent_rules.iter().filter_map(nd_from_multi).collect();
            v.extend(multi_structural_nd());
            v
        }
        _ => rs.sequent_rules.iter().filter_map(nd_from_single).collect(),
    };
    out
}

/// Calculus generated from truth tables: multi-succedent rules, or split and
/// restricted rules for the single regimes. Structural rules included.
pub fn ruleset_from_tables(
    name: &str,
    signature: &Signature,
    tables: &[TruthTable],
    regime: Regime,
) -> Result<RuleSet, RuleError> {
    let mut rules = structural_rules(Regime::Multi);
    let mut map = BTreeMap::new();
    for t in tables {
        let conn = signature
            .by_name(&t.connective)
            .ok_or_else(|| RuleError::MissingConnective { rule: format!("table {}", t.connective), connective: t.connective.clone() })?;
        if conn.arity != t.arity {
            return Err(RuleError::Malformed(format!(
                "table for `{}` has arity {}, signature says {}",
                t.connective, t.arity, conn.arity
            )));
        }
        let (r, l) = generate_sequent_rules(t, &conn.symbol);
        if regime == Regime::Multi {
            rules.push(r);
            rules.push(l);
        } else {
            rules.extend(split_multi_right_premises(&r));
            rules.extend(split_multi_right_premises(&l));
        }
        map.insert(t.connective.clone(), t.clone());
    }
    let multi = RuleSet {
        name: name.to_string(),
        signature: signature.clone(),
        regime: Regime::Multi,
        sequent_rules: rules,
        nd_rules: Vec::new(),
        tables: map,
    };
    let mut rs = if regime == Regime::Multi { multi } else { restrict_single_succedent(&multi)? };
    rs.name = name.to_string();
    if regime == Regime::SingleClassical {
        rs.regime = Regime::SingleClassical;
    }
    Ok(rs)
}
