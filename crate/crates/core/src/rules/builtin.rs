//! Structural rules and the named calculi.

use std::collections::BTreeSet;

use super::cnf::TruthTable;
use super::generate::{derive_nd_rules, ruleset_from_tables};
use super::{Regime, RuleError, RuleSchema, RuleSet, SequentSchema, Side};
use crate::formula::{Schema, Signature, AND, HP, IMP, NAND, NOT, OR};

pub const BUILTIN_NAMES: &[&str] = &[
    "LS",
    "LS-single",
    "LS-single-classical",
    "NSm",
    "NS",
    "NSC",
    "HP",
    "HP-fixed",
    "LJ-core",
    "LK-core",
];

fn a() -> Schema {
    Schema::meta("A")
}

fn structural(name: &str, side: Side, conclusion: SequentSchema, premises: Vec<SequentSchema>, regime: Regime) -> RuleSchema {
    RuleSchema {
        name: name.to_string(),
        side,
        principal: None,
        conclusion,
        premises,
        tags: BTreeSet::from([regime]),
        origin: None,
    }
}

/// Axiom, weakening, contraction and cut for the regime. In the single
/// regimes right weakening is `WR'` and there is no right contraction.
/// Cut's contexts are split between its premises; the kernel treats it apart.
pub fn structural_rules(regime: Regime) -> Vec<RuleSchema> {
    let axiom = structural("ax", Side::Structural, SequentSchema::new(vec![a()], vec![a()], false, false), vec![], regime);
    if regime == Regime::Multi {
        vec![
            axiom,
            structural("WL", Side::Structural, SequentSchema::ctx(vec![a()], vec![]), vec![SequentSchema::ctx(vec![], vec![])], regime),
            structural("WR", Side::Structural, SequentSchema::ctx(vec![], vec![a()]), vec![SequentSchema::ctx(vec![], vec![])], regime),
            structural("CL", Side::Structural, SequentSchema::ctx(vec![a()], vec![]), vec![SequentSchema::ctx(vec![a(), a()], vec![])], regime),
            structural("CR", Side::Structural, SequentSchema::ctx(vec![], vec![a()]), vec![SequentSchema::ctx(vec![], vec![a(), a()])], regime),
            structural(
                "cut",
                Side::Cut,
                SequentSchema::ctx(vec![], vec![]),
                vec![SequentSchema::ctx(vec![], vec![a()]), SequentSchema::ctx(vec![a()], vec![])],
                regime,
            ),
        ]
    } else {
        let regime = Regime::Single;
        vec![
            axiom,
            structural("WL", Side::Structural, SequentSchema::ctx(vec![a()], vec![]), vec![SequentSchema::ctx(vec![], vec![])], regime),
            structural("CL", Side::Structural, SequentSchema::ctx(vec![a()], vec![]), vec![SequentSchema::ctx(vec![a(), a()], vec![])], regime),
            structural(
                "WR'",
                Side::Structural,
                SequentSchema::new(vec![], vec![a()], true, false),
                vec![SequentSchema::new(vec![], vec![], true, false)],
                regime,
            ),
            structural(
                "cut",
                Side::Cut,
                SequentSchema::ctx(vec![], vec![]),
                vec![SequentSchema::new(vec![], vec![a()], true, false), SequentSchema::ctx(vec![a()], vec![])],
                regime,
            ),
        ]
    }
}

/// `Γ ⊢ A` from `¬A, Γ ⊢ A`, with ¬A spelled by `neg` (`nand` gives `A|A`).
pub fn classical_rule(neg: &str) -> RuleSchema {
    let (name, n) = if neg == NOT {
        ("~L_C", Schema::compound(NOT, vec![a()]))
    } else {
        ("|L_C", Schema::compound(NAND, vec![a(), a()]))
    };
    RuleSchema {
        name: name.to_string(),
        side: Side::Classical,
        principal: None,
        conclusion: SequentSchema::new(vec![], vec![a()], true, false),
        premises: vec![SequentSchema::new(vec![n], vec![a()], true, false)],
        tags: BTreeSet::from([Regime::SingleClassical]),
        origin: None,
    }
}

fn hp(x: Schema, y: Schema) -> Schema {
    Schema::compound(HP, vec![x, y])
}

fn logical(name: &str, side: Side, principal: Schema, conclusion: SequentSchema, premises: Vec<SequentSchema>, origin: Option<RuleSchema>) -> RuleSchema {
    RuleSchema {
        name: name.to_string(),
        side,
        principal: Some(principal),
        conclusion,
        premises,
        tags: BTreeSet::from([if origin.is_some() { Regime::Single } else { Regime::Multi }]),
        origin: origin.map(Box::new),
    }
}

fn hp_rules(fixed: bool) -> Vec<RuleSchema> {
    let b = Schema::meta("B");
    let p = hp(a(), b.clone());
    let ctx = SequentSchema::ctx;
    let single = |l: Vec<Schema>, r: Vec<Schema>| SequentSchema::new(l, r, true, false);
    let mut out = Vec::new();
    for (i, aux) in [a(), b.clone()].into_iter().enumerate() {
        let multi = logical(&format!("||R_{}", i + 1), Side::Right, p.clone(), ctx(vec![], vec![p.clone()]), vec![ctx(vec![aux.clone()], vec![])], None);
        out.push(logical(
            &format!("||R'_{}", i + 1),
            Side::Right,
            p.clone(),
            single(vec![], vec![p.clone()]),
            vec![single(vec![aux], vec![])],
            Some(multi),
        ));
    }
    if !fixed {
        let multi = logical("||L", Side::Left, p.clone(), ctx(vec![p.clone()], vec![]), vec![ctx(vec![], vec![a()]), ctx(vec![], vec![b.clone()])], None);
        out.push(logical(
            "||L'",
            Side::Left,
            p.clone(),
            single(vec![p.clone()], vec![]),
            vec![single(vec![], vec![a()]), single(vec![], vec![b.clone()])],
            Some(multi),
        ));
    } else {
        let aa = hp(a(), a());
        let bb = hp(b.clone(), b.clone());
        let prem = vec![ctx(vec![aa.clone()], vec![]), ctx(vec![bb], vec![])];
        let multi = logical("||L''", Side::Left, p.clone(), ctx(vec![p.clone()], vec![]), prem.clone(), None);
        out.push(logical("||L''", Side::Left, p.clone(), ctx(vec![p.clone()], vec![]), prem, Some(multi)));
        let multi = logical("||L_neg", Side::Left, aa.clone(), ctx(vec![aa.clone()], vec![]), vec![ctx(vec![], vec![a()])], None);
        out.push(logical(
            "||L_neg",
            Side::Left,
            aa.clone(),
            single(vec![aa], vec![]),
            vec![single(vec![], vec![a()])],
            Some(multi),
        ));
    }
    out
}

fn hp_ruleset(name: &str, fixed: bool) -> RuleSet {
    let mut rules = structural_rules(Regime::Single);
    rules.extend(hp_rules(fixed));
    let t = TruthTable::from_bits(HP, &[1, 1, 1, 0]);
    RuleSet {
        name: name.to_string(),
        signature: Signature::standard_subset(&[HP]),
        regime: Regime::Single,
        sequent_rules: rules,
        nd_rules: Vec::new(),
        tables: [(HP.to_string(), t)].into(),
    }
}

fn single_builtin(name: &str) -> Result<RuleSet, RuleError> {
    let stroke = Signature::standard_subset(&[NAND]);
    let core = Signature::standard_subset(&[NOT, AND, OR, IMP]);
    let core_tables = [TruthTable::not(), TruthTable::and(), TruthTable::or(), TruthTable::imp()];
    let rs = match name {
        "LS" | "NSm" => ruleset_from_tables(name, &stroke, &[TruthTable::nand()], Regime::Multi)?,
        "LS-single" | "NS" => ruleset_from_tables(name, &stroke, &[TruthTable::nand()], Regime::Single)?,
        "LS-single-classical" | "NSC" => {
            let mut rs = ruleset_from_tables(name, &stroke, &[TruthTable::nand()], Regime::SingleClassical)?;
            rs.sequent_rules.push(classical_rule(NAND));
            rs
        }
        "HP" => hp_ruleset(name, false),
        "HP-fixed" => hp_ruleset(name, true),
        "LK-core" => ruleset_from_tables(name, &core, &core_tables, Regime::Multi)?,
        "LJ-core" => ruleset_from_tables(name, &core, &core_tables, Regime::Single)?,
        _ => return Err(RuleError::UnknownRuleSet(name.to_string())),
    };
    Ok(derive_nd_rules(&rs))
}

/// A named calculus. Names may be joined with `+` (`LS-single+HP`) to take
/// the union of the rule sets.
pub fn builtin_ruleset(name: &str) -> Result<RuleSet, RuleError> {
    let mut parts = name.split('+').map(str::trim);
    let first = parts.next().filter(|s| !s.is_empty()).ok_or_else(|| RuleError::UnknownRuleSet(name.to_string()))?;
    let mut rs = single_builtin(first)?;
    for p in parts {
        rs = rs.union(&single_builtin(p)?)?;
    }
    if rs.regime == Regime::SingleClassical && rs.classical_rules().next().is_none() {
        if let Some(neg) = rs.negation() {
            rs.sequent_rules.push(classical_rule(neg));
        }
    }
    let rs = derive_nd_rules(&rs);
    rs.validate()?;
    Ok(rs)
}
