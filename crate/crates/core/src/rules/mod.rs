//! Rule schemas, rule sets, and their synthesis from truth tables.

mod builtin;
pub mod cnf;
mod generate;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::formula::{Schema, Signature, SignatureError, NAND, NOT};

pub use builtin::{builtin_ruleset, classical_rule, structural_rules, BUILTIN_NAMES};
pub use cnf::{truth_condition_cnf, Clause, Cnf, ConnectiveFile, Polarity, TruthTable};
pub use generate::{
    derive_nd_rules, generate_sequent_rules, restrict_single_succedent, ruleset_from_tables,
    split_multi_right_premises,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("arity {0} outside the supported range 1..=6")]
    ArityCap(usize),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("unknown rule set `{0}`")]
    UnknownRuleSet(String),
    #[error("rule `{rule}` has a premise with {count} succedent auxiliaries; split it first")]
    NeedsSplit { rule: String, count: usize },
    #[error("rule `{rule}` uses connective `{connective}` missing from the signature")]
    MissingConnective { rule: String, connective: String },
    #[error("cannot combine regimes {0:?} and {1:?}")]
    RegimeMismatch(Regime, Regime),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// Succedent discipline of a calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regime {
    /// Multi-succedent, classical.
    Multi,
    /// At most one succedent formula; intuitionistic.
    Single,
    /// Single-succedent plus a classical rule such as `|L_C`.
    SingleClassical,
}

impl Regime {
    pub fn is_single(self) -> bool {
        !matches!(self, Regime::Multi)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Multi => "multi",
            Regime::Single => "single",
            Regime::SingleClassical => "single-classical",
        }
    }

    pub fn parse(s: &str) -> Option<Regime> {
        match s {
            "multi" => Some(Regime::Multi),
            "single" => Some(Regime::Single),
            "single-classical" => Some(Regime::SingleClassical),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
    Structural,
    /// Cut splits its contexts between the premises.
    Cut,
    /// Classical extension rules (`|L_C`).
    Classical,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::Structural => "structural",
            Side::Cut => "cut",
            Side::Classical => "classical",
        }
    }

    pub fn parse(s: &str) -> Option<Side> {
        Some(match s {
            "left" => Side::Left,
            "right" => Side::Right,
            "structural" => Side::Structural,
            "cut" => Side::Cut,
            "classical" => Side::Classical,
            _ => return None,
        })
    }
}

/// One sequent of a rule display: explicit formulas on each side plus the
/// shared context slots Γ (antecedent) and Δ (succedent).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SequentSchema {
    pub left: Vec<Schema>,
    pub right: Vec<Schema>,
    pub gamma: bool,
    pub delta: bool,
}

/// Premise of a generated rule: its auxiliary formulas and context slots.
pub type PremiseSchema = SequentSchema;

impl SequentSchema {
    pub fn new(left: Vec<Schema>, right: Vec<Schema>, gamma: bool, delta: bool) -> Self {
        SequentSchema {
            left,
            right,
            gamma,
            delta,
        }
    }

    /// Both context slots present.
    pub fn ctx(left: Vec<Schema>, right: Vec<Schema>) -> Self {
        Self::new(left, right, true, true)
    }

    fn rename(&self, map: &BTreeMap<String, String>) -> Self {
        SequentSchema {
            left: self.left.iter().map(|s| s.rename_metas(map)).collect(),
            right: self.right.iter().map(|s| s.rename_metas(map)).collect(),
            gamma: self.gamma,
            delta: self.delta,
        }
    }

    fn schemas(&self) -> impl Iterator<Item = &Schema> {
        self.left.iter().chain(self.right.iter())
    }
}

/// A sequent-calculus inference schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSchema {
    pub name: String,
    pub side: Side,
    pub principal: Option<Schema>,
    pub conclusion: SequentSchema,
    pub premises: Vec<SequentSchema>,
    pub tags: BTreeSet<Regime>,
    /// The multi-succedent rule this one was restricted from.
    pub origin: Option<Box<RuleSchema>>,
}

impl RuleSchema {
    pub fn metas(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for s in self.conclusion.schemas().chain(self.premises.iter().flat_map(|p| p.schemas())) {
            s.collect_metas(&mut out);
        }
        out
    }

    pub fn connectives(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for s in self.conclusion.schemas().chain(self.premises.iter().flat_map(|p| p.schemas())) {
            s.connectives_used(&mut out);
        }
        out
    }

    /// Consistent renaming of metavariables (used to compare rules up to renaming).
    pub fn rename_metas(&self, map: &BTreeMap<String, String>) -> RuleSchema {
        RuleSchema {
            name: self.name.clone(),
            side: self.side,
            principal: self.principal.as_ref().map(|p| p.rename_metas(map)),
            conclusion: self.conclusion.rename(map),
            premises: self.premises.iter().map(|p| p.rename(map)).collect(),
            tags: self.tags.clone(),
            origin: self.origin.clone(),
        }
    }

    /// Structural equality up to a bijective renaming of metavariables,
    /// ignoring names, tags and origin.
    pub fn same_shape(&self, other: &RuleSchema) -> bool {
        let a = canonical_metas(self);
        let b = canonical_metas(other);
        a.side == b.side
            && a.principal == b.principal
            && a.conclusion == b.conclusion
            && a.premises == b.premises
    }
}

/// Renames metavariables to M0, M1, ... in order of first occurrence
/// (principal, conclusion, then premises).
fn canonical_metas(r: &RuleSchema) -> RuleSchema {
    let mut order: Vec<String> = Vec::new();
    let mut visit = |s: &Schema| {
        fn walk(s: &Schema, order: &mut Vec<String>) {
            match s {
                Schema::Meta(m) if !order.contains(m) => order.push(m.clone()),
                Schema::Compound(_, args) => args.iter().for_each(|a| walk(a, order)),
                _ => {}
            }
        }
        walk(s, &mut order);
    };
    if let Some(p) = &r.principal {
        visit(p);
    }
    for s in r.conclusion.schemas() {
        visit(s);
    }
    for p in &r.premises {
        for s in p.schemas() {
            visit(s);
        }
    }
    let map = order
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, format!("M{i}")))
        .collect();
    r.rename_metas(&map)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NdKind {
    Intro,
    Elim,
    FalsumIntro,
    ClassicalElim,
    /// Conclusion-side weakening/contraction of multiple-conclusion deduction.
    Structural,
}

impl NdKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NdKind::Intro => "intro",
            NdKind::Elim => "elim",
            NdKind::FalsumIntro => "falsum-intro",
            NdKind::ClassicalElim => "classical-elim",
            NdKind::Structural => "structural",
        }
    }

    pub fn parse(s: &str) -> Option<NdKind> {
        Some(match s {
            "intro" => NdKind::Intro,
            "elim" => NdKind::Elim,
            "falsum-intro" => NdKind::FalsumIntro,
            "classical-elim" => NdKind::ClassicalElim,
            "structural" => NdKind::Structural,
            _ => return None,
        })
    }
}

/// A premise of a natural-deduction rule: what it concludes (`[_|_]` for
/// the empty conclusion in single-conclusion calculi), whether it carries the
/// side conclusions Δ, and which assumptions it may discharge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NdPremise {
    pub conclusion: Vec<Schema>,
    pub delta: bool,
    pub discharge: Vec<Schema>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdRuleSchema {
    pub name: String,
    pub kind: NdKind,
    pub principal: Option<Schema>,
    pub premises: Vec<NdPremise>,
    pub conclusion: Vec<Schema>,
    pub delta: bool,
    /// Sequent rule this rule was read off from.
    pub from_sequent: Option<String>,
}

impl NdRuleSchema {
    pub fn same_shape(&self, other: &NdRuleSchema) -> bool {
        let mut order: Vec<String> = Vec::new();
        let collect = |r: &NdRuleSchema, order: &mut Vec<String>| {
            fn walk(s: &Schema, order: &mut Vec<String>) {
                match s {
                    Schema::Meta(m) if !order.contains(m) => order.push(m.clone()),
                    Schema::Compound(_, args) => args.iter().for_each(|a| walk(a, order)),
                    _ => {}
                }
            }
            for s in r.conclusion.iter() {
                walk(s, order);
            }
            for p in &r.premises {
                for s in p.conclusion.iter().chain(&p.discharge) {
                    walk(s, order);
                }
            }
        };
        let canon = |r: &NdRuleSchema| {
            let mut order2 = Vec::new();
            collect(r, &mut order2);
            let map: BTreeMap<String, String> = order2
                .into_iter()
                .enumerate()
                .map(|(i, m)| (m, format!("M{i}")))
                .collect();
            let ren = |v: &[Schema]| v.iter().map(|s| s.rename_metas(&map)).collect::<Vec<_>>();
            (
                r.kind,
                ren(&r.conclusion),
                r.delta,
                r.premises
                    .iter()
                    .map(|p| (ren(&p.conclusion), p.delta, ren(&p.discharge)))
                    .collect::<Vec<_>>(),
            )
        };
        order.clear();
        canon(self) == canon(other)
    }
}

/// A calculus: signature, sequent rules, derived natural-deduction rules, and
/// the classical truth tables of its connectives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSet {
    pub name: String,
    pub signature: Signature,
    pub regime: Regime,
    pub sequent_rules: Vec<RuleSchema>,
    pub nd_rules: Vec<NdRuleSchema>,
    pub tables: BTreeMap<String, TruthTable>,
}

impl RuleSet {
    pub fn rule(&self, name: &str) -> Option<&RuleSchema> {
        self.sequent_rules.iter().find(|r| r.name == name)
    }

    pub fn nd_rule(&self, name: &str) -> Option<&NdRuleSchema> {
        self.nd_rules.iter().find(|r| r.name == name)
    }

    pub fn has_rule(&self, name: &str) -> bool {
        self.rule(name).is_some()
    }

    /// Rules whose principal connective is `conn`, on the given side.
    pub fn logical_rules<'a>(&'a self, conn: &str, side: Side) -> impl Iterator<Item = &'a RuleSchema> + 'a {
        let conn = conn.to_string();
        self.sequent_rules
            .iter()
            .filter(move |r| r.side == side && r.principal.as_ref().and_then(|p| p.connective()) == Some(conn.as_str()))
    }

    pub fn classical_rules(&self) -> impl Iterator<Item = &RuleSchema> {
        self.sequent_rules.iter().filter(|r| r.side == Side::Classical)
    }

    /// Connective used to express negation: a primitive `not` when present,
    /// otherwise the stroke with both arguments equal.
    pub fn negation(&self) -> Option<&'static str> {
        if self.signature.contains(NOT) {
            Some(NOT)
        } else if self.signature.contains(NAND) {
            Some(NAND)
        } else {
            None
        }
    }

    pub fn validate(&self) -> Result<(), RuleError> {
        for r in &self.sequent_rules {
            for c in r.connectives() {
                if !self.signature.contains(&c) {
                    return Err(RuleError::MissingConnective {
                        rule: r.name.clone(),
                        connective: c,
                    });
                }
            }
        }
        Ok(())
    }

    /// Union of two calculi over compatible regimes; rules with the same name
    /// are kept once.
    pub fn union(&self, other: &RuleSet) -> Result<RuleSet, RuleError> {
        let regime = match (self.regime, other.regime) {
            (a, b) if a == b => a,
            (Regime::Single, Regime::SingleClassical) | (Regime::SingleClassical, Regime::Single) => {
                Regime::SingleClassical
            }
            (a, b) => return Err(RuleError::RegimeMismatch(a, b)),
        };
        let mut out = self.clone();
        out.name = format!("{}+{}", self.name, other.name);
        out.regime = regime;
        out.signature = self.signature.union(&other.signature)?;
        for r in &other.sequent_rules {
            if !out.has_rule(&r.name) {
                out.sequent_rules.push(r.clone());
            }
        }
        for r in &other.nd_rules {
            if out.nd_rule(&r.name).is_none() {
                out.nd_rules.push(r.clone());
            }
        }
        for (k, t) in &other.tables {
            out.tables.entry(k.clone()).or_insert_with(|| t.clone());
        }
        Ok(out)
    }

    /// The multi-succedent calculus whose rules the single-succedent rules of
    /// `self` were restricted from, plus the multi-succedent structural kit.
    pub fn multi_counterpart(&self) -> RuleSet {
        let mut rules = structural_rules(Regime::Multi);
        for r in &self.sequent_rules {
            if let Some(o) = &r.origin {
                if !rules.iter().any(|x| x.name == o.name) {
                    rules.push((**o).clone());
                }
            }
        }
        RuleSet {
            name: format!("{}-multi", self.name),
            signature: self.signature.clone(),
            regime: Regime::Multi,
            sequent_rules: rules,
            nd_rules: Vec::new(),
            tables: self.tables.clone(),
        }
    }
}

/// Metavariable name for the n-th (0-based) argument of a principal formula.
pub fn arg_meta(i: usize) -> String {
    ((b'A' + i as u8) as char).to_string()
}
