//! Formulas, schema formulas and connective signatures.
//!
//! Connectives are identified by name (`nand`, `imp`, ...); the symbol is only
//! used by the textual syntax. A formula is a tree whose leaves are variables
//! or the falsum constant `_|_`. Schema formulas additionally carry
//! metavariables (`?A`), which is how rule displays are stored.

mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{parse_formula, parse_schema, split_top_level, ParseError, ParseErrorKind};

/// Name of the Sheffer stroke in the standard signature.
pub const NAND: &str = "nand";
/// Hazen-Pelletier stroke.
pub const HP: &str = "hp";
pub const NOR: &str = "nor";
pub const XOR: &str = "xor";
pub const NOT: &str = "not";
pub const AND: &str = "and";
pub const OR: &str = "or";
pub const IMP: &str = "imp";

pub const FALSUM_TOKEN: &str = "_|_";

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Connective {
    pub name: String,
    pub symbol: String,
    pub arity: usize,
}

impl Connective {
    pub fn new(name: impl Into<String>, symbol: impl Into<String>, arity: usize) -> Self {
        Connective {
            name: name.into(),
            symbol: symbol.into(),
            arity,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("duplicate connective name `{0}`")]
    DuplicateName(String),
    #[error("duplicate connective symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("connective `{0}` has arity 0")]
    ZeroArity(String),
    #[error("invalid symbol `{symbol}` for connective `{name}`: {reason}")]
    BadSymbol {
        name: String,
        symbol: String,
        reason: &'static str,
    },
    #[error("invalid connective name `{0}`")]
    BadName(String),
    #[error("malformed signature file: {0}")]
    Json(String),
}

/// The set of connectives a formula may be built from.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Signature {
    connectives: Vec<Connective>,
}

impl Signature {
    pub fn new(connectives: Vec<Connective>) -> Result<Self, SignatureError> {
        let mut names = BTreeSet::new();
        let mut symbols = BTreeSet::new();
        for c in &connectives {
            validate_connective(c)?;
            if !names.insert(c.name.clone()) {
                return Err(SignatureError::DuplicateName(c.name.clone()));
            }
            if !symbols.insert(c.symbol.clone()) {
                return Err(SignatureError::DuplicateSymbol(c.symbol.clone()));
            }
        }
        Ok(Signature { connectives })
    }

    /// All connectives the built-in calculi use: `|` (nand), `||` (the
    /// Hazen-Pelletier stroke), `!` (nor), `^` (xor), `~`, `&`, `+` (or) and `->`.
    pub fn standard() -> Self {
        Signature::new(vec![
            Connective::new(NAND, "|", 2),
            Connective::new(HP, "||", 2),
            Connective::new(NOR, "!", 2),
            Connective::new(XOR, "^", 2),
            Connective::new(NOT, "~", 1),
            Connective::new(AND, "&", 2),
            Connective::new(OR, "+", 2),
            Connective::new(IMP, "->", 2),
        ])
        .expect("standard signature is valid")
    }

    /// Sub-signature of [`Signature::standard`] with the given names.
    pub fn standard_subset(names: &[&str]) -> Self {
        let std = Signature::standard();
        Signature {
            connectives: std
                .connectives
                .into_iter()
                .filter(|c| names.contains(&c.name.as_str()))
                .collect(),
        }
    }

    pub fn connectives(&self) -> &[Connective] {
        &self.connectives
    }

    pub fn by_name(&self, name: &str) -> Option<&Connective> {
        self.connectives.iter().find(|c| c.name == name)
    }

    pub fn by_symbol(&self, symbol: &str) -> Option<&Connective> {
        self.connectives.iter().find(|c| c.symbol == symbol)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.by_name(name).is_some()
    }

    /// Union of two signatures; identical entries are merged.
    pub fn union(&self, other: &Signature) -> Result<Signature, SignatureError> {
        let mut all = self.connectives.clone();
        for c in &other.connectives {
            if !all.contains(c) {
                all.push(c.clone());
            }
        }
        Signature::new(all)
    }

    pub fn from_json(text: &str) -> Result<Signature, SignatureError> {
        let conns: Vec<Connective> =
            serde_json::from_str(text).map_err(|e| SignatureError::Json(e.to_string()))?;
        Signature::new(conns)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.connectives).expect("connectives serialize")
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn validate_connective(c: &Connective) -> Result<(), SignatureError> {
    if c.arity == 0 {
        return Err(SignatureError::ZeroArity(c.name.clone()));
    }
    if c.name.is_empty() || c.name.chars().any(|ch| ch.is_whitespace()) {
        return Err(SignatureError::BadName(c.name.clone()));
    }
    let bad = |reason| SignatureError::BadSymbol {
        name: c.name.clone(),
        symbol: c.symbol.clone(),
        reason,
    };
    let s = c.symbol.as_str();
    if s.is_empty() {
        return Err(bad("empty"));
    }
    if s.chars().any(|ch| ch == '(' || ch == ')' || ch == ',' || ch.is_whitespace()) {
        return Err(bad("contains parentheses, commas or whitespace"));
    }
    if s.contains("=>") || s.starts_with('?') || s.starts_with('_') {
        return Err(bad("clashes with reserved syntax"));
    }
    let first = s.chars().next().unwrap();
    if first.is_ascii_alphanumeric() && !is_ident(s) {
        return Err(bad("word symbols must be identifiers"));
    }
    Ok(())
}

/// A propositional formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Falsum,
    Compound(String, Vec<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    pub fn compound(conn: &str, args: Vec<Formula>) -> Formula {
        Formula::Compound(conn.to_string(), args)
    }

    pub fn binary(conn: &str, a: Formula, b: Formula) -> Formula {
        Formula::Compound(conn.to_string(), vec![a, b])
    }

    /// `a | b`.
    pub fn nand(a: Formula, b: Formula) -> Formula {
        Formula::binary(NAND, a, b)
    }

    /// `a | a`, the stroke-encoded negation.
    pub fn stroke_neg(a: Formula) -> Formula {
        Formula::nand(a.clone(), a)
    }

    pub fn is_atomic(&self) -> bool {
        !matches!(self, Formula::Compound(..))
    }

    pub fn connective(&self) -> Option<&str> {
        match self {
            Formula::Compound(c, _) => Some(c),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Formula] {
        match self {
            Formula::Compound(_, args) => args,
            _ => &[],
        }
    }

    /// Number of connective occurrences.
    pub fn size(&self) -> usize {
        match self {
            Formula::Compound(_, args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
            _ => 0,
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Falsum => {}
            Formula::Compound(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn connectives_used(&self, out: &mut BTreeSet<String>) {
        if let Formula::Compound(c, args) = self {
            out.insert(c.clone());
            args.iter().for_each(|a| a.connectives_used(out));
        }
    }

    pub fn contains_falsum(&self) -> bool {
        match self {
            Formula::Falsum => true,
            Formula::Var(_) => false,
            Formula::Compound(_, args) => args.iter().any(Formula::contains_falsum),
        }
    }

    /// Checks arities against `sig`.
    pub fn well_formed(&self, sig: &Signature) -> bool {
        match self {
            Formula::Var(v) => is_ident(v),
            Formula::Falsum => true,
            Formula::Compound(c, args) => {
                sig.by_name(c).is_some_and(|k| k.arity == args.len())
                    && args.iter().all(|a| a.well_formed(sig))
            }
        }
    }

    /// All subformulas, including `self`.
    pub fn subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.insert(self.clone()) {
            for a in self.args() {
                a.subformulas(out);
            }
        }
    }
}

/// A formula with metavariable leaves, as used in rule displays.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    Meta(String),
    Var(String),
    Falsum,
    Compound(String, Vec<Schema>),
}

/// Assignment of formulas to metavariables.
pub type Binding = BTreeMap<String, Formula>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("unbound metavariable ?{0}")]
    UnboundMeta(String),
}

impl Schema {
    pub fn meta(name: &str) -> Schema {
        Schema::Meta(name.to_string())
    }

    pub fn compound(conn: &str, args: Vec<Schema>) -> Schema {
        Schema::Compound(conn.to_string(), args)
    }

    pub fn metas(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_metas(&mut out);
        out
    }

    pub(crate) fn collect_metas(&self, out: &mut BTreeSet<String>) {
        match self {
            Schema::Meta(m) => {
                out.insert(m.clone());
            }
            Schema::Compound(_, args) => args.iter().for_each(|a| a.collect_metas(out)),
            _ => {}
        }
    }

    pub fn connective(&self) -> Option<&str> {
        match self {
            Schema::Compound(c, _) => Some(c),
            _ => None,
        }
    }

    pub fn connectives_used(&self, out: &mut BTreeSet<String>) {
        if let Schema::Compound(c, args) = self {
            out.insert(c.clone());
            args.iter().for_each(|a| a.connectives_used(out));
        }
    }

    /// Renames metavariables; names absent from `map` are kept.
    pub fn rename_metas(&self, map: &BTreeMap<String, String>) -> Schema {
        match self {
            Schema::Meta(m) => Schema::Meta(map.get(m).cloned().unwrap_or_else(|| m.clone())),
            Schema::Compound(c, args) => {
                Schema::Compound(c.clone(), args.iter().map(|a| a.rename_metas(map)).collect())
            }
            other => other.clone(),
        }
    }

    /// Replaces metavariables by formulas. Fails on the first unbound one.
    pub fn substitute(&self, b: &Binding) -> Result<Formula, FormulaError> {
        Ok(match self {
            Schema::Meta(m) => b
                .get(m)
                .cloned()
                .ok_or_else(|| FormulaError::UnboundMeta(m.clone()))?,
            Schema::Var(v) => Formula::Var(v.clone()),
            Schema::Falsum => Formula::Falsum,
            Schema::Compound(c, args) => Formula::Compound(
                c.clone(),
                args.iter()
                    .map(|a| a.substitute(b))
                    .collect::<Result<_, _>>()?,
            ),
        })
    }

    /// Replaces the metavariables bound in `b`, leaving the others in place.
    pub fn substitute_partial(&self, b: &BTreeMap<String, Schema>) -> Schema {
        match self {
            Schema::Meta(m) => b.get(m).cloned().unwrap_or_else(|| self.clone()),
            Schema::Compound(c, args) => Schema::Compound(
                c.clone(),
                args.iter().map(|a| a.substitute_partial(b)).collect(),
            ),
            other => other.clone(),
        }
    }

    /// First-order matching of `self` against `f`, extending `b`.
    /// On failure `b` may hold partial assignments; callers snapshot it.
    pub fn match_formula(&self, f: &Formula, b: &mut Binding) -> bool {
        match (self, f) {
            (Schema::Meta(m), _) => match b.get(m) {
                Some(bound) => bound == f,
                None => {
                    b.insert(m.clone(), f.clone());
                    true
                }
            },
            (Schema::Var(x), Formula::Var(y)) => x == y,
            (Schema::Falsum, Formula::Falsum) => true,
            (Schema::Compound(c, sargs), Formula::Compound(d, fargs)) => {
                c == d
                    && sargs.len() == fargs.len()
                    && sargs.iter().zip(fargs).all(|(s, f)| s.match_formula(f, b))
            }
            _ => false,
        }
    }

    /// Converts a metavariable-free schema into a formula.
    pub fn to_formula(&self) -> Option<Formula> {
        self.substitute(&Binding::new()).ok()
    }
}

impl From<&Formula> for Schema {
    fn from(f: &Formula) -> Schema {
        match f {
            Formula::Var(v) => Schema::Var(v.clone()),
            Formula::Falsum => Schema::Falsum,
            Formula::Compound(c, args) => {
                Schema::Compound(c.clone(), args.iter().map(Schema::from).collect())
            }
        }
    }
}

/// Renders `f` canonically; `parse_formula(render_formula(f))` gives back `f`.
pub fn render_formula(f: &Formula, sig: &Signature) -> String {
    let mut out = String::new();
    render_schema_into(&Schema::from(f), sig, &mut out);
    out
}

pub fn render_schema(s: &Schema, sig: &Signature) -> String {
    let mut out = String::new();
    render_schema_into(s, sig, &mut out);
    out
}

fn render_schema_into(s: &Schema, sig: &Signature, out: &mut String) {
    match s {
        Schema::Meta(m) => {
            out.push('?');
            out.push_str(m);
        }
        Schema::Var(v) => out.push_str(v),
        Schema::Falsum => out.push_str(FALSUM_TOKEN),
        Schema::Compound(c, args) => {
            // unknown connectives render by name so that output is still readable
            let symbol = sig.by_name(c).map(|k| k.symbol.as_str()).unwrap_or(c);
            match args.len() {
                1 => {
                    out.push_str(symbol);
                    if symbol.ends_with(|ch: char| ch.is_ascii_alphanumeric() || ch == '_') {
                        out.push(' ');
                    }
                    render_schema_into(&args[0], sig, out);
                }
                2 => {
                    out.push('(');
                    render_schema_into(&args[0], sig, out);
                    out.push(' ');
                    out.push_str(symbol);
                    out.push(' ');
                    render_schema_into(&args[1], sig, out);
                    out.push(')');
                }
                _ => {
                    out.push_str(symbol);
                    out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        render_schema_into(a, sig, out);
                    }
                    out.push(')');
                }
            }
        }
    }
}

/// Display through the standard signature, for diagnostics.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self, &Signature::standard()))
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_schema(self, &Signature::standard()))
    }
}
