//! JSON readers and writers for proofs, derivations and rule sets, plus
//! plain-text renderings.
//!
//! Trees are written by hand and read through a stack-growing deserializer,
//! so arbitrarily tall proofs survive a round trip.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::formula::{parse_formula, parse_schema, render_formula, render_schema, Formula, Schema, Signature};
use crate::kernel::deep;
use crate::kernel::nd::{Label, NdDerivation};
use crate::kernel::sequent::SequentProof;
use crate::rules::cnf::TruthTable;
use crate::rules::{
    derive_nd_rules, NdKind, NdPremise, NdRuleSchema, Regime, RuleError, RuleSchema, RuleSet, SequentSchema, Side,
};
use crate::sequent::{render_list, render_sequent, Sequent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("malformed file: {0}")]
    Malformed(String),
    #[error("bad formula `{text}`: {reason}")]
    Formula { text: String, reason: String },
    #[error(transparent)]
    Rules(#[from] RuleError),
}

fn bad(m: impl Into<String>) -> IoError {
    IoError::Malformed(m.into())
}

/// Parses JSON of any nesting depth.
pub fn parse_json(text: &str) -> Result<Value, IoError> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let de = serde_stacker::Deserializer::new(&mut de);
    Value::deserialize(de).map_err(|e| IoError::Json(e.to_string()))
}

/// Drops a value without recursing.
pub fn dispose(v: Value) {
    let mut stack = vec![v];
    while let Some(v) = stack.pop() {
        match v {
            Value::Array(a) => stack.extend(a),
            Value::Object(m) => stack.extend(m.into_iter().map(|(_, v)| v)),
            _ => {}
        }
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn formula_of(v: &Value, sig: &Signature) -> Result<Formula, IoError> {
    let text = v.as_str().ok_or_else(|| bad("formulas are strings"))?;
    parse_formula(text, sig).map_err(|e| IoError::Formula { text: text.to_string(), reason: e.to_string() })
}

fn schema_of(v: &Value, sig: &Signature) -> Result<Schema, IoError> {
    let text = v.as_str().ok_or_else(|| bad("schemas are strings"))?;
    parse_schema(text, sig).map_err(|e| IoError::Formula { text: text.to_string(), reason: e.to_string() })
}

fn list<'a>(v: &'a Value, key: &str) -> Result<&'a [Value], IoError> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(&[]),
        Some(Value::Array(a)) => Ok(a),
        Some(_) => Err(bad(format!("`{key}` must be a list"))),
    }
}

fn formulas(v: &Value, key: &str, sig: &Signature) -> Result<Vec<Formula>, IoError> {
    list(v, key)?.iter().map(|x| formula_of(x, sig)).collect()
}

fn schemas(v: &Value, key: &str, sig: &Signature) -> Result<Vec<Schema>, IoError> {
    list(v, key)?.iter().map(|x| schema_of(x, sig)).collect()
}

fn string_field<'a>(v: &'a Value, key: &str) -> Result<&'a str, IoError> {
    v.get(key).and_then(Value::as_str).ok_or_else(|| bad(format!("missing string `{key}`")))
}

fn flag(v: &Value, key: &str, default: bool) -> Result<bool, IoError> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(default),
        Some(Value::Bool(b)) => Ok(*b),
        Some(_) => Err(bad(format!("`{key}` must be a boolean"))),
    }
}

fn write_list(out: &mut String, fs: &[Formula], sig: &Signature) {
    out.push('[');
    for (i, f) in fs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&quote(&render_formula(f, sig)));
    }
    out.push(']');
}

fn write_sequent(out: &mut String, s: &Sequent, sig: &Signature) {
    out.push_str("{\"ante\":");
    write_list(out, &s.ante, sig);
    out.push_str(",\"succ\":");
    write_list(out, &s.succ, sig);
    out.push('}');
}

// ---------------------------------------------------------------- proofs

pub fn proof_to_json(p: &SequentProof, sig: &Signature) -> String {
    let mut out = String::new();
    write_proof(p, sig, &mut out);
    out
}

fn write_proof(p: &SequentProof, sig: &Signature, out: &mut String) {
    deep(|| {
        let _ = write!(out, "{{\"rule\":{},\"sequent\":", quote(&p.rule));
        write_sequent(out, &p.conclusion, sig);
        out.push_str(",\"children\":[");
        for (i, c) in p.children.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_proof(c, sig, out);
        }
        out.push_str("]}");
    })
}

pub fn sequent_to_value(s: &Sequent, sig: &Signature) -> Value {
    let r = |fs: &[Formula]| fs.iter().map(|f| render_formula(f, sig)).collect::<Vec<_>>();
    json!({"ante": r(&s.ante), "succ": r(&s.succ)})
}

pub fn proof_from_json(text: &str, sig: &Signature) -> Result<SequentProof, IoError> {
    let v = parse_json(text)?;
    let r = proof_from_value(&v, sig);
    dispose(v);
    r
}

fn proof_from_value(v: &Value, sig: &Signature) -> Result<SequentProof, IoError> {
    deep(|| {
        let rule = string_field(v, "rule")?;
        let s = v.get("sequent").ok_or_else(|| bad("proof node without `sequent`"))?;
        let seq = Sequent::new(formulas(s, "ante", sig)?, formulas(s, "succ", sig)?);
        let children = list(v, "children")?.iter().map(|c| proof_from_value(c, sig)).collect::<Result<_, _>>()?;
        Ok(SequentProof::new(rule, seq, children))
    })
}

/// Indented listing, one sequent per line, premises below their conclusion.
pub fn proof_pretty(p: &SequentProof, sig: &Signature) -> String {
    let mut out = String::new();
    let mut stack = vec![(p, 0usize)];
    while let Some((n, d)) = stack.pop() {
        let _ = writeln!(out, "{}{}   [{}]", "  ".repeat(d), render_sequent(&n.conclusion, sig), n.rule);
        stack.extend(n.children.iter().rev().map(|c| (c, d + 1)));
    }
    out
}

// ----------------------------------------------------------- derivations

pub fn derivation_to_json(d: &NdDerivation, sig: &Signature) -> String {
    let mut out = String::new();
    write_derivation(d, sig, &mut out);
    out
}

fn write_derivation(d: &NdDerivation, sig: &Signature, out: &mut String) {
    deep(|| match d {
        NdDerivation::Assumption { formula, label } => {
            let _ = write!(out, "{{\"assume\":{},\"label\":{label}}}", quote(&render_formula(formula, sig)));
        }
        NdDerivation::Inference { rule, conclusion, children, discharged } => {
            let _ = write!(out, "{{\"rule\":{},\"conclusion\":", quote(rule));
            match conclusion.as_slice() {
                [f] => out.push_str(&quote(&render_formula(f, sig))),
                fs => write_list(out, fs, sig),
            }
            out.push_str(",\"discharged\":{");
            for (i, (k, ls)) in discharged.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let ls: Vec<String> = ls.iter().map(Label::to_string).collect();
                let _ = write!(out, "\"{k}\":[{}]", ls.join(","));
            }
            out.push_str("},\"children\":[");
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_derivation(c, sig, out);
            }
            out.push_str("]}");
        }
    })
}

pub fn derivation_from_json(text: &str, sig: &Signature) -> Result<NdDerivation, IoError> {
    let v = parse_json(text)?;
    let r = derivation_from_value(&v, sig);
    dispose(v);
    r
}

fn label_of(v: &Value) -> Result<Label, IoError> {
    v.as_u64().and_then(|n| Label::try_from(n).ok()).ok_or_else(|| bad("labels are non-negative integers"))
}

fn derivation_from_value(v: &Value, sig: &Signature) -> Result<NdDerivation, IoError> {
    deep(|| {
        if let Some(f) = v.get("assume") {
            let label = label_of(v.get("label").ok_or_else(|| bad("assumption without `label`"))?)?;
            return Ok(NdDerivation::assume(formula_of(f, sig)?, label));
        }
        let rule = string_field(v, "rule")?.to_string();
        let conclusion = match v.get("conclusion") {
            Some(Value::Array(a)) => a.iter().map(|x| formula_of(x, sig)).collect::<Result<_, _>>()?,
            Some(x) => vec![formula_of(x, sig)?],
            None => return Err(bad("inference without `conclusion`")),
        };
        let children: Vec<NdDerivation> =
            list(v, "children")?.iter().map(|c| derivation_from_value(c, sig)).collect::<Result<_, _>>()?;
        let mut discharged: BTreeMap<usize, BTreeSet<Label>> = BTreeMap::new();
        if let Some(obj) = v.get("discharged").filter(|x| !x.is_null()) {
            let obj = obj.as_object().ok_or_else(|| bad("`discharged` maps premise indices to labels"))?;
            for (k, ls) in obj {
                let i: usize = k.parse().map_err(|_| bad(format!("premise index `{k}`")))?;
                if i >= children.len() {
                    return Err(bad(format!("discharge at premise {i} of a {}-premise inference", children.len())));
                }
                let ls = ls.as_array().ok_or_else(|| bad("discharged labels form a list"))?;
                let set = ls.iter().map(label_of).collect::<Result<BTreeSet<_>, _>>()?;
                if !set.is_empty() {
                    discharged.insert(i, set);
                }
            }
        }
        Ok(NdDerivation::Inference { rule, conclusion, children, discharged })
    })
}

/// Indented listing of a derivation; open leaves show their label.
pub fn derivation_pretty(d: &NdDerivation, sig: &Signature) -> String {
    let mut out = String::new();
    let mut stack = vec![(d, 0usize)];
    while let Some((n, depth)) = stack.pop() {
        let pad = "  ".repeat(depth);
        match n {
            NdDerivation::Assumption { formula, label } => {
                let _ = writeln!(out, "{pad}[{}]^{label}", render_formula(formula, sig));
            }
            NdDerivation::Inference { rule, conclusion, discharged, .. } => {
                let shown = if conclusion.is_empty() { "_|_".to_string() } else { render_list(conclusion, sig) };
                let mut line = format!("{pad}{shown}   [{rule}");
                for (i, ls) in discharged {
                    let ls: Vec<String> = ls.iter().map(Label::to_string).collect();
                    let _ = write!(line, "; {i}:{}", ls.join(","));
                }
                line.push(']');
                out.push_str(&line);
                out.push('\n');
            }
        }
        stack.extend(n.children().iter().rev().map(|c| (c, depth + 1)));
    }
    out
}

// -------------------------------------------------------------- rule sets

fn schema_list(v: &[Schema], sig: &Signature) -> Vec<String> {
    v.iter().map(|s| render_schema(s, sig)).collect()
}

fn sequent_schema_value(s: &SequentSchema, sig: &Signature) -> Value {
    json!({
        "left": schema_list(&s.left, sig),
        "right": schema_list(&s.right, sig),
        "gamma": s.gamma,
        "delta": s.delta,
    })
}

fn rule_value(r: &RuleSchema, sig: &Signature) -> Value {
    let mut v = json!({
        "name": r.name,
        "side": r.side.as_str(),
        "principal": r.principal.as_ref().map(|p| render_schema(p, sig)),
        "conclusion": sequent_schema_value(&r.conclusion, sig),
        "premises": r.premises.iter().map(|p| sequent_schema_value(p, sig)).collect::<Vec<_>>(),
        "tags": r.tags.iter().map(|t| t.as_str()).collect::<Vec<_>>(),
    });
    if let Some(o) = &r.origin {
        v["origin"] = rule_value(o, sig);
    }
    v
}

fn nd_rule_value(r: &NdRuleSchema, sig: &Signature) -> Value {
    json!({
        "name": r.name,
        "kind": r.kind.as_str(),
        "principal": r.principal.as_ref().map(|p| render_schema(p, sig)),
        "premises": r.premises.iter().map(|p| json!({
            "conclusion": schema_list(&p.conclusion, sig),
            "delta": p.delta,
            "discharge": schema_list(&p.discharge, sig),
        })).collect::<Vec<_>>(),
        "conclusion": schema_list(&r.conclusion, sig),
        "delta": r.delta,
        "from_sequent": r.from_sequent,
    })
}

pub fn ruleset_to_value(rs: &RuleSet) -> Value {
    let sig = &rs.signature;
    let tables: BTreeMap<&String, Vec<u8>> =
        rs.tables.iter().map(|(k, t)| (k, t.rows.iter().map(|&b| b as u8).collect())).collect();
    json!({
        "name": rs.name,
        "regime": rs.regime.as_str(),
        "signature": sig.to_json(),
        "tables": tables,
        "sequent_rules": rs.sequent_rules.iter().map(|r| rule_value(r, sig)).collect::<Vec<_>>(),
        "nd_rules": rs.nd_rules.iter().map(|r| nd_rule_value(r, sig)).collect::<Vec<_>>(),
    })
}

fn opt_schema(v: &Value, key: &str, sig: &Signature) -> Result<Option<Schema>, IoError> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(x) => schema_of(x, sig).map(Some),
    }
}

fn sequent_schema_of(v: &Value, sig: &Signature) -> Result<SequentSchema, IoError> {
    Ok(SequentSchema::new(
        schemas(v, "left", sig)?,
        schemas(v, "right", sig)?,
        flag(v, "gamma", true)?,
        flag(v, "delta", true)?,
    ))
}

fn rule_of(v: &Value, sig: &Signature) -> Result<RuleSchema, IoError> {
    let name = string_field(v, "name")?.to_string();
    let side = Side::parse(string_field(v, "side")?).ok_or_else(|| bad(format!("rule `{name}`: unknown side")))?;
    let conclusion = sequent_schema_of(v.get("conclusion").ok_or_else(|| bad(format!("rule `{name}` has no conclusion")))?, sig)?;
    let premises = list(v, "premises")?.iter().map(|p| sequent_schema_of(p, sig)).collect::<Result<_, _>>()?;
    let tags = list(v, "tags")?
        .iter()
        .map(|t| t.as_str().and_then(Regime::parse).ok_or_else(|| bad(format!("rule `{name}`: unknown regime tag"))))
        .collect::<Result<_, _>>()?;
    let origin = match v.get("origin") {
        None | Some(Value::Null) => None,
        Some(o) => Some(Box::new(rule_of(o, sig)?)),
    };
    Ok(RuleSchema { principal: opt_schema(v, "principal", sig)?, name, side, conclusion, premises, tags, origin })
}

fn nd_rule_of(v: &Value, sig: &Signature) -> Result<NdRuleSchema, IoError> {
    let name = string_field(v, "name")?.to_string();
    let kind = NdKind::parse(string_field(v, "kind")?).ok_or_else(|| bad(format!("rule `{name}`: unknown kind")))?;
    let premises = list(v, "premises")?
        .iter()
        .map(|p| {
            Ok(NdPremise {
                conclusion: schemas(p, "conclusion", sig)?,
                delta: flag(p, "delta", false)?,
                discharge: schemas(p, "discharge", sig)?,
            })
        })
        .collect::<Result<_, IoError>>()?;
    Ok(NdRuleSchema {
        principal: opt_schema(v, "principal", sig)?,
        premises,
        conclusion: schemas(v, "conclusion", sig)?,
        delta: flag(v, "delta", false)?,
        from_sequent: v.get("from_sequent").and_then(Value::as_str).map(str::to_string),
        name,
        kind,
    })
}

/// Reads a rule-set file. A missing signature means the standard one; a
/// missing `nd_rules` list is derived from the sequent rules.
pub fn ruleset_from_json(text: &str) -> Result<RuleSet, IoError> {
    let v = parse_json(text)?;
    let signature = match v.get("signature") {
        None | Some(Value::Null) => Signature::standard(),
        Some(s) => Signature::from_json(&s.to_string()).map_err(RuleError::from)?,
    };
    let sig = &signature;
    let regime = Regime::parse(string_field(&v, "regime")?).ok_or_else(|| bad("unknown regime"))?;
    let mut tables = BTreeMap::new();
    if let Some(obj) = v.get("tables").filter(|x| !x.is_null()) {
        for (name, rows) in obj.as_object().ok_or_else(|| bad("`tables` maps connectives to rows"))? {
            let rows: Vec<bool> = rows
                .as_array()
                .ok_or_else(|| bad("table rows form a list"))?
                .iter()
                .map(|b| match b.as_u64() {
                    Some(0) => Ok(false),
                    Some(1) => Ok(true),
                    _ => Err(bad("table entries must be 0 or 1")),
                })
                .collect::<Result<_, _>>()?;
            let arity = sig.by_name(name).map(|c| c.arity).ok_or_else(|| bad(format!("table for unknown `{name}`")))?;
            tables.insert(name.clone(), TruthTable::new(name, arity, rows)?);
        }
    }
    let sequent_rules = list(&v, "sequent_rules")?.iter().map(|r| rule_of(r, sig)).collect::<Result<_, _>>()?;
    let nd_given = v.get("nd_rules").is_some_and(|x| !x.is_null());
    let nd_rules = list(&v, "nd_rules")?.iter().map(|r| nd_rule_of(r, sig)).collect::<Result<_, _>>()?;
    let mut rs = RuleSet {
        name: v.get("name").and_then(Value::as_str).unwrap_or("custom").to_string(),
        signature,
        regime,
        sequent_rules,
        nd_rules,
        tables,
    };
    if !nd_given {
        rs = derive_nd_rules(&rs);
    }
    rs.validate()?;
    Ok(rs)
}
