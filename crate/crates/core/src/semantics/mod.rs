//! Finite matrices, rule soundness against a matrix, and Kripke models.

pub mod kripke;

use std::collections::{BTreeMap, BTreeSet};

use serde_json::Value;
use thiserror::Error;

use crate::formula::{Formula, Schema};
use crate::rules::{Regime, RuleSchema, SequentSchema, Side, TruthTable};
use crate::sequent::Sequent;

pub use kripke::{kripke_forces, kripke_refutes, KripkeModel, Polarity, Reading};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("no table or clause for connective `{0}`")]
    UnknownConnective(String),
    #[error("variable `{0}` has no value")]
    Unbound(String),
    #[error("this notion of consequence needs at most one succedent formula")]
    MultiSuccedent,
    #[error("{count} variables exceed the cap of {cap}")]
    TooManyVariables { count: usize, cap: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("valuation is not monotone: `{var}` true at `{from}` but not at `{to}`")]
    NotMonotone { var: String, from: String, to: String },
}

/// Values are indices into `values`, least first.
pub type Valuation = BTreeMap<String, usize>;

/// A finite totally ordered matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub name: String,
    pub values: Vec<String>,
    pub designated: BTreeSet<usize>,
    /// Per connective: arity and the table flattened row-major over value
    /// indices (first argument most significant).
    pub tables: BTreeMap<String, (usize, Vec<usize>)>,
}

pub const THREE_VALUED_JSON: &str = include_str!("../../assets/three_valued.json");

impl Matrix {
    /// Two values `0 < 1`, `1` designated, tables from truth tables.
    pub fn boolean<'a>(tables: impl IntoIterator<Item = &'a TruthTable>) -> Matrix {
        Matrix {
            name: "two-valued".into(),
            values: vec!["0".into(), "1".into()],
            designated: BTreeSet::from([1]),
            tables: tables
                .into_iter()
                .map(|t| (t.connective.clone(), (t.arity, t.rows.iter().map(|&b| b as usize).collect())))
                .collect(),
        }
    }

    /// Two-valued matrix for every connective of the standard signature.
    pub fn boolean_standard() -> Matrix {
        Matrix::boolean(&[
            TruthTable::nand(),
            TruthTable::from_bits(crate::formula::HP, &[1, 1, 1, 0]),
            TruthTable::nor(),
            TruthTable::xor(),
            TruthTable::not(),
            TruthTable::and(),
            TruthTable::or(),
            TruthTable::imp(),
        ])
    }

    /// The bundled matrix `bot < I < top` with `top` designated.
    pub fn three_valued() -> Matrix {
        Matrix::from_json(THREE_VALUED_JSON).expect("bundled matrix is valid")
    }

    pub fn top(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value_index(&self, name: &str) -> Option<usize> {
        self.values.iter().position(|v| v == name)
    }

    pub fn from_json(text: &str) -> Result<Matrix, SemanticsError> {
        let bad = |m: &str| SemanticsError::Malformed(m.to_string());
        let v: Value = serde_json::from_str(text).map_err(|e| SemanticsError::Malformed(e.to_string()))?;
        let values: Vec<String> = v
            .get("values")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `values`"))?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("values must be strings")))
            .collect::<Result<_, _>>()?;
        if values.is_empty() || values.iter().collect::<BTreeSet<_>>().len() != values.len() {
            return Err(bad("values must be non-empty and distinct"));
        }
        let idx = |x: &Value| -> Result<usize, SemanticsError> {
            let s = x.as_str().ok_or_else(|| bad("table entries must be value names"))?;
            values.iter().position(|v| v == s).ok_or_else(|| SemanticsError::Malformed(format!("unknown value `{s}`")))
        };
        let designated: BTreeSet<usize> = v
            .get("designated")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `designated`"))?
            .iter()
            .map(idx)
            .collect::<Result<_, _>>()?;
        if designated.is_empty() {
            return Err(bad("no designated value"));
        }
        let mut tables = BTreeMap::new();
        if let Some(obj) = v.get("tables").and_then(Value::as_object) {
            for (name, t) in obj {
                let mut flat = Vec::new();
                let arity = flatten(t, &idx, &mut flat)?;
                if arity == 0 || flat.len() != values.len().pow(arity as u32) {
                    return Err(SemanticsError::Malformed(format!("table for `{name}` is not total")));
                }
                tables.insert(name.clone(), (arity, flat));
            }
        }
        let name = v.get("name").and_then(Value::as_str).unwrap_or("matrix").to_string();
        Ok(Matrix { name, values, designated, tables })
    }

    pub fn to_json(&self) -> Value {
        let k = self.values.len();
        let mut tables = serde_json::Map::new();
        for (c, (arity, flat)) in &self.tables {
            tables.insert(c.clone(), nest(flat, *arity, k, &self.values));
        }
        serde_json::json!({
            "name": self.name,
            "values": self.values,
            "designated": self.designated.iter().map(|&i| self.values[i].clone()).collect::<Vec<_>>(),
            "tables": tables,
        })
    }

    pub fn render_valuation(&self, v: &Valuation) -> BTreeMap<String, String> {
        v.iter().map(|(k, &i)| (k.clone(), self.values[i].clone())).collect()
    }
}

/// Depth of nesting is the arity.
fn flatten(
    t: &Value,
    idx: &dyn Fn(&Value) -> Result<usize, SemanticsError>,
    out: &mut Vec<usize>,
) -> Result<usize, SemanticsError> {
    match t {
        Value::Array(items) => {
            let mut depth = None;
            for it in items {
                let d = flatten(it, idx, out)?;
                if depth.is_some_and(|x| x != d) {
                    return Err(SemanticsError::Malformed("ragged table".into()));
                }
                depth = Some(d);
            }
            Ok(depth.unwrap_or(0) + 1)
        }
        other => {
            out.push(idx(other)?);
            Ok(0)
        }
    }
}

fn nest(flat: &[usize], arity: usize, k: usize, names: &[String]) -> Value {
    if arity == 0 {
        return Value::String(names[flat[0]].clone());
    }
    let chunk = flat.len() / k;
    Value::Array((0..k).map(|i| nest(&flat[i * chunk..(i + 1) * chunk], arity - 1, k, names)).collect())
}

/// Value of `f` under `v`; `_|_` takes the least value.
pub fn eval_matrix(m: &Matrix, v: &Valuation, f: &Formula) -> Result<usize, SemanticsError> {
    crate::kernel::deep(|| match f {
        Formula::Var(x) => v.get(x).copied().ok_or_else(|| SemanticsError::Unbound(x.clone())),
        Formula::Falsum => Ok(0),
        Formula::Compound(c, args) => {
            let (arity, table) = m.tables.get(c).ok_or_else(|| SemanticsError::UnknownConnective(c.clone()))?;
            if *arity != args.len() {
                return Err(SemanticsError::UnknownConnective(c.clone()));
            }
            let k = m.values.len();
            let mut i = 0;
            for a in args {
                i = i * k + eval_matrix(m, v, a)?;
            }
            Ok(table[i])
        }
    })
}

/// Ordered consequence: the least antecedent value (greatest value when
/// there is none) is at most the succedent value; with an empty succedent
/// it must be the least value.
pub fn sequent_holds_matrix(m: &Matrix, v: &Valuation, s: &Sequent) -> Result<bool, SemanticsError> {
    if s.succ.len() > 1 {
        return Err(SemanticsError::MultiSuccedent);
    }
    let mut min = m.top();
    for f in &s.ante {
        min = min.min(eval_matrix(m, v, f)?);
    }
    Ok(match s.succ.first() {
        Some(g) => min <= eval_matrix(m, v, g)?,
        None => min == 0,
    })
}

/// Designated-value consequence: if every antecedent formula is designated,
/// some succedent formula is.
pub fn sequent_holds_designated(m: &Matrix, v: &Valuation, s: &Sequent) -> Result<bool, SemanticsError> {
    for f in &s.ante {
        if !m.designated.contains(&eval_matrix(m, v, f)?) {
            return Ok(true);
        }
    }
    for g in &s.succ {
        if m.designated.contains(&eval_matrix(m, v, g)?) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Calls `f` on every valuation of `vars` in lexicographic order (first
/// variable most significant) until it returns `Some`.
pub fn for_each_valuation<R>(
    k: usize,
    vars: &[String],
    mut f: impl FnMut(&Valuation) -> Result<Option<R>, SemanticsError>,
) -> Result<Option<R>, SemanticsError> {
    let n = vars.len();
    let mut digits = vec![0usize; n];
    loop {
        let v: Valuation = vars.iter().cloned().zip(digits.iter().copied()).collect();
        if let Some(r) = f(&v)? {
            return Ok(Some(r));
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < k {
                break;
            }
            digits[i] = 0;
        }
    }
}

pub const DEFAULT_VARIABLE_CAP: usize = 8;

/// First valuation (lexicographic over the sorted variables) under which the
/// single-succedent sequent fails in the ordered sense.
pub fn find_refuting_valuation(m: &Matrix, s: &Sequent, cap: usize) -> Result<Option<Valuation>, SemanticsError> {
    if s.succ.len() > 1 {
        return Err(SemanticsError::MultiSuccedent);
    }
    let vars = s.vars();
    if vars.len() > cap {
        return Err(SemanticsError::TooManyVariables { count: vars.len(), cap });
    }
    for_each_valuation(m.values.len(), &vars, |v| Ok((!sequent_holds_matrix(m, v, s)?).then(|| v.clone())))
}

/// Like [`find_refuting_valuation`] for designated-value consequence; any
/// number of succedent formulas.
pub fn find_designated_refuter(m: &Matrix, s: &Sequent, cap: usize) -> Result<Option<Valuation>, SemanticsError> {
    let vars = s.vars();
    if vars.len() > cap {
        return Err(SemanticsError::TooManyVariables { count: vars.len(), cap });
    }
    for_each_valuation(m.values.len(), &vars, |v| Ok((!sequent_holds_designated(m, v, s)?).then(|| v.clone())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Soundness {
    Sound,
    /// Premises hold and the conclusion fails under this valuation of the
    /// metavariables and context variables.
    Counter(Valuation),
}

fn instantiate(s: &SequentSchema, gamma: &[&str], delta: &[&str]) -> Result<Sequent, SemanticsError> {
    let inst = |x: &Schema| -> Result<Formula, SemanticsError> {
        let mut b = crate::formula::Binding::new();
        for m in x.metas() {
            b.insert(m.clone(), Formula::Var(m));
        }
        x.substitute(&b).map_err(|e| SemanticsError::Malformed(e.to_string()))
    };
    let mut ante: Vec<Formula> = s.left.iter().map(inst).collect::<Result<_, _>>()?;
    let mut succ: Vec<Formula> = s.right.iter().map(inst).collect::<Result<_, _>>()?;
    if s.gamma {
        ante.extend(gamma.iter().map(|g| Formula::var(g)));
    }
    if s.delta {
        succ.extend(delta.iter().map(|d| Formula::var(d)));
    }
    Ok(Sequent::new(ante, succ))
}

/// Premise and conclusion instances of `r` with metavariables read as
/// variables of the same name and each context slot simulated by one fresh
/// variable (cut gets separate ones per premise).
pub fn rule_instance(r: &RuleSchema, regime: Regime) -> Result<(Vec<Sequent>, Sequent), SemanticsError> {
    if r.side == Side::Cut {
        let a = Formula::var("A");
        let g1 = Formula::var("Gamma1");
        let g2 = Formula::var("Gamma2");
        let d2 = Formula::var("Delta2");
        return Ok(if regime == Regime::Multi {
            let d1 = Formula::var("Delta1");
            (
                vec![
                    Sequent::new(vec![g1.clone()], vec![d1.clone(), a.clone()]),
                    Sequent::new(vec![a, g2.clone()], vec![d2.clone()]),
                ],
                Sequent::new(vec![g1, g2], vec![d1, d2]),
            )
        } else {
            (
                vec![Sequent::new(vec![g1.clone()], vec![a.clone()]), Sequent::new(vec![a, g2.clone()], vec![d2.clone()])],
                Sequent::new(vec![g1, g2], vec![d2]),
            )
        });
    }
    let prem = r.premises.iter().map(|p| instantiate(p, &["Gamma"], &["Delta"])).collect::<Result<_, _>>()?;
    Ok((prem, instantiate(&r.conclusion, &["Gamma"], &["Delta"])?))
}

/// Checks that every valuation making all premises hold makes the
/// conclusion hold. Multi-succedent rules use designated-value consequence,
/// single-succedent ones the ordered notion.
pub fn rule_matrix_sound(m: &Matrix, r: &RuleSchema, regime: Regime) -> Result<Soundness, SemanticsError> {
    let (prems, concl) = rule_instance(r, regime)?;
    let holds = |v: &Valuation, s: &Sequent| {
        if regime == Regime::Multi {
            sequent_holds_designated(m, v, s)
        } else {
            sequent_holds_matrix(m, v, s)
        }
    };
    let mut vars = BTreeSet::new();
    for s in prems.iter().chain(std::iter::once(&concl)) {
        vars.extend(s.vars());
    }
    let vars: Vec<String> = vars.into_iter().collect();
    let r = for_each_valuation(m.values.len(), &vars, |v| {
        for p in &prems {
            if !holds(v, p)? {
                return Ok(None);
            }
        }
        Ok((!holds(v, &concl)?).then(|| v.clone()))
    })?;
    Ok(match r {
        Some(v) => Soundness::Counter(v),
        None => Soundness::Sound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, Signature};
    use crate::rules::builtin_ruleset;
    use crate::sequent::parse_sequent;

    fn f(s: &str) -> Formula {
        parse_formula(s, &Signature::standard()).unwrap()
    }

    fn v(pairs: &[(&str, usize)]) -> Valuation {
        pairs.iter().map(|(k, x)| (k.to_string(), *x)).collect()
    }

    #[test]
    fn three_valued_examples() {
        let m = Matrix::three_valued();
        assert_eq!(eval_matrix(&m, &v(&[("p", 1)]), &f("p | p")).unwrap(), 0);
        assert_eq!(eval_matrix(&m, &v(&[("p", 1)]), &f("(p | p) | (p | p)")).unwrap(), 2);
        let s = parse_sequent("(p | p) | (p | p) => p", &Signature::standard()).unwrap();
        assert!(!sequent_holds_matrix(&m, &v(&[("p", 1)]), &s).unwrap());
        assert_eq!(find_refuting_valuation(&m, &s, 8).unwrap(), Some(v(&[("p", 1)])));
        let s = parse_sequent("p, p | p =>", &Signature::standard()).unwrap();
        assert!(sequent_holds_matrix(&m, &v(&[("p", 2)]), &s).unwrap());
        let s = parse_sequent("p | q => q | p", &Signature::standard()).unwrap();
        assert_eq!(find_refuting_valuation(&m, &s, 8).unwrap(), None);
        let s = parse_sequent("=> p, q", &Signature::standard()).unwrap();
        assert_eq!(find_refuting_valuation(&m, &s, 8), Err(SemanticsError::MultiSuccedent));
    }

    #[test]
    fn json_round_trip() {
        let m = Matrix::three_valued();
        let back = Matrix::from_json(&m.to_json().to_string()).unwrap();
        assert_eq!(m, back);
        assert!(Matrix::from_json(r#"{"values":["a"],"designated":[],"tables":{}}"#).is_err());
        assert!(Matrix::from_json(r#"{"values":["a","b"],"designated":["b"],"tables":{"n":["a"]}}"#).is_err());
    }

    #[test]
    fn two_valued_nand() {
        let m = Matrix::boolean_standard();
        assert_eq!(eval_matrix(&m, &v(&[("p", 1), ("q", 1)]), &f("p | q")).unwrap(), 0);
    }

    #[test]
    fn stroke_rules_on_three_values() {
        let m = Matrix::three_valued();
        let rs = builtin_ruleset("LS-single-classical").unwrap();
        for r in &rs.sequent_rules {
            let res = rule_matrix_sound(&m, r, Regime::Single).unwrap();
            if r.name == "|L_C" {
                assert_eq!(res, Soundness::Counter(v(&[("A", 1), ("Gamma", 2)])));
            } else {
                assert_eq!(res, Soundness::Sound, "{}", r.name);
            }
        }
    }

    #[test]
    fn valuations_are_lexicographic() {
        let vars = vec!["a".to_string(), "b".to_string()];
        let mut seen = Vec::new();
        let _ = for_each_valuation::<()>(3, &vars, |v| {
            seen.push((v["a"], v["b"]));
            Ok(None)
        });
        assert_eq!(seen.len(), 9);
        assert_eq!(seen[1], (0, 1));
        assert_eq!(seen[3], (1, 0));
    }
}
