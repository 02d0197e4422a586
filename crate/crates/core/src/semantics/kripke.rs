//! Finite Kripke models and forcing.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde_json::{json, Value};

use super::SemanticsError;
use crate::formula::{Formula, AND, HP, IMP, NAND, NOR, NOT, OR};
use crate::sequent::Sequent;

/// Worlds with a preorder (stored as its reflexive-transitive closure) and a
/// monotone valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    pub worlds: Vec<String>,
    /// Pairs as declared; the closure is in `le`.
    pub order: Vec<(usize, usize)>,
    pub val: Vec<BTreeSet<String>>,
    le: Vec<Vec<bool>>,
}

/// How `||` is read. `Standard` uses the disjunctive clause everywhere;
/// `Polarized` uses it for positive occurrences only and the clause of `|`
/// for negative ones (antecedent formulas are negative).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reading {
    Standard,
    Polarized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Pos,
    Neg,
}

impl Polarity {
    fn flip(self) -> Polarity {
        match self {
            Polarity::Pos => Polarity::Neg,
            Polarity::Neg => Polarity::Pos,
        }
    }
}

impl KripkeModel {
    pub fn new(worlds: Vec<String>, order: Vec<(usize, usize)>, val: Vec<BTreeSet<String>>) -> Result<Self, SemanticsError> {
        let n = worlds.len();
        if n == 0 {
            return Err(SemanticsError::Malformed("a model needs a world".into()));
        }
        if val.len() != n {
            return Err(SemanticsError::Malformed("valuation must list every world".into()));
        }
        if worlds.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(SemanticsError::Malformed("duplicate world name".into()));
        }
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in &order {
            if a >= n || b >= n {
                return Err(SemanticsError::Malformed("order mentions an unknown world".into()));
            }
            le[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    for j in 0..n {
                        if le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if le[i][j] {
                    if let Some(p) = val[i].difference(&val[j]).next() {
                        return Err(SemanticsError::NotMonotone {
                            var: p.clone(),
                            from: worlds[i].clone(),
                            to: worlds[j].clone(),
                        });
                    }
                }
            }
        }
        Ok(KripkeModel { worlds, order, val, le })
    }

    /// Single reflexive world.
    pub fn single(val: BTreeSet<String>) -> Self {
        KripkeModel::new(vec!["w0".into()], vec![], vec![val]).expect("one world is a valid model")
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    pub fn world(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn from_json(text: &str) -> Result<Self, SemanticsError> {
        let bad = |m: &str| SemanticsError::Malformed(m.to_string());
        let v: Value = serde_json::from_str(text).map_err(|e| SemanticsError::Malformed(e.to_string()))?;
        let worlds: Vec<String> = v
            .get("worlds")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `worlds`"))?
            .iter()
            .map(|w| w.as_str().map(str::to_string).ok_or_else(|| bad("world names must be strings")))
            .collect::<Result<_, _>>()?;
        let idx = |x: &Value| -> Result<usize, SemanticsError> {
            let s = x.as_str().ok_or_else(|| bad("world names must be strings"))?;
            worlds.iter().position(|w| w == s).ok_or_else(|| SemanticsError::Malformed(format!("unknown world `{s}`")))
        };
        let mut order = Vec::new();
        if let Some(pairs) = v.get("order").and_then(Value::as_array) {
            for p in pairs {
                let pair = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("order entries are pairs"))?;
                order.push((idx(&pair[0])?, idx(&pair[1])?));
            }
        }
        let mut val = vec![BTreeSet::new(); worlds.len()];
        if let Some(obj) = v.get("val").and_then(Value::as_object) {
            for (w, vars) in obj {
                let i = idx(&Value::String(w.clone()))?;
                for x in vars.as_array().ok_or_else(|| bad("valuations are lists of variables"))? {
                    val[i].insert(x.as_str().ok_or_else(|| bad("variables are strings"))?.to_string());
                }
            }
        }
        KripkeModel::new(worlds, order, val)
    }

    pub fn to_json(&self) -> Value {
        let val: BTreeMap<&str, Vec<&String>> =
            self.worlds.iter().zip(&self.val).map(|(w, s)| (w.as_str(), s.iter().collect())).collect();
        json!({
            "worlds": self.worlds,
            "order": self.order.iter().map(|&(a, b)| [&self.worlds[a], &self.worlds[b]]).collect::<Vec<_>>(),
            "val": val,
        })
    }
}

/// Memoized forcing over all worlds at once.
pub struct Forcing<'m> {
    model: &'m KripkeModel,
    reading: Reading,
    memo: HashMap<(Formula, Polarity), Vec<bool>>,
}

impl<'m> Forcing<'m> {
    pub fn new(model: &'m KripkeModel, reading: Reading) -> Self {
        Forcing { model, reading, memo: HashMap::new() }
    }

    fn all_above(&self, w: usize, t: impl Fn(usize) -> bool) -> bool {
        (0..self.model.len()).all(|u| !self.model.le(w, u) || t(u))
    }

    /// Worlds forcing `f` read with polarity `pol`.
    pub fn table(&mut self, f: &Formula, pol: Polarity) -> Result<Vec<bool>, SemanticsError> {
        if let Some(t) = self.memo.get(&(f.clone(), pol)) {
            return Ok(t.clone());
        }
        let n = self.model.len();
        let t: Vec<bool> = match f {
            Formula::Var(x) => (0..n).map(|w| self.model.val[w].contains(x)).collect(),
            Formula::Falsum => vec![false; n],
            Formula::Compound(c, args) => {
                let c = c.as_str();
                let need = |k: usize| -> Result<(), SemanticsError> {
                    if args.len() == k {
                        Ok(())
                    } else {
                        Err(SemanticsError::UnknownConnective(c.to_string()))
                    }
                };
                match c {
                    NAND | NOR | HP => {
                        need(2)?;
                        let a = self.table(&args[0], pol.flip())?;
                        let b = self.table(&args[1], pol.flip())?;
                        let disjunctive = c == HP && (self.reading == Reading::Standard || pol == Polarity::Pos);
                        (0..n)
                            .map(|w| {
                                if c == NOR {
                                    self.all_above(w, |u| !a[u] && !b[u])
                                } else if disjunctive {
                                    self.all_above(w, |u| !a[u]) || self.all_above(w, |u| !b[u])
                                } else {
                                    self.all_above(w, |u| !(a[u] && b[u]))
                                }
                            })
                            .collect()
                    }
                    NOT => {
                        need(1)?;
                        let a = self.table(&args[0], pol.flip())?;
                        (0..n).map(|w| self.all_above(w, |u| !a[u])).collect()
                    }
                    AND | OR => {
                        need(2)?;
                        let a = self.table(&args[0], pol)?;
                        let b = self.table(&args[1], pol)?;
                        (0..n).map(|w| if c == AND { a[w] && b[w] } else { a[w] || b[w] }).collect()
                    }
                    IMP => {
                        need(2)?;
                        let a = self.table(&args[0], pol.flip())?;
                        let b = self.table(&args[1], pol)?;
                        (0..n).map(|w| self.all_above(w, |u| !a[u] || b[u])).collect()
                    }
                    other => return Err(SemanticsError::UnknownConnective(other.to_string())),
                }
            }
        };
        self.memo.insert((f.clone(), pol), t.clone());
        Ok(t)
    }

    pub fn forces(&mut self, w: usize, f: &Formula, pol: Polarity) -> Result<bool, SemanticsError> {
        Ok(self.table(f, pol)?[w])
    }

    /// First world forcing every antecedent formula and not forcing the
    /// succedent formula.
    pub fn refutes(&mut self, s: &Sequent) -> Result<Option<usize>, SemanticsError> {
        if s.succ.len() > 1 {
            return Err(SemanticsError::MultiSuccedent);
        }
        let n = self.model.len();
        let mut ok = vec![true; n];
        for f in &s.ante {
            let t = self.table(f, Polarity::Neg)?;
            ok.iter_mut().zip(t).for_each(|(o, x)| *o &= x);
        }
        if let Some(g) = s.succ.first() {
            let t = self.table(g, Polarity::Pos)?;
            ok.iter_mut().zip(t).for_each(|(o, x)| *o &= !x);
        }
        Ok(ok.iter().position(|&b| b))
    }
}

/// Forcing with the standard clauses.
pub fn kripke_forces(m: &KripkeModel, w: usize, f: &Formula) -> Result<bool, SemanticsError> {
    Forcing::new(m, Reading::Standard).forces(w, f, Polarity::Pos)
}

/// First world (in declared order) refuting the single-succedent sequent.
pub fn kripke_refutes(m: &KripkeModel, s: &Sequent) -> Result<Option<usize>, SemanticsError> {
    Forcing::new(m, Reading::Standard).refutes(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, Signature};
    use crate::sequent::parse_sequent;

    fn f(s: &str) -> Formula {
        parse_formula(s, &Signature::standard()).unwrap()
    }

    fn chain() -> KripkeModel {
        KripkeModel::new(
            vec!["w0".into(), "w1".into()],
            vec![(0, 1)],
            vec![BTreeSet::new(), BTreeSet::from(["p".to_string()])],
        )
        .unwrap()
    }

    #[test]
    fn double_negation_countermodel() {
        let m = chain();
        assert!(!kripke_forces(&m, 0, &f("p | p")).unwrap());
        assert!(kripke_forces(&m, 0, &f("(p | p) | (p | p)")).unwrap());
        assert!(!kripke_forces(&m, 0, &f("p")).unwrap());
        let s = parse_sequent("(p | p) | (p | p) => p", &Signature::standard()).unwrap();
        assert_eq!(kripke_refutes(&m, &s).unwrap(), Some(0));
        let s = parse_sequent("p => p", &Signature::standard()).unwrap();
        assert_eq!(kripke_refutes(&m, &s).unwrap(), None);
    }

    #[test]
    fn one_world() {
        let m = KripkeModel::single(BTreeSet::new());
        assert!(kripke_forces(&m, 0, &f("p | p")).unwrap());
        let m = KripkeModel::single(BTreeSet::from(["p".to_string()]));
        let s = parse_sequent("=> p | p", &Signature::standard()).unwrap();
        assert_eq!(kripke_refutes(&m, &s).unwrap(), Some(0));
    }

    #[test]
    fn monotonicity_is_checked() {
        let r = KripkeModel::new(
            vec!["a".into(), "b".into()],
            vec![(0, 1)],
            vec![BTreeSet::from(["p".to_string()]), BTreeSet::new()],
        );
        assert!(matches!(r, Err(SemanticsError::NotMonotone { .. })));
    }

    #[test]
    fn polarized_hp_separates_the_readings() {
        // a root below two incomparable worlds forcing p and q respectively
        let m = KripkeModel::new(
            vec!["r".into(), "a".into(), "b".into()],
            vec![(0, 1), (0, 2)],
            vec![BTreeSet::new(), BTreeSet::from(["p".to_string()]), BTreeSet::from(["q".to_string()])],
        )
        .unwrap();
        let s = parse_sequent("p || q => p || q", &Signature::standard()).unwrap();
        assert_eq!(kripke_refutes(&m, &s).unwrap(), None);
        assert_eq!(Forcing::new(&m, Reading::Polarized).refutes(&s).unwrap(), Some(0));
    }

    #[test]
    fn json_round_trip() {
        let m = chain();
        let back = KripkeModel::from_json(&m.to_json().to_string()).unwrap();
        assert_eq!(m, back);
        assert!(KripkeModel::from_json(r#"{"worlds":["a"],"order":[["a","z"]],"val":{}}"#).is_err());
    }

    #[test]
    fn unknown_connective_is_an_error() {
        let m = chain();
        assert!(matches!(kripke_forces(&m, 0, &f("p ^ q")), Err(SemanticsError::UnknownConnective(_))));
    }
}
