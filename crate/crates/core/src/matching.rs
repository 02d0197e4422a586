//! Matching rule schemas against concrete sequents or conclusion lists.
//!
//! A match problem is a list of groups. Each group pairs explicit schemas with
//! a multiset of formulas; the schemas are matched injectively to formula
//! occurrences and the remainder must equal the group's context, shared by
//! every group naming the same context id. A group without context must have
//! an empty remainder.

use crate::formula::{Binding, Formula, Schema};

pub struct Group<'a> {
    pub what: &'a str,
    pub schemas: &'a [Schema],
    pub formulas: &'a [Formula],
    pub ctx: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub binding: Binding,
}

/// Borrowed binding, used as a stack so that failed branches roll back by
/// truncation.
type Stack<'a> = Vec<(&'a str, &'a Formula)>;

fn lookup<'a>(b: &Stack<'a>, m: &str) -> Option<&'a Formula> {
    b.iter().rev().find(|(k, _)| *k == m).map(|(_, f)| *f)
}

fn match_ref<'a>(s: &'a Schema, f: &'a Formula, b: &mut Stack<'a>) -> bool {
    match (s, f) {
        (Schema::Meta(m), _) => match lookup(b, m) {
            Some(bound) => bound == f,
            None => {
                b.push((m, f));
                true
            }
        },
        (Schema::Var(x), Formula::Var(y)) => x == y,
        (Schema::Falsum, Formula::Falsum) => true,
        (Schema::Compound(c, sargs), Formula::Compound(d, fargs)) => {
            c == d && sargs.len() == fargs.len() && sargs.iter().zip(fargs).all(|(s, f)| match_ref(s, f, b))
        }
        _ => false,
    }
}

fn same_refs(a: &[&Formula], b: &[&Formula]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    x.sort();
    y.sort();
    x == y
}

struct Search<'a, 'b> {
    groups: &'b [Group<'a>],
    first_error: Option<String>,
    binding: Stack<'a>,
    contexts: Vec<Option<Vec<&'a Formula>>>,
}

impl<'a> Search<'a, '_> {
    fn fail(&mut self, msg: impl FnOnce() -> String) {
        if self.first_error.is_none() {
            self.first_error = Some(msg());
        }
    }

    fn group(&mut self, gi: usize) -> bool {
        if gi == self.groups.len() {
            return true;
        }
        let g = &self.groups[gi];
        if g.formulas.len() < g.schemas.len() {
            let what = g.what;
            self.fail(|| format!("{what}: expected at least {} formulas, found {}", g.schemas.len(), g.formulas.len()));
            return false;
        }
        let mut used = vec![false; g.formulas.len()];
        self.assign(gi, 0, &mut used)
    }

    fn assign(&mut self, gi: usize, si: usize, used: &mut Vec<bool>) -> bool {
        let g: &Group<'a> = &self.groups[gi];
        if si == g.schemas.len() {
            let rest: Vec<&'a Formula> = g.formulas.iter().zip(used.iter()).filter(|(_, u)| !**u).map(|(f, _)| f).collect();
            return match g.ctx {
                None if rest.is_empty() => self.group(gi + 1),
                None => {
                    let what = g.what;
                    self.fail(|| format!("{what}: {} unexpected extra formula(s)", rest.len()));
                    false
                }
                Some(c) => {
                    if self.contexts.len() <= c {
                        self.contexts.resize(c + 1, None);
                    }
                    match &self.contexts[c] {
                        Some(ctx) if same_refs(ctx, &rest) => self.group(gi + 1),
                        Some(_) => {
                            let what = g.what;
                            self.fail(|| format!("{what}: context differs from the other sequents"));
                            false
                        }
                        None => {
                            self.contexts[c] = Some(rest);
                            if self.group(gi + 1) {
                                return true;
                            }
                            self.contexts[c] = None;
                            false
                        }
                    }
                }
            };
        }
        let schema = &g.schemas[si];
        let mut tried_any = false;
        for fi in 0..g.formulas.len() {
            if used[fi] {
                continue;
            }
            // identical occurrences give identical branches
            if (0..fi).any(|k| !used[k] && g.formulas[k] == g.formulas[fi]) {
                continue;
            }
            let mark = self.binding.len();
            if !match_ref(schema, &g.formulas[fi], &mut self.binding) {
                self.binding.truncate(mark);
                continue;
            }
            tried_any = true;
            used[fi] = true;
            if self.assign(gi, si + 1, used) {
                return true;
            }
            used[fi] = false;
            self.binding.truncate(mark);
        }
        if !tried_any {
            let what = g.what;
            self.fail(|| format!("{what}: no formula matches schema #{}", si + 1));
        }
        false
    }
}

/// Solves a match problem, starting from `binding`. On failure returns the
/// first mismatch met by the search.
pub fn match_groups(groups: &[Group<'_>], binding: Binding) -> Result<Solution, String> {
    let mut s = Search { groups, first_error: None, binding: binding.iter().map(|(k, f)| (k.as_str(), f)).collect(), contexts: Vec::new() };
    if !s.group(0) {
        return Err(s.first_error.unwrap_or_else(|| "no match".into()));
    }
    let mut out = binding.clone();
    for (k, f) in &s.binding {
        out.entry(k.to_string()).or_insert_with(|| (*f).clone());
    }
    Ok(Solution { binding: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, parse_schema, Signature};

    fn f(s: &str) -> Formula {
        parse_formula(s, &Signature::standard()).unwrap()
    }
    fn s(t: &str) -> Schema {
        parse_schema(t, &Signature::standard()).unwrap()
    }

    #[test]
    fn shared_context_is_enforced() {
        let concl = [f("p | q"), f("r")];
        let prem = [f("r")];
        let pat = [s("?A | ?B")];
        let groups = [
            Group { what: "conclusion", schemas: &pat, formulas: &concl, ctx: Some(0) },
            Group { what: "premise", schemas: &[], formulas: &prem, ctx: Some(0) },
        ];
        let sol = match_groups(&groups, Binding::new()).unwrap();
        assert_eq!(sol.binding["A"], f("p"));
        let bad = [f("s")];
        let groups = [
            Group { what: "conclusion", schemas: &pat, formulas: &concl, ctx: Some(0) },
            Group { what: "premise", schemas: &[], formulas: &bad, ctx: Some(0) },
        ];
        assert!(match_groups(&groups, Binding::new()).unwrap_err().contains("context"));
    }

    #[test]
    fn backtracks_over_occurrences() {
        // the first candidate for ?A | ?B binds the wrong pair
        let concl = [f("q | q"), f("p | p")];
        let prem = [f("q | q"), f("p")];
        let pat = [s("?A | ?A")];
        let aux = [s("?A")];
        let groups = [
            Group { what: "conclusion", schemas: &pat, formulas: &concl, ctx: Some(0) },
            Group { what: "premise", schemas: &aux, formulas: &prem, ctx: Some(0) },
        ];
        let sol = match_groups(&groups, Binding::new()).unwrap();
        assert_eq!(sol.binding["A"], f("p"));
    }
}
