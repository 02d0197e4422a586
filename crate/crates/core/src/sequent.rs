//! Sequents `Γ => Δ` over multisets of formulas.

use std::collections::BTreeMap;

use crate::formula::{parse_formula, render_formula, split_top_level, Formula, ParseError, ParseErrorKind, Signature};

/// A sequent. Both sides are multisets: equality ignores order.
#[derive(Clone, Debug, Default, Eq)]
pub struct Sequent {
    pub ante: Vec<Formula>,
    pub succ: Vec<Formula>,
}

impl PartialEq for Sequent {
    fn eq(&self, other: &Self) -> bool {
        same_multiset(&self.ante, &other.ante) && same_multiset(&self.succ, &other.succ)
    }
}

impl Sequent {
    pub fn new(ante: Vec<Formula>, succ: Vec<Formula>) -> Self {
        Sequent { ante, succ }
    }

    /// Sequent with both sides sorted, used as a canonical key.
    pub fn sorted(&self) -> Sequent {
        let mut ante = self.ante.clone();
        let mut succ = self.succ.clone();
        ante.sort();
        succ.sort();
        Sequent { ante, succ }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.ante.iter().chain(self.succ.iter())
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = std::collections::BTreeSet::new();
        for f in self.formulas() {
            f.collect_vars(&mut out);
        }
        out.into_iter().collect()
    }

    pub fn size(&self) -> usize {
        self.formulas().map(Formula::size).sum()
    }
}

pub fn same_multiset(a: &[Formula], b: &[Formula]) -> bool {
    a.len() == b.len() && counts(a) == counts(b)
}

pub fn counts(a: &[Formula]) -> BTreeMap<&Formula, usize> {
    let mut m = BTreeMap::new();
    for f in a {
        *m.entry(f).or_insert(0) += 1;
    }
    m
}

/// `a` is a sub-multiset of `b`.
pub fn sub_multiset(a: &[Formula], b: &[Formula]) -> bool {
    let cb = counts(b);
    counts(a)
        .into_iter()
        .all(|(f, n)| cb.get(f).copied().unwrap_or(0) >= n)
}

/// Removes one occurrence of `f`; returns false when absent.
pub fn remove_one(v: &mut Vec<Formula>, f: &Formula) -> bool {
    match v.iter().position(|g| g == f) {
        Some(i) => {
            v.remove(i);
            true
        }
        None => false,
    }
}

fn parse_side(text: &str, offset: usize, sig: &Signature) -> Result<Vec<Formula>, ParseError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(text)
        .into_iter()
        .map(|(pos, piece)| {
            if piece.trim().is_empty() {
                return Err(ParseError {
                    pos: offset + pos,
                    kind: ParseErrorKind::Syntax("empty formula in list".into()),
                });
            }
            parse_formula(piece, sig).map_err(|mut e| {
                e.pos += offset + pos;
                e
            })
        })
        .collect()
}

/// Parses `Γ => Δ` with comma-separated formula lists; either side may be empty.
pub fn parse_sequent(text: &str, sig: &Signature) -> Result<Sequent, ParseError> {
    let arrows: Vec<usize> = text.match_indices("=>").map(|(i, _)| i).collect();
    if arrows.len() != 1 {
        return Err(ParseError {
            pos: arrows.get(1).copied().unwrap_or(0),
            kind: ParseErrorKind::Syntax("a sequent needs exactly one `=>`".into()),
        });
    }
    let at = arrows[0];
    Ok(Sequent {
        ante: parse_side(&text[..at], 0, sig)?,
        succ: parse_side(&text[at + 2..], at + 2, sig)?,
    })
}

pub fn render_list(fs: &[Formula], sig: &Signature) -> String {
    fs.iter()
        .map(|f| render_formula(f, sig))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn render_sequent(s: &Sequent, sig: &Signature) -> String {
    let ante = render_list(&s.ante, sig);
    let succ = render_list(&s.succ, sig);
    match (ante.is_empty(), succ.is_empty()) {
        (true, true) => "=>".to_string(),
        (true, false) => format!("=> {succ}"),
        (false, true) => format!("{ante} =>"),
        (false, false) => format!("{ante} => {succ}"),
    }
}
