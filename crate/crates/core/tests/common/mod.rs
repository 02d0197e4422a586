//! Shared helpers for the integration suites: independent oracles, seeded
//! generators and the golden rule-display reader.
#![allow(dead_code)]

use std::collections::BTreeSet;

use intelim::formula::{parse_formula, parse_schema, split_top_level, Formula, Schema, Signature};
use intelim::rules::{NdKind, NdPremise, NdRuleSchema, RuleSchema, SequentSchema, Side};
use intelim::semantics::{KripkeModel, Reading};
use intelim::sequent::{parse_sequent, Sequent};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn sig() -> Signature {
    Signature::standard()
}

pub fn f(s: &str) -> Formula {
    parse_formula(s, &sig()).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn seq(s: &str) -> Sequent {
    parse_sequent(s, &sig()).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ------------------------------------------------------------- oracles

/// Classical truth value, written out per connective name.
pub fn truth(f: &Formula, val: &dyn Fn(&str) -> bool) -> bool {
    match f {
        Formula::Var(v) => val(v),
        Formula::Falsum => false,
        Formula::Compound(c, args) => {
            let a: Vec<bool> = args.iter().map(|x| truth(x, val)).collect();
            match (c.as_str(), a.as_slice()) {
                ("nand" | "hp", [x, y]) => !(*x && *y),
                ("nor", [x, y]) => !(*x || *y),
                ("xor", [x, y]) => x != y,
                ("not", [x]) => !x,
                ("and", [x, y]) => *x && *y,
                ("or", [x, y]) => *x || *y,
                ("imp", [x, y]) => !*x || *y,
                _ => panic!("oracle has no table for {c}/{}", a.len()),
            }
        }
    }
}

pub fn vars_of(fs: &[&Formula]) -> Vec<String> {
    fn walk(f: &Formula, out: &mut BTreeSet<String>) {
        match f {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Falsum => {}
            Formula::Compound(_, a) => a.iter().for_each(|x| walk(x, out)),
        }
    }
    let mut out = BTreeSet::new();
    fs.iter().for_each(|f| walk(f, &mut out));
    out.into_iter().collect()
}

/// Every valuation making all of `ante` true makes some of `succ` true.
pub fn classically_valid(ante: &[Formula], succ: &[Formula]) -> bool {
    let all: Vec<&Formula> = ante.iter().chain(succ).collect();
    let vars = vars_of(&all);
    (0u32..1 << vars.len()).all(|bits| {
        let val = |v: &str| bits >> vars.iter().position(|x| x == v).unwrap() & 1 == 1;
        !ante.iter().all(|a| truth(a, &val)) || succ.iter().any(|s| truth(s, &val))
    })
}

pub fn valid_sequent(s: &Sequent) -> bool {
    classically_valid(&s.ante, &s.succ)
}

/// Three-valued stroke on `0 < 1 < 2` (2 designated): the value is 2 when
/// one argument is 0, and 0 otherwise.
pub fn three(f: &Formula, val: &dyn Fn(&str) -> u8) -> u8 {
    match f {
        Formula::Var(v) => val(v),
        Formula::Falsum => 0,
        Formula::Compound(c, a) if c == "nand" && a.len() == 2 => {
            if three(&a[0], val) == 0 || three(&a[1], val) == 0 {
                2
            } else {
                0
            }
        }
        Formula::Compound(c, _) => panic!("no three-valued table for {c}"),
    }
}

/// `min` of the antecedent at most the succedent value, under every
/// valuation into `{0, 1, 2}`; an empty succedent counts as 0.
pub fn three_valued_valid(s: &Sequent) -> bool {
    let all: Vec<&Formula> = s.ante.iter().chain(&s.succ).collect();
    let vars = vars_of(&all);
    (0..3u32.pow(vars.len() as u32)).all(|code| {
        let val = |v: &str| {
            let i = vars.iter().position(|x| x == v).unwrap();
            (code / 3u32.pow(i as u32) % 3) as u8
        };
        let lo = s.ante.iter().map(|a| three(a, &val)).min().unwrap_or(2);
        let hi = s.succ.first().map(|x| three(x, &val)).unwrap_or(0);
        lo <= hi
    })
}

// --------------------------------------------------------------- kripke

/// Everything the forcing relation knows about.
pub const KRIPKE: &[(&str, usize)] =
    &[("nand", 2), ("hp", 2), ("nor", 2), ("not", 1), ("and", 2), ("or", 2), ("imp", 2)];

/// Random rooted-free DAG on `0..n` with edges `i < j` and a valuation made
/// monotone by pushing atoms up the edges. Returns the model and its
/// reflexive-transitive order.
pub fn random_model(r: &mut ChaCha8Rng) -> (KripkeModel, Vec<Vec<bool>>) {
    let n = r.gen_range(1..=5);
    let mut edges = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if r.gen_bool(0.4) {
                edges.push((i, j));
            }
        }
    }
    let mut val: Vec<BTreeSet<String>> =
        (0..n).map(|_| VARS[..3].iter().filter(|_| r.gen_bool(0.4)).map(|v| v.to_string()).collect()).collect();
    let mut le = vec![vec![false; n]; n];
    for j in 0..n {
        le[j][j] = true;
        for &(i, _) in edges.iter().filter(|e| e.1 == j) {
            let up = val[i].clone();
            val[j].extend(up);
            for k in 0..n {
                if le[k][i] {
                    le[k][j] = true;
                }
            }
        }
    }
    let names = (0..n).map(|i| format!("w{i}")).collect();
    (KripkeModel::new(names, edges, val).unwrap(), le)
}

/// Forcing written from the clauses: negations and strokes quantify over
/// all later worlds; `hp` is read disjunctively unless the reading is
/// polarized and the occurrence negative.
pub fn forced(m: &KripkeModel, le: &[Vec<bool>], w: usize, f: &Formula, reading: Reading, pos: bool) -> bool {
    let later = |w: usize| (0..m.len()).filter(move |&u| le[w][u]);
    match f {
        Formula::Var(x) => m.val[w].contains(x),
        Formula::Falsum => false,
        Formula::Compound(c, a) => match c.as_str() {
            "not" => later(w).all(|u| !forced(m, le, u, &a[0], reading, !pos)),
            "and" => forced(m, le, w, &a[0], reading, pos) && forced(m, le, w, &a[1], reading, pos),
            "or" => forced(m, le, w, &a[0], reading, pos) || forced(m, le, w, &a[1], reading, pos),
            "imp" => later(w).all(|u| !forced(m, le, u, &a[0], reading, !pos) || forced(m, le, u, &a[1], reading, pos)),
            "nor" => later(w).all(|u| !forced(m, le, u, &a[0], reading, !pos) && !forced(m, le, u, &a[1], reading, !pos)),
            "hp" if reading == Reading::Standard || pos => {
                later(w).all(|u| !forced(m, le, u, &a[0], reading, !pos))
                    || later(w).all(|u| !forced(m, le, u, &a[1], reading, !pos))
            }
            "nand" | "hp" => {
                later(w).all(|u| !(forced(m, le, u, &a[0], reading, !pos) && forced(m, le, u, &a[1], reading, !pos)))
            }
            _ => panic!("no clause for {c}"),
        },
    }
}

// ---------------------------------------------------------- generators

pub const VARS: [&str; 4] = ["p", "q", "r", "s"];

/// Random formula with exactly `size` connectives from `conns` (name,
/// arity) over the first `nvars` variables.
pub fn random_formula(r: &mut ChaCha8Rng, size: usize, nvars: usize, conns: &[(&str, usize)]) -> Formula {
    if size == 0 {
        return Formula::var(VARS[r.gen_range(0..nvars)]);
    }
    let (c, arity) = *conns.choose(r).unwrap();
    let mut rest = size - 1;
    let mut args = Vec::new();
    for i in 0..arity {
        let take = if i + 1 == arity { rest } else { r.gen_range(0..=rest) };
        rest -= take;
        args.push(random_formula(r, take, nvars, conns));
    }
    Formula::compound(c, args)
}

pub const STROKE: &[(&str, usize)] = &[("nand", 2)];
pub const CORE: &[(&str, usize)] = &[("not", 1), ("and", 2), ("or", 2), ("imp", 2)];

/// Random `Γ => A` with up to two antecedent formulas and total size at
/// most `max_size`.
pub fn random_sequent(r: &mut ChaCha8Rng, max_size: usize, nvars: usize, conns: &[(&str, usize)], succ_optional: bool) -> Sequent {
    let n_ante = r.gen_range(0..=2);
    let n_succ = if succ_optional { r.gen_range(0..=1) } else { 1 };
    let parts = n_ante + n_succ;
    let mut budget = r.gen_range(0..=max_size);
    let mut fs = Vec::new();
    for i in 0..parts {
        let take = if i + 1 == parts { budget } else { r.gen_range(0..=budget) };
        budget -= take;
        fs.push(random_formula(r, take, nvars, conns));
    }
    let succ = fs.split_off(n_ante);
    Sequent::new(fs, succ)
}

/// All formulas over `p`, `q` with exactly `n` strokes.
pub fn stroke_formulas(n: usize, memo: &mut Vec<Vec<Formula>>) -> Vec<Formula> {
    while memo.len() <= n {
        let k = memo.len();
        let level = if k == 0 {
            vec![Formula::var("p"), Formula::var("q")]
        } else {
            let mut out = Vec::new();
            for i in 0..k {
                let (left, right) = (&memo[i], &memo[k - 1 - i]);
                for a in left {
                    for b in right {
                        out.push(Formula::nand(a.clone(), b.clone()));
                    }
                }
            }
            out
        };
        memo.push(level);
    }
    memo[n].clone()
}

// -------------------------------------------------------------- goldens

pub struct Golden {
    pub section: String,
    pub name: String,
    pub entry: GoldenEntry,
}

pub enum GoldenEntry {
    Sequent(RuleSchema),
    Nd(NdRuleSchema),
}

fn items(text: &str) -> Vec<String> {
    split_top_level(text).into_iter().map(|(_, s)| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn schema(s: &str) -> Schema {
    parse_schema(s, &sig()).unwrap_or_else(|e| panic!("golden schema `{s}`: {e}"))
}

fn sequent_schema(text: &str) -> SequentSchema {
    let (l, r) = text.split_once("=>").unwrap_or_else(|| panic!("golden sequent `{text}` lacks =>"));
    let (mut gamma, mut delta) = (false, false);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for it in items(l) {
        if it == "Γ" {
            gamma = true;
        } else {
            left.push(schema(&it));
        }
    }
    for it in items(r) {
        if it == "Δ" {
            delta = true;
        } else {
            right.push(schema(&it));
        }
    }
    SequentSchema::new(left, right, gamma, delta)
}

/// `[discharges] conclusion` with `Δ` marking side conclusions.
fn nd_formulas(text: &str) -> (Vec<Schema>, bool, Vec<Schema>) {
    let text = text.trim();
    let (discharge, rest) = match text.strip_prefix('[') {
        Some(t) => {
            let (d, rest) = t.split_once(']').expect("closing bracket");
            (items(d).iter().map(|s| schema(s)).collect(), rest)
        }
        None => (Vec::new(), text),
    };
    let mut delta = false;
    let mut concl = Vec::new();
    for it in items(rest) {
        if it == "Δ" {
            delta = true;
        } else {
            concl.push(schema(&it));
        }
    }
    (concl, delta, discharge)
}

/// Reads the golden display file. Lines are
/// `seq <name> <side> : <conclusion> <= <premise> ; ...` or
/// `nd <name> <kind> : <conclusion> <= <premise> ; ...`, grouped under
/// `[section]` headers.
pub fn read_goldens(text: &str) -> Vec<Golden> {
    let mut out = Vec::new();
    let mut section = String::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        if let Some(s) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = s.to_string();
            continue;
        }
        let (head, body) = line.split_once(" : ").unwrap_or_else(|| panic!("golden line `{line}`"));
        let head: Vec<&str> = head.split_whitespace().collect();
        let (concl, prems) = match body.split_once("<=") {
            Some((c, p)) => (c, p.split(';').map(str::trim).filter(|p| !p.is_empty()).collect::<Vec<_>>()),
            None => (body, Vec::new()),
        };
        let entry = match head.as_slice() {
            ["seq", name, side] => {
                let side = Side::parse(side).expect("side");
                let conclusion = sequent_schema(concl);
                let principal = match side {
                    Side::Left => Some(conclusion.left[0].clone()),
                    Side::Right => Some(conclusion.right[0].clone()),
                    _ => None,
                };
                GoldenEntry::Sequent(RuleSchema {
                    name: name.to_string(),
                    side,
                    principal,
                    conclusion,
                    premises: prems.iter().map(|p| sequent_schema(p)).collect(),
                    tags: BTreeSet::new(),
                    origin: None,
                })
            }
            ["nd", name, kind] => {
                let (conclusion, delta, _) = nd_formulas(concl);
                GoldenEntry::Nd(NdRuleSchema {
                    name: name.to_string(),
                    kind: NdKind::parse(kind).expect("kind"),
                    principal: None,
                    premises: prems
                        .iter()
                        .map(|p| {
                            let (conclusion, delta, discharge) = nd_formulas(p);
                            NdPremise { conclusion, delta, discharge }
                        })
                        .collect(),
                    conclusion,
                    delta,
                    from_sequent: None,
                })
            }
            _ => panic!("golden head `{line}`"),
        };
        out.push(Golden { section: section.clone(), name: head[1].to_string(), entry });
    }
    out
}

pub const GOLDENS: &str = include_str!("../goldens/rules.txt");

/// The rules the library produces for a golden section.
pub fn section_rules(section: &str) -> (Vec<RuleSchema>, Vec<NdRuleSchema>) {
    use intelim::formula::{Connective, NAND};
    use intelim::rules::{
        builtin_ruleset, derive_nd_rules, generate_sequent_rules, ruleset_from_tables, split_multi_right_premises, Regime,
        TruthTable,
    };
    let table = |name: &str| match name {
        "nand" => (TruthTable::nand(), "|"),
        "nor" => (TruthTable::nor(), "!"),
        "xor" => (TruthTable::xor(), "^"),
        _ => panic!("no table {name}"),
    };
    let single = |name: &str| {
        let (t, sym) = table(name);
        let sig = Signature::new(vec![Connective::new(name, sym, 2)]).unwrap();
        derive_nd_rules(&ruleset_from_tables(name, &sig, &[t], Regime::Single).unwrap())
    };
    let words: Vec<&str> = section.split_whitespace().collect();
    match words.as_slice() {
        [c, "multi"] => {
            let (t, sym) = table(c);
            let (r, l) = generate_sequent_rules(&t, sym);
            (vec![r, l], vec![])
        }
        [c, "split"] => {
            let (t, sym) = table(c);
            let (r, l) = generate_sequent_rules(&t, sym);
            let mut v = split_multi_right_premises(&r);
            v.extend(split_multi_right_premises(&l));
            v.retain(|x| x.name != r.name && x.name != l.name);
            (v, vec![])
        }
        [c, "single"] => (single(c).sequent_rules, vec![]),
        [c, "nd"] => (vec![], single(c).nd_rules),
        ["LK"] => {
            let mut v = Vec::new();
            for t in [TruthTable::not(), TruthTable::and(), TruthTable::or(), TruthTable::imp()] {
                let sym = sig().by_name(&t.connective).unwrap().symbol.clone();
                let (r, l) = generate_sequent_rules(&t, &sym);
                v.push(r);
                v.push(l);
            }
            (v, vec![])
        }
        [name] => {
            let rs = builtin_ruleset(name).unwrap();
            assert!(rs.signature.contains(NAND));
            (vec![], rs.nd_rules)
        }
        _ => panic!("section {section}"),
    }
}

/// Compares every golden display with the generated rule of the same name
/// and checks that the section has no other logical rules. Returns the
/// mismatches.
pub fn golden_mismatches(filter: &dyn Fn(&str) -> bool) -> Vec<String> {
    let goldens = read_goldens(GOLDENS);
    let mut bad = Vec::new();
    let mut sections: Vec<&str> = goldens.iter().map(|g| g.section.as_str()).collect();
    sections.dedup();
    for section in sections.into_iter().filter(|s| filter(s)) {
        let (seq_rules, nd_rules) = section_rules(section);
        let mine: Vec<&Golden> = goldens.iter().filter(|g| g.section == section).collect();
        for g in &mine {
            let ok = match &g.entry {
                GoldenEntry::Sequent(r) => seq_rules.iter().any(|x| x.name == g.name && x.same_shape(r)),
                GoldenEntry::Nd(r) => nd_rules.iter().any(|x| x.name == g.name && x.same_shape(r)),
            };
            if !ok {
                bad.push(format!("[{section}] {}", g.name));
            }
        }
        let logical = seq_rules
            .iter()
            .filter(|r| matches!(r.side, Side::Left | Side::Right | Side::Classical))
            .map(|r| r.name.clone())
            .chain(nd_rules.iter().filter(|r| r.kind != NdKind::Structural).map(|r| r.name.clone()));
        for name in logical {
            if !mine.iter().any(|g| g.name == name) {
                bad.push(format!("[{section}] extra rule {name}"));
            }
        }
    }
    bad
}
