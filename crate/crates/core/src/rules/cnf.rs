//! Truth tables and minimal conjunctive normal forms.

use serde::{Deserialize, Serialize};

use super::RuleError;
use crate::formula::Connective;

/// Largest arity accepted for rule generation.
pub const MAX_ARITY: usize = 6;

/// Boolean function of a connective. Row `i` holds the output for the argument
/// tuple whose binary reading (first argument most significant) is `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthTable {
    pub connective: String,
    pub arity: usize,
    pub rows: Vec<bool>,
}

/// Connective file contents: `{"name":"nand","symbol":"|","arity":2,"table":[1,1,1,0]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConnectiveFile {
    pub name: String,
    pub symbol: String,
    pub arity: usize,
    pub table: Vec<u8>,
}

impl ConnectiveFile {
    pub fn parse(text: &str) -> Result<(Connective, TruthTable), RuleError> {
        let f: ConnectiveFile =
            serde_json::from_str(text).map_err(|e| RuleError::Malformed(e.to_string()))?;
        if f.table.iter().any(|&b| b > 1) {
            return Err(RuleError::Malformed("table entries must be 0 or 1".into()));
        }
        let table = TruthTable::new(&f.name, f.arity, f.table.iter().map(|&b| b == 1).collect())?;
        Ok((Connective::new(f.name, f.symbol, f.arity), table))
    }
}

impl TruthTable {
    pub fn new(connective: &str, arity: usize, rows: Vec<bool>) -> Result<Self, RuleError> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(RuleError::ArityCap(arity));
        }
        if rows.len() != 1 << arity {
            return Err(RuleError::Malformed(format!(
                "table for `{connective}` has {} rows, expected {}",
                rows.len(),
                1usize << arity
            )));
        }
        Ok(TruthTable {
            connective: connective.to_string(),
            arity,
            rows,
        })
    }

    pub fn from_bits(connective: &str, bits: &[u8]) -> Self {
        let arity = bits.len().trailing_zeros() as usize;
        TruthTable::new(connective, arity, bits.iter().map(|&b| b == 1).collect())
            .expect("valid literal table")
    }

    pub fn eval(&self, args: &[bool]) -> bool {
        self.rows[row_index(args)]
    }

    pub fn nand() -> Self {
        Self::from_bits(crate::formula::NAND, &[1, 1, 1, 0])
    }
    pub fn nor() -> Self {
        Self::from_bits(crate::formula::NOR, &[1, 0, 0, 0])
    }
    pub fn xor() -> Self {
        Self::from_bits(crate::formula::XOR, &[0, 1, 1, 0])
    }
    pub fn not() -> Self {
        Self::from_bits(crate::formula::NOT, &[1, 0])
    }
    pub fn and() -> Self {
        Self::from_bits(crate::formula::AND, &[0, 0, 0, 1])
    }
    pub fn or() -> Self {
        Self::from_bits(crate::formula::OR, &[0, 1, 1, 1])
    }
    pub fn imp() -> Self {
        Self::from_bits(crate::formula::IMP, &[1, 1, 0, 1])
    }
}

pub fn row_index(args: &[bool]) -> usize {
    args.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

pub fn row_args(row: usize, arity: usize) -> Vec<bool> {
    (0..arity).map(|i| row >> (arity - 1 - i) & 1 == 1).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    True,
    False,
}

/// A clause is a list of signed 1-based argument indices: `+i` reads
/// "argument i is true", `-i` reads "argument i is false".
pub type Clause = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    pub clauses: Vec<Clause>,
}

impl Cnf {
    pub fn satisfied_by(&self, args: &[bool]) -> bool {
        self.clauses.iter().all(|c| clause_true(c, args))
    }
}

fn clause_true(c: &[i32], args: &[bool]) -> bool {
    c.iter().any(|&l| args[l.unsigned_abs() as usize - 1] == (l > 0))
}

/// Ordering used for the deterministic choice among minimal covers: shorter
/// clauses first, then fewer negative literals, then lexicographic on the
/// negative and positive indices.
fn clause_key(c: &[i32]) -> (usize, usize, Vec<i32>, Vec<i32>) {
    let neg: Vec<i32> = c.iter().filter(|&&l| l < 0).map(|l| -l).collect();
    let pos: Vec<i32> = c.iter().filter(|&&l| l > 0).copied().collect();
    (c.len(), neg.len(), neg, pos)
}

/// Minimal CNF of the table (polarity `True`) or of its complement (`False`).
///
/// The clauses are prime implicates forming a minimum-size cover of the
/// rows where the function is false; ties are broken by [`clause_key`].
pub fn truth_condition_cnf(t: &TruthTable, polarity: Polarity) -> Cnf {
    let n = t.arity;
    let target: Vec<bool> = t
        .rows
        .iter()
        .map(|&b| if polarity == Polarity::True { b } else { !b })
        .collect();
    let rows: Vec<Vec<bool>> = (0..1usize << n).map(|r| row_args(r, n)).collect();
    let is_implicate = |c: &[i32]| {
        rows.iter()
            .zip(&target)
            .all(|(args, &out)| !out || clause_true(c, args))
    };

    let mut primes: Vec<Clause> = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = Vec::new();
        let mut x = code;
        for i in 1..=n as i32 {
            match x % 3 {
                1 => c.push(i),
                2 => c.push(-i),
                _ => {}
            }
            x /= 3;
        }
        if !is_implicate(&c) {
            continue;
        }
        let prime = (0..c.len()).all(|drop| {
            let mut sub = c.clone();
            sub.remove(drop);
            !is_implicate(&sub)
        });
        if prime {
            primes.push(c);
        }
    }
    primes.sort_by_key(|c| clause_key(c));

    // rows that must be excluded, and which primes exclude them
    let false_rows: Vec<usize> = (0..rows.len()).filter(|&r| !target[r]).collect();
    let covers: Vec<Vec<usize>> = primes
        .iter()
        .map(|c| {
            false_rows
                .iter()
                .enumerate()
                .filter(|(_, &r)| !clause_true(c, &rows[r]))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    let chosen = minimum_cover(false_rows.len(), &covers);
    let mut clauses: Vec<Clause> = chosen.into_iter().map(|i| primes[i].clone()).collect();
    clauses.sort_by_key(|c| clause_key(c));
    Cnf { clauses }
}

/// Smallest set of candidates covering `0..universe`; the lexicographically
/// first index list among those of minimum size. Essential candidates are
/// fixed first.
fn minimum_cover(universe: usize, covers: &[Vec<usize>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut covered = vec![false; universe];
    for e in 0..universe {
        let holders: Vec<usize> = (0..covers.len()).filter(|&i| covers[i].contains(&e)).collect();
        if holders.len() == 1 && !chosen.contains(&holders[0]) {
            chosen.push(holders[0]);
        }
    }
    for &i in &chosen {
        for &e in &covers[i] {
            covered[e] = true;
        }
    }
    let rest: Vec<usize> = (0..covers.len()).filter(|i| !chosen.contains(i)).collect();
    for k in 0..=rest.len() {
        if let Some(extra) = first_combination(&rest, k, covers, &covered) {
            chosen.extend(extra);
            chosen.sort_unstable();
            return chosen;
        }
    }
    unreachable!("the prime implicates always cover the false rows")
}

fn first_combination(
    pool: &[usize],
    k: usize,
    covers: &[Vec<usize>],
    covered: &[bool],
) -> Option<Vec<usize>> {
    fn go(
        pool: &[usize],
        start: usize,
        k: usize,
        acc: &mut Vec<usize>,
        covers: &[Vec<usize>],
        covered: &[bool],
    ) -> bool {
        if k == 0 {
            let mut c = covered.to_vec();
            for &i in acc.iter() {
                for &e in &covers[i] {
                    c[e] = true;
                }
            }
            return c.iter().all(|&b| b);
        }
        for j in start..pool.len() {
            if pool.len() - j < k {
                break;
            }
            acc.push(pool[j]);
            if go(pool, j + 1, k - 1, acc, covers, covered) {
                return true;
            }
            acc.pop();
        }
        false
    }
    let mut acc = Vec::new();
    go(pool, 0, k, &mut acc, covers, covered).then_some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnf(t: &TruthTable, p: Polarity) -> Vec<Clause> {
        truth_condition_cnf(t, p).clauses
    }

    #[test]
    fn stroke_conditions() {
        assert_eq!(cnf(&TruthTable::nand(), Polarity::True), vec![vec![-1, -2]]);
        assert_eq!(cnf(&TruthTable::nand(), Polarity::False), vec![vec![1], vec![2]]);
    }

    #[test]
    fn xor_conditions() {
        assert_eq!(
            cnf(&TruthTable::xor(), Polarity::True),
            vec![vec![1, 2], vec![-1, -2]]
        );
        assert_eq!(
            cnf(&TruthTable::xor(), Polarity::False),
            vec![vec![-1, 2], vec![1, -2]]
        );
    }

    #[test]
    fn nor_conditions() {
        assert_eq!(cnf(&TruthTable::nor(), Polarity::True), vec![vec![-1], vec![-2]]);
        assert_eq!(cnf(&TruthTable::nor(), Polarity::False), vec![vec![1, 2]]);
    }

    #[test]
    fn constants() {
        let top = TruthTable::from_bits("top", &[1, 1]);
        assert!(cnf(&top, Polarity::True).is_empty());
        assert_eq!(cnf(&top, Polarity::False), vec![Vec::<i32>::new()]);
    }

    #[test]
    fn table_validation() {
        assert!(TruthTable::new("x", 2, vec![true; 3]).is_err());
        assert!(matches!(
            TruthTable::new("x", 7, vec![true; 128]),
            Err(RuleError::ArityCap(7))
        ));
        let (c, t) =
            ConnectiveFile::parse(r#"{"name":"nand","symbol":"|","arity":2,"table":[1,1,1,0]}"#)
                .unwrap();
        assert_eq!(c.symbol, "|");
        assert_eq!(t, TruthTable::nand());
    }

    #[test]
    fn exhaustive_correctness_up_to_arity_four() {
        for n in 1..=4usize {
            for code in 0..(1u64 << (1 << n)) {
                check_function(n, code);
            }
        }
    }

    fn check_function(n: usize, code: u64) {
        let rows: Vec<bool> = (0..1 << n).map(|r| code >> r & 1 == 1).collect();
        let t = TruthTable::new("f", n, rows.clone()).unwrap();
        let tc = truth_condition_cnf(&t, Polarity::True);
        let fc = truth_condition_cnf(&t, Polarity::False);
        for r in 0..1 << n {
            let args = row_args(r, n);
            assert_eq!(tc.satisfied_by(&args), rows[r], "n={n} code={code} row={r}");
            assert_eq!(fc.satisfied_by(&args), !rows[r], "n={n} code={code} row={r}");
        }
        for c in tc.clauses.iter().chain(&fc.clauses) {
            for l in c {
                assert!(!c.contains(&-l));
            }
        }
    }

    #[test]
    fn parity_of_six_is_fast_and_exact() {
        let rows: Vec<bool> = (0..64u32).map(|r| r.count_ones() % 2 == 1).collect();
        let t = TruthTable::new("par", 6, rows).unwrap();
        assert_eq!(truth_condition_cnf(&t, Polarity::True).clauses.len(), 32);
    }
}
