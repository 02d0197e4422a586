//! Soundness of the sequent and natural-deduction kernels against the
//! truth-table oracles.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use intelim::formula::Formula;
use intelim::kernel::nd::{check_derivation, graft, open_formulas, NdDerivation};
use intelim::kernel::sequent::{check_proof, SequentProof};
use intelim::prover::{decide, ProofResult, SearchBudget};
use intelim::rules::{builtin_ruleset, RuleSet};
use intelim::sequent::Sequent;
use intelim::translate::sequent_to_nd;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn budget() -> SearchBudget {
    SearchBudget::new(200_000)
}

fn proof_of(s: &Sequent, rs: &RuleSet) -> Option<SequentProof> {
    match decide(s, rs, budget()) {
        Ok(ProofResult::Provable(p)) => Some(p),
        _ => None,
    }
}

/// Searches seeds until the prover finds a proof.
fn some_proof(r: &mut ChaCha8Rng, rs: &RuleSet, size: usize) -> (Sequent, SequentProof) {
    loop {
        let s = random_sequent(r, size, 3, STROKE, false);
        if let Some(p) = proof_of(&s, rs) {
            return (s, p);
        }
    }
}

fn nodes(p: &SequentProof, out: &mut Vec<Vec<usize>>, path: &mut Vec<usize>) {
    out.push(path.clone());
    for (i, c) in p.children.iter().enumerate() {
        path.push(i);
        nodes(c, out, path);
        path.pop();
    }
}

fn node_mut<'a>(p: &'a mut SequentProof, path: &[usize]) -> &'a mut SequentProof {
    path.iter().fold(p, |n, &i| &mut n.children[i])
}

fn all_sequents(p: &SequentProof, out: &mut Vec<Sequent>) {
    out.push(p.conclusion.clone());
    p.children.iter().for_each(|c| all_sequents(c, out));
}

/// Random local edit: add, drop or replace a formula, or rename the rule.
fn mutate(r: &mut ChaCha8Rng, p: &mut SequentProof, rs: &RuleSet) {
    let mut paths = Vec::new();
    nodes(p, &mut paths, &mut Vec::new());
    let path = paths[r.gen_range(0..paths.len())].clone();
    let n = node_mut(p, &path);
    let k = r.gen_range(0..3);
    let fresh = random_formula(r, k, 3, STROKE);
    let side = if r.gen_bool(0.5) { &mut n.conclusion.ante } else { &mut n.conclusion.succ };
    match r.gen_range(0..4) {
        0 => side.push(fresh),
        1 if !side.is_empty() => {
            let i = r.gen_range(0..side.len());
            side.remove(i);
        }
        2 if !side.is_empty() => {
            let i = r.gen_range(0..side.len());
            side[i] = fresh;
        }
        _ => n.rule = rs.sequent_rules[r.gen_range(0..rs.sequent_rules.len())].name.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn checked_multi_proofs_are_classically_valid(seed in any::<u64>()) {
        let ls = builtin_ruleset("LS").unwrap();
        let mut r = rng(seed);
        let (_, p) = some_proof(&mut r, &ls, 6);
        for _ in 0..8 {
            let mut q = p.clone();
            for _ in 0..r.gen_range(1..3) {
                mutate(&mut r, &mut q, &ls);
            }
            if check_proof(&q, &ls).is_ok() {
                let mut all = Vec::new();
                all_sequents(&q, &mut all);
                for s in all {
                    prop_assert!(valid_sequent(&s), "{s:?}");
                }
            }
        }
    }

    #[test]
    fn checked_single_proofs_are_three_valued_valid(seed in any::<u64>()) {
        let single = builtin_ruleset("LS-single").unwrap();
        let mut r = rng(seed);
        let (_, p) = some_proof(&mut r, &single, 6);
        for _ in 0..8 {
            let mut q = p.clone();
            mutate(&mut r, &mut q, &single);
            if check_proof(&q, &single).is_ok() {
                let mut all = Vec::new();
                all_sequents(&q, &mut all);
                for s in all {
                    prop_assert!(three_valued_valid(&s), "{s:?}");
                }
            }
        }
    }

    #[test]
    fn left_weakening_at_the_root(seed in any::<u64>()) {
        for name in ["LS", "LS-single"] {
            let rs = builtin_ruleset(name).unwrap();
            let mut r = rng(seed);
            let (s, p) = some_proof(&mut r, &rs, 5);
            let mut ante = s.ante.clone();
            ante.push(Formula::var("z"));
            let w = SequentProof::new("WL", Sequent::new(ante, s.succ.clone()), vec![p]);
            prop_assert!(check_proof(&w, &rs).is_ok());
        }
    }

    #[test]
    fn translated_derivations_are_sound(seed in any::<u64>()) {
        let single = builtin_ruleset("LS-single").unwrap();
        let ns = builtin_ruleset("NS").unwrap();
        let mut r = rng(seed);
        let (s, p) = some_proof(&mut r, &single, 6);
        let d = sequent_to_nd(&p, &single).unwrap();
        prop_assert!(check_derivation(&d, &ns).is_ok());
        let open = open_formulas(&d);
        let ante: BTreeSet<&Formula> = s.ante.iter().collect();
        prop_assert!(open.iter().all(|f| ante.contains(f)));
        let concl = d.formula();
        prop_assert!(classically_valid(&open, std::slice::from_ref(&concl)));
        prop_assert!(three_valued_valid(&Sequent::new(open, vec![concl])));
    }

    #[test]
    fn grafting_preserves_correctness(seed in any::<u64>()) {
        let single = builtin_ruleset("LS-single").unwrap();
        let ns = builtin_ruleset("NS").unwrap();
        let mut r = rng(seed);
        let p = loop {
            let (s, p) = some_proof(&mut r, &single, 6);
            if !s.ante.is_empty() {
                break p;
            }
        };
        let target = sequent_to_nd(&p, &single).unwrap();
        let open = open_formulas(&target);
        prop_assume!(!open.is_empty());
        let x = open[r.gen_range(0..open.len())].clone();
        // a source concluding x: either x read off its own axiom proof, or
        // falsum introduced from a clash w, w|w
        let source = if r.gen_bool(0.5) {
            let ax = proof_of(&Sequent::new(vec![x.clone()], vec![x.clone()]), &single).unwrap();
            sequent_to_nd(&ax, &single).unwrap()
        } else {
            let k = r.gen_range(0..3);
            let w = random_formula(&mut r, k, 3, STROKE);
            let base = target.max_label() + 10;
            let clash = NdDerivation::infer(
                "|E",
                Formula::Falsum,
                vec![
                    NdDerivation::assume(Formula::nand(w.clone(), w.clone()), base),
                    NdDerivation::assume(w.clone(), base + 1),
                    NdDerivation::assume(w, base + 2),
                ],
            );
            NdDerivation::infer("_|_I", x.clone(), vec![clash])
        };
        prop_assert!(check_derivation(&source, &ns).is_ok());
        let g = graft(&target, &x, &source);
        prop_assert!(check_derivation(&g, &ns).is_ok(), "{:?}", check_derivation(&g, &ns));
        prop_assert_eq!(g.conclusion(), target.conclusion());
        let allowed: BTreeSet<Formula> =
            open.iter().filter(|f| **f != x).chain(open_formulas(&source).iter()).cloned().collect();
        prop_assert!(open_formulas(&g).iter().all(|f| allowed.contains(f)));
    }

    #[test]
    fn relabelling_by_an_injection(seed in any::<u64>(), k in 1u32..5, c in 0u32..50) {
        let single = builtin_ruleset("LS-single").unwrap();
        let ns = builtin_ruleset("NS").unwrap();
        let mut r = rng(seed);
        let (_, p) = some_proof(&mut r, &single, 6);
        let d = sequent_to_nd(&p, &single).unwrap();
        let map: BTreeMap<_, _> = d.labels().keys().map(|&l| (l, l * k + c)).collect();
        let e = d.relabel(&map);
        prop_assert_eq!(check_derivation(&e, &ns).is_ok(), check_derivation(&d, &ns).is_ok());
        prop_assert_eq!(e.conclusion(), d.conclusion());
        let mut a = open_formulas(&d);
        let mut b = open_formulas(&e);
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        let inverse: BTreeMap<_, _> = map.iter().map(|(&x, &y)| (y, x)).collect();
        prop_assert_eq!(e.relabel(&inverse), d);
    }
}

#[test]
fn wrong_relabelling_is_caught() {
    // merging two labels with different formulas must not check
    let single = builtin_ruleset("LS-single").unwrap();
    let ns = builtin_ruleset("NS").unwrap();
    let p = proof_of(&seq("p | q => q | p"), &single).unwrap();
    let d = sequent_to_nd(&p, &single).unwrap();
    let labels = d.labels();
    let (&l1, f1) = labels.iter().next().unwrap();
    let Some((&l2, _)) = labels.iter().find(|(_, g)| *g != f1) else { return };
    let map: BTreeMap<_, _> = labels.keys().map(|&l| (l, if l == l2 { l1 } else { l })).collect();
    assert!(!check_derivation(&d.relabel(&map), &ns).is_ok());
}
