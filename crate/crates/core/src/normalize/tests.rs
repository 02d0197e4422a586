use super::*;
use crate::formula::{parse_formula, Signature};
use crate::kernel::nd::{graft, open_formulas};
use crate::kernel::Verdict;
use crate::prover::{decide, SearchBudget};
use crate::rules::builtin_ruleset;
use crate::semantics::{find_designated_refuter, Matrix};
use crate::sequent::{parse_sequent, sub_multiset, Sequent};
use crate::translate::sequent_to_nd;

fn f(s: &str) -> Formula {
    parse_formula(s, &Signature::standard()).unwrap()
}

fn a(s: &str, l: Label) -> NdDerivation {
    NdDerivation::assume(f(s), l)
}

fn ns() -> RuleSet {
    builtin_ruleset("NS").unwrap()
}

/// `|E` over `|I`: the detour through `p | q`.
fn redex() -> NdDerivation {
    let intro = NdDerivation::infer("|I", f("p | q"), vec![NdDerivation::infer("|E", Formula::Falsum, vec![a("p | q", 3), a("p", 1), a("q", 2)])])
        .discharging(0, [1, 2]);
    NdDerivation::infer("|E", Formula::Falsum, vec![intro, a("p", 4), a("q", 5)])
}

#[test]
fn finds_the_detour() {
    let d = redex();
    assert_eq!(check_derivation(&d, &ns()), Verdict::Ok);
    assert_eq!(maximal_occurrences(&d, &ns()), vec![MaximalOccurrence { path: vec![0], degree: 1 }]);
    assert!(maximal_occurrences(&a("p", 1), &ns()).is_empty());
}

#[test]
fn contracts_to_grafted_premise() {
    let d = redex();
    let o = maximal_occurrences(&d, &ns()).remove(0);
    let r = reduce_at(&d, &o, &ns()).unwrap();
    let golden = NdDerivation::infer("|E", Formula::Falsum, vec![a("p | q", 3), a("p", 4), a("q", 5)]);
    assert_eq!(r, golden);
    assert!(matches!(reduce_at(&r, &o, &ns()), Err(NormalizeError::Stale(_))));
    assert_eq!(normalize(&d, &ns()).unwrap(), golden);
    assert_eq!(normalize(&golden, &ns()).unwrap(), golden);
}

#[test]
fn vacuous_discharge() {
    let intro = NdDerivation::infer("|I", f("p | q"), vec![NdDerivation::infer("|E", Formula::Falsum, vec![a("r | r", 6), a("r", 7), a("r", 7)])]);
    let d = NdDerivation::infer("|E", Formula::Falsum, vec![intro, a("p", 4), a("q", 5)]);
    assert_eq!(check_derivation(&d, &ns()), Verdict::Ok);
    let r = normalize(&d, &ns()).unwrap();
    assert_eq!(r, NdDerivation::infer("|E", Formula::Falsum, vec![a("r | r", 6), a("r", 7), a("r", 7)]));
}

#[test]
fn stacked_redexes() {
    let roundabout = NdDerivation::infer("|I", f("p | q"), vec![NdDerivation::infer("|E", Formula::Falsum, vec![a("p | q", 3), a("p", 1), a("q", 2)])])
        .discharging(0, [1, 2]);
    let outer_intro = NdDerivation::infer(
        "|I",
        f("(p | q) | (p | q)"),
        vec![NdDerivation::infer("|E", Formula::Falsum, vec![a("p | q", 8), a("p", 4), a("q", 5)])],
    )
    .discharging(0, [8]);
    let d = NdDerivation::infer("|E", Formula::Falsum, vec![outer_intro, roundabout.clone(), roundabout]);
    let rs = ns();
    assert_eq!(check_derivation(&d, &rs), Verdict::Ok);
    let occ = maximal_occurrences(&d, &rs);
    assert_eq!(occ.iter().map(|o| o.degree).collect::<Vec<_>>(), vec![3]);
    let once = reduce_at(&d, &occ[0], &rs).unwrap();
    assert_eq!(maximal_occurrences(&once, &rs).iter().map(|o| o.degree).collect::<Vec<_>>(), vec![1]);
    let n = normalize(&d, &rs).unwrap();
    assert!(maximal_occurrences(&n, &rs).is_empty());
    assert_eq!(check_derivation(&n, &rs), Verdict::Ok);
    assert!(sub_multiset(&open_formulas(&n), &open_formulas(&d)));
}

#[test]
fn nested_inner_reduced_first_when_outer_is_lower() {
    // outer redex over p | q whose minor premise hides a redex over (p|q)|(p|q)
    let rs = ns();
    let big_intro = NdDerivation::infer(
        "|I",
        f("(p | q) | (p | q)"),
        vec![NdDerivation::infer("|E", Formula::Falsum, vec![a("p | q", 8), a("p", 4), a("q", 5)])],
    )
    .discharging(0, [8]);
    let inner = NdDerivation::infer("|E", Formula::Falsum, vec![big_intro, a("p | q", 9), a("p | q", 9)]);
    let p_from_inner = NdDerivation::infer("_|_I", f("p"), vec![inner]);
    let small_intro = NdDerivation::infer("|I", f("p | q"), vec![NdDerivation::infer("|E", Formula::Falsum, vec![a("p | q", 3), a("p", 1), a("q", 2)])])
        .discharging(0, [1, 2]);
    let d = NdDerivation::infer("|E", Formula::Falsum, vec![small_intro, p_from_inner, a("q", 5)]);
    assert_eq!(check_derivation(&d, &rs), Verdict::Ok);
    let occ = maximal_occurrences(&d, &rs);
    assert_eq!(occ.len(), 2);
    let big = occ.iter().find(|o| o.degree == 3).unwrap();
    let r = reduce_at(&d, big, &rs).unwrap();
    let left = maximal_occurrences(&r, &rs);
    assert_eq!(left, vec![MaximalOccurrence { path: vec![0], degree: 1 }]);
    assert_eq!(check_derivation(&r, &rs), Verdict::Ok);
    assert!(maximal_occurrences(&normalize(&d, &rs).unwrap(), &rs).is_empty());
}

fn prove_nd(rs: &RuleSet, s: &str) -> NdDerivation {
    let sq = parse_sequent(s, &Signature::standard()).unwrap();
    let p = decide(&sq, rs, SearchBudget::default()).unwrap().proof().unwrap().clone();
    sequent_to_nd(&p, rs).unwrap()
}

#[test]
fn cut_free_translations_are_normal() {
    let rs = ns();
    for s in ["=> (p | p) | ((p | p) | (p | p))", "p | q => q | p", "p, q => (p | q) | (p | q)"] {
        assert!(maximal_occurrences(&prove_nd(&rs, s), &rs).is_empty());
    }
}

#[test]
fn grafted_introductions_normalize() {
    let rs = ns();
    let d1 = prove_nd(&rs, "p | q => q | p");
    let user = NdDerivation::infer("|E", Formula::Falsum, vec![a("q | p", 20), a("q", 21), a("p", 22)]);
    let d = graft(&user, &f("q | p"), &d1);
    assert_eq!(check_derivation(&d, &rs), Verdict::Ok);
    assert!(!maximal_occurrences(&d, &rs).is_empty());
    let n = normalize(&d, &rs).unwrap();
    assert_eq!(check_derivation(&n, &rs), Verdict::Ok);
    assert!(maximal_occurrences(&n, &rs).is_empty());
    assert_eq!(n.formula(), d.formula());
    assert!(sub_multiset(&open_formulas(&n), &open_formulas(&d)));
    assert_eq!(normalize(&n, &rs).unwrap(), n);
}

fn sound(d: &NdDerivation) -> bool {
    let s = Sequent::new(open_formulas(d), if d.formula() == Formula::Falsum { vec![] } else { vec![d.formula()] });
    find_designated_refuter(&Matrix::boolean_standard(), &s, 8).unwrap().is_none()
}

fn classical_elims(d: &NdDerivation, rs: &RuleSet, out: &mut Vec<Formula>) {
    if kind(rs, d) == Some(NdKind::ClassicalElim) {
        out.push(d.formula());
    }
    for c in d.children() {
        classical_elims(c, rs, out);
    }
}

#[test]
fn atomize_compound_classical_conclusion() {
    let rs = builtin_ruleset("NSC").unwrap();
    let x = "(p | q)";
    let nn = format!("({x} | {x}) | ({x} | {x})");
    let n = format!("{x} | {x}");
    let d = NdDerivation::infer(
        "|E_C",
        f(x),
        vec![NdDerivation::infer("|E", Formula::Falsum, vec![a(&nn, 2), a(&n, 1), a(&n, 1)])],
    )
    .discharging(0, [1]);
    assert_eq!(check_derivation(&d, &rs), Verdict::Ok);
    let r = atomize_classical(&d, &rs).unwrap();
    assert_eq!(check_derivation(&r, &rs), Verdict::Ok);
    assert_eq!(r.rule(), Some("|I"));
    assert_eq!(r.formula(), f(x));
    let mut ce = Vec::new();
    classical_elims(&r, &rs, &mut ce);
    assert!(ce.is_empty());
    assert!(sub_multiset(&open_formulas(&r), &open_formulas(&d)));
    assert!(sound(&r));
}

#[test]
fn atomize_keeps_atomic_classical_conclusions() {
    let rs = builtin_ruleset("NSC").unwrap();
    let n = "p | p";
    let d = NdDerivation::infer(
        "|E_C",
        f("p"),
        vec![NdDerivation::infer("|E", Formula::Falsum, vec![a("(p | p) | (p | p)", 2), a(n, 1), a(n, 1)])],
    )
    .discharging(0, [1]);
    assert_eq!(atomize_classical(&d, &rs).unwrap(), d);
}

#[test]
fn atomize_prover_derivations() {
    let rs = builtin_ruleset("NSC").unwrap();
    for s in ["((p | q) | (p | q)) | ((p | q) | (p | q)) => p | q", "=> (p | (p | p))", "(p | p) | q => q | (p | p)"] {
        let d = prove_nd(&rs, s);
        let r = atomize_classical(&d, &rs).unwrap();
        assert_eq!(check_derivation(&r, &rs), Verdict::Ok, "{s}");
        let mut ce = Vec::new();
        classical_elims(&r, &rs, &mut ce);
        assert!(ce.iter().all(Formula::is_atomic), "{s}");
        assert_eq!(r.formula(), d.formula());
        assert!(sound(&r));
    }
}
