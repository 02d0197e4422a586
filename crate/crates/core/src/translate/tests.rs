use super::*;
use crate::formula::{parse_formula, Signature};
use crate::kernel::nd::open_formulas;
use crate::kernel::Verdict;
use crate::prover::{decide, SearchBudget};
use crate::rules::builtin_ruleset;
use crate::sequent::{parse_sequent, sub_multiset};

fn f(s: &str) -> Formula {
    parse_formula(s, &Signature::standard()).unwrap()
}

fn seq(s: &str) -> Sequent {
    parse_sequent(s, &Signature::standard()).unwrap()
}

fn prove(rs: &RuleSet, s: &str) -> SequentProof {
    decide(&seq(s), rs, SearchBudget::default()).unwrap().proof().unwrap_or_else(|| panic!("{s} unprovable in {}", rs.name)).clone()
}

fn round_trip(rs: &RuleSet, p: &SequentProof) {
    let d = sequent_to_nd(p, rs).unwrap();
    assert_eq!(check_derivation(&d, rs), Verdict::Ok);
    assert_eq!(d.formula(), goal(&p.conclusion));
    assert!(sub_multiset(&open_formulas(&d), &p.conclusion.ante));
    let q = nd_to_sequent(&d, rs).unwrap();
    assert_eq!(check_proof(&q, rs), Verdict::Ok);
    assert_eq!(q.conclusion.succ, p.conclusion.succ);
    assert!(sub_multiset(&q.conclusion.ante, &p.conclusion.ante));
}

#[test]
fn axiom_becomes_leaf() {
    let rs = builtin_ruleset("NS").unwrap();
    let d = sequent_to_nd(&SequentProof::axiom(f("p")), &rs).unwrap();
    assert!(matches!(d, NdDerivation::Assumption { ref formula, .. } if *formula == f("p")));
    let p = nd_to_sequent(&d, &rs).unwrap();
    assert_eq!(p, SequentProof::axiom(f("p")));
}

#[test]
fn stroke_left_becomes_elimination() {
    let rs = builtin_ruleset("NS").unwrap();
    let p = prove(&rs, "p | q, p, q =>");
    let d = sequent_to_nd(&p, &rs).unwrap();
    assert_eq!(d.rule(), Some("|E"));
    assert_eq!(d.formula(), Formula::Falsum);
    let kids: Vec<Formula> = d.children().iter().map(|c| c.formula()).collect();
    assert_eq!(kids, vec![f("p | q"), f("p"), f("q")]);
    let back = nd_to_sequent(&d, &rs).unwrap();
    assert_eq!(back.rule, "cut");
    assert_eq!(back.children[1].rule, "|L'");
    assert_eq!(check_proof(&back, &rs), Verdict::Ok);
}

#[test]
fn weakening_right_becomes_falsum_intro() {
    let rs = builtin_ruleset("NS").unwrap();
    let p = SequentProof::new("WR'", seq("p | q, p, q => r"), vec![prove(&rs, "p | q, p, q =>")]);
    let d = sequent_to_nd(&p, &rs).unwrap();
    assert_eq!(d.rule(), Some("_|_I"));
    round_trip(&rs, &p);
}

#[test]
fn cut_grafts() {
    let rs = builtin_ruleset("NS").unwrap();
    // p |- (p|p)|(p|p) and (p|p)|(p|p), q |- ... glued by cut
    let left = prove(&rs, "p => (p | p) | (p | p)");
    let right = prove(&rs, "(p | p) | (p | p), p | p =>");
    let cut = SequentProof::new("cut", seq("p, p | p =>"), vec![left, right]);
    assert_eq!(check_proof(&cut, &rs), Verdict::Ok);
    let d = sequent_to_nd(&cut, &rs).unwrap();
    assert_eq!(check_derivation(&d, &rs), Verdict::Ok);
    let open = open_formulas(&d);
    assert!(!open.contains(&f("(p | p) | (p | p)")));
    round_trip(&rs, &cut);
}

fn double_negation() -> NdDerivation {
    let n = f("p | p");
    NdDerivation::infer(
        "|E_C",
        f("p"),
        vec![NdDerivation::infer(
            "|E",
            Formula::Falsum,
            vec![NdDerivation::assume(f("(p | p) | (p | p)"), 2), NdDerivation::assume(n.clone(), 1), NdDerivation::assume(n, 1)],
        )],
    )
    .discharging(0, [1])
}

#[test]
fn classical_example_to_sequent() {
    let rs = builtin_ruleset("NSC").unwrap();
    let p = nd_to_sequent(&double_negation(), &rs).unwrap();
    assert_eq!(check_proof(&p, &rs), Verdict::Ok);
    assert_eq!(p.conclusion, seq("(p | p) | (p | p) => p"));
    assert_eq!(p.rule, "|L_C");
    round_trip(&rs, &p);
}

#[test]
fn prover_proofs_round_trip() {
    for (name, goals) in [
        ("NS", &["=> p | (p | p)", "p, q => (p | q) | (p | q)", "p | q => q | p"][..]),
        ("NSC", &["(p | p) | (p | p) => p", "=> (p | p) | ((p | p) | (p | p))", "(p | q) | (p | q) => p"][..]),
        ("LJ-core", &["p -> q, q -> r => p -> r", "p + q => q + p", "=> ~~(p + ~p)", "p & (q + r) => (p & q) + (p & r)"][..]),
        ("HP-fixed", &["p || q => p || q", "p || q, p, q =>"][..]),
    ] {
        let rs = builtin_ruleset(name).unwrap();
        for g in goals {
            round_trip(&rs, &prove(&rs, g));
        }
    }
}

#[test]
fn shift_moves_negations_right() {
    let single = builtin_ruleset("LS-single-classical").unwrap();
    let p = prove(&single, "p | p => p | p");
    let q = classical_shift(&p, &single, &[f("p | p")]).unwrap();
    assert_eq!(check_proof(&q, &single.multi_counterpart()), Verdict::Ok);
    assert_eq!(q.conclusion, seq("=> p, p | p"));
    let back = classical_unshift(&q, &single.multi_counterpart(), &single, &[f("p")]).unwrap();
    assert_eq!(check_proof(&back, &single), Verdict::Ok);
    assert_eq!(back.conclusion, p.conclusion);

    let e = classical_shift(&p, &single, &[f("p")]).unwrap_err();
    assert!(matches!(e, TranslateError::Designation(_)));
}

#[test]
fn shift_without_designation_embeds() {
    let single = builtin_ruleset("LS-single-classical").unwrap();
    let p = prove(&single, "(p | p) | (p | p) => p");
    let q = classical_shift(&p, &single, &[]).unwrap();
    assert_eq!(check_proof(&q, &builtin_ruleset("LS").unwrap()), Verdict::Ok);
    assert_eq!(q.conclusion, p.conclusion);
}

#[test]
fn unshift_from_multi_proofs() {
    let ls = builtin_ruleset("LS").unwrap();
    let single = builtin_ruleset("LS-single-classical").unwrap();
    let p = prove(&ls, "=> p, p | p");
    let q = classical_unshift(&p, &ls, &single, &[f("p")]).unwrap();
    assert_eq!(check_proof(&q, &single), Verdict::Ok);
    assert_eq!(q.conclusion, seq("p | p => p | p"));
    let p = prove(&ls, "(p | p) | (p | p) => p");
    let q = classical_unshift(&p, &ls, &single, &[]).unwrap();
    assert_eq!(check_proof(&q, &single), Verdict::Ok);
    assert_eq!(q.conclusion, p.conclusion);
    assert!(classical_unshift(&prove(&ls, "=> p, p | p"), &ls, &single, &[]).is_err());
}

#[test]
fn deep_proofs_translate() {
    let rs = builtin_ruleset("NS").unwrap();
    let p_ = f("p");
    let mut proof = SequentProof::axiom(p_.clone());
    let one = Sequent::new(vec![p_.clone()], vec![p_.clone()]);
    let two = Sequent::new(vec![p_.clone(), p_.clone()], vec![p_.clone()]);
    for _ in 0..6_000 {
        proof = SequentProof::new("WL", two.clone(), vec![proof]);
        proof = SequentProof::new("CL", one.clone(), vec![proof]);
    }
    round_trip(&rs, &proof);
    let single = builtin_ruleset("NSC").unwrap();
    let q = classical_shift(&proof, &single, &[]).unwrap();
    assert!(q.height() > 10_000);
    let back = classical_unshift(&q, &single.multi_counterpart(), &single, &[]).unwrap();
    assert_eq!(check_proof(&back, &single), Verdict::Ok);
}
