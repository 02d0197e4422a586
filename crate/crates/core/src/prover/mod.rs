//! Backward proof search with certificates.
//!
//! [`decide`] dispatches on the regime of the rule set and re-checks every
//! certificate before returning it: proofs with the sequent kernel,
//! valuations by two-valued evaluation, Kripke models by forcing.

mod classical;
mod intuitionistic;
mod reshape;

use thiserror::Error;

use crate::formula::{Binding, Formula, Schema};
use crate::kernel::sequent::{check_proof, SequentProof};
use crate::kernel::Verdict;
use crate::rules::{RuleSchema, RuleSet};
use crate::semantics::kripke::Forcing;
use crate::semantics::{find_designated_refuter, sequent_holds_designated, KripkeModel, Matrix, Reading, SemanticsError, Valuation};
use crate::sequent::Sequent;

pub use classical::prove_classical;
pub use intuitionistic::prove_intuitionistic;
pub use reshape::reshape;

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Maximum number of sequents expanded by one search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_expanded: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_expanded: DEFAULT_BUDGET }
    }
}

impl SearchBudget {
    pub fn new(max_expanded: usize) -> Self {
        SearchBudget { max_expanded: max_expanded.max(1) }
    }

    /// Default budget, overridden by `INTELIM_BUDGET` when it holds a number.
    pub fn from_env() -> Self {
        std::env::var("INTELIM_BUDGET")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(SearchBudget::new)
            .unwrap_or_default()
    }
}

#[derive(Clone, Debug)]
pub enum ProofResult {
    Provable(SequentProof),
    /// Two-valued counter-valuation (values index `0 < 1`).
    RefutedClassical(Valuation),
    RefutedIntuitionistic { model: KripkeModel, world: usize },
}

impl ProofResult {
    pub fn is_provable(&self) -> bool {
        matches!(self, ProofResult::Provable(_))
    }

    pub fn proof(&self) -> Option<&SequentProof> {
        match self {
            ProofResult::Provable(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProverError {
    #[error("search budget of {0} expanded sequents exhausted")]
    BudgetExhausted(usize),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("search failed but no countermodel could be built: {0}")]
    Incomplete(String),
    #[error("certificate failed re-verification: {0}")]
    CertificateInvalid(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// How `||` is read in countermodels for `rs`: calculi with the
/// single-succedent Hazen-Pelletier left rule get the polarized reading.
pub fn kripke_reading(rs: &RuleSet) -> Reading {
    if rs.has_rule("||L'") {
        Reading::Polarized
    } else {
        Reading::Standard
    }
}

/// Two-valued matrix of the connectives of `rs`.
pub fn boolean_matrix(rs: &RuleSet) -> Matrix {
    Matrix::boolean(rs.tables.values())
}

/// Checks a certificate for `s` against `rs`.
pub fn verify(result: &ProofResult, s: &Sequent, rs: &RuleSet) -> Result<(), ProverError> {
    match result {
        ProofResult::Provable(p) => {
            if p.conclusion != *s {
                return Err(ProverError::CertificateInvalid("proof has a different end-sequent".into()));
            }
            match check_proof(p, rs) {
                Verdict::Ok => Ok(()),
                v => Err(ProverError::CertificateInvalid(v.to_string())),
            }
        }
        ProofResult::RefutedClassical(v) => {
            if sequent_holds_designated(&boolean_matrix(rs), v, s)? {
                Err(ProverError::CertificateInvalid("valuation satisfies the sequent".into()))
            } else {
                Ok(())
            }
        }
        ProofResult::RefutedIntuitionistic { model, world } => {
            // the constructor already enforced monotonicity; rebuild to be sure
            let m = KripkeModel::new(model.worlds.clone(), model.order.clone(), model.val.clone())?;
            let mut forcing = Forcing::new(&m, kripke_reading(rs));
            let s1 = forcing.refutes(s)?;
            let ok = s1.is_some() && {
                let mut f2 = Forcing::new(&m, kripke_reading(rs));
                let ante_ok = s.ante.iter().try_fold(true, |acc, f| {
                    f2.forces(*world, f, crate::semantics::Polarity::Neg).map(|b| acc && b)
                })?;
                let succ_ok = match s.succ.first() {
                    Some(g) => !f2.forces(*world, g, crate::semantics::Polarity::Pos)?,
                    None => true,
                };
                ante_ok && succ_ok
            };
            if ok {
                Ok(())
            } else {
                Err(ProverError::CertificateInvalid("Kripke model does not refute the sequent".into()))
            }
        }
    }
}

/// Runs the engine matching the regime of `rs` and verifies the result.
pub fn decide(s: &Sequent, rs: &RuleSet, b: SearchBudget) -> Result<ProofResult, ProverError> {
    let r = if rs.regime.is_single() {
        prove_intuitionistic(s, rs, b)?
    } else {
        prove_classical(s, rs, b)?
    };
    verify(&r, s, rs)?;
    Ok(r)
}

/// Exhaustive two-valued refutation; used when search fails without a
/// direct countermodel.
pub(crate) fn classical_refuter(s: &Sequent, rs: &RuleSet) -> Result<Option<Valuation>, ProverError> {
    Ok(find_designated_refuter(&boolean_matrix(rs), s, 16)?)
}

pub(crate) fn reject_falsum(s: &Sequent) -> Result<(), ProverError> {
    if s.formulas().any(Formula::contains_falsum) {
        Err(ProverError::Unsupported("sequent calculi have no rules for `_|_`; use the empty succedent".into()))
    } else {
        Ok(())
    }
}

/// A rule applied to a concrete principal formula.
pub(crate) struct Applied {
    /// Left and right auxiliaries and whether the premise keeps the
    /// succedent context.
    pub premises: Vec<(Vec<Formula>, Vec<Formula>, bool)>,
}

pub(crate) fn apply(rule: &RuleSchema, f: &Formula) -> Option<Applied> {
    let mut b = Binding::new();
    if !rule.principal.as_ref()?.match_formula(f, &mut b) {
        return None;
    }
    let inst = |v: &[Schema]| v.iter().map(|s| s.substitute(&b)).collect::<Result<Vec<_>, _>>();
    let mut premises = Vec::new();
    for p in &rule.premises {
        premises.push((inst(&p.left).ok()?, inst(&p.right).ok()?, p.delta));
    }
    Some(Applied { premises })
}
