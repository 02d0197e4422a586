//! Adjusting an end-sequent with weakening and contraction.

use std::collections::BTreeSet;

use crate::formula::Formula;
use crate::kernel::sequent::SequentProof;
use crate::rules::Regime;
use crate::sequent::{counts, remove_one, Sequent};

/// Extends `p` with contractions and weakenings until its end-sequent is
/// `target`. Fails when `target` lacks a formula that `p` concludes.
pub fn reshape(p: SequentProof, target: &Sequent, regime: Regime) -> Result<SequentProof, String> {
    if p.conclusion == *target {
        return Ok(p);
    }
    let mut p = p;
    let mut cur = p.conclusion.clone();
    let single = regime.is_single();
    for right in [false, true] {
        let (have, want) = if right { (&cur.succ, &target.succ) } else { (&cur.ante, &target.ante) };
        let hc = counts(have);
        let wc = counts(want);
        let keys: BTreeSet<&Formula> = hc.keys().chain(wc.keys()).copied().collect();
        let mut steps: Vec<(Formula, bool)> = Vec::new(); // (formula, weaken?)
        for f in keys {
            let h = hc.get(f).copied().unwrap_or(0);
            let w = wc.get(f).copied().unwrap_or(0);
            if h > 0 && w == 0 {
                return Err(format!("cannot remove {f:?} from the end-sequent"));
            }
            for _ in w..h {
                steps.push((f.clone(), false));
            }
            for _ in h..w {
                steps.push((f.clone(), true));
            }
        }
        // contractions before weakenings keeps single succedents bounded
        steps.sort_by_key(|(_, w)| *w);
        for (f, weaken) in steps {
            let mut next = cur.clone();
            let side = if right { &mut next.succ } else { &mut next.ante };
            let rule = if weaken {
                side.push(f);
                match (right, single) {
                    (false, _) => "WL",
                    (true, false) => "WR",
                    (true, true) => "WR'",
                }
            } else {
                remove_one(side, &f);
                if right {
                    if single {
                        return Err("no right contraction in a single-succedent calculus".into());
                    }
                    "CR"
                } else {
                    "CL"
                }
            };
            p = SequentProof::new(rule, next.clone(), vec![p]);
            cur = next;
        }
    }
    Ok(p)
}
