//! Command-line front end. [`run`] takes the full argument vector and the
//! two output streams and returns the process exit code.

use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::formula::{parse_formula, Formula, Signature};
use crate::io::{
    derivation_from_json, derivation_pretty, derivation_to_json, proof_from_json, proof_pretty, proof_to_json,
    ruleset_from_json, ruleset_to_value,
};
use crate::kernel::nd::{check_derivation, open_formulas, NdDerivation};
use crate::kernel::sequent::{check_proof, SequentProof};
use crate::kernel::Verdict;
use crate::normalize::{atomize_classical, normalize, NormalizeError};
use crate::prover::{decide, kripke_reading, ProofResult, ProverError, SearchBudget};
use crate::rules::{builtin_ruleset, derive_nd_rules, ruleset_from_tables, ConnectiveFile, Regime, RuleSet};
use crate::semantics::kripke::Forcing;
use crate::semantics::{find_designated_refuter, KripkeModel, Matrix, Polarity, Reading, DEFAULT_VARIABLE_CAP};
use crate::sequent::{parse_sequent, render_sequent, Sequent};
use crate::translate::{classical_shift, negate, nd_to_sequent, sequent_to_nd};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "intelim", version, about = "Sheffer-stroke calculi: rule generation, checking, search, translation")]
struct Cli {
    /// Human-readable output instead of compact JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Nd,
    Sequent,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ReadingArg {
    Standard,
    Polarized,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generate rules from a connective file.
    GenRules {
        connective: String,
        /// Restrict to single succedents.
        #[arg(long)]
        single: bool,
        /// Include the natural-deduction rules.
        #[arg(long)]
        nd: bool,
    },
    /// Print a named calculus (or rule-set file) as a rule-set file.
    ShowCalculus { calculus: String },
    /// Check a sequent proof file.
    CheckSequent {
        proof: String,
        #[arg(long)]
        calculus: String,
    },
    /// Check a natural-deduction derivation file.
    CheckNd {
        derivation: String,
        #[arg(long)]
        calculus: String,
    },
    /// Search for a proof or a countermodel.
    Prove {
        sequent: String,
        #[arg(long)]
        calculus: String,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Like `prove`, but a countermodel is the successful outcome.
    Countermodel {
        sequent: String,
        #[arg(long)]
        calculus: String,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Look for a valuation refuting a sequent in a finite matrix.
    MatrixCheck {
        sequent: String,
        /// Matrix file or `builtin:3val`.
        #[arg(long)]
        matrix: String,
    },
    /// Evaluate a formula in a Kripke model.
    KripkeEval {
        model: String,
        formula: String,
        #[arg(long)]
        world: Option<String>,
        #[arg(long, value_enum, default_value_t = ReadingArg::Standard)]
        reading: ReadingArg,
    },
    /// Translate between sequent proofs and derivations; with `--delta`,
    /// move the listed formulas from a classical single-succedent proof to
    /// the succedent of a multi-succedent one.
    Translate {
        input: String,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long, value_delimiter = ',')]
        delta: Vec<String>,
        #[arg(long, default_value = "LS-single-classical")]
        calculus: String,
    },
    /// Remove maximal formula occurrences from a derivation.
    Normalize {
        derivation: String,
        #[arg(long, default_value = "NSC")]
        calculus: String,
    },
    /// Restrict classical elimination to atomic conclusions.
    Atomize {
        derivation: String,
        #[arg(long, default_value = "NSC")]
        calculus: String,
    },
}

/// A failed command: exit code and diagnostic.
struct Failure(i32, String);

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure(EXIT_USAGE, msg.to_string())
}

/// What a successful command prints, and its exit code.
enum Output {
    Json(Value, i32),
    Proof(SequentProof, Signature, i32),
    Derivation(NdDerivation, Signature, i32),
}

pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.cmd) {
        Ok(o) => emit(o, cli.pretty, out),
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "intelim: {msg}");
            code
        }
    }
}

fn emit(o: Output, pretty: bool, out: &mut dyn Write) -> i32 {
    let (text, code) = match o {
        Output::Json(v, code) => {
            let t = if pretty { serde_json::to_string_pretty(&v) } else { serde_json::to_string(&v) };
            (t.expect("values serialize"), code)
        }
        Output::Proof(p, sig, code) => (if pretty { proof_pretty(&p, &sig) } else { proof_to_json(&p, &sig) }, code),
        Output::Derivation(d, sig, code) => {
            (if pretty { derivation_pretty(&d, &sig) } else { derivation_to_json(&d, &sig) }, code)
        }
    };
    let _ = out.write_all(text.trim_end().as_bytes());
    let _ = out.write_all(b"\n");
    code
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
}

/// A built-in name (`+` joins several) or a rule-set file.
fn calculus(spec: &str) -> Result<RuleSet, Failure> {
    if spec.ends_with(".json") || Path::new(spec).is_file() {
        ruleset_from_json(&read(spec)?).map_err(|e| usage(format!("{spec}: {e}")))
    } else {
        builtin_ruleset(spec).map_err(usage)
    }
}

fn sequent(text: &str, sig: &Signature) -> Result<Sequent, Failure> {
    parse_sequent(text, sig).map_err(|e| usage(format!("sequent `{text}`: {e}")))
}

fn formula(text: &str, sig: &Signature) -> Result<Formula, Failure> {
    parse_formula(text, sig).map_err(|e| usage(format!("formula `{text}`: {e}")))
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Ok => json!({"verdict": "ok"}),
        Verdict::Fail { path, reason } => json!({"verdict": "fail", "path": path, "reason": reason}),
    }
}

fn render_forms(fs: &[Formula], sig: &Signature) -> Vec<String> {
    fs.iter().map(|f| crate::formula::render_formula(f, sig)).collect()
}

fn budget(b: Option<usize>) -> SearchBudget {
    b.map(SearchBudget::new).unwrap_or_else(SearchBudget::from_env)
}

fn prover_failure(e: ProverError) -> Failure {
    match e {
        ProverError::BudgetExhausted(_) => Failure(EXIT_BUDGET, e.to_string()),
        _ => usage(e),
    }
}

/// Certificate for a refutation: the Kripke file format extended with the
/// refuting world, or a two-valued valuation.
fn refutation_json(r: &ProofResult, s: &Sequent, rs: &RuleSet) -> Value {
    let sig = &rs.signature;
    match r {
        ProofResult::RefutedIntuitionistic { model, world } => {
            let mut v = model.to_json();
            v["world"] = json!(model.worlds[*world]);
            v["reading"] = json!(match kripke_reading(rs) {
                Reading::Standard => "standard",
                Reading::Polarized => "polarized",
            });
            v["sequent"] = json!(render_sequent(s, sig));
            v
        }
        ProofResult::RefutedClassical(val) => json!({"valuation": val, "sequent": render_sequent(s, sig)}),
        ProofResult::Provable(_) => unreachable!("not a refutation"),
    }
}

fn execute(cmd: Cmd) -> Result<Output, Failure> {
    match cmd {
        Cmd::GenRules { connective, single, nd } => {
            let (conn, table) = ConnectiveFile::parse(&read(&connective)?).map_err(usage)?;
            let sig = Signature::new(vec![conn.clone()]).map_err(usage)?;
            let regime = if single { Regime::Single } else { Regime::Multi };
            let name = format!("{}-{}", conn.name, regime.as_str());
            let mut rs = ruleset_from_tables(&name, &sig, &[table], regime).map_err(usage)?;
            if nd {
                rs = derive_nd_rules(&rs);
            }
            Ok(Output::Json(ruleset_to_value(&rs), EXIT_OK))
        }
        Cmd::ShowCalculus { calculus: c } => Ok(Output::Json(ruleset_to_value(&calculus(&c)?), EXIT_OK)),
        Cmd::CheckSequent { proof, calculus: c } => {
            let rs = calculus(&c)?;
            let p = proof_from_json(&read(&proof)?, &rs.signature).map_err(usage)?;
            let v = check_proof(&p, &rs);
            let code = if v.is_ok() { EXIT_OK } else { EXIT_REFUTED };
            let mut j = verdict_json(&v);
            j["sequent"] = json!(render_sequent(&p.conclusion, &rs.signature));
            Ok(Output::Json(j, code))
        }
        Cmd::CheckNd { derivation, calculus: c } => {
            let rs = calculus(&c)?;
            let d = derivation_from_json(&read(&derivation)?, &rs.signature).map_err(usage)?;
            let v = check_derivation(&d, &rs);
            let mut j = verdict_json(&v);
            if v.is_ok() {
                j["open"] = json!(render_forms(&open_formulas(&d), &rs.signature));
                j["conclusion"] = json!(render_forms(&d.conclusion(), &rs.signature));
            }
            Ok(Output::Json(j, if v.is_ok() { EXIT_OK } else { EXIT_REFUTED }))
        }
        Cmd::Prove { sequent: text, calculus: c, budget: b } => {
            let rs = calculus(&c)?;
            let s = sequent(&text, &rs.signature)?;
            match decide(&s, &rs, budget(b)).map_err(prover_failure)? {
                ProofResult::Provable(p) => Ok(Output::Proof(p, rs.signature, EXIT_OK)),
                r => Ok(Output::Json(refutation_json(&r, &s, &rs), EXIT_REFUTED)),
            }
        }
        Cmd::Countermodel { sequent: text, calculus: c, budget: b } => {
            let rs = calculus(&c)?;
            let s = sequent(&text, &rs.signature)?;
            match decide(&s, &rs, budget(b)).map_err(prover_failure)? {
                ProofResult::Provable(p) => Ok(Output::Proof(p, rs.signature, EXIT_REFUTED)),
                r => Ok(Output::Json(refutation_json(&r, &s, &rs), EXIT_OK)),
            }
        }
        Cmd::MatrixCheck { sequent: text, matrix } => {
            let m = match matrix.as_str() {
                "builtin:3val" => Matrix::three_valued(),
                path => Matrix::from_json(&read(path)?).map_err(usage)?,
            };
            let sig = Signature::standard();
            let s = sequent(&text, &sig)?;
            // single-succedent sequents use the ordered notion of validity
            let found = if s.succ.len() <= 1 {
                crate::semantics::find_refuting_valuation(&m, &s, DEFAULT_VARIABLE_CAP)
            } else {
                find_designated_refuter(&m, &s, DEFAULT_VARIABLE_CAP)
            }
            .map_err(usage)?;
            match found {
                None => Ok(Output::Json(json!({"holds": true, "matrix": m.name}), EXIT_OK)),
                Some(v) => Ok(Output::Json(
                    json!({"holds": false, "matrix": m.name, "valuation": m.render_valuation(&v), "sequent": render_sequent(&s, &sig)}),
                    EXIT_REFUTED,
                )),
            }
        }
        Cmd::KripkeEval { model, formula: text, world, reading } => {
            let m = KripkeModel::from_json(&read(&model)?).map_err(usage)?;
            let f = formula(&text, &Signature::standard())?;
            let reading = match reading {
                ReadingArg::Standard => Reading::Standard,
                ReadingArg::Polarized => Reading::Polarized,
            };
            let mut forcing = Forcing::new(&m, reading);
            let table = forcing.table(&f, Polarity::Pos).map_err(usage)?;
            match world {
                Some(w) => {
                    let i = m.world(&w).ok_or_else(|| usage(format!("unknown world `{w}`")))?;
                    let code = if table[i] { EXIT_OK } else { EXIT_REFUTED };
                    Ok(Output::Json(json!({"world": w, "forces": table[i]}), code))
                }
                None => {
                    let map: serde_json::Map<String, Value> =
                        m.worlds.iter().zip(&table).map(|(w, &b)| (w.clone(), json!(b))).collect();
                    let code = if table.iter().all(|&b| b) { EXIT_OK } else { EXIT_REFUTED };
                    Ok(Output::Json(json!({"forces": map}), code))
                }
            }
        }
        Cmd::Translate { input, to, delta, calculus: c } => {
            let rs = calculus(&c)?;
            let sig = rs.signature.clone();
            let text = read(&input)?;
            match (to, delta.is_empty()) {
                (Target::Nd, true) => {
                    let p = proof_from_json(&text, &sig).map_err(usage)?;
                    if let Some(o) = rejected(check_proof(&p, &rs)) {
                        return Ok(o);
                    }
                    let d = sequent_to_nd(&p, &rs).map_err(translate_failure)?;
                    Ok(Output::Derivation(d, sig, EXIT_OK))
                }
                (Target::Sequent, true) => {
                    let d = derivation_from_json(&text, &sig).map_err(usage)?;
                    if let Some(o) = rejected(check_derivation(&d, &rs)) {
                        return Ok(o);
                    }
                    let p = nd_to_sequent(&d, &rs).map_err(translate_failure)?;
                    Ok(Output::Proof(p, sig, EXIT_OK))
                }
                (Target::Sequent, false) => {
                    let p = proof_from_json(&text, &sig).map_err(usage)?;
                    if let Some(o) = rejected(check_proof(&p, &rs)) {
                        return Ok(o);
                    }
                    let negated = delta
                        .iter()
                        .map(|t| negate(&rs, &formula(t.trim(), &sig)?).map_err(translate_failure))
                        .collect::<Result<Vec<_>, _>>()?;
                    let q = classical_shift(&p, &rs, &negated).map_err(translate_failure)?;
                    Ok(Output::Proof(q, sig, EXIT_OK))
                }
                (Target::Nd, false) => Err(usage("--delta applies to --to sequent")),
            }
        }
        Cmd::Normalize { derivation, calculus: c } => {
            let rs = calculus(&c)?;
            let d = derivation_from_json(&read(&derivation)?, &rs.signature).map_err(usage)?;
            if let Some(o) = rejected(check_derivation(&d, &rs)) {
                return Ok(o);
            }
            let n = normalize(&d, &rs).map_err(normalize_failure)?;
            Ok(Output::Derivation(n, rs.signature, EXIT_OK))
        }
        Cmd::Atomize { derivation, calculus: c } => {
            let rs = calculus(&c)?;
            let d = derivation_from_json(&read(&derivation)?, &rs.signature).map_err(usage)?;
            if let Some(o) = rejected(check_derivation(&d, &rs)) {
                return Ok(o);
            }
            let n = atomize_classical(&d, &rs).map_err(normalize_failure)?;
            Ok(Output::Derivation(n, rs.signature, EXIT_OK))
        }
    }
}

/// Invalid input: the verdict goes to stdout with exit code 1.
fn rejected(v: Verdict) -> Option<Output> {
    (!v.is_ok()).then(|| Output::Json(verdict_json(&v), EXIT_REFUTED))
}

fn translate_failure(e: crate::translate::TranslateError) -> Failure {
    match e {
        crate::translate::TranslateError::NotOk(_) => Failure(EXIT_REFUTED, e.to_string()),
        _ => usage(e),
    }
}

fn normalize_failure(e: NormalizeError) -> Failure {
    match e {
        NormalizeError::NotOk(_) => Failure(EXIT_REFUTED, e.to_string()),
        _ => usage(e),
    }
}
