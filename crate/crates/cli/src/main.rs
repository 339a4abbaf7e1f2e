//! `qcompare`: run the comparison-machine experiments and print JSON reports.

mod inputs;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcompare_core::cloning::{run_game, sample_game, GameResult};
use qcompare_core::machines::{
    classify_one_sidedness, swap_test_probability, Classification, DecisionMachine,
    DEFAULT_CLASSIFY_TOL,
};
use qcompare_core::qstate::ComparisonMap;
use qcompare_core::verifier::search::RestartSummary;
use qcompare_core::verifier::{
    adversarial_search, exactly_constrained_machine, verify, Case, SearchConfig,
};
use qcompare_core::Error;
use serde::Serialize;

/// Default largest nontriviality an anti-linear search may report before the
/// run counts as a counterexample.
const SEARCH_THRESHOLD: f64 = 1e-3;

#[derive(Parser, Debug)]
#[command(name = "qcompare", version, about = "Quantum comparison machine experiments")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Root seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Spaces of indentation in the JSON report; 0 prints one line.
    #[arg(long, global = true, default_value_t = 2)]
    json_indent: usize,
    /// How far a state literal's norm may be from 1 before it is rejected.
    /// Literals inside the window are renormalized.
    #[arg(long, global = true, default_value_t = 1e-4)]
    norm_tol: f64,
}

#[derive(Args, Debug)]
struct MapArgs {
    /// Matrix of K: orth, identity (alias conj), x, hadamard, an inline
    /// [re, im] matrix literal or a file holding one.
    #[arg(long, default_value = "orth")]
    k: String,
    /// Treat the matrix as the linear part A of the anti-linear map K = A·conj.
    #[arg(long)]
    antilinear: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the SWAP test on two states and compare with (1+δ²)/2.
    SwapTest {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Run the K-comparison machine (SWAP test after K on the probe).
    Compare {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
    },
    /// Estimate which answer a machine gives with certainty.
    Classify {
        #[command(flatten)]
        map: MapArgs,
        /// swap-test, always-yes, always-no or a machine JSON file.
        #[arg(long)]
        machine: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Probability below which an answer counts as never given.
        #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
        tol: f64,
    },
    /// Check the impossibility argument on one machine.
    Verify {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_parser = parse_case)]
        case: Case,
        /// swap-test, always-yes, always-no or a machine JSON file.
        #[arg(long, required_unless_present = "exact_construction")]
        machine: Option<String>,
        /// Build a machine that satisfies the case constraints exactly.
        #[arg(long, conflicts_with = "machine")]
        exact_construction: bool,
        /// Ancilla dimensions for --exact-construction; the first is the answer qubit.
        #[arg(long, value_parser = inputs::dims, default_value = "2,2")]
        ancillas: inputs::Dims,
        /// Also write the machine that was checked to this file.
        #[arg(long)]
        save_machine: Option<PathBuf>,
    },
    /// Look for a one-sided machine that is far from constant.
    Search {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_parser = parse_case)]
        case: Case,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        /// Number of optimizer restarts.
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        /// Ancilla dimensions; the first is the answer qubit.
        #[arg(long, value_parser = inputs::dims, default_value = "2,2")]
        ancillas: inputs::Dims,
        /// Nontriviality above which an anti-linear search exits with status 3.
        #[arg(long, default_value_t = SEARCH_THRESHOLD)]
        tol: f64,
        /// Include per-restart summaries in the report.
        #[arg(long)]
        details: bool,
        /// Write the best feasible machine to this file.
        #[arg(long)]
        save_machine: Option<PathBuf>,
    },
    /// Play the cloning game with a SWAP-test payoff.
    CloningGame {
        /// universal, trivial or a cloner JSON file.
        #[arg(long, default_value = "universal")]
        cloner: String,
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        clone_index: u8,
        /// Also draw this many rounds and report the empirical mean payoff.
        #[arg(long)]
        sample: Option<usize>,
    },
}

fn parse_case(s: &str) -> Result<Case, String> {
    s.parse::<u8>()
        .map_err(|e| e.to_string())
        .and_then(|id| Case::from_id(id).map_err(|e| e.to_string()))
}

/// A failed run: exit status and message for standard error.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CrossCheck(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

#[derive(Serialize)]
struct SwapTestReport {
    delta: f64,
    p_yes_formula: f64,
    p_yes_circuit: f64,
    max_abs_diff: f64,
}

#[derive(Serialize)]
struct CompareReport {
    /// `|⟨Kφ|ψ⟩|`
    delta: f64,
    p_yes: f64,
    p_no: f64,
    p_yes_formula: f64,
}

#[derive(Serialize)]
struct ClassifyReport {
    samples: usize,
    seed: u64,
    tol: f64,
    #[serde(flatten)]
    classification: Classification,
}

#[derive(Serialize)]
struct SearchReport {
    best_nontriviality: Option<f64>,
    achieved_violation: f64,
    restarts: usize,
    feasible_restarts: usize,
    seed: u64,
    case: Case,
    epsilon: f64,
    ancilla_dims: Vec<usize>,
    antilinear: bool,
    threshold: f64,
    threshold_held: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    summaries: Option<Vec<RestartSummary>>,
}

#[derive(Serialize)]
struct CloningReport {
    #[serde(flatten)]
    result: GameResult,
    clone_index: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    empirical_payoff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rounds: Option<usize>,
}

fn to_json<T: Serialize>(value: &T, indent: usize) -> String {
    let mut buf = Vec::new();
    if indent == 0 {
        serde_json::to_writer(&mut buf, value).expect("report serializes");
    } else {
        let pad = vec![b' '; indent];
        let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
        value.serialize(&mut ser).expect("report serializes");
    }
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

fn save_machine(path: &Option<PathBuf>, machine: &DecisionMachine) -> Result<(), Failure> {
    if let Some(p) = path {
        fs::write(p, machine.to_json())?;
    }
    Ok(())
}

/// Runs one subcommand, returning the report and the exit status to use
/// when the report was produced.
fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    let c = &cli.common;
    match &cli.command {
        Command::SwapTest { a, b } => {
            let a = inputs::state(a, c.norm_tol)?;
            let b = inputs::state(b, c.norm_tol)?;
            let circuit = DecisionMachine::swap_test(a.len()).evaluate(&a, &b)?.p_yes;
            let formula = swap_test_probability(&a, &b)?;
            let report = SwapTestReport {
                delta: a.inner(&b)?.norm(),
                p_yes_formula: formula,
                p_yes_circuit: circuit,
                max_abs_diff: (formula - circuit).abs(),
            };
            Ok((to_json(&report, c.json_indent), 0))
        }
        Command::Compare { map, phi, psi } => {
            let k = match inputs::comparison_map(&map.k, map.antilinear)? {
                ComparisonMap::Linear(op) => op,
                ComparisonMap::AntiLinear(_) => {
                    return Err(Failure {
                        code: 2,
                        message: "the K-comparison circuit needs a unitary K".into(),
                    })
                }
            };
            let machine = DecisionMachine::k_comparison(&k)?;
            let phi = inputs::state(phi, c.norm_tol)?;
            let psi = inputs::state(psi, c.norm_tol)?;
            let d = machine.evaluate(&phi, &psi)?;
            let delta = k.apply(&phi)?.inner(&psi)?.norm();
            let report = CompareReport {
                delta,
                p_yes: d.p_yes,
                p_no: d.p_no,
                p_yes_formula: (1.0 + delta * delta) / 2.0,
            };
            Ok((to_json(&report, c.json_indent), 0))
        }
        Command::Classify {
            map,
            machine,
            samples,
            tol,
        } => {
            let k = inputs::comparison_map(&map.k, map.antilinear)?;
            let machine = inputs::machine(machine, k.dim())?;
            let classification = classify_one_sidedness(&machine, &k, *samples, c.seed, *tol)?;
            let report = ClassifyReport {
                samples: *samples,
                seed: c.seed,
                tol: *tol,
                classification,
            };
            Ok((to_json(&report, c.json_indent), 0))
        }
        Command::Verify {
            map,
            case,
            machine,
            exact_construction,
            ancillas,
            save_machine: save,
        } => {
            let k = inputs::comparison_map(&map.k, map.antilinear)?;
            k.require_nonsingular()?;
            let machine = match (machine, exact_construction) {
                (_, true) => exactly_constrained_machine(&k, *case, ancillas, c.seed)?,
                (Some(m), false) => inputs::machine(m, k.dim())?,
                (None, false) => unreachable!("clap requires one machine source"),
            };
            let report = verify(&machine, &k, *case)?;
            save_machine(save, &machine)?;
            Ok((to_json(&report, c.json_indent), 0))
        }
        Command::Search {
            map,
            case,
            epsilon,
            budget,
            ancillas,
            tol,
            details,
            save_machine: save,
        } => {
            let k = inputs::comparison_map(&map.k, map.antilinear)?;
            let mut config = SearchConfig::new(*case, *epsilon, *budget as usize, c.seed);
            config.ancilla_dims = ancillas.clone();
            let outcome = adversarial_search(&k, &config)?;
            eprintln!(
                "search: {} of {} restarts feasible",
                outcome.feasible_restarts, outcome.restarts
            );
            let exceeded = outcome.best_nontriviality.is_some_and(|n| n > *tol);
            let threshold_held = !(map.antilinear && exceeded);
            if !threshold_held {
                eprintln!("search: anti-linear K admits a nontrivial one-sided machine");
            }
            if let Some(m) = &outcome.best_machine {
                save_machine(save, m)?;
            }
            let report = SearchReport {
                best_nontriviality: outcome.best_nontriviality,
                achieved_violation: outcome.achieved_violation,
                restarts: outcome.restarts,
                feasible_restarts: outcome.feasible_restarts,
                seed: c.seed,
                case: *case,
                epsilon: *epsilon,
                ancilla_dims: ancillas.clone(),
                antilinear: map.antilinear,
                threshold: *tol,
                threshold_held,
                summaries: details.then_some(outcome.summaries),
            };
            Ok((to_json(&report, c.json_indent), if threshold_held { 0 } else { 3 }))
        }
        Command::CloningGame {
            cloner,
            state,
            clone_index,
            sample,
        } => {
            let cloner = inputs::cloner(cloner)?;
            let psi = inputs::state(state, c.norm_tol)?;
            let idx = *clone_index as usize;
            let result = run_game(&cloner, &psi, idx)?;
            let empirical_payoff = match sample {
                Some(n) => Some(sample_game(&cloner, &psi, idx, *n, c.seed)?),
                None => None,
            };
            let report = CloningReport {
                result,
                clone_index: *clone_index,
                empirical_payoff,
                rounds: *sample,
            };
            Ok((to_json(&report, c.json_indent), 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, code)) => {
            let written = match &cli.common.out {
                Some(path) => fs::write(path, &report),
                None => std::io::stdout().write_all(report.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
