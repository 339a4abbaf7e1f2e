//! Acceptance run: one PASS/FAIL line per criterion, with its runtime budget.
//! Exits non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qcompare_core::cloning::{run_game, Cloner};
use qcompare_core::machines::{swap_test_probability, DecisionMachine};
use qcompare_core::qstate::{haar_state, haar_unitary, AntiLinearMap, ComparisonMap, Operator};
use qcompare_core::seeds::{derive_seed, rng_from_seed};
use qcompare_core::verifier::search::{expm_i_hermitian, hermitian_from_params};
use qcompare_core::verifier::{
    adversarial_search, exactly_constrained_machine, verify, Case, CaseAmplitudes, SearchConfig,
};
use qcompare_core::Complex64;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn swap_test_formula() -> Outcome {
    let machine = DecisionMachine::swap_test(2);
    let mut worst = 0.0f64;
    for i in 0..1000u64 {
        let a = haar_state(2, derive_seed(11, 2 * i));
        let b = haar_state(2, derive_seed(11, 2 * i + 1));
        let circuit = machine.evaluate(&a, &b).map_err(|e| e.to_string())?.p_yes;
        let formula = swap_test_probability(&a, &b).map_err(|e| e.to_string())?;
        worst = worst.max((circuit - formula).abs());
    }
    check(worst <= 1e-10, format!("1000 pairs, max |circuit - formula| = {worst:.2e}"))
}

fn perfect_completeness() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..100u64 {
        let k = haar_unitary(2, derive_seed(12, i));
        let machine = DecisionMachine::k_comparison(&k).map_err(|e| e.to_string())?;
        for j in 0..10u64 {
            let phi = haar_state(2, derive_seed(derive_seed(13, i), j));
            let psi = k.apply(&phi).map_err(|e| e.to_string())?;
            let p_no = machine.evaluate(&phi, &psi).map_err(|e| e.to_string())?.p_no;
            worst = worst.max(p_no);
        }
    }
    check(worst <= 1e-12, format!("100 K x 10 inputs, max p_no = {worst:.2e}"))
}

/// K_orth first, then random maps with entries in the unit box and |det| ≥ 0.1.
fn antilinear_maps(n: usize) -> Vec<ComparisonMap> {
    let mut maps = vec![AntiLinearMap::orthogonalizer().into()];
    let mut rng = rng_from_seed(14);
    while maps.len() < n {
        let mut e = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let rows = vec![vec![e(), e()], vec![e(), e()]];
        let k = AntiLinearMap::new(Operator::from_rows(&rows).expect("square"));
        if k.det_abs() >= 0.1 {
            maps.push(k.into());
        }
    }
    maps
}

fn exact_collapse() -> Outcome {
    let mut worst = 0.0f64;
    for (i, k) in antilinear_maps(20).iter().enumerate() {
        for case in [Case::NoCertain, Case::YesCertain] {
            let m = exactly_constrained_machine(k, case, &[2, 2], i as u64).map_err(|e| e.to_string())?;
            let r = verify(&m, k, case).map_err(|e| e.to_string())?;
            let (x, y) = match r.amplitudes {
                CaseAmplitudes::Case1 { a00, a11 } => (a00, a11),
                CaseAmplitudes::Case2 { b01, b10 } => (b01, b10),
            };
            worst = worst.max(x).max(y);
        }
    }
    check(worst <= 1e-10, format!("20 maps x 2 cases, max forced amplitude = {worst:.2e}"))
}

fn perturb(machine: &DecisionMachine, scale: f64, seed: u64) -> DecisionMachine {
    let n = machine.total_dim();
    let mut rng = rng_from_seed(seed);
    let params: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0) * scale).collect();
    let h = hermitian_from_params(&params, n).expect("parameter count matches");
    let u = Operator::new(machine.unitary().matrix() * expm_i_hermitian(&h)).expect("square");
    machine.with_unitary(u).expect("perturbation keeps unitarity")
}

fn robustness() -> Outcome {
    let maps = antilinear_maps(20);
    let mut counterexamples = 0usize;
    let mut max_ratio = 0.0f64;
    for case in [Case::NoCertain, Case::YesCertain] {
        let bases: Vec<DecisionMachine> = maps
            .iter()
            .enumerate()
            .map(|(i, k)| exactly_constrained_machine(k, case, &[2, 2], i as u64))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for i in 0..10_000u64 {
            let which = (i % 20) as usize;
            // Perturbation sizes spread log-uniformly over 1e-9 .. 1.
            let scale = 10f64.powf(-9.0 + 9.0 * ((i / 20) as f64 / 500.0));
            let m = perturb(&bases[which], scale, derive_seed(15 + case.id() as u64, i));
            let r = verify(&m, &maps[which], case).map_err(|e| e.to_string())?;
            let c = r.bound_constant.ok_or("anti-linear map without a bound")?;
            if r.triviality_gap > c * r.violation + 1e-10 {
                counterexamples += 1;
            }
            if r.violation > 1e-12 {
                max_ratio = max_ratio.max(r.triviality_gap / (c * r.violation));
            }
        }
    }
    check(
        counterexamples == 0,
        format!("2 x 10^4 perturbed machines, {counterexamples} counterexamples, max gap/(C*violation) = {max_ratio:.3}"),
    )
}

fn search_asymmetry() -> Outcome {
    let korth: ComparisonMap = AntiLinearMap::orthogonalizer().into();
    let identity = ComparisonMap::Linear(Operator::identity(2));
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, k, case, want_small) in [
        ("K_orth case 1", &korth, Case::NoCertain, true),
        ("K_orth case 2", &korth, Case::YesCertain, true),
        ("K=I case 2", &identity, Case::YesCertain, false),
    ] {
        let config = SearchConfig::new(case, 1e-6, 50, 0);
        let out = adversarial_search(k, &config).map_err(|e| e.to_string())?;
        let best = out.best_nontriviality;
        ok &= out.feasible_restarts >= 1
            && match (best, want_small) {
                (Some(b), true) => b <= 1e-3,
                (Some(b), false) => b >= 0.2,
                (None, _) => false,
            };
        parts.push(format!(
            "{name}: best {} ({}/{} feasible)",
            best.map_or("none".into(), |b| format!("{b:.3e}")),
            out.feasible_restarts,
            out.restarts
        ));
    }
    check(ok, parts.join("; "))
}

fn cloning_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..100u64 {
        let cloner = Cloner::random(derive_seed(16, i));
        let psi = haar_state(2, derive_seed(17, i));
        let r = run_game(&cloner, &psi, 1 + (i % 2) as usize).map_err(|e| e.to_string())?;
        worst = worst.max((r.expected_payoff - r.fidelity).abs());
    }
    let universal = Cloner::universal();
    let payoffs: Vec<f64> = (0..100u64)
        .map(|i| run_game(&universal, &haar_state(2, derive_seed(18, i)), 1).map(|r| r.expected_payoff))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mean = payoffs.iter().sum::<f64>() / payoffs.len() as f64;
    let var = payoffs.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / payoffs.len() as f64;
    let off = payoffs.iter().map(|p| (p - 5.0 / 6.0).abs()).fold(0.0, f64::max);
    check(
        worst <= 1e-10 && off <= 1e-10 && var <= 1e-16,
        format!("max |payoff - fidelity| = {worst:.2e}; universal max |payoff - 5/6| = {off:.2e}, variance = {var:.2e}"),
    )
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 7] = [
        &["swap-test", "--a", "[[0.6,0],[0,0.8]]", "--b", "[[1,0],[0,0]]"],
        &["compare", "--k", "hadamard", "--phi", "[[0.6,0],[0,0.8]]", "--psi", "[[0,0],[1,0]]"],
        &["classify", "--k", "orth", "--antilinear", "--machine", "swap-test", "--samples", "300", "--seed", "5"],
        &["verify", "--k", "orth", "--antilinear", "--case", "2", "--exact-construction", "--seed", "9"],
        &["search", "--k", "orth", "--antilinear", "--case", "1", "--budget", "4", "--seed", "3", "--details"],
        &["search", "--k", "identity", "--case", "2", "--budget", "1", "--seed", "7"],
        &["cloning-game", "--cloner", "universal", "--state", "[[0.6,0],[0,0.8]]", "--sample", "200000", "--seed", "2"],
    ];
    let exe = env!("CARGO_BIN_EXE_qcompare");
    for args in runs {
        let first = Command::new(exe).args(args).output().map_err(|e| e.to_string())?;
        let second = Command::new(exe).args(args).output().map_err(|e| e.to_string())?;
        if !first.status.success() || first.stdout.is_empty() {
            return Err(format!("{} failed: {}", args[0], String::from_utf8_lossy(&first.stderr)));
        }
        if first.stdout != second.stdout || first.status.code() != second.status.code() {
            return Err(format!("{} output differs between runs", args[0]));
        }
    }
    Ok(format!("{} subcommand runs repeated, byte-identical", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("swap-test formula reproduction", Duration::from_secs(1), swap_test_formula),
        ("perfect completeness of K-comparison", Duration::from_secs(1), perfect_completeness),
        ("exact-constraint collapse", Duration::from_secs(5), exact_collapse),
        ("quantitative robustness", Duration::from_secs(60), robustness),
        ("adversarial search asymmetry", Duration::from_secs(600), search_asymmetry),
        ("cloning game equivalence", Duration::from_secs(5), cloning_equivalence),
        ("CLI determinism", Duration::MAX, determinism),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {budget:?} budget")),
            Err(d) => ("FAIL", d),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {}: {status} {name} [{:.2} s] {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 7 criteria passed", 7 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
