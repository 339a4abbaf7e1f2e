//! Adversarial search for a non-trivial one-sided machine.
//!
//! Machines are points `U = B · exp(iH)` of a chart around a base unitary `B`
//! (Hermitian `H`, `n²` real parameters). `H = 0` reproduces `B` exactly, so
//! starting a restart at the SWAP-test machine puts that witness in the family.
//!
//! The optimizer maximizes the mean forbidden-answer probability on the
//! unconstrained input class while penalizing the forbidden-answer
//! probability on the constrained class (the proof probes plus sampled pairs),
//! with a penalty weight that grows stage by stage. Steps are Riemannian
//! gradient steps `U ← U · exp(-iηG)` with an Armijo backtracking line search;
//! every accepted step rebases the chart, so the iterate always stays exactly
//! in the family. The best point with constraint violation `≤ ε` seen along
//! the way is kept.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::nontrivial::nontriviality;
use super::probes::build_probe_set;
use super::Case;
use crate::error::{Error, Result};
use crate::machines::{matched_pair, mismatched_pair, DecisionMachine};
use crate::qstate::ortho::extend_orthonormal;
use crate::qstate::{haar_unitary, index_to_digits, ComparisonMap, Operator, StateVector};
use crate::seeds::{derive_seed, rng_from_seed};

const SAMPLE_STREAM: u64 = 0;
const EVAL_STREAM: u64 = u64::MAX;
const ARMIJO: f64 = 1e-4;
const REUNITARIZE_EVERY: usize = 25;

#[derive(Clone, Debug, Serialize)]
pub struct SearchConfig {
    pub case: Case,
    /// The first factor is the answer qubit.
    pub ancilla_dims: Vec<usize>,
    /// Feasibility bound on the constraint violation (an amplitude).
    pub epsilon: f64,
    /// Number of restarts; restart 0 starts at the SWAP-test based witness.
    pub restarts: usize,
    pub seed: u64,
    pub constraint_samples: usize,
    pub objective_samples: usize,
    /// Fresh samples used to score the returned machines.
    pub eval_samples: usize,
    pub penalty_schedule: Vec<f64>,
    pub iterations_per_stage: usize,
}

impl SearchConfig {
    pub fn new(case: Case, epsilon: f64, restarts: usize, seed: u64) -> Self {
        Self {
            case,
            ancilla_dims: vec![2, 2],
            epsilon,
            restarts,
            seed,
            constraint_samples: 16,
            objective_samples: 16,
            eval_samples: 256,
            penalty_schedule: vec![1.0, 10.0, 1e2, 1e3, 1e4, 1e6, 1e8],
            iterations_per_stage: 120,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StartKind {
    Witness,
    Haar,
}

#[derive(Clone, Debug, Serialize)]
pub struct RestartSummary {
    pub index: usize,
    pub start: StartKind,
    pub feasible: bool,
    /// Violation of the best feasible point, or of the final iterate.
    pub violation: f64,
    /// Evaluation-sample nontriviality of the best feasible point.
    pub nontriviality: Option<f64>,
    pub accepted_steps: usize,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub best_machine: Option<DecisionMachine>,
    pub best_nontriviality: Option<f64>,
    pub achieved_violation: f64,
    pub restarts: usize,
    pub feasible_restarts: usize,
    pub summaries: Vec<RestartSummary>,
}

/// Real parameters to a Hermitian matrix: `n` diagonal entries, then the real
/// and imaginary parts of each upper-triangular entry in row-major order.
pub fn hermitian_from_params(params: &[f64], n: usize) -> Result<DMatrix<Complex64>> {
    if params.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: params.len(),
        });
    }
    let mut h = DMatrix::zeros(n, n);
    let mut it = params.iter();
    for i in 0..n {
        h[(i, i)] = Complex64::new(*it.next().expect("length checked"), 0.0);
    }
    for i in 0..n {
        for j in i + 1..n {
            let re = *it.next().expect("length checked");
            let im = *it.next().expect("length checked");
            h[(i, j)] = Complex64::new(re, im);
            h[(j, i)] = Complex64::new(re, -im);
        }
    }
    Ok(h)
}

/// `exp(iH)` for Hermitian `H` by scaling and squaring of the Taylor series.
pub fn expm_i_hermitian(h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = h.nrows();
    let x = h * Complex64::new(0.0, 1.0);
    let norm1 = (0..n)
        .map(|j| x.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let y = x / Complex64::new(2f64.powi(squarings), 0.0);
    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=24 {
        term = &term * &y / Complex64::new(k as f64, 0.0);
        result += &term;
        if term.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// The family `{ base · exp(iH) }`.
#[derive(Clone, Debug)]
pub struct UnitaryChart {
    base: DMatrix<Complex64>,
}

impl UnitaryChart {
    pub fn new(base: &Operator) -> Self {
        Self {
            base: base.matrix().clone(),
        }
    }

    pub fn param_count(&self) -> usize {
        self.base.nrows() * self.base.nrows()
    }

    pub fn point(&self, params: &[f64]) -> Result<Operator> {
        let h = hermitian_from_params(params, self.base.nrows())?;
        Operator::new(&self.base * expm_i_hermitian(&h))
    }
}

/// `f(U) = Σ_k w_k ‖Π U x_k‖²` with `Π` the projector onto the forbidden
/// answer; the first `n_constraints` columns are the constrained inputs.
struct Objective {
    inputs: DMatrix<Complex64>,
    forbidden_rows: Vec<bool>,
    n_constraints: usize,
}

struct Evaluation {
    value: f64,
    violation: f64,
    train_nontriviality: f64,
    projected: DMatrix<Complex64>,
}

impl Objective {
    fn weights(&self, penalty: f64) -> Vec<f64> {
        let m = self.inputs.ncols();
        let n_obj = (m - self.n_constraints).max(1) as f64;
        (0..m)
            .map(|k| if k < self.n_constraints { penalty } else { -1.0 / n_obj })
            .collect()
    }

    fn evaluate(&self, u: &DMatrix<Complex64>, penalty: f64) -> Evaluation {
        let mut y = u * &self.inputs;
        for (r, &keep) in self.forbidden_rows.iter().enumerate() {
            if !keep {
                y.row_mut(r).fill(Complex64::new(0.0, 0.0));
            }
        }
        let col_sq: Vec<f64> = (0..y.ncols()).map(|k| y.column(k).norm_squared()).collect();
        let weights = self.weights(penalty);
        let value = col_sq.iter().zip(&weights).map(|(s, w)| s * w).sum();
        let violation = col_sq[..self.n_constraints]
            .iter()
            .copied()
            .fold(0.0, f64::max)
            .sqrt();
        let train_nontriviality = col_sq[self.n_constraints..]
            .iter()
            .copied()
            .fold(0.0, f64::max);
        Evaluation {
            value,
            violation,
            train_nontriviality,
            projected: y,
        }
    }

    /// Riemannian gradient `G` (Hermitian) with `d/dt f(U exp(itE)) = tr(E G)`.
    fn gradient(&self, u: &DMatrix<Complex64>, eval: &Evaluation, penalty: f64) -> DMatrix<Complex64> {
        let z = u.adjoint() * &eval.projected;
        let weights = self.weights(penalty);
        let mut b = DMatrix::<Complex64>::zeros(u.nrows(), u.ncols());
        for (k, w) in weights.iter().enumerate() {
            b += self.inputs.column(k) * z.column(k).adjoint() * Complex64::new(*w, 0.0);
        }
        (&b - b.adjoint()) * Complex64::new(0.0, 1.0)
    }
}

fn reunitarize(u: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut cols: Vec<DVector<Complex64>> = Vec::with_capacity(u.ncols());
    for j in 0..u.ncols() {
        let added = extend_orthonormal(&mut cols, &u.column(j).into_owned(), 1e-8);
        debug_assert!(added);
    }
    DMatrix::from_columns(&cols)
}

struct RestartResult {
    summary: RestartSummary,
    best: Option<(DecisionMachine, f64, f64)>,
}

fn witness_machine(k: &ComparisonMap, ancilla_dims: &[usize]) -> Result<DecisionMachine> {
    let base = match k {
        ComparisonMap::Linear(op) if op.is_unitary() => DecisionMachine::k_comparison(op)?,
        _ => DecisionMachine::swap_test(k.dim()),
    };
    base.with_extra_ancillas(&ancilla_dims[1..])
}

fn build_objective(
    k: &ComparisonMap,
    config: &SearchConfig,
    layout: &DecisionMachine,
) -> Result<Objective> {
    let probes = build_probe_set(k)?;
    let mut rng = rng_from_seed(derive_seed(config.seed, SAMPLE_STREAM));
    let mut constrained: Vec<StateVector> = Vec::new();
    let mut objective: Vec<StateVector> = Vec::new();
    match config.case {
        Case::NoCertain => {
            constrained.extend(probes.mismatched().iter().map(|p| p.normalized.clone()));
            for _ in 0..config.constraint_samples {
                let (phi, psi) = mismatched_pair(k, &mut rng)?;
                constrained.push(phi.tensor(&psi));
            }
            for _ in 0..config.objective_samples {
                let (phi, psi) = matched_pair(k, &mut rng)?;
                objective.push(phi.tensor(&psi));
            }
        }
        Case::YesCertain => {
            constrained.extend(probes.matched().iter().map(|p| p.normalized.clone()));
            for _ in 0..config.constraint_samples {
                let (phi, psi) = matched_pair(k, &mut rng)?;
                constrained.push(phi.tensor(&psi));
            }
            for _ in 0..config.objective_samples {
                let (phi, psi) = mismatched_pair(k, &mut rng)?;
                objective.push(phi.tensor(&psi));
            }
        }
    }
    let columns: Vec<DVector<Complex64>> = constrained
        .iter()
        .chain(&objective)
        .map(|s| {
            layout
                .embed_input(s)
                .map(|e| DVector::from_column_slice(e.amplitudes()))
        })
        .collect::<Result<_>>()?;
    let dims = layout.factor_dims();
    let forbidden = config.case.forbidden_answer().outcome();
    let forbidden_rows = (0..layout.total_dim())
        .map(|i| index_to_digits(&dims, i)[layout.output_qubit()] == forbidden)
        .collect();
    Ok(Objective {
        inputs: DMatrix::from_columns(&columns),
        forbidden_rows,
        n_constraints: constrained.len(),
    })
}

fn run_restart(
    index: usize,
    k: &ComparisonMap,
    config: &SearchConfig,
    objective: &Objective,
    witness: &DecisionMachine,
) -> Result<RestartResult> {
    let (start, start_machine) = if index == 0 {
        (StartKind::Witness, witness.clone())
    } else {
        let seed = derive_seed(config.seed, index as u64);
        let u = haar_unitary(witness.total_dim(), seed);
        (StartKind::Haar, witness.with_unitary(u)?)
    };
    let chart = UnitaryChart::new(start_machine.unitary());
    let mut u = chart.point(&vec![0.0; chart.param_count()])?.matrix().clone();

    let mut best: Option<(DMatrix<Complex64>, f64, f64)> = None;
    let mut consider = |u: &DMatrix<Complex64>, e: &Evaluation| {
        if e.violation <= config.epsilon
            && best
                .as_ref()
                .is_none_or(|(_, nt, _)| e.train_nontriviality > *nt)
        {
            best = Some((u.clone(), e.train_nontriviality, e.violation));
        }
    };

    let mut accepted = 0usize;
    let mut last_violation = f64::INFINITY;
    for &penalty in &config.penalty_schedule {
        let mut eval = objective.evaluate(&u, penalty);
        consider(&u, &eval);
        let mut eta = f64::INFINITY;
        for _ in 0..config.iterations_per_stage {
            let g = objective.gradient(&u, &eval, penalty);
            let g_norm2 = g.norm_squared();
            if g_norm2 < 1e-30 {
                break;
            }
            let g_norm = g_norm2.sqrt();
            eta = (eta * 2.0).min(1.0 / g_norm);
            let mut stepped = None;
            while eta * g_norm > 1e-14 {
                let step = expm_i_hermitian(&(&g * Complex64::new(-eta, 0.0)));
                let trial = &u * step;
                let trial_eval = objective.evaluate(&trial, penalty);
                if trial_eval.value <= eval.value - ARMIJO * eta * g_norm2 {
                    stepped = Some((trial, trial_eval));
                    break;
                }
                eta *= 0.5;
            }
            let Some((mut next, mut next_eval)) = stepped else {
                break;
            };
            accepted += 1;
            if accepted.is_multiple_of(REUNITARIZE_EVERY) {
                next = reunitarize(&next);
                next_eval = objective.evaluate(&next, penalty);
            }
            u = next;
            eval = next_eval;
            consider(&u, &eval);
        }
        last_violation = eval.violation;
    }

    let best = match best {
        Some((u_best, _, violation)) => {
            let machine = witness.with_unitary(Operator::new(reunitarize(&u_best))?)?;
            let nt = nontriviality(
                &machine,
                k,
                config.case,
                config.eval_samples,
                derive_seed(config.seed, EVAL_STREAM),
            )?;
            Some((machine, nt, violation))
        }
        None => None,
    };
    Ok(RestartResult {
        summary: RestartSummary {
            index,
            start,
            feasible: best.is_some(),
            violation: best.as_ref().map_or(last_violation, |b| b.2),
            nontriviality: best.as_ref().map(|b| b.1),
            accepted_steps: accepted,
        },
        best,
    })
}

/// Searches for the most non-trivial machine whose constraint violation stays
/// within `epsilon`. Restarts run in parallel; the reduction is a max with
/// ties going to the lowest restart index, so results depend only on the seed.
pub fn adversarial_search(k: &ComparisonMap, config: &SearchConfig) -> Result<SearchOutcome> {
    if config.restarts == 0 {
        return Err(Error::InvalidArgument("budget must be at least one restart".into()));
    }
    if config.ancilla_dims.first() != Some(&2) {
        return Err(Error::InvalidFactor(
            "the first ancilla factor must be the answer qubit".into(),
        ));
    }
    if config.penalty_schedule.is_empty() {
        return Err(Error::InvalidArgument("empty penalty schedule".into()));
    }
    let witness = witness_machine(k, &config.ancilla_dims)?;
    let objective = build_objective(k, config, &witness)?;

    let results: Vec<RestartResult> = (0..config.restarts)
        .into_par_iter()
        .map(|i| run_restart(i, k, config, &objective, &witness))
        .collect::<Result<_>>()?;

    let mut best: Option<(DecisionMachine, f64, f64)> = None;
    for r in &results {
        if let Some((m, nt, v)) = &r.best {
            if best.as_ref().is_none_or(|(_, b, _)| nt > b) {
                best = Some((m.clone(), *nt, *v));
            }
        }
    }
    let feasible_restarts = results.iter().filter(|r| r.best.is_some()).count();
    let achieved_violation = match &best {
        Some((_, _, v)) => *v,
        None => results
            .iter()
            .map(|r| r.summary.violation)
            .fold(f64::INFINITY, f64::min),
    };
    Ok(SearchOutcome {
        best_nontriviality: best.as_ref().map(|b| b.1),
        best_machine: best.map(|b| b.0),
        achieved_violation,
        restarts: config.restarts,
        feasible_restarts,
        summaries: results.into_iter().map(|r| r.summary).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{haar_unitary, AntiLinearMap};

    #[test]
    fn expm_matches_eigendecomposition() {
        // exp(iθX) = cos θ I + i sin θ X
        let theta = 0.7;
        let x = Operator::pauli_x().matrix() * Complex64::new(theta, 0.0);
        let e = expm_i_hermitian(&x);
        assert!((e[(0, 0)] - Complex64::new(theta.cos(), 0.0)).norm() < 1e-15);
        assert!((e[(0, 1)] - Complex64::new(0.0, theta.sin())).norm() < 1e-15);
        let big = hermitian_from_params(&(0..64).map(|i| (i as f64 * 0.37).sin() * 3.0).collect::<Vec<_>>(), 8).unwrap();
        let u = Operator::new(expm_i_hermitian(&big)).unwrap();
        assert!(u.unitarity_defect() < 1e-12);
    }

    #[test]
    fn chart_origin_is_base() {
        let swap = DecisionMachine::swap_test(2).with_extra_ancillas(&[2]).unwrap();
        let chart = UnitaryChart::new(swap.unitary());
        let at_zero = chart.point(&vec![0.0; chart.param_count()]).unwrap();
        assert_eq!(at_zero.max_abs_diff(swap.unitary()).unwrap(), 0.0);
        let mut p = vec![0.0; chart.param_count()];
        p[5] = 1e-7;
        let near = chart.point(&p).unwrap();
        assert!(near.max_abs_diff(swap.unitary()).unwrap() < 1e-6);
        assert!(chart.point(&[0.0; 3]).is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let k: ComparisonMap = AntiLinearMap::orthogonalizer().into();
        let mut config = SearchConfig::new(Case::YesCertain, 1e-6, 1, 3);
        config.ancilla_dims = vec![2];
        let witness = witness_machine(&k, &config.ancilla_dims).unwrap();
        let objective = build_objective(&k, &config, &witness).unwrap();
        let u = haar_unitary(8, 9).matrix().clone();
        let penalty = 3.0;
        let eval = objective.evaluate(&u, penalty);
        let g = objective.gradient(&u, &eval, penalty);
        // Directional derivative along a fixed Hermitian direction E: tr(E G).
        let e = hermitian_from_params(&(0..64).map(|i| ((i * 7 % 11) as f64 - 5.0) / 5.0).collect::<Vec<_>>(), 8).unwrap();
        let analytic = (&e * &g).trace().re;
        let h = 1e-6;
        let plus = objective.evaluate(&(&u * expm_i_hermitian(&(&e * Complex64::new(h, 0.0)))), penalty).value;
        let minus = objective.evaluate(&(&u * expm_i_hermitian(&(&e * Complex64::new(-h, 0.0)))), penalty).value;
        let fd = (plus - minus) / (2.0 * h);
        assert!((analytic - fd).abs() < 1e-6 * (1.0 + fd.abs()), "{analytic} vs {fd}");
    }

    #[test]
    fn witness_restart_is_feasible_for_identity() {
        let k: ComparisonMap = Operator::identity(2).into();
        let mut config = SearchConfig::new(Case::YesCertain, 1e-9, 1, 0);
        config.iterations_per_stage = 10;
        let out = adversarial_search(&k, &config).unwrap();
        assert_eq!(out.feasible_restarts, 1);
        assert!(out.best_nontriviality.unwrap() >= 0.2);
    }

    #[test]
    fn deterministic() {
        let k: ComparisonMap = AntiLinearMap::orthogonalizer().into();
        let mut config = SearchConfig::new(Case::YesCertain, 1e-6, 2, 11);
        config.ancilla_dims = vec![2];
        config.iterations_per_stage = 20;
        let a = adversarial_search(&k, &config).unwrap();
        let b = adversarial_search(&k, &config).unwrap();
        assert_eq!(a.best_nontriviality, b.best_nontriviality);
        assert_eq!(a.achieved_violation, b.achieved_violation);
        assert!(adversarial_search(&k, &SearchConfig::new(Case::YesCertain, 1e-6, 0, 1)).is_err());
    }
}
