//! Turning command-line arguments into core values. Literals may be given
//! inline (anything starting with `[`) or as a path to a file holding one.

use std::fs;

use qcompare_core::Complex64;
use qcompare_core::cloning::Cloner;
use qcompare_core::machines::{Answer, DecisionMachine};
use qcompare_core::qstate::literal::{parse_matrix, parse_state};
use qcompare_core::qstate::{AntiLinearMap, ComparisonMap, Operator, StateVector};
use qcompare_core::{Error, Result};

fn literal_text(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('[') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))
    }
}

/// A state literal. Vectors whose norm is within `norm_tol` of 1 are
/// renormalized (hand-typed decimals like 0.7071 are not exact); anything
/// further off is rejected.
pub fn state(arg: &str, norm_tol: f64) -> Result<StateVector> {
    let s = parse_state(&literal_text(arg)?)?;
    let norm = s.norm();
    if (norm - 1.0).abs() > norm_tol {
        return Err(Error::NotNormalized { norm });
    }
    s.normalized()
}

fn preset_matrix(name: &str) -> Option<Operator> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let rows = match name {
        "orth" => vec![vec![c(0., 0.), c(-1., 0.)], vec![c(1., 0.), c(0., 0.)]],
        "identity" | "id" | "conj" => return Some(Operator::identity(2)),
        "x" => vec![vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]],
        "hadamard" | "h" => return Some(Operator::hadamard()),
        _ => return None,
    };
    Some(Operator::from_rows(&rows).expect("square preset"))
}

/// `K` from a preset name (`orth`, `identity`/`conj`, `x`, `hadamard`), an
/// inline matrix literal or a file. With `antilinear` the matrix is the linear
/// part of `K = A·conj`.
pub fn comparison_map(arg: &str, antilinear: bool) -> Result<ComparisonMap> {
    let a = match preset_matrix(arg) {
        Some(m) => m,
        None => parse_matrix(&literal_text(arg)?)?,
    };
    Ok(if antilinear {
        AntiLinearMap::new(a).into()
    } else {
        ComparisonMap::Linear(a)
    })
}

/// A machine preset (`swap-test`, `always-yes`, `always-no`) on `dim`-level
/// inputs, or a machine JSON file.
pub fn machine(arg: &str, dim: usize) -> Result<DecisionMachine> {
    match arg {
        "swap-test" => Ok(DecisionMachine::swap_test(dim)),
        "always-yes" => Ok(DecisionMachine::constant(dim, dim, Answer::Yes)),
        "always-no" => Ok(DecisionMachine::constant(dim, dim, Answer::No)),
        path => {
            let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            DecisionMachine::from_json(&text)
        }
    }
}

pub fn cloner(arg: &str) -> Result<Cloner> {
    match arg {
        "universal" => Ok(Cloner::universal()),
        "trivial" => Ok(Cloner::trivial(2)),
        path => {
            let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            Cloner::from_json(&text)
        }
    }
}

/// Factor dimensions. A named alias so clap parses one comma-separated value
/// instead of a repeated flag.
pub type Dims = Vec<usize>;

/// Comma-separated factor dimensions such as `2,2`.
pub fn dims(arg: &str) -> std::result::Result<Dims, String> {
    arg.split(',')
        .map(|d| match d.trim().parse::<usize>() {
            Ok(n) if n >= 2 => Ok(n),
            _ => Err(format!("invalid factor dimension {d:?}")),
        })
        .collect()
}
