//! Closed-form round counts and bounds for the graph families.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Exact,
    Lower,
    Upper,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid parameter: {0}")]
pub struct FormulaError(pub String);

fn need(cond: bool, what: &str) -> Result<(), FormulaError> {
    if cond {
        Ok(())
    } else {
        Err(FormulaError(what.to_string()))
    }
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Largest `i` with `1 + d + ... + d^(i-1) <= k`.
pub fn log_prime(d: usize, k: usize) -> Result<usize, FormulaError> {
    need(d >= 2, "d must be at least 2")?;
    need(k >= 1, "k must be at least 1")?;
    let (mut i, mut total, mut power) = (0usize, 0usize, 1usize);
    while total + power <= k {
        total += power;
        power = power.saturating_mul(d);
        i += 1;
    }
    Ok(i)
}

/// Exact rounds on the complete d-ary tree with `n + 1` levels.
pub fn tree_rounds(d: usize, n: usize, k: usize) -> Result<usize, FormulaError> {
    let lp = log_prime(d, k)?;
    Ok(ceil_div(n, lp))
}

/// `1 + 2 + ... + l`.
pub fn s_of_l(l: usize) -> Result<usize, FormulaError> {
    need(l >= 1, "l must be at least 1")?;
    Ok(l * (l + 1) / 2)
}

/// Lower bound `ceil(2n / (k + 1))` for pyramids.
pub fn pyramid_lower(n: usize, k: usize) -> Result<usize, FormulaError> {
    need(n >= 1, "n must be at least 1")?;
    need(k >= 1, "k must be at least 1")?;
    Ok(ceil_div(2 * n, k + 1))
}

/// Upper bound `ceil(n / l)` for pyramids with `s_l` questions per round.
pub fn pyramid_upper(n: usize, l: usize) -> Result<usize, FormulaError> {
    need(n >= 1, "n must be at least 1")?;
    need(l >= 1, "l must be at least 1")?;
    Ok(ceil_div(n, l))
}

/// Lower bound `ceil(dn / (k - 1 + d))` for generalized pyramids.
pub fn gpy_lower(d: usize, n: usize, k: usize) -> Result<usize, FormulaError> {
    need(d >= 2, "d must be at least 2")?;
    need(n >= 1, "n must be at least 1")?;
    need(k >= 1, "k must be at least 1")?;
    Ok(ceil_div(d * n, k - 1 + d))
}

/// Upper bound `ceil(n / floor((k - 1 + d) / d))` from asking whole levels.
pub fn gpy_layered_upper(d: usize, n: usize, k: usize) -> Result<usize, FormulaError> {
    need(d >= 2, "d must be at least 2")?;
    need(n >= 1, "n must be at least 1")?;
    need(k >= 1, "k must be at least 1")?;
    Ok(ceil_div(n, (k - 1 + d) / d))
}

/// Factor `ceil(k / m)` relating `m` and `k` questions per round.
pub fn ratio_bound(m: usize, k: usize) -> Result<usize, FormulaError> {
    need(m >= 1, "m must be at least 1")?;
    need(k >= m, "k must be at least m")?;
    Ok(ceil_div(k, m))
}

/// Evaluates a formula by name; used by the command line.
pub fn evaluate(name: &str, params: &[usize]) -> Result<(usize, BoundKind), FormulaError> {
    let arity = |n: usize| need(params.len() == n, &format!("{name} takes {n} parameters, got {}", params.len()));
    let p = params;
    match name {
        "log_prime" => arity(2).and_then(|_| log_prime(p[0], p[1]).map(|v| (v, BoundKind::Exact))),
        "tree_rounds" => arity(3).and_then(|_| tree_rounds(p[0], p[1], p[2]).map(|v| (v, BoundKind::Exact))),
        "s_of_l" => arity(1).and_then(|_| s_of_l(p[0]).map(|v| (v, BoundKind::Exact))),
        "pyramid_lower" => arity(2).and_then(|_| pyramid_lower(p[0], p[1]).map(|v| (v, BoundKind::Lower))),
        "pyramid_upper" => arity(2).and_then(|_| pyramid_upper(p[0], p[1]).map(|v| (v, BoundKind::Upper))),
        "gpy_lower" => arity(3).and_then(|_| gpy_lower(p[0], p[1], p[2]).map(|v| (v, BoundKind::Lower))),
        "gpy_layered_upper" => arity(3).and_then(|_| gpy_layered_upper(p[0], p[1], p[2]).map(|v| (v, BoundKind::Upper))),
        "ratio_bound" => arity(2).and_then(|_| ratio_bound(p[0], p[1]).map(|v| (v, BoundKind::Upper))),
        _ => Err(FormulaError(format!("unknown formula `{name}`"))),
    }
}

pub const FORMULA_NAMES: &[&str] =
    &["log_prime", "tree_rounds", "s_of_l", "pyramid_lower", "pyramid_upper", "gpy_lower", "gpy_layered_upper", "ratio_bound"];
