//! Dense phase-one simplex for small equality-constrained feasibility problems
//! `A·x = b, x ≥ 0`.
//!
//! One artificial variable is added per row and their sum is minimized with
//! Bland's rule, so the method terminates without cycling.

use crate::error::{IsacError, Result};

const PIVOT_EPS: f64 = 1e-12;
const MAX_PIVOTS: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub enum Phase1Outcome {
    /// A basic solution whose artificial sum is at most the caller's tolerance.
    Feasible { x: Vec<f64>, infeasibility: f64 },
    /// The minimal artificial sum exceeds the tolerance.
    Infeasible { infeasibility: f64 },
}

/// Minimizes `Σ |A·x − b|` over `x ≥ 0` via artificial variables and reports
/// feasibility against `tol`.
pub fn phase_one(a: &[Vec<f64>], b: &[f64], tol: f64) -> Result<Phase1Outcome> {
    let m = a.len();
    if b.len() != m {
        return Err(IsacError::SolverFailure(format!(
            "{m} constraint rows but {} right-hand sides",
            b.len()
        )));
    }
    let n = a.first().map_or(0, Vec::len);
    if a.iter().any(|row| row.len() != n) {
        return Err(IsacError::SolverFailure("ragged constraint matrix".into()));
    }
    if a.iter().flatten().chain(b).any(|v| !v.is_finite()) {
        return Err(IsacError::SolverFailure("non-finite input".into()));
    }

    // Tableau columns: n structural, m artificial, then the right-hand side.
    let width = n + m + 1;
    let mut tab: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, &rhs))| {
            let sign = if rhs < 0.0 { -1.0 } else { 1.0 };
            let mut t = vec![0.0; width];
            for (j, v) in row.iter().enumerate() {
                t[j] = sign * v;
            }
            t[n + i] = 1.0;
            t[width - 1] = sign * rhs;
            t
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost = vec![0.0; width];
    for row in &tab {
        for j in 0..n {
            cost[j] -= row[j];
        }
        cost[width - 1] -= row[width - 1];
    }

    let mut pivots = 0;
    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j] < -PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for (i, row) in tab.iter().enumerate() {
            if row[enter] > PIVOT_EPS {
                let ratio = row[width - 1] / row[enter];
                let better = match leave {
                    None => true,
                    Some(l) => {
                        ratio < best_ratio - PIVOT_EPS
                            || (ratio <= best_ratio + PIVOT_EPS && basis[i] < basis[l])
                    }
                };
                if better {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        // Phase one is bounded below by zero, so an entering column always
        // has a positive entry somewhere.
        let Some(r) = leave else {
            return Err(IsacError::SolverFailure(
                "unbounded direction in a bounded problem".into(),
            ));
        };

        let pivot = tab[r][enter];
        for v in tab[r].iter_mut() {
            *v /= pivot;
        }
        let pivot_row = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != r && row[enter] != 0.0 {
                let f = row[enter];
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
        let f = cost[enter];
        for (v, p) in cost.iter_mut().zip(&pivot_row) {
            *v -= f * p;
        }
        basis[r] = enter;

        pivots += 1;
        if pivots > MAX_PIVOTS {
            return Err(IsacError::SolverFailure("pivot limit exceeded".into()));
        }
        if cost.iter().any(|v| !v.is_finite()) {
            return Err(IsacError::SolverFailure("numerical breakdown".into()));
        }
    }

    let infeasibility = (-cost[width - 1]).max(0.0);
    if infeasibility > tol {
        return Ok(Phase1Outcome::Infeasible { infeasibility });
    }
    let mut x = vec![0.0; n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = tab[i][width - 1].max(0.0);
        }
    }
    Ok(Phase1Outcome::Feasible { x, infeasibility })
}
