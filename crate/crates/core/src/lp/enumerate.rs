//! Reference solver: enumerate every basic solution of the polytope.

use std::cmp::Ordering;

use itertools::Itertools;

use super::{LpInstance, LpSolution, FEASIBILITY_TOL};
use crate::error::{Error, Result};

const MAX_ARMS: usize = 6;
const MAX_RESOURCES: usize = 5;
const SINGULAR: f64 = 1e-12;

/// Solves the LP by trying every choice of `m` active constraints among
/// `pi_i >= 0`, `sum(pi) <= 1` and `C_j.pi <= b`, keeping the best feasible
/// vertex (lexicographically smallest among ties).
pub fn solve_by_vertex_enumeration(inst: &LpInstance) -> Result<LpSolution> {
    inst.validate()?;
    let m = inst.arms();
    let d = inst.resources();
    if m > MAX_ARMS || d > MAX_RESOURCES {
        return Err(Error::ScaleGuard(format!(
            "vertex enumeration supports m <= {MAX_ARMS}, d <= {MAX_RESOURCES} (got m = {m}, d = {d})"
        )));
    }

    let rows = inst.rows();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for active in (0..rows.len()).combinations(m) {
        let Some(pi) = solve_square(&active.iter().map(|&r| rows[r].clone()).collect::<Vec<_>>()) else {
            continue;
        };
        if inst.violation(&pi) > FEASIBILITY_TOL {
            continue;
        }
        let value = inst.value_of(&pi);
        let better = match &best {
            None => true,
            Some((bv, bpi)) => {
                if (value - bv).abs() <= FEASIBILITY_TOL {
                    lex_cmp(&pi, bpi) == Ordering::Less
                } else {
                    value > *bv
                }
            }
        };
        if better {
            best = Some((value, pi));
        }
    }
    // The origin is always a feasible vertex, so `best` is set.
    let (_, pi) = best.expect("origin is a vertex");
    Ok(LpSolution::from_pi(inst, pi))
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > FEASIBILITY_TOL {
            return x.partial_cmp(y).unwrap_or(Ordering::Equal);
        }
    }
    Ordering::Equal
}

/// Gaussian elimination with partial pivoting; `None` when singular.
pub(super) fn solve_square(rows: &[(Vec<f64>, f64)]) -> Option<Vec<f64>> {
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows
        .iter()
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(*b);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < SINGULAR {
            return None;
        }
        a.swap(col, piv);
        for i in 0..n {
            if i != col {
                let f = a[i][col] / a[col][col];
                if f != 0.0 {
                    for k in col..=n {
                        a[i][k] -= f * a[col][k];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}
