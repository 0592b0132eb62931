//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Solves `max c.x` subject to `a_i.x <= b_i` and `x >= 0`. Rows with a
//! negative right-hand side get an artificial variable and are handled in
//! phase one.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-12;
const COST_EPS: f64 = 1e-11;
const FEASIBILITY_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Constraint {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, rhs: f64) -> Self {
        Constraint { coeffs, rhs }
    }
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// Reduced costs `c_j - c_B B^-1 A_j` of the current phase.
    reduced: Vec<f64>,
    value: f64,
    ncols: usize,
    /// Columns allowed to enter the basis.
    allowed: Vec<bool>,
}

impl Tableau {
    fn set_costs(&mut self, costs: &[f64]) {
        self.reduced = costs.to_vec();
        self.value = 0.0;
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = costs[b];
            if cb != 0.0 {
                for (r, a) in self.reduced.iter_mut().zip(row) {
                    *r -= cb * a;
                }
                self.value += cb * row[self.ncols];
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != 0.0 {
                for (v, pv) in r.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                r[col] = 0.0;
            }
        }
        let f = self.reduced[col];
        if f != 0.0 {
            for (v, pv) in self.reduced.iter_mut().zip(&pivot_row[..self.ncols]) {
                *v -= f * pv;
            }
            self.value += f * pivot_row[self.ncols];
            self.reduced[col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// Runs Bland's rule to optimality for the current costs.
    fn optimize(&mut self) -> Result<()> {
        for _ in 0..MAX_PIVOTS {
            let Some(col) = (0..self.ncols).find(|&j| self.allowed[j] && self.reduced[j] > COST_EPS)
            else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[col];
                if a <= PIVOT_EPS {
                    continue;
                }
                let ratio = row[self.ncols] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        let tie = (ratio - lr).abs() <= 1e-12 * (1.0 + lr.abs());
                        if ratio < lr && !tie || tie && self.basis[i] < self.basis[li] {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return Err(Error::Unbounded),
            }
        }
        Err(Error::InvalidLp("pivot limit reached".into()))
    }
}

pub(crate) fn maximize(objective: &[f64], constraints: &[Constraint]) -> Result<Vec<f64>> {
    let n = objective.len();
    let k = constraints.len();
    let flipped: Vec<bool> = constraints.iter().map(|c| c.rhs < 0.0).collect();
    let n_art = flipped.iter().filter(|&&f| f).count();
    let ncols = n + k + n_art;

    let mut rows = Vec::with_capacity(k);
    let mut basis = Vec::with_capacity(k);
    let mut art = n + k;
    for (i, c) in constraints.iter().enumerate() {
        let sign = if flipped[i] { -1.0 } else { 1.0 };
        let mut row = vec![0.0; ncols + 1];
        for (v, a) in row.iter_mut().zip(&c.coeffs) {
            *v = sign * a;
        }
        row[n + i] = sign;
        row[ncols] = sign * c.rhs;
        if flipped[i] {
            row[art] = 1.0;
            basis.push(art);
            art += 1;
        } else {
            basis.push(n + i);
        }
        rows.push(row);
    }

    let mut tab = Tableau {
        rows,
        basis,
        reduced: Vec::new(),
        value: 0.0,
        ncols,
        allowed: vec![true; ncols],
    };

    if n_art > 0 {
        let mut phase1 = vec![0.0; ncols];
        for c in phase1.iter_mut().skip(n + k) {
            *c = -1.0;
        }
        tab.set_costs(&phase1);
        tab.optimize()?;
        if tab.value < -FEASIBILITY_TOL {
            return Err(Error::Infeasible);
        }
        // Drive zero-valued artificials out of the basis; rows where that is
        // impossible are redundant.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= n + k {
                let col = (0..n + k).find(|&j| tab.rows[i][j].abs() > 1e-9);
                match col {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for a in tab.allowed.iter_mut().skip(n + k) {
            *a = false;
        }
    }

    let mut costs = vec![0.0; ncols];
    costs[..n].copy_from_slice(objective);
    tab.set_costs(&costs);
    tab.optimize()?;

    let mut x = vec![0.0; n];
    for (row, &b) in tab.rows.iter().zip(&tab.basis) {
        if b < n {
            x[b] = row[ncols];
        }
    }
    Ok(x)
}
