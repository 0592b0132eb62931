//! The single-step allocation LP
//!
//! ```text
//! max  g.pi   s.t.  C_j.pi <= b  (j = 1..d),  pi >= 0,  sum(pi) <= 1
//! ```
//!
//! The mass `1 - sum(pi)` goes to the null action, which keeps `pi = 0`
//! feasible for any costs. Among optimal solutions the lexicographically
//! smallest `pi` is returned.

mod enumerate;
mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use enumerate::solve_by_vertex_enumeration;
use simplex::{maximize, Constraint};

/// Tolerance for feasibility checks on returned solutions.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Slack allowed when pinning the optimal value and earlier coordinates
/// during the lexicographic pass.
const LEX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpInstance {
    pub objective: Vec<f64>,
    /// `costs[a][j]`: consumption of resource `j` by arm `a`.
    pub costs: Vec<Vec<f64>>,
    pub rate: f64,
}

impl LpInstance {
    pub fn arms(&self) -> usize {
        self.objective.len()
    }

    pub fn resources(&self) -> usize {
        self.costs.first().map_or(0, Vec::len)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.arms();
        if m == 0 {
            return Err(Error::InvalidLp("need at least one arm".into()));
        }
        if self.costs.len() != m {
            return Err(Error::InvalidLp(format!("{} cost rows for {m} arms", self.costs.len())));
        }
        let d = self.resources();
        if d == 0 || self.costs.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidLp("cost rows must be non-empty and equally long".into()));
        }
        if !(self.rate.is_finite() && self.rate > 0.0) {
            return Err(Error::InvalidLp("rate must be positive".into()));
        }
        let finite = self.objective.iter().chain(self.costs.iter().flatten()).all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidLp("entries must be finite".into()));
        }
        Ok(())
    }

    fn constraints(&self) -> Vec<Constraint> {
        let m = self.arms();
        let mut cons = Vec::with_capacity(self.resources() + 1);
        cons.push(Constraint::new(vec![1.0; m], 1.0));
        for j in 0..self.resources() {
            cons.push(Constraint::new(self.costs.iter().map(|row| row[j]).collect(), self.rate));
        }
        cons
    }

    /// Every constraint, `pi_i >= 0` first, as a row `a.pi <= rhs`.
    pub(crate) fn rows(&self) -> Vec<(Vec<f64>, f64)> {
        let m = self.arms();
        let mut rows: Vec<(Vec<f64>, f64)> = (0..m)
            .map(|i| {
                let mut a = vec![0.0; m];
                a[i] = -1.0;
                (a, 0.0)
            })
            .collect();
        rows.push((vec![1.0; m], 1.0));
        for j in 0..self.resources() {
            rows.push((self.costs.iter().map(|c| c[j]).collect(), self.rate));
        }
        rows
    }

    pub fn value_of(&self, pi: &[f64]) -> f64 {
        self.objective.iter().zip(pi).map(|(g, p)| g * p).sum()
    }

    /// Largest violation of any constraint by `pi` (0 when feasible).
    pub fn violation(&self, pi: &[f64]) -> f64 {
        let mut worst = pi.iter().map(|&p| -p).fold(0.0, f64::max);
        worst = worst.max(pi.iter().sum::<f64>() - 1.0);
        for j in 0..self.resources() {
            let used: f64 = self.costs.iter().zip(pi).map(|(row, p)| row[j] * p).sum();
            worst = worst.max(used - self.rate);
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub pi: Vec<f64>,
    pub null_mass: f64,
    pub value: f64,
}

impl LpSolution {
    /// Point mass on `arm` (or on the null action for `None`).
    pub fn point_mass(m: usize, arm: Option<usize>, objective: Option<&[f64]>) -> Self {
        let mut pi = vec![0.0; m];
        if let Some(a) = arm {
            pi[a] = 1.0;
        }
        let value = match (arm, objective) {
            (Some(a), Some(g)) => g[a],
            _ => 0.0,
        };
        LpSolution {
            pi,
            null_mass: if arm.is_some() { 0.0 } else { 1.0 },
            value,
        }
    }

    pub(crate) fn from_pi(inst: &LpInstance, mut pi: Vec<f64>) -> Self {
        for p in pi.iter_mut() {
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let total: f64 = pi.iter().sum();
        if total > 1.0 {
            for p in pi.iter_mut() {
                *p /= total;
            }
        }
        let null_mass = (1.0 - pi.iter().sum::<f64>()).max(0.0);
        let value = inst.value_of(&pi);
        LpSolution {
            pi,
            null_mass,
            value,
        }
    }
}

/// Global optimum by two-phase simplex, refined to the lexicographically
/// smallest optimal `pi`.
pub fn solve(inst: &LpInstance) -> Result<LpSolution> {
    inst.validate()?;
    let m = inst.arms();
    let mut cons = inst.constraints();
    let mut pi = maximize(&inst.objective, &cons)?;
    let best = inst.value_of(&pi);

    // Pin the optimal value, then minimize pi_0, pi_1, ... in turn.
    let neg: Vec<f64> = inst.objective.iter().map(|g| -g).collect();
    cons.push(Constraint::new(neg, -(best - LEX_TOL * (1.0 + best.abs()))));
    for k in 0..m {
        let mut unit = vec![0.0; m];
        unit[k] = -1.0;
        match maximize(&unit, &cons) {
            Ok(next) => pi = next,
            // Numerical trouble in a refinement step: keep the last optimum.
            Err(_) => break,
        }
        let mut pin = vec![0.0; m];
        pin[k] = 1.0;
        cons.push(Constraint::new(pin, pi[k] + LEX_TOL));
    }

    if let Some(vertex) = polish(inst, &pi) {
        pi = vertex;
    }
    let sol = LpSolution::from_pi(inst, pi);
    debug_assert!(
        inst.violation(&sol.pi) <= FEASIBILITY_TOL,
        "LP solution violates constraints by {}",
        inst.violation(&sol.pi)
    );
    Ok(sol)
}

/// Recomputes the vertex that `pi` approximates from its active
/// constraints, removing the slack left by the tolerance pins. Returns
/// `None` if the active set does not pin down a feasible vertex close to
/// `pi` with at least its value.
fn polish(inst: &LpInstance, pi: &[f64]) -> Option<Vec<f64>> {
    const ACTIVE: f64 = 1e-7;
    let m = inst.arms();
    let rows = inst.rows();
    let mut order: Vec<(f64, usize)> = rows
        .iter()
        .enumerate()
        .map(|(i, (a, rhs))| (rhs - a.iter().zip(pi).map(|(x, p)| x * p).sum::<f64>(), i))
        .filter(|(slack, _)| slack.abs() <= ACTIVE)
        .collect();
    order.sort_by(|x, y| x.0.abs().total_cmp(&y.0.abs()).then(x.1.cmp(&y.1)));

    // Greedily keep linearly independent active rows (Gram-Schmidt).
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut chosen = Vec::new();
    for &(_, i) in &order {
        let mut v = rows[i].0.clone();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for q in &basis {
            let dot: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(q).for_each(|(a, b)| *a -= dot * b);
        }
        let rest = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if rest > 1e-9 * norm.max(1.0) {
            v.iter_mut().for_each(|a| *a /= rest);
            basis.push(v);
            chosen.push(rows[i].clone());
            if chosen.len() == m {
                break;
            }
        }
    }
    if chosen.len() < m {
        return None;
    }
    let vertex: Vec<f64> = enumerate::solve_square(&chosen)?.into_iter().map(|x| x + 0.0).collect();
    let close = vertex.iter().zip(pi).all(|(v, p)| (v - p).abs() <= 1e-6);
    let good = inst.violation(&vertex) <= 1e-12 && inst.value_of(&vertex) >= inst.value_of(pi) - 1e-12;
    (close && good).then_some(vertex)
}
