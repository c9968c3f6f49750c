//! Dense two-phase simplex for small equality-form LPs.
//!
//! Solves `min cᵀx  s.t.  Ax = b, x ≥ 0`. Free variables must be split
//! into a difference of nonnegative parts before entry. Pivoting follows
//! Bland's rule throughout, so the solver cannot cycle and the pivot
//! sequence is a pure function of the input.

use crate::error::{usage, Error, Result};

/// Feasibility and pivot tolerance.
pub const TOL: f64 = 1e-9;
/// Total pivots over both phases before giving up.
pub const MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl LpProblem {
    /// `rows[i] · x = rhs[i]` for every i; `objective` fixes the variable count.
    pub fn new(objective: Vec<f64>, rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        let n = objective.len();
        if n == 0 {
            return Err(usage("LP needs at least one variable"));
        }
        if rows.len() != rhs.len() {
            return Err(usage(format!(
                "{} constraint rows but {} right-hand sides",
                rows.len(),
                rhs.len()
            )));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(usage(format!(
                "constraint row {i} has {} entries, expected {n}",
                rows[i].len()
            )));
        }
        let finite = objective
            .iter()
            .chain(rows.iter().flatten())
            .chain(&rhs)
            .all(|v| v.is_finite());
        if !finite {
            return Err(usage("LP data must be finite"));
        }
        Ok(LpProblem {
            objective,
            rows,
            rhs,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }
    pub fn objective(&self) -> &[f64] {
        &self.objective
    }
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Largest |Ax - b| component.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(r, b)| (dot(r, x) - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpStatus {
    Optimal {
        value: f64,
        point: Vec<f64>,
        /// Multipliers y of the equality rows, read off the final basis:
        /// `c - Aᵀy ≥ 0` up to tolerance and `bᵀy = value`.
        dual: Vec<f64>,
    },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub iterations: usize,
}

impl LpSolution {
    pub fn value(&self) -> Option<f64> {
        match &self.status {
            LpStatus::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Tableau over the original columns followed by one artificial per row.
/// The artificial block starts as the identity, so after any sequence of
/// pivots it holds B⁻¹ and yields the duals for free.
struct Tableau {
    rows: usize,
    cols: usize,
    /// rows × (cols + rows + 1); the last column is the right-hand side.
    a: Vec<f64>,
    basis: Vec<usize>,
    iterations: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cols + self.rows + 1
    }
    fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.width() + c]
    }
    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width() - 1)
    }

    fn pivot(&mut self, pr: usize, pc: usize) -> Result<()> {
        self.iterations += 1;
        if self.iterations > MAX_ITERATIONS {
            return Err(Error::SolverFailure {
                iterations: MAX_ITERATIONS,
            });
        }
        let w = self.width();
        let inv = 1.0 / self.at(pr, pc);
        for v in &mut self.a[pr * w..(pr + 1) * w] {
            *v *= inv;
        }
        let pivot_row = self.a[pr * w..(pr + 1) * w].to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let f = self.a[r * w + pc];
            if f != 0.0 {
                for (v, p) in self.a[r * w..(r + 1) * w].iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
                self.a[r * w + pc] = 0.0;
            }
        }
        self.basis[pr] = pc;
        Ok(())
    }

    /// Reduced cost of column j under costs `cost` (indexed over all columns).
    fn reduced_cost(&self, cost: &[f64], j: usize) -> f64 {
        let mut z = cost[j];
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                z -= cb * self.at(r, j);
            }
        }
        z
    }

    /// Primal simplex with Bland's rule over the columns `0..allowed`.
    fn run(&mut self, cost: &[f64], allowed: usize) -> Result<Phase> {
        loop {
            let entering = (0..allowed)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(cost, j) < -TOL);
            let Some(j) = entering else {
                return Ok(Phase::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let coef = self.at(r, j);
                if coef > TOL {
                    let ratio = self.rhs(r) / coef;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            let better = ratio < lratio - TOL
                                || (ratio <= lratio + TOL && self.basis[r] < self.basis[lr]);
                            if better {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(Phase::Unbounded);
            };
            self.pivot(r, j)?;
        }
    }
}

/// Solves the LP. Exceeding [`MAX_ITERATIONS`] pivots is an error, kept
/// distinct from an infeasible or unbounded verdict.
pub fn solve(problem: &LpProblem) -> Result<LpSolution> {
    let (rows, cols) = (problem.num_rows(), problem.num_vars());
    let width = cols + rows + 1;
    let mut a = vec![0.0; rows * width];
    let mut sign = vec![1.0; rows];
    for r in 0..rows {
        // flip rows so that the artificial basis starts feasible
        if problem.rhs[r] < 0.0 {
            sign[r] = -1.0;
        }
        for c in 0..cols {
            a[r * width + c] = sign[r] * problem.rows[r][c];
        }
        a[r * width + cols + r] = 1.0;
        a[r * width + width - 1] = sign[r] * problem.rhs[r];
    }
    let mut t = Tableau {
        rows,
        cols,
        a,
        basis: (cols..cols + rows).collect(),
        iterations: 0,
    };

    let mut cost1 = vec![0.0; cols + rows];
    cost1[cols..].fill(1.0);
    t.run(&cost1, cols + rows)?;
    let infeasibility: f64 = (0..rows)
        .filter(|&r| t.basis[r] >= cols)
        .map(|r| t.rhs(r))
        .sum();
    let scale = problem.rhs.iter().fold(1.0f64, |m, b| m.max(b.abs()));
    if infeasibility > TOL * scale {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            iterations: t.iterations,
        });
    }

    // drive zero-level artificials out of the basis where a real column can
    // replace them; rows with no such column are redundant and keep theirs
    for r in 0..rows {
        if t.basis[r] >= cols {
            if let Some(j) = (0..cols).find(|&j| !t.basis.contains(&j) && t.at(r, j).abs() > TOL) {
                t.pivot(r, j)?;
            }
        }
    }

    let mut cost2 = problem.objective.clone();
    cost2.resize(cols + rows, 0.0);
    if let Phase::Unbounded = t.run(&cost2, cols)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            iterations: t.iterations,
        });
    }

    let mut point = vec![0.0; cols];
    for r in 0..rows {
        if t.basis[r] < cols {
            point[t.basis[r]] = t.rhs(r).max(0.0);
        }
    }
    let value = dot(&problem.objective, &point);
    let dual = (0..rows)
        .map(|i| {
            let y: f64 = (0..rows)
                .map(|r| cost2[t.basis[r]] * t.at(r, cols + i))
                .sum();
            sign[i] * y
        })
        .collect();
    Ok(LpSolution {
        status: LpStatus::Optimal { value, point, dual },
        iterations: t.iterations,
    })
}
