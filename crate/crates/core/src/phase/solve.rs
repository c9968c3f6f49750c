use super::BORNE_R_GRID_POINTS;
use crate::bounds::{borne_r_lhs, BoundEvaluator, PhaseParams, TECHNICAL_DELTA};
use crate::error::{domain, usage, Error, Result};
use crate::par::Exec;

const RHO_SCAN_LO: f64 = 1e-8;
const RHO_SCAN_HI: f64 = 0.5;
const MIN_BRACKET: f64 = 1e-12;

/// Coarse sparsity grid of the main-bound solver.
const S_GRID_POINTS: usize = 32;
/// Largest n for which an invalid bracket falls back to scanning every s.
const EXHAUSTIVE_LIMIT: u64 = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BorneRRoot {
    pub rho: f64,
    /// Condition value at `rho`.
    pub residual: f64,
    /// Every sign-change bracket of the scan, in increasing ρ.
    pub brackets: Vec<(f64, f64)>,
    /// Bisection evaluations (on top of the scan).
    pub evaluations: usize,
}

/// Upper boundary ρ* of the closed-form region at this δ.
///
/// Scans 1,000 log-spaced ρ over (1e-8, 0.5), keeps every sign change, and
/// bisects the largest feasible-to-infeasible bracket until the condition is
/// within `tol` of zero or the bracket is narrower than 1e-12. Returns
/// `None` when the scan sees no such crossing.
pub fn solve_rho_borne_r(delta: f64, c: f64, tol: f64) -> Result<Option<BorneRRoot>> {
    if !(delta >= TECHNICAL_DELTA) {
        return Err(domain(format!(
            "delta={delta} is below the technical restriction (1 + pi/2)^-1 = {TECHNICAL_DELTA:.6}"
        )));
    }
    if !(tol > 0.0) {
        return Err(usage(format!("tolerance must be positive, got {tol}")));
    }
    let lhs = |rho: f64| -> Result<f64> { Ok(borne_r_lhs(&PhaseParams::new(rho, delta, c)?)) };

    let ratio = (RHO_SCAN_HI / RHO_SCAN_LO).ln() / (BORNE_R_GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..BORNE_R_GRID_POINTS)
        .map(|i| {
            if i + 1 == BORNE_R_GRID_POINTS {
                RHO_SCAN_HI
            } else {
                RHO_SCAN_LO * (ratio * i as f64).exp()
            }
        })
        .collect();
    let values = grid.iter().map(|&r| lhs(r)).collect::<Result<Vec<_>>>()?;

    let mut brackets = Vec::new();
    let mut upper = None;
    for i in 0..grid.len() - 1 {
        let (a, b) = (values[i] <= 0.0, values[i + 1] <= 0.0);
        if a != b {
            brackets.push((grid[i], grid[i + 1]));
            if a {
                upper = Some(i);
            }
        }
    }
    let Some(i) = upper else {
        return Ok(None);
    };

    let (mut lo, mut hi) = (grid[i], grid[i + 1]);
    let mut evaluations = 0;
    let mut rho = lo;
    let mut residual = values[i];
    while hi - lo > MIN_BRACKET {
        let mid = 0.5 * (lo + hi);
        let f = lhs(mid)?;
        evaluations += 1;
        rho = mid;
        residual = f;
        if f.abs() <= tol {
            break;
        }
        if f <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        rho = lo;
    }
    if residual > 0.0 && residual.abs() > tol {
        rho = lo;
        residual = lhs(lo)?;
    }
    Ok(Some(BorneRRoot {
        rho,
        residual,
        brackets,
        evaluations,
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiRoot {
    /// s / n for the largest passing s.
    pub rho: f64,
    pub s: u64,
    pub log_pi: f64,
    pub evaluations: usize,
    /// Pass/fail transitions between consecutive grid sparsities, as (s, s').
    pub brackets: Vec<(u64, u64)>,
    /// The answer came from scanning every sparsity.
    pub exhaustive: bool,
    /// Every term of the bound at `s` was finite.
    pub all_terms_finite: bool,
}

/// Largest ρ = s/n such that ln Π(⌊ρn⌋, n, ⌊n/δ⌋, C) ≤ `log_threshold`.
///
/// Sparsities are probed on a geometric grid from 1 to n-1 first. The
/// largest grid s that passes, followed by a failing grid s, brackets the
/// answer, and integer bisection narrows it to adjacent sparsities. If no
/// grid point passes, or the grid shows more than one transition, every s is
/// scanned instead when n <= 20,000; above that the largest bracket is used
/// and the transitions are reported.
pub fn solve_rho_pi(
    delta: f64,
    c: f64,
    n: u64,
    log_threshold: f64,
    exec: Exec,
) -> Result<Option<PiRoot>> {
    if n < 100 {
        return Err(usage(format!("solve_rho_pi needs n >= 100, got {n}")));
    }
    if log_threshold.is_nan() {
        return Err(usage("log threshold is NaN"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(domain(format!("require 0 < delta < 1, got {delta}")));
    }
    if log_threshold == f64::NEG_INFINITY {
        return Ok(None);
    }
    let p = (n as f64 / delta).floor() as u64;
    if p <= n {
        return Err(Error::DegenerateDiscretization {
            rho: f64::NAN,
            delta,
            n,
            s: 0,
            p,
        });
    }
    let ev = BoundEvaluator::new(n, p, c)?;
    let mut evaluations = 0usize;
    let mut passes = |s: u64| -> Result<bool> {
        evaluations += 1;
        let v = ev.log_pi(s, exec)?;
        if v.is_nan() {
            return Err(domain(format!("ln Pi is NaN at s={s}, n={n}, p={p}")));
        }
        Ok(v <= log_threshold)
    };

    let grid = sparsity_grid(n - 1);
    let flags = grid
        .iter()
        .map(|&s| passes(s))
        .collect::<Result<Vec<_>>>()?;
    let brackets: Vec<(u64, u64)> = (0..grid.len() - 1)
        .filter(|&i| flags[i] != flags[i + 1])
        .map(|i| (grid[i], grid[i + 1]))
        .collect();
    let last_pass = flags.iter().rposition(|&f| f);

    let mut exhaustive = false;
    let found = match last_pass {
        _ if (last_pass.is_none() || brackets.len() > 1) && n <= EXHAUSTIVE_LIMIT => {
            exhaustive = true;
            let mut hit = None;
            for s in (1..n).rev() {
                if passes(s)? {
                    hit = Some(s);
                    break;
                }
            }
            hit
        }
        None => None,
        Some(i) if i + 1 == grid.len() => Some(grid[i]),
        Some(i) => {
            let (mut lo, mut hi) = (grid[i], grid[i + 1]);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if passes(mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Some(lo)
        }
    };
    let Some(s) = found else {
        return Ok(None);
    };
    let report = ev.report(s, exec)?;
    evaluations += 1;
    Ok(Some(PiRoot {
        rho: s as f64 / n as f64,
        s,
        log_pi: report.log_pi,
        evaluations,
        brackets,
        exhaustive,
        all_terms_finite: report.diagnostics.all_finite,
    }))
}

/// Geometric grid of integers covering 1..=max, deduplicated.
fn sparsity_grid(max: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (0..S_GRID_POINTS)
        .map(|i| {
            let t = i as f64 / (S_GRID_POINTS - 1) as f64;
            ((max as f64).powf(t).round() as u64).clamp(1, max)
        })
        .collect();
    out.dedup();
    if *out.last().unwrap() != max {
        out.push(max);
    }
    out
}
