//! Phase-transition curves over δ grids.
//!
//! A curve is a sequence of (δ, ρ) points tagged with where it came from:
//! the zero crossing of the closed-form region condition, the level set of
//! the main bound at finite n, a Lambert-W family member, or an external
//! file. Grid points are independent, so curve assembly runs through
//! [`crate::par::map_range`] and keeps grid order.

mod lambert;
mod solve;

pub use lambert::{fit_lambert, lambert_rho, LambertCurveParams, LambertFit};
pub use solve::{solve_rho_borne_r, solve_rho_pi, BorneRRoot, PiRoot};

use crate::error::{usage, Error, Result};
use crate::par::{map_range, Exec};

/// Bracketing grid of the borne-r solver: points over (1e-8, 0.5).
pub const BORNE_R_GRID_POINTS: usize = 1000;
/// Default n for curves of the main bound.
pub const DEFAULT_PI_N: u64 = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub enum CurveSource {
    PiBound { n: u64, c: f64, log_threshold: f64 },
    BorneR { c: f64 },
    LambertFamily { a: f64, b: f64 },
    External { label: String },
}

/// Solver outcome at one grid δ.
#[derive(Debug, Clone, PartialEq)]
pub struct PointDiagnostics {
    pub delta: f64,
    /// A ρ was produced for this δ.
    pub converged: bool,
    /// Objective evaluations spent at this δ.
    pub evaluations: usize,
    /// Sign-change brackets found by the coarse scan.
    pub brackets: Vec<(f64, f64)>,
    /// Every term of the final bound evaluation was finite (main-bound curves).
    pub all_terms_finite: bool,
    pub note: Option<String>,
}

impl PointDiagnostics {
    fn plain(delta: f64) -> Self {
        PointDiagnostics {
            delta,
            converged: true,
            evaluations: 0,
            brackets: Vec::new(),
            all_terms_finite: true,
            note: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCurve {
    points: Vec<(f64, f64)>,
    source: CurveSource,
    diagnostics: Vec<PointDiagnostics>,
}

impl PhaseCurve {
    /// Checks that δ is strictly increasing and every ρ lies in (0, 1).
    pub fn new(
        points: Vec<(f64, f64)>,
        source: CurveSource,
        diagnostics: Vec<PointDiagnostics>,
    ) -> Result<Self> {
        for (i, &(d, r)) in points.iter().enumerate() {
            if !(r > 0.0 && r < 1.0) {
                return Err(usage(format!("point {i}: rho={r} outside (0, 1)")));
            }
            if !d.is_finite() {
                return Err(usage(format!("point {i}: non-finite delta")));
            }
            if i > 0 && d <= points[i - 1].0 {
                return Err(usage(format!(
                    "point {i}: delta={d} not strictly increasing"
                )));
            }
        }
        Ok(PhaseCurve {
            points,
            source,
            diagnostics,
        })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
    pub fn source(&self) -> &CurveSource {
        &self.source
    }
    pub fn diagnostics(&self) -> &[PointDiagnostics] {
        &self.diagnostics
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// ρ at `delta` by linear interpolation; `None` outside the covered range.
    pub fn interpolate(&self, delta: f64) -> Option<f64> {
        let pts = &self.points;
        let (first, last) = (pts.first()?, pts.last()?);
        if delta < first.0 || delta > last.0 {
            return None;
        }
        let i = pts.partition_point(|&(d, _)| d < delta);
        if pts[i].0 == delta {
            return Some(pts[i].1);
        }
        let (d0, r0) = pts[i - 1];
        let (d1, r1) = pts[i];
        Some(r0 + (r1 - r0) * (delta - d0) / (d1 - d0))
    }
}

/// `points` values evenly spaced over [lo, hi].
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(usage(format!(
            "invalid grid [{lo}, {hi}] with {points} points"
        )));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    if lo == hi {
        return Err(usage("grid with several points needs lo < hi"));
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect())
}

/// 60 points over [0.39, 0.99].
pub fn default_delta_grid() -> Vec<f64> {
    uniform_grid(0.39, 0.99, 60).expect("static grid")
}

/// Upper boundary of the closed-form region at each grid δ.
pub fn borne_r_curve(c: f64, grid: &[f64], tol: f64, exec: Exec) -> Result<PhaseCurve> {
    let solved = map_range(exec, 0..grid.len(), |i| solve_rho_borne_r(grid[i], c, tol));
    let mut points = Vec::new();
    let mut diagnostics = Vec::new();
    for (&delta, res) in grid.iter().zip(solved) {
        let root = res?;
        let mut diag = PointDiagnostics::plain(delta);
        diag.evaluations = BORNE_R_GRID_POINTS;
        match root {
            Some(r) => {
                diag.evaluations += r.evaluations;
                diag.brackets = r.brackets;
                points.push((delta, r.rho));
            }
            None => {
                diag.converged = false;
                diag.note = Some("no sign change on the scan grid".into());
            }
        }
        diagnostics.push(diag);
    }
    PhaseCurve::new(points, CurveSource::BorneR { c }, diagnostics)
}

/// Largest ρ = s/n with ln Π ≤ `log_threshold` at each grid δ.
pub fn pi_curve(
    c: f64,
    n: u64,
    log_threshold: f64,
    grid: &[f64],
    exec: Exec,
) -> Result<PhaseCurve> {
    // one level of parallelism: across δ when the grid is wide enough,
    // otherwise inside each bound evaluation
    let (outer, inner) = if grid.len() > 1 {
        (exec, Exec::Sequential)
    } else {
        (Exec::Sequential, exec)
    };
    let solved = map_range(outer, 0..grid.len(), |i| {
        solve_rho_pi(grid[i], c, n, log_threshold, inner)
    });
    let mut points = Vec::new();
    let mut diagnostics = Vec::new();
    for (&delta, res) in grid.iter().zip(solved) {
        let mut diag = PointDiagnostics::plain(delta);
        match res {
            Ok(Some(r)) => {
                diag.evaluations = r.evaluations;
                diag.all_terms_finite = r.all_terms_finite;
                diag.brackets = r
                    .brackets
                    .iter()
                    .map(|&(a, b)| (a as f64 / n as f64, b as f64 / n as f64))
                    .collect();
                if r.exhaustive {
                    diag.note = Some("exhaustive scan".into());
                }
                points.push((delta, r.rho));
            }
            Ok(None) => {
                diag.converged = false;
                diag.note = Some("no sparsity meets the threshold".into());
            }
            Err(Error::DegenerateDiscretization { .. }) => {
                diag.converged = false;
                diag.note = Some("degenerate discretization".into());
            }
            Err(e) => return Err(e),
        }
        diagnostics.push(diag);
    }
    PhaseCurve::new(
        points,
        CurveSource::PiBound {
            n,
            c,
            log_threshold,
        },
        diagnostics,
    )
}

/// exp(W₋₁(-Bδ)) / (Aδ) over the grid; points with Bδ > 1/e are skipped.
pub fn lambert_curve(params: &LambertCurveParams, grid: &[f64]) -> Result<PhaseCurve> {
    let mut points = Vec::new();
    let mut diagnostics = Vec::new();
    for &delta in grid {
        let mut diag = PointDiagnostics::plain(delta);
        match lambert_rho(delta, params) {
            Ok(rho) if rho > 0.0 && rho < 1.0 => points.push((delta, rho)),
            Ok(rho) => {
                diag.converged = false;
                diag.note = Some(format!("rho={rho} outside (0, 1)"));
            }
            Err(e) => {
                diag.converged = false;
                diag.note = Some(e.to_string());
            }
        }
        diagnostics.push(diag);
    }
    PhaseCurve::new(
        points,
        CurveSource::LambertFamily {
            a: params.a(),
            b: params.b(),
        },
        diagnostics,
    )
}

/// Ratio b.ρ / a.ρ on a's δ grid, with b linearly interpolated. Points of a
/// outside b's δ range are dropped.
pub fn compare_curves(a: &PhaseCurve, b: &PhaseCurve) -> Result<Vec<(f64, f64)>> {
    let out: Vec<(f64, f64)> = a
        .points()
        .iter()
        .filter_map(|&(delta, rho_a)| b.interpolate(delta).map(|rho_b| (delta, rho_b / rho_a)))
        .collect();
    if out.is_empty() {
        return Err(usage("curves have no overlapping delta range"));
    }
    Ok(out)
}
