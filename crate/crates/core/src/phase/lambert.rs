//! The Lambert-W threshold family ρ(δ) = exp(W₋₁(-Bδ)) / (Aδ).
//!
//! A member of this family is the boundary of {n ≥ c₁ s log(c₂ p / s)}
//! written in (ρ, δ) coordinates, with A = 1/c₂ and B = 1/(c₁c₂).

use crate::error::{domain, usage, Result};
use crate::specfun::{lambert_wm1, NEG_INV_E};

const INV_E: f64 = -NEG_INV_E;
const GRID: usize = 200;
const A_MIN: f64 = 0.1;
const A_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambertCurveParams {
    a: f64,
    b: f64,
}

impl LambertCurveParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(domain(format!("A must be positive, got {a}")));
        }
        if !(b > 0.0 && b <= INV_E) {
            return Err(domain(format!("B must lie in (0, 1/e], got {b}")));
        }
        Ok(LambertCurveParams { a, b })
    }

    /// Constants of n ≥ c₁ s log(c₂ p / s).
    pub fn from_sample_complexity(c1: f64, c2: f64) -> Result<Self> {
        LambertCurveParams::new(1.0 / c2, 1.0 / (c1 * c2))
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
}

/// exp(W₋₁(-Bδ)) / (Aδ).
pub fn lambert_rho(delta: f64, params: &LambertCurveParams) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(domain(format!("delta must be positive, got {delta}")));
    }
    let x = -params.b * delta;
    if x < NEG_INV_E {
        return Err(domain(format!("B*delta = {} exceeds 1/e", -x)));
    }
    Ok(lambert_wm1(x)?.exp() / (params.a * delta))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambertFit {
    pub params: LambertCurveParams,
    /// Sum of squared ρ residuals at the optimum.
    pub sse: f64,
}

/// Unscaled shape exp(W₋₁(-Bδ))/δ, so that ρ = shape / A.
fn shape(deltas: &[f64], b: f64) -> Vec<f64> {
    deltas
        .iter()
        .map(|&d| {
            lambert_wm1((-b * d).max(NEG_INV_E))
                .map(|w| w.exp() / d)
                .unwrap_or(f64::NAN)
        })
        .collect()
}

fn sse(shape: &[f64], rhos: &[f64], a: f64) -> f64 {
    shape
        .iter()
        .zip(rhos)
        .map(|(f, r)| (f / a - r).powi(2))
        .sum()
}

/// For fixed B the least-squares A solves a one-variable linear problem.
fn best_a(shape: &[f64], rhos: &[f64]) -> f64 {
    let num: f64 = shape.iter().map(|f| f * f).sum();
    let den: f64 = shape.iter().zip(rhos).map(|(f, r)| f * r).sum();
    if den > 0.0 {
        (num / den).clamp(A_MIN, A_MAX)
    } else {
        A_MAX
    }
}

/// Least-squares (A, B) for a set of (δ, ρ) samples.
///
/// For fixed B the model is linear in 1/A, so A is eliminated in closed
/// form and only the profile SSE(B) is searched: 200 evenly spaced B over
/// (0, 1/(e·max δ)] locate the basin, then golden-section search over the
/// neighbouring cells narrows B to 1e-12. A stays within [0.1, 10].
pub fn fit_lambert(points: &[(f64, f64)]) -> Result<LambertFit> {
    if points.len() < 3 {
        return Err(usage(format!(
            "fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    for &(d, r) in points {
        if !(d > 0.0 && d < 1.0) || !(r > 0.0) || !r.is_finite() {
            return Err(usage(format!("invalid point (delta={d}, rho={r})")));
        }
    }
    let mut distinct: Vec<f64> = points.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(usage("fit needs at least 3 distinct delta values"));
    }
    let deltas: Vec<f64> = points.iter().map(|p| p.0).collect();
    let rhos: Vec<f64> = points.iter().map(|p| p.1).collect();
    let b_max = INV_E / distinct[distinct.len() - 1];

    let profile = |b: f64| {
        let f = shape(&deltas, b);
        let a = best_a(&f, &rhos);
        (sse(&f, &rhos, a), a)
    };
    let b_grid: Vec<f64> = (0..GRID)
        .map(|j| b_max * (j + 1) as f64 / GRID as f64)
        .collect();
    let scan: Vec<f64> = b_grid.iter().map(|&b| profile(b).0).collect();
    let j = (0..GRID)
        .min_by(|&x, &y| scan[x].total_cmp(&scan[y]))
        .unwrap_or(0);
    let lo = if j == 0 { 0.0 } else { b_grid[j - 1] };
    let hi = b_grid[(j + 1).min(GRID - 1)];
    let b = golden_section(
        |x| if x > 0.0 { profile(x).0 } else { f64::INFINITY },
        lo,
        hi,
        1e-12,
    );
    let (fit_sse, a) = profile(b);
    let (a, b, fit_sse) = if fit_sse <= scan[j] {
        (a, b, fit_sse)
    } else {
        (profile(b_grid[j]).1, b_grid[j], scan[j])
    };
    Ok(LambertFit {
        params: LambertCurveParams::new(a, b)?,
        sse: fit_sse,
    })
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(a: f64, b: f64, deltas: &[f64]) -> Vec<(f64, f64)> {
        let p = LambertCurveParams::new(a, b).unwrap();
        deltas
            .iter()
            .map(|&d| (d, lambert_rho(d, &p).unwrap()))
            .collect()
    }

    #[test]
    fn reference_point() {
        let p = LambertCurveParams::new(1.38, 0.3394).unwrap();
        let rho = lambert_rho(0.5, &p).unwrap();
        // W₋₁(-0.1697) from a 50-digit evaluation
        let w = -2.805_196_805_723_680_5_f64;
        assert!((rho - w.exp() / 0.69).abs() < 1e-14, "{rho}");
    }

    #[test]
    fn branch_point_value() {
        let p = LambertCurveParams::new(2.0, INV_E).unwrap();
        let rho = lambert_rho(1.0, &p).unwrap();
        assert!((rho - (-1.0f64).exp() / 2.0).abs() < 1e-15);
        assert!(lambert_rho(1.01, &p).is_err());
        assert!(lambert_rho(0.0, &p).is_err());
    }

    #[test]
    fn parameter_validation() {
        assert!(LambertCurveParams::new(0.0, 0.2).is_err());
        assert!(LambertCurveParams::new(1.0, 0.0).is_err());
        assert!(LambertCurveParams::new(1.0, 0.5).is_err());
        assert!(LambertCurveParams::new(1.0, INV_E).is_ok());
    }

    #[test]
    fn increasing_in_delta() {
        let p = LambertCurveParams::new(1.38, 0.3394).unwrap();
        let limit = INV_E / 0.3394;
        let mut prev = 0.0;
        for i in 1..=2000 {
            let d = limit * i as f64 / 2000.0;
            let r = lambert_rho(d, &p).unwrap();
            assert!(r > prev, "not increasing at delta={d}");
            prev = r;
        }
    }

    #[test]
    fn sample_complexity_round_trip() {
        // n >= c1 s log(c2 p / s)  <=>  s/n <= lambert_rho(n/p)
        let (c1, c2) = (4.0, 0.7);
        let p = LambertCurveParams::from_sample_complexity(c1, c2).unwrap();
        for &(s, n, pp) in &[
            (10u64, 200u64, 400u64),
            (30, 200, 400),
            (5, 1000, 1500),
            (60, 1000, 1500),
            (2, 50, 90),
        ] {
            let (sf, nf, pf) = (s as f64, n as f64, pp as f64);
            let direct = nf >= c1 * sf * (c2 * pf / sf).ln();
            let via_lambert = sf / nf <= lambert_rho(nf / pf, &p).unwrap();
            assert_eq!(direct, via_lambert, "(s, n, p) = ({s}, {n}, {pp})");
        }
    }

    #[test]
    fn fit_recovers_published_constants() {
        let deltas: Vec<f64> = (0..6).map(|i| 0.4 + 0.1 * i as f64).collect();
        let fit = fit_lambert(&sample(1.38, 0.3394, &deltas)).unwrap();
        assert!((fit.params.a() - 1.38).abs() < 1e-3, "{fit:?}");
        assert!((fit.params.b() - 0.3394).abs() < 1e-3, "{fit:?}");
    }

    #[test]
    fn fit_recovers_unit_constants() {
        let deltas: Vec<f64> = (0..8).map(|i| 0.3 + 0.09 * i as f64).collect();
        let fit = fit_lambert(&sample(1.0, 0.3, &deltas)).unwrap();
        assert!((fit.params.a() - 1.0).abs() < 1e-3, "{fit:?}");
        assert!((fit.params.b() - 0.3).abs() < 1e-3, "{fit:?}");
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        assert!(fit_lambert(&[(0.5, 0.1)]).is_err());
        assert!(fit_lambert(&[(0.5, 0.1), (0.5, 0.1), (0.5, 0.1)]).is_err());
        assert!(fit_lambert(&[(0.5, 0.1), (0.6, -0.1), (0.7, 0.1)]).is_err());
    }
}
