//! Real branches of the Lambert W function, the inverse of w ↦ w·eʷ.
//!
//! Both branches refine an asymptotic initial guess with Halley's method,
//! capped at 50 iterations and stopped once the step drops to 1e-15
//! (relative). Within 1e-6 of the branch point -1/e Halley stalls because
//! the derivative vanishes, so the square-root expansion is used directly.

use crate::error::{domain, Result};
use std::f64::consts::E;

/// -1/e rounded to f64, the branch point shared by W₀ and W₋₁.
pub const NEG_INV_E: f64 = -0.367_879_441_171_442_33;

const MAX_ITER: usize = 50;
const STEP_TOL: f64 = 1e-15;
const BRANCH_WINDOW: f64 = 1e-6;

/// 1 + e·x, evaluated with a single rounding of the product.
fn branch_distance(x: f64) -> f64 {
    E.mul_add(x, 1.0).max(0.0)
}

/// W(x) ≈ -1 + p - p²/3 + 11p³/72 - ... with p = ±√(2(1 + e·x)).
fn branch_series(p: f64) -> f64 {
    const C: [f64; 7] = [
        -1.0,
        1.0,
        -1.0 / 3.0,
        11.0 / 72.0,
        -43.0 / 540.0,
        769.0 / 17_280.0,
        -221.0 / 8_505.0,
    ];
    C.iter().rev().fold(0.0, |acc, c| acc * p + c)
}

fn halley(x: f64, mut w: f64) -> f64 {
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        w -= step;
        if step.abs() <= STEP_TOL * (1.0 + w.abs()) {
            break;
        }
    }
    w
}

/// Newton on w + ln w = ln x; used for large positive x where w·eʷ would
/// overflow long before w does.
fn newton_log_form(x: f64, mut w: f64) -> f64 {
    let lx = x.ln();
    for _ in 0..MAX_ITER {
        let step = (w + w.ln() - lx) / (1.0 + 1.0 / w);
        w -= step;
        if step.abs() <= STEP_TOL * (1.0 + w.abs()) {
            break;
        }
    }
    w
}

/// Principal branch W₀, defined for x ≥ -1/e, with W₀(x) ≥ -1.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() || x < NEG_INV_E {
        return Err(domain(format!("lambert_w0 requires x >= -1/e, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let q = branch_distance(x);
    if q < 4.0 * f64::EPSILON {
        return Ok(-1.0);
    }
    let p = (2.0 * q).sqrt();
    if x - NEG_INV_E <= BRANCH_WINDOW {
        return Ok(branch_series(p));
    }
    if x > E {
        let l1 = x.ln();
        let l2 = l1.ln();
        return Ok(newton_log_form(x, l1 - l2 + l2 / l1));
    }
    let guess = if x < -0.25 {
        branch_series(p)
    } else if x.abs() <= 0.25 {
        x * (1.0 - x * (1.0 - 1.5 * x))
    } else {
        // 0.25 < x <= e
        let l = x.ln_1p();
        l * (1.0 - l.ln_1p() / (2.0 + l))
    };
    Ok(halley(x, guess))
}

/// Lower branch W₋₁, defined for -1/e ≤ x < 0, with W₋₁(x) ≤ -1.
pub fn lambert_wm1(x: f64) -> Result<f64> {
    if !(NEG_INV_E..0.0).contains(&x) {
        return Err(domain(format!(
            "lambert_wm1 requires -1/e <= x < 0, got {x}"
        )));
    }
    let q = branch_distance(x);
    if q < 4.0 * f64::EPSILON {
        return Ok(-1.0);
    }
    let p = -(2.0 * q).sqrt();
    if x - NEG_INV_E <= BRANCH_WINDOW {
        return Ok(branch_series(p));
    }
    let guess = if x < -0.25 {
        branch_series(p)
    } else {
        let l1 = (-x).ln();
        let l2 = (-l1).ln();
        l1 - l2 + l2 / l1
    };
    let w = halley(x, guess);
    Ok(w.min(-1.0))
}
