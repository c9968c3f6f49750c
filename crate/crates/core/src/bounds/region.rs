//! Closed-form sufficient region in the (ρ, δ) plane.

use super::PhaseParams;
use std::f64::consts::{E, PI};

/// (1 + π/2)⁻¹ ≈ 0.389: the region is only asserted for δ at or above this.
pub const TECHNICAL_DELTA: f64 = 1.0 / (1.0 + PI / 2.0);

/// Left-hand side of the exponential-decay condition; a negative value means
/// the failure bound decays exponentially in n at this (ρ, δ, C).
pub fn borne_r_lhs(phase: &PhaseParams) -> f64 {
    let (rho, delta, c) = (phase.rho(), phase.delta(), phase.c());
    let c2 = c * c;
    let a = 1.0 + (c2 - 1.0) * rho;
    let b = 1.0 + (2.0 * c2 - 1.0) * rho;
    let one_m_rho = 1.0 - rho;

    let first = rho * (0.5 * (PI / (2.0 * E * c2)).ln() + 2.0 * one_m_rho.ln() - 2.0 * rho.ln());
    let second = (c * E).ln() + 0.5 * (rho * (1.0 - delta) * a).ln()
        - one_m_rho.ln()
        - b.ln()
        - 0.5 * delta.ln();
    let third = (0.5 * (2.0 / (E * PI)).ln() + b.ln()
        - one_m_rho.ln()
        - 0.5 * (delta * (1.0 - delta) * a).ln())
        / delta;
    first + second + third
}

/// δ >= (1 + π/2)⁻¹ and the condition holds.
pub fn borne_r_region(phase: &PhaseParams) -> bool {
    phase.delta() >= TECHNICAL_DELTA && borne_r_lhs(phase) <= 0.0
}
