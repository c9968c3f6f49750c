//! ln Γ via the Lanczos approximation (g = 7, 9 coefficients), plus the
//! factorial and binomial helpers built on it.

use super::LN_SQRT_2PI;
use crate::error::{domain, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// k! for k = 0..=20.
const FACTORIALS: [f64; 21] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
];

/// ln Γ(z) for z > 0, no argument checking.
pub(crate) fn ln_gamma_pos(z: f64) -> f64 {
    if z < 0.5 {
        // Γ(z) Γ(1 - z) = π / sin(πz)
        return PI.ln() - (PI * z).sin().ln() - ln_gamma_pos(1.0 - z);
    }
    if z <= 21.0 && z.fract() == 0.0 {
        return FACTORIALS[z as usize - 1].ln();
    }
    let x = z - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let mut series = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (x + i as f64);
    }
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + series.ln()
}

/// ln k!, exact table for k <= 20.
pub(crate) fn ln_fact(k: u64) -> f64 {
    if k <= 20 {
        FACTORIALS[k as usize].ln()
    } else {
        ln_gamma_pos(k as f64 + 1.0)
    }
}

/// ln Γ(z) for real z > 0.
pub fn log_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(domain(format!("log_gamma requires z > 0, got {z}")));
    }
    if z == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok(ln_gamma_pos(z))
}

/// ln k!.
pub fn log_factorial(k: u64) -> f64 {
    ln_fact(k)
}

/// ln C(a, b).
pub fn log_binomial(a: u64, b: u64) -> Result<f64> {
    if b > a {
        return Err(domain(format!(
            "log_binomial requires b <= a, got a={a}, b={b}"
        )));
    }
    if b == 0 || b == a {
        return Ok(0.0);
    }
    // parenthesized so that b <-> a-b is bit-for-bit symmetric
    Ok(ln_fact(a) - (ln_fact(b) + ln_fact(a - b)))
}

/// Table of ln Γ(j/2) for j = 1..=max_index.
///
/// Bound evaluation at large n touches ln Γ only at half-integers and
/// integers below 2p, so one pass of Lanczos evaluations turns every later
/// lookup into an array read.
#[derive(Debug, Clone)]
pub struct HalfIntLogGamma {
    values: Vec<f64>,
}

impl HalfIntLogGamma {
    pub fn new(max_index: usize) -> Self {
        let mut values = Vec::with_capacity(max_index + 1);
        values.push(f64::INFINITY);
        values.extend((1..=max_index).map(|j| ln_gamma_pos(j as f64 * 0.5)));
        HalfIntLogGamma { values }
    }

    /// Largest j the table covers.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// ln Γ(j / 2).
    #[inline]
    pub fn half(&self, j: u64) -> f64 {
        self.values[j as usize]
    }

    /// ln k! = ln Γ((2k + 2) / 2).
    #[inline]
    pub fn fact(&self, k: u64) -> f64 {
        self.values[2 * k as usize + 2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_exact_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        let half = log_gamma(0.5).unwrap();
        assert!((half - 0.572_364_942_924_700_1).abs() < 1e-15);
        assert!((log_gamma(1.5).unwrap() - (0.5 * PI.sqrt()).ln()).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
        assert!(log_binomial(3, 4).is_err());
    }

    #[test]
    fn reflection_branch() {
        // Γ(0.25) = 3.625609908221908...
        let v = log_gamma(0.25).unwrap();
        assert!((v - 3.625_609_908_221_908_f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn factorial_table_and_tail() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert!((log_factorial(5) - 120f64.ln()).abs() < 1e-15);
        // table/Lanczos seam
        assert!((log_factorial(21) - (log_factorial(20) + 21f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn binomial_basics() {
        assert_eq!(log_binomial(10, 0).unwrap(), 0.0);
        assert_eq!(log_binomial(10, 10).unwrap(), 0.0);
        assert!((log_binomial(10, 3).unwrap() - 120f64.ln()).abs() < 1e-13);
        assert_eq!(
            log_binomial(1000, 17).unwrap(),
            log_binomial(1000, 983).unwrap()
        );
    }

    #[test]
    fn half_int_table_matches_direct() {
        let t = HalfIntLogGamma::new(4001);
        for j in 1..=4001u64 {
            assert_eq!(t.half(j), ln_gamma_pos(j as f64 / 2.0));
        }
        for k in 0..=1999u64 {
            assert!((t.fact(k) - ln_fact(k)).abs() <= 1e-12 * ln_fact(k).max(1.0));
        }
    }
}
