//! Closed-form failure bounds, evaluated entirely in log domain.
//!
//! The per-k term of the main bound is
//!
//! ```text
//! term_k = C(p,k) · (C²s / p̃_k)^((m-1-k)/2)
//!          · Γ((2p-2k-n-1)/2) / (Γ((p-k)/2) Γ((m-k)/2))
//!          · ψ_{p-k}(C) · Q(k, p̃_k, m)
//! ```
//!
//! with p̃_k = (C² - 1)s + p - k, and Π ≤ √π Σ_{k<m} term_k. Two independent
//! routes compute it: the functions in this module call [`log_gamma`] and
//! friends directly, while [`BoundEvaluator`] reads a precomputed table of
//! ln Γ(j/2) and is what [`pi_bound`] uses.

mod evaluator;
mod region;

pub use evaluator::{pi_bound, pi_bound_with, BoundDiagnostics, BoundEvaluator, BoundReport};
pub use region::{borne_r_lhs, borne_r_region, TECHNICAL_DELTA};

use crate::error::{domain, Error, Result};
use crate::specfun::{ln_fact, ln_gamma_pos, log_binomial, LN_SQRT_PI};
use std::f64::consts::{LN_2, PI};

/// A validated problem instance: sparsity `s`, `n` rows, `p` columns,
/// dilatation `c`, and kernel dimension `m = p - n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    c: f64,
    s: u64,
    n: u64,
    p: u64,
}

impl Params {
    pub fn new(c: f64, s: u64, n: u64, p: u64) -> Result<Self> {
        if !(c >= 1.0) || !c.is_finite() {
            return Err(Error::InvalidParams(format!("require C >= 1, got C={c}")));
        }
        if s == 0 {
            return Err(Error::InvalidParams("require 0 < s".into()));
        }
        if s >= n {
            return Err(Error::InvalidParams(format!(
                "require s < n, got s={s}, n={n}"
            )));
        }
        if n >= p {
            return Err(Error::InvalidParams(format!(
                "require n < p, got n={n}, p={p}"
            )));
        }
        Ok(Params { c, s, n, p })
    }

    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn s(&self) -> u64 {
        self.s
    }
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn m(&self) -> u64 {
        self.p - self.n
    }

    /// Same instance with a different sparsity.
    pub fn with_s(&self, s: u64) -> Result<Self> {
        Params::new(self.c, s, self.n, self.p)
    }

    fn check_k(&self, k: u64) -> Result<()> {
        if k >= self.m() {
            return Err(domain(format!(
                "require 0 <= k <= m-1 = {}, got k={k}",
                self.m() - 1
            )));
        }
        Ok(())
    }
}

/// A point of the (ρ, δ) plane together with a dilatation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseParams {
    rho: f64,
    delta: f64,
    c: f64,
}

impl PhaseParams {
    pub fn new(rho: f64, delta: f64, c: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(domain(format!("require 0 < rho < 1, got {rho}")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(domain(format!("require 0 < delta < 1, got {delta}")));
        }
        if !(c >= 1.0) || !c.is_finite() {
            return Err(domain(format!("require C >= 1, got {c}")));
        }
        Ok(PhaseParams { rho, delta, c })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn c(&self) -> f64 {
        self.c
    }

    /// `s = ⌊ρn⌋`, `p = ⌊n/δ⌋`.
    pub fn discretize(&self, n: u64) -> Result<Params> {
        let s = (self.rho * n as f64).floor() as u64;
        let p = (n as f64 / self.delta).floor() as u64;
        if s == 0 || s >= n || p <= n {
            return Err(Error::DegenerateDiscretization {
                rho: self.rho,
                delta: self.delta,
                n,
                s,
                p,
            });
        }
        Params::new(self.c, s, n, p)
    }
}

fn p_tilde_unchecked(params: &Params, k: u64) -> f64 {
    (params.c * params.c - 1.0) * params.s as f64 + (params.p - k) as f64
}

/// p̃_{C,k} = (C² - 1)s + p - k.
pub fn p_tilde(params: &Params, k: u64) -> Result<f64> {
    params.check_k(k)?;
    Ok(p_tilde_unchecked(params, k))
}

fn h_cap_from(p_tilde: f64, m: u64) -> u64 {
    let raw = (PI * p_tilde / 2.0).floor();
    if raw >= m as f64 {
        m
    } else {
        raw as u64
    }
}

/// H_k = min(⌊π p̃_{C,k} / 2⌋, m).
pub fn h_cap(params: &Params, k: u64) -> Result<u64> {
    params.check_k(k)?;
    let h = h_cap_from(p_tilde_unchecked(params, k), params.m());
    if h_assumption_violated(params, k, h) {
        log::warn!(
            "H_{k} = {h} <= m - k + 1 = {} for (s={}, n={}, p={}, C={})",
            params.m() - k + 1,
            params.s,
            params.n,
            params.p,
            params.c
        );
    }
    Ok(h)
}

/// The uncapped branch of H_k relies on H_k > m - k + 1 for k >= 1.
pub(crate) fn h_assumption_violated(params: &Params, k: u64, h: u64) -> bool {
    k >= 1 && h < params.m() && h <= params.m() - k + 1
}

/// ln ψ_l(C), the Gaussian-vector failure bound
/// ψ_l(C) = C(l,s) (4C²s/π)^((l-s)/2) Γ(l/2) / (Γ(s/2) Γ(l-s+1)).
pub fn log_psi(l: u64, s: u64, c: f64) -> Result<f64> {
    if s == 0 || s >= l {
        return Err(domain(format!(
            "log_psi requires 1 <= s < l, got s={s}, l={l}"
        )));
    }
    if !(c >= 1.0) || !c.is_finite() {
        return Err(domain(format!("log_psi requires C >= 1, got {c}")));
    }
    let sf = s as f64;
    let power = 0.5 * (l - s) as f64 * ((4.0 * c * c * sf).ln() - PI.ln());
    Ok(log_binomial(l, s)? + power + ln_gamma_pos(l as f64 / 2.0)
        - ln_gamma_pos(sf / 2.0)
        - ln_fact(l - s))
}

/// ln Q(k, p̃_{C,k}, m), with Q := 1 at k = 0.
pub fn log_q(params: &Params, k: u64) -> Result<f64> {
    params.check_k(k)?;
    if k == 0 {
        return Ok(0.0);
    }
    let m = params.m();
    let pt = p_tilde_unchecked(params, k);
    let h = h_cap(params, k)?;
    let exponent = (h + k) as f64 - m as f64;
    Ok(0.5 * (exponent * (LN_2 - PI.ln() - pt.ln()) + ln_fact(h) - ln_fact(m - k)))
}

/// ln term_k of the main bound (without the leading √π).
pub fn log_term(params: &Params, k: u64) -> Result<f64> {
    params.check_k(k)?;
    let (s, n, p, m) = (params.s, params.n, params.p, params.m());
    if s >= p - k {
        return Err(domain(format!(
            "log_term requires s < p - k, got s={s}, p-k={}",
            p - k
        )));
    }
    let c2s = params.c * params.c * s as f64;
    let pt = p_tilde_unchecked(params, k);
    let binom = log_binomial(p, k)?;
    let power = 0.5 * (m - 1 - k) as f64 * (c2s.ln() - pt.ln());
    let gammas = ln_gamma_pos((2 * p - 2 * k - n - 1) as f64 / 2.0)
        - ln_gamma_pos((p - k) as f64 / 2.0)
        - ln_gamma_pos((m - k) as f64 / 2.0);
    Ok(binom + power + gammas + log_psi(p - k, s, params.c)? + log_q(params, k)?)
}

/// ln h_C(s, m, p), the bound on a positive local maximum on the full sphere:
/// 2√π (C²s/p̃_0)^((m-1)/2) Γ((m-1+p)/2) / (Γ(p/2) Γ(m/2)) ψ_p(C).
pub fn log_h(params: &Params) -> Result<f64> {
    let (s, p, m) = (params.s, params.p, params.m());
    let c2s = params.c * params.c * s as f64;
    let pt0 = (params.c * params.c - 1.0) * s as f64 + p as f64;
    Ok(LN_2
        + LN_SQRT_PI
        + 0.5 * (m - 1) as f64 * (c2s / pt0).ln()
        + ln_gamma_pos((m - 1 + p) as f64 / 2.0)
        - ln_gamma_pos(p as f64 / 2.0)
        - ln_gamma_pos(m as f64 / 2.0)
        + log_psi(p, s, params.c)?)
}

/// ln B_k(s, n, p), 1 <= k <= m: the reindexed summand used to derive the
/// closed-form region, written out factor by factor.
pub fn log_b_term(params: &Params, k: u64) -> Result<f64> {
    let (s, n, p, m) = (params.s, params.n, params.p, params.m());
    if k == 0 || k > m {
        return Err(domain(format!(
            "log_b_term requires 1 <= k <= m = {m}, got k={k}"
        )));
    }
    let c2 = params.c * params.c;
    let sf = s as f64;
    let nk = n + k;
    let pt = p_tilde_unchecked(params, m - k);
    let h = h_cap_from(pt, m);
    let kf = k as f64;

    let binoms = log_binomial(p, nk)? + log_binomial(nk, s)?;
    let first_power = 0.5 * (kf + 1.0) * (c2 * sf / pt).ln();
    let first_gammas = ln_gamma_pos(n as f64 / 2.0 + kf - 0.5)
        - ln_gamma_pos(nk as f64 / 2.0)
        - ln_gamma_pos(kf / 2.0);
    let second_power = 0.5 * (nk - s) as f64 * (4.0 * c2 * sf / PI).ln();
    let second_gammas = ln_gamma_pos(nk as f64 / 2.0) + 0.5 * ln_fact(h)
        - ln_gamma_pos(sf / 2.0)
        - ln_fact(nk - s)
        - 0.5 * ln_fact(k);
    let q_power = 0.5 * (h as f64 - kf) * (2.0 / (PI * pt)).ln();
    Ok(binoms + first_power + first_gammas + second_power + second_gammas + q_power)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(c: f64, s: u64, n: u64, p: u64) -> Params {
        Params::new(c, s, n, p).unwrap()
    }

    #[test]
    fn validation_messages() {
        let e = Params::new(1.0, 3, 3, 5).unwrap_err();
        assert!(e.to_string().contains("require s < n"));
        assert!(Params::new(1.0, 0, 3, 5)
            .unwrap_err()
            .to_string()
            .contains("0 < s"));
        assert!(Params::new(1.0, 1, 5, 5)
            .unwrap_err()
            .to_string()
            .contains("n < p"));
        assert!(Params::new(0.5, 1, 3, 5)
            .unwrap_err()
            .to_string()
            .contains("C >= 1"));
        assert!(Params::new(f64::NAN, 1, 3, 5).is_err());
        assert_eq!(params(1.0, 1, 3, 5).m(), 2);
    }

    #[test]
    fn p_tilde_examples() {
        assert_eq!(p_tilde(&params(1.0, 1, 3, 5), 0).unwrap(), 5.0);
        assert_eq!(p_tilde(&params(2.0, 3, 4, 10), 2).unwrap(), 17.0);
        let pr = params(1.0, 4, 9, 20);
        assert_eq!(p_tilde(&pr, pr.m() - 1).unwrap(), 10.0);
        assert!(p_tilde(&pr, pr.m()).is_err());
        let a = p_tilde(&pr, 3).unwrap();
        assert!(p_tilde(&pr, 4).unwrap() < a);
        assert!(p_tilde(&params(1.5, 4, 9, 20), 3).unwrap() > a);
    }

    #[test]
    fn h_cap_examples() {
        // p̃ = 10 at k = 0 when C = 1, p = 10; m large
        let pr = params(1.0, 1, 2, 102);
        let pr_small = Params::new(1.0, 1, 2, 10).unwrap();
        assert_eq!(h_cap_from(10.0, 100), 15);
        assert_eq!(h_cap_from(1000.0, 20), 20);
        assert_eq!(h_cap_from(2.0 * 7.0 / PI, 7), 7);
        assert_eq!(h_cap(&pr_small, 0).unwrap(), 8);
        // k = 95: p̃ = 7, ⌊7π/2⌋ = 10 < m = 100
        assert_eq!(h_cap(&pr, 95).unwrap(), 10);
        assert!(!h_assumption_violated(&pr, 95, 10));
        // k = 98: p̃ = 4, ⌊2π⌋ = 6 > m - k + 1 = 3
        assert_eq!(h_cap(&pr, 98).unwrap(), 6);
    }

    #[test]
    fn log_psi_reference_values() {
        // high-precision reference values (50-digit evaluation of the closed form)
        assert!((log_psi(4, 1, 1.0).unwrap() - -0.615_483_338_127_128_8).abs() < 1e-13);
        assert!((log_psi(12, 1, 1.0).unwrap() - -9.473_669_782_240_842).abs() < 1e-12);
        assert!((log_psi(7, 2, 1.5).unwrap() - 3.822_108_977_405_362_5).abs() < 1e-12);
        assert!(log_psi(3, 3, 1.0).is_err());
        assert!(log_psi(3, 0, 1.0).is_err());
    }

    #[test]
    fn log_psi_exponent_one_half() {
        let (l, s, c) = (9u64, 8u64, 1.7f64);
        let expected = log_binomial(l, s).unwrap()
            + 0.5 * (4.0 * c * c * s as f64 / PI).ln()
            + ln_gamma_pos(l as f64 / 2.0)
            - ln_gamma_pos(s as f64 / 2.0);
        assert!((log_psi(l, s, c).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn log_psi_increases_with_c() {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..50 {
            let c = 1.0 + i as f64 * 0.1;
            let v = log_psi(30, 4, c).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn log_q_examples() {
        let pr = params(1.0, 1, 3, 5);
        assert_eq!(log_q(&pr, 0).unwrap(), 0.0);
        // k = m-1 = 1, H = m = 2, p̃ = 4: ½[(1)(ln2 - lnπ - ln4) + ln 2!]
        let expected = 0.5 * ((LN_2 - PI.ln() - 4f64.ln()) + 2f64.ln());
        assert!((log_q(&pr, 1).unwrap() - expected).abs() < 1e-15);
        // π p̃/2 >= m everywhere: ½[k ln(2/(πp̃)) + ln(m!/(m-k)!)]
        let pr = params(1.0, 3, 50, 70);
        for k in 1..pr.m() {
            let pt = p_tilde(&pr, k).unwrap();
            let expected =
                0.5 * (k as f64 * (2.0 / (PI * pt)).ln() + ln_fact(20) - ln_fact(20 - k));
            let got = log_q(&pr, k).unwrap();
            assert!((got - expected).abs() < 1e-12);
            assert!(got <= 0.0);
        }
    }

    #[test]
    fn log_term_reference_values() {
        // (C, s, n, p) -> per-k reference values from a 50-digit evaluation
        let cases: [(f64, u64, u64, u64, &[f64]); 3] = [
            (
                1.0,
                1,
                3,
                5,
                &[-1.769_423_685_954_669_3, -0.150_775_311_542_428_6],
            ),
            (
                2.0,
                2,
                5,
                9,
                &[
                    7.026_457_390_365_323,
                    7.800_243_369_507_658,
                    7.417_991_499_253_516,
                    5.907_900_323_691_266,
                ],
            ),
            (
                1.5,
                3,
                10,
                16,
                &[
                    8.442_201_111_935_142,
                    10.498_935_325_115_141,
                    11.605_841_603_397_971,
                    11.990_898_306_940_991,
                    11.664_274_498_940_582,
                    10.426_623_407_345_89,
                ],
            ),
        ];
        for (c, s, n, p, expected) in cases {
            let pr = params(c, s, n, p);
            for (k, &e) in expected.iter().enumerate() {
                let got = log_term(&pr, k as u64).unwrap();
                assert!(
                    (got - e).abs() <= 1e-12 * e.abs().max(1.0),
                    "{pr:?} k={k}: {got} vs {e}"
                );
            }
        }
    }

    #[test]
    fn log_term_last_index_has_no_power_factor() {
        let pr = params(2.5, 2, 6, 11);
        let k = pr.m() - 1;
        let (s, n, p) = (2u64, 6u64, 11u64);
        let expected = log_binomial(p, k).unwrap()
            + ln_gamma_pos((2 * p - 2 * k - n - 1) as f64 / 2.0)
            - ln_gamma_pos((p - k) as f64 / 2.0)
            - ln_gamma_pos(0.5)
            + log_psi(p - k, s, 2.5).unwrap()
            + log_q(&pr, k).unwrap();
        assert!((log_term(&pr, k).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn log_h_reference_values_and_relation() {
        let cases = [
            (1.0, 1, 3, 5, -0.503_911_562_470_023_9),
            (2.0, 2, 5, 9, 8.291_969_513_849_968),
            (1.5, 3, 10, 16, 9.707_713_235_419_788),
        ];
        for (c, s, n, p, e) in cases {
            let pr = params(c, s, n, p);
            let h = log_h(&pr).unwrap();
            assert!((h - e).abs() < 1e-12 * e.abs().max(1.0));
            // h_C is twice the k = 0 contribution √π·term_0 to Π
            let rel = h - (LN_SQRT_PI + log_term(&pr, 0).unwrap());
            assert!((rel - LN_2).abs() < 1e-12);
        }
    }

    #[test]
    fn log_h_kernel_of_dimension_one() {
        let pr = params(1.3, 2, 6, 7);
        let expected = LN_2 + log_psi(7, 2, 1.3).unwrap();
        assert!((log_h(&pr).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn log_b_term_reference_values() {
        let cases: [(f64, u64, u64, u64, &[f64]); 2] = [
            (
                1.0,
                1,
                3,
                5,
                &[-1.537_069_672_662_319_2, -3.378_861_598_388_769_7],
            ),
            (
                2.0,
                2,
                5,
                9,
                &[
                    5.502_435_215_583_102,
                    6.932_483_683_471_815,
                    7.240_627_581_572_235,
                    6.397_848_730_942_949,
                ],
            ),
        ];
        for (c, s, n, p, expected) in cases {
            let pr = params(c, s, n, p);
            for (i, &e) in expected.iter().enumerate() {
                let got = log_b_term(&pr, i as u64 + 1).unwrap();
                assert!((got - e).abs() <= 1e-12 * e.abs().max(1.0));
            }
        }
        let pr = params(1.0, 1, 3, 5);
        assert!(log_b_term(&pr, 0).is_err());
        assert!(log_b_term(&pr, 3).is_err());
    }

    #[test]
    fn phase_discretization() {
        let ph = PhaseParams::new(0.1, 0.5, 1.0).unwrap();
        let pr = ph.discretize(1000).unwrap();
        assert_eq!((pr.s(), pr.n(), pr.p()), (100, 1000, 2000));
        let ph = PhaseParams::new(0.001, 0.5, 1.0).unwrap();
        assert!(matches!(
            ph.discretize(100),
            Err(Error::DegenerateDiscretization { s: 0, .. })
        ));
        assert!(PhaseParams::new(0.0, 0.5, 1.0).is_err());
        assert!(PhaseParams::new(0.2, 1.0, 1.0).is_err());
        assert!(PhaseParams::new(0.2, 0.5, 0.9).is_err());
    }
}
