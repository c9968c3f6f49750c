use nsp_core::specfun::{
    lambert_w0, lambert_wm1, log_binomial, log_factorial, log_gamma, log_sum_exp, LogSumExp,
    NEG_INV_E,
};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

fn exact_factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

#[test]
fn log_gamma_matches_exact_factorials() {
    for n in [20u32, 50, 100, 150, 170] {
        let exact = exact_factorial(n).to_f64().unwrap().ln();
        let lg = log_gamma(n as f64 + 1.0).unwrap();
        assert!(
            (lg - exact).abs() <= 1e-13 * exact,
            "n={n}: {lg} vs {exact}"
        );
        assert!((log_factorial(n as u64) - exact).abs() <= 1e-13 * exact);
    }
}

#[test]
fn large_binomial_frozen_value() {
    // 50-digit evaluation of ln C(200000, 77000)
    let v = log_binomial(200_000, 77_000).unwrap();
    assert!((v - 133_285.478_462_345_2).abs() <= 1e-10 * v, "{v}");
}

#[test]
fn stirling_theta_form_envelope() {
    // ln Γ(z+1) = ½ln(2πz) + z ln(z/e) + θ/(12z) with θ ∈ (0, 1)
    for i in 0..200 {
        let z = (1.0f64 / 12.0) * (1e6 * 12.0f64).powf((i as f64 + 0.5) / 200.0);
        let lg = log_gamma(z + 1.0).unwrap();
        let base = 0.5 * (2.0 * std::f64::consts::PI * z).ln() + z * (z / std::f64::consts::E).ln();
        let slack = 1e-14 * lg.abs().max(1.0);
        assert!(lg >= z * (z / std::f64::consts::E).ln(), "z={z}");
        assert!(lg > base - slack, "z={z}");
        assert!(lg < base + 1.0 / (12.0 * z) + slack, "z={z}");
    }
}

#[test]
fn stirling_corollary_upper_bound_is_false() {
    // Γ(z+1) ≤ √(2πz)(z/e)^z cannot hold: the θ/(12z) remainder is positive.
    for z in [0.1, 1.0, 10.0, 1000.0] {
        let lg = log_gamma(z + 1.0).unwrap();
        let upper =
            0.5 * (2.0 * std::f64::consts::PI * z).ln() + z * (z / std::f64::consts::E).ln();
        assert!(lg > upper, "z={z}");
    }
}

#[test]
fn lambert_identity_on_dense_grids() {
    let e = std::f64::consts::E;
    for i in 0..1000 {
        // W0 over [-1/e, e]
        let x = NEG_INV_E + (e - NEG_INV_E) * i as f64 / 999.0;
        let w = lambert_w0(x).unwrap();
        assert!(w >= -1.0);
        assert!(
            (w * w.exp() - x).abs() <= 1e-12 * x.abs().max(1.0),
            "w0({x})"
        );
        // W-1 over [-1/e, 0)
        let x = NEG_INV_E * (1.0 - i as f64 / 1000.0);
        let w = lambert_wm1(x).unwrap();
        assert!(w <= -1.0);
        assert!((w * w.exp() - x).abs() <= 1e-12, "wm1({x})");
    }
    assert!((lambert_wm1(NEG_INV_E).unwrap() + 1.0).abs() <= 1e-10);
    assert!((lambert_w0(NEG_INV_E).unwrap() + 1.0).abs() <= 1e-10);
}

#[test]
fn pascal_identity() {
    for a in 2..=500u64 {
        for b in 1..a {
            let lhs = log_binomial(a, b).unwrap();
            let rhs = log_sum_exp(&[
                log_binomial(a - 1, b - 1).unwrap(),
                log_binomial(a - 1, b).unwrap(),
            ])
            .unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0),
                "C({a},{b})"
            );
        }
    }
}

proptest! {
    #[test]
    fn gamma_recurrence(z in 0.5f64..1e6) {
        let lhs = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap();
        let scale = log_gamma(z + 1.0).unwrap().abs().max(1.0);
        prop_assert!((lhs - z.ln()).abs() <= 1e-11 * scale, "z={}", z);
    }

    #[test]
    fn binomial_symmetry(a in 1u64..100_000, frac in 0.0f64..1.0) {
        let b = ((a as f64) * frac) as u64;
        prop_assert_eq!(log_binomial(a, b).unwrap(), log_binomial(a, a - b).unwrap());
    }

    #[test]
    fn lse_is_order_insensitive(mut v in prop::collection::vec(-1e4f64..1e4, 1..200), seed in any::<u64>()) {
        let a = log_sum_exp(&v).unwrap();
        // deterministic shuffle
        let mut state = seed;
        for i in (1..v.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            v.swap(i, (state >> 33) as usize % (i + 1));
        }
        let b = log_sum_exp(&v).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        let mut acc = LogSumExp::default();
        v.iter().for_each(|&x| acc.push(x).unwrap());
        prop_assert!((acc.value() - a).abs() <= 1e-12 * a.abs().max(1.0));
        let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(a >= max && a <= max + (v.len() as f64).ln() + 1e-12);
    }
}
