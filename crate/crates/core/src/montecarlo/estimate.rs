use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::function::beta::beta_reg;

use crate::bounds::{log_psi, pi_bound, Params};
use crate::error::{domain, usage, Error, Result};
use crate::par::{map_range, Exec};

use super::kernel::{sample_kernel_stream, sup_x_with};
use super::nsp::{check_nsp, MAX_P, MAX_S};

/// One-sided confidence level of every reported interval.
pub const CONFIDENCE: f64 = 0.99;

/// Key mixed into the seed for the direction draws of `supx` trials, so that
/// they do not reuse the kernel's random words.
const DIRECTION_KEY: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    /// The lower confidence bound on the failure rate exceeds a bound below 1.
    Violated,
    /// The theoretical bound is at least 1 and says nothing.
    BoundVacuous,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Consistent => "Consistent",
            Verdict::Violated => "Violated",
            Verdict::BoundVacuous => "BoundVacuous",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    /// Trials that produced a verdict; discarded trials are not included.
    pub trials: u64,
    pub failures: u64,
    /// Trials dropped because the LP solver gave up.
    pub discarded: u64,
    pub p_hat: f64,
    /// One-sided 99% Clopper–Pearson bounds on the failure rate.
    pub lower_conf: f64,
    pub upper_conf: f64,
    pub log_theory_bound: f64,
    /// exp(log_theory_bound), unclamped.
    pub theory_bound: f64,
    pub verdict: Verdict,
}

impl McReport {
    fn new(trials: u64, failures: u64, discarded: u64, log_theory_bound: f64) -> Result<Self> {
        if trials == 0 {
            return Err(usage("every trial was discarded"));
        }
        let (lower_conf, upper_conf) = clopper_pearson(failures, trials, CONFIDENCE);
        let theory_bound = log_theory_bound.exp();
        let verdict = if theory_bound >= 1.0 {
            Verdict::BoundVacuous
        } else if lower_conf > theory_bound {
            Verdict::Violated
        } else {
            Verdict::Consistent
        };
        Ok(McReport {
            trials,
            failures,
            discarded,
            p_hat: failures as f64 / trials as f64,
            lower_conf,
            upper_conf,
            log_theory_bound,
            theory_bound,
            verdict,
        })
    }
}

/// One-sided Clopper–Pearson bounds (lower, upper) at `level` for `x`
/// successes in `n` trials.
pub fn clopper_pearson(x: u64, n: u64, level: f64) -> (f64, f64) {
    assert!(n > 0 && x <= n, "need 0 <= x <= n, n > 0");
    let alpha = 1.0 - level;
    let (xf, nf) = (x as f64, n as f64);
    // P(Bin(n, q) >= x) = I_q(x, n - x + 1), increasing in q
    let lower = if x == 0 {
        0.0
    } else {
        bisect_increasing(|q| beta_reg(xf, nf - xf + 1.0, q), alpha)
    };
    // P(Bin(n, q) <= x) = 1 - I_q(x + 1, n - x), decreasing in q
    let upper = if x == n {
        1.0
    } else {
        bisect_increasing(|q| beta_reg(xf + 1.0, nf - xf, q), level)
    };
    (lower, upper)
}

fn bisect_increasing(f: impl Fn(f64) -> f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(usage("trials must be at least 1"));
    }
    if trials > usize::MAX as u64 {
        return Err(usage("too many trials"));
    }
    Ok(())
}

/// Whether C Σ(s largest |g_i|) > Σ(rest) for one vector.
pub fn psi_failure_event(g: &mut [f64], s: usize, c: f64) -> bool {
    for v in g.iter_mut() {
        *v = v.abs();
    }
    g.sort_by(|a, b| b.total_cmp(a));
    let top: f64 = g[..s].iter().sum();
    let rest: f64 = g[s..].iter().sum();
    c * top > rest
}

/// Failure rate of the Gaussian-vector event against ψ_l(C).
pub fn estimate_psi_failure(
    l: u64,
    s: u64,
    c: f64,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<McReport> {
    check_trials(trials)?;
    let log_bound = log_psi(l, s, c)?;
    let (l, s) = (l as usize, s as usize);
    let outcomes = map_range(exec, 0..trials as usize, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let mut g: Vec<f64> = (0..l).map(|_| rng.sample(StandardNormal)).collect();
        psi_failure_event(&mut g, s, c)
    });
    let failures = outcomes.iter().filter(|&&f| f).count() as u64;
    McReport::new(trials, failures, 0, log_bound)
}

fn check_budget(params: &Params) -> Result<()> {
    if params.p() as usize > MAX_P || params.s() as usize > MAX_S {
        return Err(Error::Budget(format!(
            "exact NSP check supports p <= {MAX_P} and s <= {MAX_S}, got p={}, s={}",
            params.p(),
            params.s()
        )));
    }
    Ok(())
}

fn tally(outcomes: Vec<Result<bool>>, what: &str) -> Result<(u64, u64, u64)> {
    let (mut trials, mut failures, mut discarded) = (0, 0, 0);
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(failed) => {
                trials += 1;
                failures += failed as u64;
            }
            Err(e @ Error::SolverFailure { .. }) => {
                warn!("{what} trial {i} discarded: {e}");
                discarded += 1;
            }
            Err(e) => return Err(e),
        }
    }
    Ok((trials, failures, discarded))
}

/// Frequency of NSP(s, C) failures among Gaussian kernels, against Π.
pub fn estimate_nsp_failure(
    params: &Params,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<McReport> {
    check_trials(trials)?;
    check_budget(params)?;
    let log_bound = pi_bound(params)?.log_pi;
    let (p, m, s, c) = (
        params.p() as usize,
        params.m() as usize,
        params.s() as usize,
        params.c(),
    );
    let outcomes = map_range(exec, 0..trials as usize, |i| {
        let kernel = sample_kernel_stream(p, m, seed, i as u64);
        check_nsp(&kernel, s, c).map(|chk| !chk.holds)
    });
    let (trials, failures, discarded) = tally(outcomes, "nsp")?;
    McReport::new(trials, failures, discarded, log_bound)
}

/// Frequency of a positive sampled sup X(t), a lower estimate of the NSP
/// failure rate, against Π.
pub fn estimate_supx_failure(
    params: &Params,
    samples: usize,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<McReport> {
    check_trials(trials)?;
    if samples == 0 {
        return Err(usage("samples must be at least 1"));
    }
    if params.s() >= params.p() {
        return Err(domain("require s < p"));
    }
    let log_bound = pi_bound(params)?.log_pi;
    let (p, m, s, c) = (
        params.p() as usize,
        params.m() as usize,
        params.s() as usize,
        params.c(),
    );
    let outcomes = map_range(exec, 0..trials as usize, |i| {
        let kernel = sample_kernel_stream(p, m, seed, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ DIRECTION_KEY);
        rng.set_stream(i as u64);
        sup_x_with(&kernel, s, c, samples, &mut rng).map(|sup| sup.max > 0.0)
    });
    let (trials, failures, discarded) = tally(outcomes, "supx")?;
    McReport::new(trials, failures, discarded, log_bound)
}
