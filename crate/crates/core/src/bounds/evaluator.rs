use super::{h_assumption_violated, h_cap_from, Params};
use crate::error::{usage, Error, Result};
use crate::par::{map_range, Exec};
use crate::specfun::{HalfIntLogGamma, LogSumExp, LN_SQRT_PI};
use std::f64::consts::{LN_2, PI};

/// Terms are reduced in fixed-size chunks so the result is independent of
/// thread count.
const CHUNK: usize = 4096;

/// Result of evaluating the main bound for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub params: Params,
    /// ln of the upper bound on Π (may be positive: the bound is formal).
    pub log_pi: f64,
    /// Entry k holds ln term_k, k = 0..m-1.
    pub terms: Vec<f64>,
    /// Index of the largest term.
    pub dominant_k: u64,
    pub diagnostics: BoundDiagnostics,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundDiagnostics {
    /// Number of k >= 1 with H_k < m and H_k <= m - k + 1.
    pub h_assumption_violations: u64,
    pub first_h_violation: Option<u64>,
    /// Number of k with H_k < m whose Q factor exceeds one.
    pub positive_log_q: u64,
    /// Every term is finite.
    pub all_finite: bool,
}

impl BoundReport {
    /// Π itself; may overflow to `inf` for hopeless instances.
    pub fn pi_raw(&self) -> f64 {
        self.log_pi.exp()
    }

    /// min(1, Π), for display only.
    pub fn pi_clamped(&self) -> f64 {
        self.pi_raw().min(1.0)
    }

    pub fn terms_indexed(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.terms.iter().enumerate().map(|(k, &t)| (k as u64, t))
    }
}

/// Evaluates the main bound for fixed (n, p, C) and any sparsity s.
///
/// Construction tabulates ln Γ(j/2) for j <= 2p + 2, after which each term
/// costs one logarithm plus table reads. Phase-curve solvers reuse one
/// evaluator across all the s values they probe.
#[derive(Debug, Clone)]
pub struct BoundEvaluator {
    n: u64,
    p: u64,
    c: f64,
    table: HalfIntLogGamma,
}

struct SparsityConsts {
    s: u64,
    sf: f64,
    c2m1_s: f64,
    ln_c2s: f64,
    psi_power_half: f64,
}

impl BoundEvaluator {
    pub fn new(n: u64, p: u64, c: f64) -> Result<Self> {
        // s = 1 is the weakest instance these (n, p, C) admit
        Params::new(c, 1, n, p).map_err(|e| match e {
            Error::InvalidParams(msg) => {
                Error::InvalidParams(msg.replace("s < n, got s=1", "n >= 2, got"))
            }
            other => other,
        })?;
        Ok(BoundEvaluator {
            n,
            p,
            c,
            table: HalfIntLogGamma::new(2 * p as usize + 2),
        })
    }

    pub fn for_params(params: &Params) -> Self {
        BoundEvaluator {
            n: params.n(),
            p: params.p(),
            c: params.c(),
            table: HalfIntLogGamma::new(2 * params.p() as usize + 2),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn m(&self) -> u64 {
        self.p - self.n
    }

    pub fn params(&self, s: u64) -> Result<Params> {
        Params::new(self.c, s, self.n, self.p)
    }

    fn consts(&self, s: u64) -> SparsityConsts {
        let sf = s as f64;
        let c2 = self.c * self.c;
        SparsityConsts {
            s,
            sf,
            c2m1_s: (c2 - 1.0) * sf,
            ln_c2s: (c2 * sf).ln(),
            psi_power_half: 0.5 * ((4.0 * c2 * sf).ln() - PI.ln()),
        }
    }

    #[inline]
    fn term(&self, sc: &SparsityConsts, k: u64) -> (f64, u64) {
        let t = &self.table;
        let (n, p, m, s) = (self.n, self.p, self.m(), sc.s);
        let l = p - k;
        let pt = sc.c2m1_s + l as f64;
        let ln_pt = pt.ln();

        let binom = t.fact(p) - (t.fact(k) + t.fact(l));
        let power = 0.5 * (m - 1 - k) as f64 * (sc.ln_c2s - ln_pt);
        let gammas = t.half(2 * p - 2 * k - n - 1) - t.half(l) - t.half(m - k);
        let psi = t.fact(l) - (t.fact(s) + t.fact(l - s))
            + (l - s) as f64 * sc.psi_power_half
            + t.half(l)
            - t.half(s)
            - t.fact(l - s);
        let (q, h) = if k == 0 {
            (0.0, m)
        } else {
            let h = h_cap_from(pt, m);
            let exponent = (h + k) as f64 - m as f64;
            (
                0.5 * (exponent * (LN_2 - PI.ln() - ln_pt) + t.fact(h) - t.fact(m - k)),
                h,
            )
        };
        debug_assert!(sc.sf > 0.0);
        (binom + power + gammas + psi + q, h)
    }

    fn check_s(&self, s: u64) -> Result<()> {
        if s == 0 || s >= self.n {
            return Err(usage(format!(
                "sparsity must satisfy 0 < s < n = {}, got {s}",
                self.n
            )));
        }
        Ok(())
    }

    /// ln term_k via the table route.
    pub fn log_term(&self, s: u64, k: u64) -> Result<f64> {
        self.check_s(s)?;
        if k >= self.m() {
            return Err(crate::error::domain(format!(
                "require k <= m-1 = {}, got {k}",
                self.m() - 1
            )));
        }
        Ok(self.term(&self.consts(s), k).0)
    }

    /// ln Π without materializing the term vector.
    pub fn log_pi(&self, s: u64, exec: Exec) -> Result<f64> {
        self.check_s(s)?;
        let sc = self.consts(s);
        let m = self.m() as usize;
        let chunks = m.div_ceil(CHUNK);
        let partials = map_range(exec, 0..chunks, |ci| {
            let mut acc = LogSumExp::new();
            for k in ci * CHUNK..((ci + 1) * CHUNK).min(m) {
                // terms are finite by construction; NaN is ruled out below
                let _ = acc.push(self.term(&sc, k as u64).0);
            }
            acc
        });
        let total = partials
            .into_iter()
            .fold(LogSumExp::new(), LogSumExp::merge);
        let v = LN_SQRT_PI + total.value();
        if v.is_nan() {
            return Err(crate::error::domain("NaN in bound evaluation"));
        }
        Ok(v)
    }

    /// Full per-term report.
    pub fn report(&self, s: u64, exec: Exec) -> Result<BoundReport> {
        self.check_s(s)?;
        let params = self.params(s)?;
        let sc = self.consts(s);
        let m = self.m() as usize;
        let evaluated = map_range(exec, 0..m, |k| self.term(&sc, k as u64));

        let mut diagnostics = BoundDiagnostics {
            all_finite: true,
            ..Default::default()
        };
        let mut terms = Vec::with_capacity(m);
        let mut dominant_k = 0u64;
        let mut best = f64::NEG_INFINITY;
        for (k, &(t, h)) in evaluated.iter().enumerate() {
            let k = k as u64;
            if !t.is_finite() {
                diagnostics.all_finite = false;
            }
            if t > best {
                best = t;
                dominant_k = k;
            }
            if h_assumption_violated(&params, k, h) {
                diagnostics.h_assumption_violations += 1;
                diagnostics.first_h_violation.get_or_insert(k);
            }
            if k >= 1
                && h < params.m()
                && super::log_q(&params, k).map(|q| q > 0.0).unwrap_or(false)
            {
                diagnostics.positive_log_q += 1;
            }
            terms.push(t);
        }
        if diagnostics.h_assumption_violations > 0 {
            log::warn!(
                "H_k <= m - k + 1 at {} indices (first k = {:?}) for (s={s}, n={}, p={}, C={})",
                diagnostics.h_assumption_violations,
                diagnostics.first_h_violation,
                self.n,
                self.p,
                self.c
            );
        }
        if diagnostics.positive_log_q > 0 {
            log::warn!(
                "Q factor exceeds one at {} indices",
                diagnostics.positive_log_q
            );
        }

        let mut total = LogSumExp::new();
        for chunk in terms.chunks(CHUNK) {
            let mut acc = LogSumExp::new();
            for &t in chunk {
                acc.push(t)?;
            }
            total = total.merge(acc);
        }
        Ok(BoundReport {
            params,
            log_pi: LN_SQRT_PI + total.value(),
            terms,
            dominant_k,
            diagnostics,
        })
    }
}

/// Evaluates Π ≤ √π Σ_k term_k for one instance.
pub fn pi_bound(params: &Params) -> Result<BoundReport> {
    pi_bound_with(params, Exec::default())
}

pub fn pi_bound_with(params: &Params, exec: Exec) -> Result<BoundReport> {
    BoundEvaluator::for_params(params).report(params.s(), exec)
}
