use crate::error::{Error, Result};
use crate::lp::{solve, LpProblem, LpStatus};

use super::KernelSample;

/// Largest ambient dimension accepted by the exact checker.
pub const MAX_P: usize = 20;
/// Largest sparsity accepted by the exact checker.
pub const MAX_S: usize = 4;

/// A kernel vector γ = G t that breaks C‖γ_S‖₁ ≤ ‖γ_{S^c}‖₁.
#[derive(Debug, Clone, PartialEq)]
pub struct NspWitness {
    pub support: Vec<usize>,
    /// Sign pattern σ of the LP that found the violation.
    pub signs: Vec<i8>,
    /// Unit direction in R^m.
    pub t: Vec<f64>,
    /// ‖γ_{S^c}‖₁ / ‖γ_S‖₁, below C.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NspCheck {
    pub holds: bool,
    pub witness: Option<NspWitness>,
    /// Smallest LP value seen. When NSP holds this is the exact minimum of
    /// ‖γ_{S^c}‖₁ / ‖γ_S‖₁ over the kernel and all |S| = s.
    pub min_value: f64,
    pub lp_solves: usize,
}

/// Decides NSP(s, C) for the span of the kernel generators.
///
/// For every support |S| = s and sign pattern σ on S (up to global sign) it
/// solves min ‖(Gt)_{S^c}‖₁ subject to σᵀ(Gt)_S = 1. The property fails iff
/// some value drops below C(1 − 1e-9); the first such pattern is returned
/// as the witness. Supports smaller than s need no separate check, since
/// growing S by the largest off-support entry only helps a violation.
///
/// Generators are rescaled by their largest entry before the LPs, which
/// leaves every ratio unchanged.
pub fn check_nsp(kernel: &KernelSample, s: usize, c: f64) -> Result<NspCheck> {
    let (p, m) = (kernel.p(), kernel.m());
    if p > MAX_P || s > MAX_S {
        return Err(Error::Budget(format!(
            "exact NSP check supports p <= {MAX_P} and s <= {MAX_S}, got p={p}, s={s}"
        )));
    }
    if s == 0 || s >= p {
        return Err(Error::Domain(format!(
            "require 1 <= s < p, got s={s}, p={p}"
        )));
    }
    if !(c >= 1.0) || !c.is_finite() {
        return Err(Error::Domain(format!("require C >= 1, got {c}")));
    }
    let scale = kernel.generators().amax();
    let g: Vec<Vec<f64>> = (0..p)
        .map(|j| {
            (0..m)
                .map(|k| kernel.generators()[(j, k)] / scale)
                .collect()
        })
        .collect();
    let cutoff = c * (1.0 - 1e-9);

    let mut out = NspCheck {
        holds: true,
        witness: None,
        min_value: f64::INFINITY,
        lp_solves: 0,
    };
    let mut support: Vec<usize> = (0..s).collect();
    loop {
        for pattern in 0..1u32 << (s - 1) {
            let signs: Vec<i8> = (0..s)
                .map(|i| {
                    if i > 0 && pattern >> (i - 1) & 1 == 1 {
                        -1
                    } else {
                        1
                    }
                })
                .collect();
            let lp = support_lp(&g, m, &support, &signs)?;
            let sol = solve(&lp)?;
            out.lp_solves += 1;
            if let LpStatus::Optimal { value, point, .. } = sol.status {
                out.min_value = out.min_value.min(value);
                if value < cutoff {
                    let mut t: Vec<f64> = (0..m).map(|k| point[k] - point[m + k]).collect();
                    let norm = t.iter().map(|v| v * v).sum::<f64>().sqrt();
                    t.iter_mut().for_each(|v| *v /= norm);
                    out.holds = false;
                    out.witness = Some(NspWitness {
                        support: support.clone(),
                        signs,
                        t,
                        value,
                    });
                    return Ok(out);
                }
            }
        }
        if !next_combination(&mut support, p) {
            return Ok(out);
        }
    }
}

/// Variables (t⁺, t⁻, u, v) with γ_j = u_j − v_j off the support.
fn support_lp(g: &[Vec<f64>], m: usize, support: &[usize], signs: &[i8]) -> Result<LpProblem> {
    let off: Vec<usize> = (0..g.len()).filter(|j| !support.contains(j)).collect();
    let q = off.len();
    let nv = 2 * m + 2 * q;
    let mut objective = vec![0.0; nv];
    objective[2 * m..].fill(1.0);
    let mut rows = Vec::with_capacity(q + 1);
    for (r, &j) in off.iter().enumerate() {
        let mut row = vec![0.0; nv];
        for k in 0..m {
            row[k] = g[j][k];
            row[m + k] = -g[j][k];
        }
        row[2 * m + r] = -1.0;
        row[2 * m + q + r] = 1.0;
        rows.push(row);
    }
    let mut norm_row = vec![0.0; nv];
    for (&i, &sg) in support.iter().zip(signs) {
        for k in 0..m {
            norm_row[k] += sg as f64 * g[i][k];
            norm_row[m + k] -= sg as f64 * g[i][k];
        }
    }
    rows.push(norm_row);
    let mut rhs = vec![0.0; q];
    rhs.push(1.0);
    LpProblem::new(objective, rows, rhs)
}

/// Advances a sorted index set to the next one in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
