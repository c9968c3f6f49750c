use log::debug;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bounds::Params;
use crate::error::{domain, usage, Result};

/// Generator sets whose singular values spread further than this are redrawn.
pub const MAX_CONDITION: f64 = 1e10;

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSample {
    /// p × m; column i is the generator g_i, row j is g^j.
    generators: DMatrix<f64>,
    seed: u64,
    stream: u64,
    resamples: u32,
}

impl KernelSample {
    /// Wraps explicit generators (columns of `generators`).
    pub fn from_generators(generators: DMatrix<f64>) -> Result<Self> {
        if generators.ncols() == 0 || generators.nrows() <= generators.ncols() {
            return Err(usage(format!(
                "need p > m >= 1 generators, got a {}x{} matrix",
                generators.nrows(),
                generators.ncols()
            )));
        }
        if generators.iter().any(|v| !v.is_finite()) {
            return Err(usage("generators must be finite"));
        }
        Ok(KernelSample {
            generators,
            seed: 0,
            stream: 0,
            resamples: 0,
        })
    }

    pub fn generators(&self) -> &DMatrix<f64> {
        &self.generators
    }
    pub fn p(&self) -> usize {
        self.generators.nrows()
    }
    pub fn m(&self) -> usize {
        self.generators.ncols()
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn stream(&self) -> u64 {
        self.stream
    }
    /// Draws rejected as numerically rank-deficient before this one.
    pub fn resamples(&self) -> u32 {
        self.resamples
    }

    /// Same kernel with every generator multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        KernelSample {
            generators: &self.generators * lambda,
            ..self.clone()
        }
    }

    /// Z(t) = G t, the kernel vector with coordinates ⟨t, g^j⟩.
    pub fn kernel_vector(&self, t: &[f64]) -> Vec<f64> {
        let (p, m) = (self.p(), self.m());
        (0..p)
            .map(|j| (0..m).map(|k| self.generators[(j, k)] * t[k]).sum())
            .collect()
    }
}

fn condition_number(g: &DMatrix<f64>) -> f64 {
    let sv = g.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

/// Kernel for `params` drawn from stream 0 of `seed`.
pub fn sample_kernel(params: &Params, seed: u64) -> KernelSample {
    sample_kernel_stream(params.p() as usize, params.m() as usize, seed, 0)
}

/// p × m standard Gaussian generators from stream `stream` of `seed`,
/// filled column by column.
pub fn sample_kernel_stream(p: usize, m: usize, seed: u64, stream: u64) -> KernelSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut resamples = 0;
    loop {
        let generators = DMatrix::from_fn(p, m, |_, _| rng.sample::<f64, _>(StandardNormal));
        if condition_number(&generators) <= MAX_CONDITION {
            return KernelSample {
                generators,
                seed,
                stream,
                resamples,
            };
        }
        resamples += 1;
        debug!("seed {seed} stream {stream}: rank-deficient generators, redraw #{resamples}");
    }
}

/// X(t) = C Σ_{i ≤ s} |Z|_(i) − Σ_{i > s} |Z|_(i), with |Z| sorted decreasingly.
///
/// Ties keep their natural index order.
pub fn eval_x(kernel: &KernelSample, t: &[f64], s: usize, c: f64) -> Result<f64> {
    if t.len() != kernel.m() {
        return Err(domain(format!(
            "t has dimension {}, kernel has m = {}",
            t.len(),
            kernel.m()
        )));
    }
    let norm = t.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !((norm - 1.0).abs() <= 1e-9) {
        return Err(domain(format!("t must be a unit vector, |t| = {norm}")));
    }
    if s > kernel.p() {
        return Err(domain(format!("s = {s} exceeds p = {}", kernel.p())));
    }
    Ok(x_unchecked(
        kernel,
        t,
        s,
        c,
        &mut Vec::with_capacity(kernel.p()),
    ))
}

pub(crate) fn x_unchecked(
    kernel: &KernelSample,
    t: &[f64],
    s: usize,
    c: f64,
    buf: &mut Vec<f64>,
) -> f64 {
    let g = &kernel.generators;
    buf.clear();
    buf.extend(
        (0..kernel.p()).map(|j| (0..kernel.m()).map(|k| g[(j, k)] * t[k]).sum::<f64>().abs()),
    );
    // stable: equal magnitudes keep their index order
    buf.sort_by(|a, b| b.total_cmp(a));
    let top: f64 = buf[..s].iter().sum();
    let rest: f64 = buf[s..].iter().sum();
    c * top - rest
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupSample {
    pub max: f64,
    pub argmax: Vec<f64>,
    pub evaluations: usize,
}

/// Largest X(t) over `samples` uniform directions t drawn from `seed`.
///
/// A positive maximum certifies that NSP(s, C) fails. With m = 1 the sphere
/// is {±1} and X(1) = X(-1), so a single evaluation is exact.
pub fn sample_sup_x(
    kernel: &KernelSample,
    s: usize,
    c: f64,
    samples: usize,
    seed: u64,
) -> Result<SupSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sup_x_with(kernel, s, c, samples, &mut rng)
}

pub(crate) fn sup_x_with(
    kernel: &KernelSample,
    s: usize,
    c: f64,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SupSample> {
    if samples == 0 {
        return Err(usage("samples must be at least 1"));
    }
    if s == 0 || s >= kernel.p() {
        return Err(domain(format!(
            "require 1 <= s < p, got s={s}, p={}",
            kernel.p()
        )));
    }
    let m = kernel.m();
    let mut buf = Vec::with_capacity(kernel.p());
    if m == 1 {
        let t = vec![1.0];
        return Ok(SupSample {
            max: x_unchecked(kernel, &t, s, c, &mut buf),
            argmax: t,
            evaluations: 1,
        });
    }
    let mut best = SupSample {
        max: f64::NEG_INFINITY,
        argmax: Vec::new(),
        evaluations: 0,
    };
    let mut t = vec![0.0; m];
    for _ in 0..samples {
        let norm = loop {
            for v in t.iter_mut() {
                *v = rng.sample(StandardNormal);
            }
            let norm = t.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                break norm;
            }
        };
        t.iter_mut().for_each(|v| *v /= norm);
        let x = x_unchecked(kernel, &t, s, c, &mut buf);
        best.evaluations += 1;
        if x > best.max {
            best.max = x;
            best.argmax.clone_from(&t);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixed(rows: &[&[f64]]) -> KernelSample {
        let p = rows.len();
        let m = rows[0].len();
        KernelSample::from_generators(DMatrix::from_fn(p, m, |j, k| rows[j][k])).unwrap()
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sample_kernel_stream(10, 2, 42, 3);
        let b = sample_kernel_stream(10, 2, 42, 3);
        let c = sample_kernel_stream(10, 2, 42, 4);
        assert_eq!(a, b);
        assert_ne!(a.generators(), c.generators());
        let params = Params::new(1.0, 1, 8, 10).unwrap();
        let k = sample_kernel(&params, 42);
        assert_eq!((k.p(), k.m()), (10, 2));
        assert_eq!(
            k.generators(),
            sample_kernel_stream(10, 2, 42, 0).generators()
        );
    }

    #[test]
    fn single_generator_value() {
        // entries 3, -1, 2: C * 3 - (2 + 1)
        let k = fixed(&[&[3.0], &[-1.0], &[2.0]]);
        assert_eq!(eval_x(&k, &[1.0], 1, 1.0).unwrap(), 0.0);
        assert_eq!(eval_x(&k, &[1.0], 1, 2.0).unwrap(), 3.0);
        assert_eq!(eval_x(&k, &[-1.0], 1, 2.0).unwrap(), 3.0);
    }

    #[test]
    fn hand_computed_two_dimensional() {
        // g^1 = (1, 0), g^2 = (0, 2), g^3 = (1, 1); t = (0.6, 0.8)
        // Z = (0.6, 1.6, 1.4); X = C·1.6 − (1.4 + 0.6)
        let k = fixed(&[&[1.0, 0.0], &[0.0, 2.0], &[1.0, 1.0]]);
        let x = eval_x(&k, &[0.6, 0.8], 1, 1.5).unwrap();
        assert!((x - (1.5 * 1.6 - 2.0)).abs() < 1e-14);
    }

    #[test]
    fn eval_x_checks_unit_norm() {
        let k = fixed(&[&[1.0, 0.0], &[0.0, 2.0], &[1.0, 1.0]]);
        assert!(eval_x(&k, &[1.0, 1e-3], 1, 1.0).is_err());
        assert!(eval_x(&k, &[1.0], 1, 1.0).is_err());
        assert!(eval_x(&k, &[1.0 + 5e-10, 0.0], 1, 1.0).is_ok());
    }

    #[test]
    fn sup_x_single_generator_is_one_evaluation() {
        let k = fixed(&[&[3.0], &[-1.0], &[1.0]]);
        let sup = sample_sup_x(&k, 1, 1.0, 1000, 9).unwrap();
        assert_eq!(sup.evaluations, 1);
        assert_eq!(sup.max, 1.0);
        assert_eq!(sup.argmax, vec![1.0]);
    }

    #[test]
    fn sup_x_running_max_is_monotone() {
        let k = sample_kernel_stream(8, 3, 5, 0);
        let mut prev = f64::NEG_INFINITY;
        for n in [1, 2, 5, 10, 100, 1000] {
            let sup = sample_sup_x(&k, 1, 1.0, n, 77).unwrap();
            assert!(sup.max >= prev);
            prev = sup.max;
        }
        assert!(sample_sup_x(&k, 1, 1.0, 0, 77).is_err());
    }

    #[test]
    fn rank_deficiency_is_rejected() {
        let g = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]);
        assert!(condition_number(&g) > MAX_CONDITION);
        assert!(condition_number(&DMatrix::<f64>::identity(3, 2)) < 1.0 + 1e-12);
    }
}
