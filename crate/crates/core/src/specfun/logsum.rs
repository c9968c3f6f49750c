use crate::error::{domain, usage, Result};

/// ln Σ exp(t_i), computed against the maximum entry.
///
/// Entries may be `-inf` (zero terms); an all-`-inf` input returns `-inf`.
pub fn log_sum_exp(terms: &[f64]) -> Result<f64> {
    if terms.is_empty() {
        return Err(usage("log_sum_exp of an empty sequence"));
    }
    let mut acc = LogSumExp::new();
    for &t in terms {
        acc.push(t)?;
    }
    Ok(acc.value())
}

/// Streaming log-sum-exp with a running maximum.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    // Σ exp(t_i - max)
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        LogSumExp {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }

    pub fn push(&mut self, t: f64) -> Result<()> {
        if t.is_nan() {
            return Err(domain("NaN term in log-sum-exp"));
        }
        if t == f64::NEG_INFINITY {
            return Ok(());
        }
        if t <= self.max {
            self.scaled += (t - self.max).exp();
        } else {
            self.scaled = if self.max == f64::NEG_INFINITY {
                1.0
            } else {
                self.scaled * (self.max - t).exp() + 1.0
            };
            self.max = t;
        }
        Ok(())
    }

    /// Combines two partial accumulations.
    pub fn merge(self, other: LogSumExp) -> LogSumExp {
        if other.max == f64::NEG_INFINITY {
            return self;
        }
        if self.max == f64::NEG_INFINITY {
            return other;
        }
        if self.max >= other.max {
            LogSumExp {
                max: self.max,
                scaled: self.scaled + other.scaled * (other.max - self.max).exp(),
            }
        } else {
            LogSumExp {
                max: other.max,
                scaled: other.scaled + self.scaled * (self.max - other.max).exp(),
            }
        }
    }

    /// Largest term seen so far.
    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        if self.max == f64::INFINITY {
            return f64::INFINITY;
        }
        self.max + self.scaled.ln()
    }
}
