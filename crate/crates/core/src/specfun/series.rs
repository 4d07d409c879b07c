//! Shared summation machinery for power series.

use crate::error::{bail, Result};

/// Relative size below which a term counts as negligible.
pub const REL_TOL: f64 = 1e-16;
/// Number of consecutive negligible terms required to stop.
pub const QUIET_RUN: usize = 3;
/// Hard cap on the number of terms.
pub const MAX_TERMS: usize = 100_000;

/// Compensated (Kahan–Babuška) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(x: f64) -> Self {
        Self { sum: x, comp: 0.0 }
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sums `t_0 + t_1 + ...` where `t_0 = first` and `t_{k+1} = t_k * ratio(k)`.
///
/// Stops when `|t_k| < REL_TOL * |sum|` for `QUIET_RUN` consecutive terms or
/// when a term is exactly zero (terminating series).
pub fn sum_ratio<F>(first: f64, mut ratio: F) -> Result<f64>
where
    F: FnMut(usize) -> f64,
{
    let mut acc = Kahan::with(first);
    let mut term = first;
    let mut quiet = 0;
    if term == 0.0 {
        return Ok(0.0);
    }
    for k in 0..MAX_TERMS {
        term *= ratio(k);
        if term == 0.0 {
            return Ok(acc.value());
        }
        if !term.is_finite() {
            bail!(Convergence, "series term overflowed at k = {}", k + 1);
        }
        acc.add(term);
        if term.abs() < REL_TOL * acc.value().abs() {
            quiet += 1;
            if quiet >= QUIET_RUN {
                return Ok(acc.value());
            }
        } else {
            quiet = 0;
        }
    }
    bail!(Convergence, "series did not converge in {MAX_TERMS} terms")
}

/// Sums exactly `n` terms of a ratio-defined series (finite hypergeometric sums).
pub fn sum_ratio_finite<F>(first: f64, n: usize, mut ratio: F) -> f64
where
    F: FnMut(usize) -> f64,
{
    let mut acc = Kahan::with(first);
    let mut term = first;
    for k in 0..n.saturating_sub(1) {
        term *= ratio(k);
        acc.add(term);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        let s = sum_ratio(1.0, |_| 0.5).unwrap();
        assert!((s - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_series() {
        let s = sum_ratio(1.0, |k| 1.0 / (k as f64 + 1.0)).unwrap();
        assert!((s - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn divergent_series_is_reported() {
        assert!(sum_ratio(1.0, |_| 1.0).is_err());
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let mut k = Kahan::with(1.0);
        for _ in 0..10_000 {
            k.add(1e-16);
        }
        assert!((k.value() - (1.0 + 1e-12)).abs() < 1e-18);
    }
}
