//! Exponential integral and lower incomplete gamma function.

use super::gamma::ln_gamma;
use super::series::{sum_ratio, Kahan, MAX_TERMS};
use crate::error::{bail, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Above this argument Ei switches to its asymptotic expansion.
const EI_SERIES_MAX: f64 = 40.0;

/// ∫₀^x (e^t − 1)/t dt = Σ_{k≥1} x^k/(k·k!).
pub fn ein_kernel(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    // t_k = x^k/(k k!), t_{k+1}/t_k = x k/((k+1)^2)
    sum_ratio(x, |k| {
        let k = (k + 1) as f64;
        x * k / ((k + 1.0) * (k + 1.0))
    })
}

/// e^x E1(x) for x ≥ 1 by continued fraction (modified Lentz).
fn e1_scaled_cf(x: f64) -> Result<f64> {
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_TERMS {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            return Ok(h);
        }
    }
    bail!(Convergence, "E1 continued fraction did not converge")
}

/// e^{-x} Ei(x) from the asymptotic expansion Σ k!/x^{k+1}, for large x.
fn ei_scaled_asym(x: f64) -> f64 {
    let mut acc = Kahan::new();
    let mut term = 1.0 / x;
    for k in 1..200 {
        acc.add(term);
        let next = term * k as f64 / x;
        if next.abs() >= term.abs() || next.abs() < 1e-17 * acc.value() {
            break;
        }
        term = next;
    }
    acc.value()
}

/// Exponential integral Ei(x), principal value, for real x ≠ 0.
pub fn expint_ei(x: f64) -> Result<f64> {
    if x == 0.0 {
        bail!(Divergence, "Ei(0) is -∞");
    }
    if x.is_nan() {
        bail!(Domain, "Ei of NaN");
    }
    if x < -1.0 {
        return Ok(-e1_scaled_cf(-x)? * x.exp());
    }
    if x > EI_SERIES_MAX {
        return Ok(ei_scaled_asym(x) * x.exp());
    }
    Ok(ein_kernel(x)? + 0.5 * (x.abs().ln() - (1.0 / x.abs()).ln()) + EULER_GAMMA)
}

/// e^{-x} Ei(x), finite for all large positive x.
pub fn expint_ei_scaled(x: f64) -> Result<f64> {
    if x > EI_SERIES_MAX {
        return Ok(ei_scaled_asym(x));
    }
    if x < -1.0 {
        return Ok(-e1_scaled_cf(-x)?);
    }
    Ok(expint_ei(x)? * (-x).exp())
}

/// Lower incomplete gamma γ(s, z) = ∫₀^z t^{s-1}e^{-t} dt for s > 0, z ≥ 0.
pub fn lower_gamma(s: f64, z: f64) -> Result<f64> {
    Ok(reg_lower_gamma(s, z)? * ln_gamma(s).exp())
}

/// Regularized lower incomplete gamma P(s, z) = γ(s,z)/Γ(s).
pub fn reg_lower_gamma(s: f64, z: f64) -> Result<f64> {
    if !(s > 0.0) || !(z >= 0.0) || !s.is_finite() {
        bail!(Domain, "lower_gamma needs s > 0 and z ≥ 0");
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z.is_infinite() {
        return Ok(1.0);
    }
    if z <= s + 1.0 {
        // z^s e^{-z}/Γ(s+1) Σ z^k/(s+1)_k
        let pre = s * z.ln() - z - ln_gamma(s + 1.0);
        let sum = sum_ratio(1.0, |k| z / (s + 1.0 + k as f64))?;
        return Ok(pre.exp() * sum);
    }
    Ok(1.0 - upper_cf(s, z)?)
}

/// Regularized upper incomplete gamma Q(s,z) by continued fraction, z > s+1.
fn upper_cf(s: f64, z: f64) -> Result<f64> {
    let tiny = 1e-300;
    let mut b = z + 1.0 - s;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_TERMS {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            return Ok((s * z.ln() - z - ln_gamma(s)).exp() * h);
        }
    }
    bail!(Convergence, "incomplete gamma continued fraction did not converge")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ei_spot_values() {
        assert_relative_eq!(expint_ei(1.0).unwrap(), 1.895_117_816_355_936_8, max_relative = 1e-14);
        assert_relative_eq!(expint_ei(-1.0).unwrap(), -0.219_383_934_395_520_27, max_relative = 1e-13);
        assert!(expint_ei(-3.0).unwrap() < 0.0);
        assert!(expint_ei(0.0).is_err());
        assert_eq!(ein_kernel(0.0).unwrap(), 0.0);
        assert!(ein_kernel(1e-8).unwrap().abs() < 2e-8);
    }

    #[test]
    fn ei_branches_agree() {
        // series and asymptotic forms across the switch point
        let x = EI_SERIES_MAX;
        let series = ein_kernel(x).unwrap() + x.ln() + EULER_GAMMA;
        assert_relative_eq!(series * (-x).exp(), ei_scaled_asym(x), max_relative = 1e-13);
        // series and continued fraction on the negative side
        let y = -1.5f64;
        let series = ein_kernel(y).unwrap() + y.abs().ln() + EULER_GAMMA;
        assert_relative_eq!(series, expint_ei(y).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn scaled_is_consistent() {
        for &x in &[0.5, 5.0, 30.0] {
            assert_relative_eq!(expint_ei_scaled(x).unwrap(), expint_ei(x).unwrap() * (-x as f64).exp(), max_relative = 1e-13);
        }
        assert_relative_eq!(expint_ei_scaled(200.0).unwrap(), 1.0 / 200.0 * (1.0 + 1.0 / 200.0 + 2.0 / 40000.0), max_relative = 1e-6);
    }

    #[test]
    fn lower_gamma_values() {
        assert_relative_eq!(lower_gamma(1.0, 1.0).unwrap(), 1.0 - (-1f64).exp(), max_relative = 1e-14);
        assert_eq!(lower_gamma(2.5, 0.0).unwrap(), 0.0);
        let x = 2f64.ln();
        assert_relative_eq!(lower_gamma(2.0, x).unwrap(), 1.0 - (-x).exp() * (1.0 + x), max_relative = 1e-13);
        // continued-fraction branch
        let x = 9.0f64;
        assert_relative_eq!(lower_gamma(2.0, x).unwrap(), 1.0 - (-x).exp() * (1.0 + x), max_relative = 1e-13);
    }
}
