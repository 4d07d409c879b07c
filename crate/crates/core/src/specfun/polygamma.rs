//! Polygamma functions ψ^{(n)}(x) for real x > 0.

use super::gamma::factorial;
use super::series::Kahan;
use crate::error::{bail, Result};

/// B_2, B_4, ..., B_20.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

fn asymptotic(n: u32, x: f64) -> f64 {
    let mut acc = Kahan::new();
    if n == 0 {
        acc.add(x.ln());
        acc.add(-0.5 / x);
        let x2 = x * x;
        let mut p = x2;
        for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
            acc.add(-b / (2.0 * (k + 1) as f64 * p));
            p *= x2;
        }
        return acc.value();
    }
    let nf = n as f64;
    acc.add(factorial(n - 1) / x.powi(n as i32));
    acc.add(factorial(n) / (2.0 * x.powi(n as i32 + 1)));
    // B_{2k}(2k+n-1)!/((2k)! x^{2k+n})
    let mut coef = factorial(n - 1);
    let x2 = x * x;
    let mut p = x.powi(n as i32);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let k2 = 2.0 * (k + 1) as f64;
        coef *= (k2 + nf - 2.0) * (k2 + nf - 1.0) / ((k2 - 1.0) * k2);
        p *= x2;
        acc.add(b * coef / p);
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    sign * acc.value()
}

/// ψ^{(n)}(x) = d^{n+1}/dx^{n+1} ln Γ(x) for x > 0.
pub fn polygamma(n: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        bail!(Domain, "polygamma needs x > 0, got {x}");
    }
    let threshold = 20.0 + n as f64;
    let mut shift = Kahan::new();
    let mut y = x;
    let nfact = factorial(n);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    while y < threshold {
        shift.add(sign * nfact / y.powi(n as i32 + 1));
        y += 1.0;
    }
    Ok(asymptotic(n, y) - shift.value())
}

pub fn digamma(x: f64) -> Result<f64> {
    polygamma(0, x)
}

pub fn trigamma(x: f64) -> Result<f64> {
    polygamma(1, x)
}
