//! Dawson's integral D(x) = e^{-x²}∫₀^x e^{t²} dt.

use super::series::Kahan;

/// Beyond this |x| the asymptotic expansion is used.
const SWITCH: f64 = 10.0;

pub fn dawson(x: f64) -> f64 {
    if x == 0.0 || x.is_nan() {
        return x;
    }
    let ax = x.abs();
    let v = if ax < SWITCH { series(ax) } else { asymptotic(ax) };
    v.copysign(x)
}

/// e^{-x²} Σ x^{2k+1}/(k!(2k+1)), all terms positive.
fn series(x: f64) -> f64 {
    let x2 = x * x;
    let mut acc = Kahan::new();
    let mut p = x;
    let mut k = 0.0;
    loop {
        let term = p / (2.0 * k + 1.0);
        acc.add(term);
        if term < 1e-17 * acc.value() {
            break;
        }
        k += 1.0;
        p *= x2 / k;
    }
    acc.value() * (-x2).exp()
}

/// 1/(2x) Σ (2k-1)!!/(2x²)^k, truncated at the smallest term.
fn asymptotic(x: f64) -> f64 {
    let inv = 1.0 / (2.0 * x * x);
    let mut acc = Kahan::with(1.0);
    let mut term = 1.0;
    let mut k = 1.0;
    loop {
        let next = term * (2.0 * k - 1.0) * inv;
        if next >= term || next < 1e-17 {
            break;
        }
        acc.add(next);
        term = next;
        k += 1.0;
    }
    acc.value() / (2.0 * x)
}
