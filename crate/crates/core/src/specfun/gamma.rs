//! Log-gamma with sign tracking, gamma ratios, Pochhammer and factorial powers.

use std::f64::consts::PI;

use crate::error::{bail, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const STIRLING_MIN: f64 = 15.0;

/// B_{2k} / (2k (2k-1)) for k = 1..=9.
const STIRLING_COEF: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
];

/// Stirling correction sum, `ln Γ(x) - ((x-1/2) ln x - x + ln√(2π))`, for x ≥ 15.
fn stirling_tail(x: f64) -> f64 {
    let r = 1.0 / (x * x);
    let mut acc = 0.0;
    for c in STIRLING_COEF.iter().rev() {
        acc = acc * r + c;
    }
    acc / x
}

/// Returns true if `x` is an integer ≤ 0.
pub fn is_nonpos_int(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Returns true if `x` is a (finite) integer.
pub fn is_int(x: f64) -> bool {
    x.is_finite() && x == x.round()
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x >= STIRLING_MIN {
        return (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_tail(x);
    }
    let mut prod = 1.0;
    let mut y = x;
    while y < STIRLING_MIN {
        prod *= y;
        y += 1.0;
    }
    ln_gamma(y) - prod.ln()
}

/// (ln|Γ(x)|, sign Γ(x)); errors at the poles x ∈ {0, -1, -2, ...}.
pub fn ln_gamma_sign(x: f64) -> Result<(f64, f64)> {
    if x > 0.0 {
        return Ok((ln_gamma(x), 1.0));
    }
    if is_nonpos_int(x) {
        bail!(Pole, "Γ has a pole at {x}");
    }
    let s = (PI * x).sin();
    let lg = PI.ln() - s.abs().ln() - ln_gamma(1.0 - x);
    let k = (-x).floor();
    let sign = if (k as i64) % 2 == 0 { -1.0 } else { 1.0 };
    Ok((lg, sign))
}

/// Γ(x).
pub fn gamma(x: f64) -> Result<f64> {
    if x > 0.0 && x < 20.0 && is_int(x) {
        let mut p = 1.0;
        for k in 2..(x as u32) {
            p *= k as f64;
        }
        return Ok(p);
    }
    let (lg, s) = ln_gamma_sign(x)?;
    Ok(s * lg.exp())
}

/// ln Γ(x+d) - ln Γ(x) for x, x+d > 0, accurate when both arguments are large.
pub fn ln_gamma_ratio(x: f64, d: f64) -> f64 {
    let y = x + d;
    if x >= STIRLING_MIN && y >= STIRLING_MIN {
        let u = d / x;
        (y - 0.5) * u.ln_1p() + d * x.ln() - d + stirling_tail(y) - stirling_tail(x)
    } else {
        ln_gamma(y) - ln_gamma(x)
    }
}

/// Product (s)(s+1)...(s+n-1).
fn rising_product(s: f64, n: u64) -> f64 {
    let mut p = 1.0;
    for k in 0..n {
        p *= s + k as f64;
    }
    p
}

/// Pochhammer symbol (s)_z = Γ(s+z)/Γ(s).
///
/// Returns 0 when Γ(s) has a pole but Γ(s+z) does not; errors when the
/// numerator has a pole and the denominator does not.
pub fn pochhammer(s: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(1.0);
    }
    if is_int(z) && z.abs() <= 64.0 {
        if z > 0.0 {
            return Ok(rising_product(s, z as u64));
        }
        let n = (-z) as u64;
        let mut p = 1.0;
        for k in 1..=n {
            let f = s - k as f64;
            if f == 0.0 {
                bail!(Pole, "({s})_{z} has a pole");
            }
            p *= f;
        }
        return Ok(1.0 / p);
    }
    let top = s + z;
    match (is_nonpos_int(s), is_nonpos_int(top)) {
        (true, false) => return Ok(0.0),
        (false, true) => bail!(Pole, "({s})_{z} has a pole"),
        (true, true) => {
            // both poles: ratio of residues, z is an integer here
            let m = -s;
            let p = -top;
            let (lm, _) = ln_gamma_sign(m + 1.0)?;
            let (lp, _) = ln_gamma_sign(p + 1.0)?;
            let sign = if ((m - p) as i64) % 2 == 0 { 1.0 } else { -1.0 };
            return Ok(sign * (lm - lp).exp());
        }
        _ => {}
    }
    if s > 0.0 && top > 0.0 {
        return Ok(ln_gamma_ratio(s, z).exp());
    }
    let (a, sa) = ln_gamma_sign(top)?;
    let (b, sb) = ln_gamma_sign(s)?;
    Ok(sa * sb * (a - b).exp())
}

/// Reciprocal Pochhammer 1/(s)_z, returning 0 where (s)_z has a pole.
pub fn rpochhammer(s: f64, z: f64) -> Result<f64> {
    match pochhammer(s, z) {
        Ok(v) => Ok(1.0 / v),
        Err(crate::error::Error::Pole(_)) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Factorial power (s)^{(z)} = Γ(s+1)/Γ(s-z+1) = (s-z+1)_z.
pub fn falling_factorial(s: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(1.0);
    }
    if is_int(z) && z > 0.0 && z <= 64.0 {
        let mut p = 1.0;
        for k in 0..(z as u64) {
            p *= s - k as f64;
        }
        return Ok(p);
    }
    pochhammer(s - z + 1.0, z)
}

/// Generalized binomial coefficient C(x, k) for integer k ≥ 0.
pub fn binomial(x: f64, k: u32) -> f64 {
    let mut p = 1.0;
    for j in 0..k {
        p *= (x - j as f64) / (j + 1) as f64;
    }
    p
}

/// n! as f64.
pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |p, k| p * k as f64)
}
