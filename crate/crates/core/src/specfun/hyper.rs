//! Gauss, confluent and generalized hypergeometric functions of real argument.

use super::gamma::{is_nonpos_int, ln_gamma_ratio, ln_gamma_sign};
use super::series::{sum_ratio, sum_ratio_finite, Kahan, MAX_TERMS, QUIET_RUN, REL_TOL};
use crate::error::{bail, Result};

/// Number of terms in a series truncated by a nonpositive-integer top parameter.
fn terminating_terms(top: &[f64]) -> Option<usize> {
    top.iter()
        .filter(|&&t| is_nonpos_int(t))
        .map(|&t| (-t) as usize + 1)
        .min()
}

/// Checks that no bottom parameter produces a zero divisor before termination.
fn check_bottom(bottom: &[f64], terms: Option<usize>) -> Result<()> {
    for &b in bottom {
        if is_nonpos_int(b) {
            let first_zero = (-b) as usize + 1;
            match terms {
                Some(n) if n <= first_zero => {}
                _ => bail!(Pole, "bottom parameter {b} is a nonpositive integer"),
            }
        }
    }
    Ok(())
}

fn ratio_fn<'a>(top: &'a [f64], bottom: &'a [f64], z: f64) -> impl FnMut(usize) -> f64 + 'a {
    move |k| {
        let k = k as f64;
        let mut r = z / (k + 1.0);
        for &a in top {
            r *= a + k;
        }
        for &b in bottom {
            r /= b + k;
        }
        r
    }
}

/// Generalized hypergeometric series pFq(top; bottom; z) by direct summation.
///
/// Valid for terminating series, p ≤ q, or p = q+1 with |z| < 1 (or z = 1
/// with Σbottom − Σtop > 0).
pub fn hyp_pfq(top: &[f64], bottom: &[f64], z: f64) -> Result<f64> {
    if !z.is_finite() || top.iter().chain(bottom).any(|v| !v.is_finite()) {
        bail!(Domain, "non-finite hypergeometric argument");
    }
    let terms = terminating_terms(top);
    check_bottom(bottom, terms)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    if let Some(n) = terms {
        return Ok(sum_ratio_finite(1.0, n, ratio_fn(top, bottom, z)));
    }
    let p = top.len();
    let q = bottom.len();
    if p > q + 1 {
        bail!(Divergence, "{p}F{q} diverges for nonterminating parameters");
    }
    if p == q + 1 {
        if z.abs() > 1.0 {
            bail!(Domain, "|z| > 1 outside the series disc");
        }
        if z.abs() == 1.0 {
            let gamma_q: f64 = bottom.iter().sum::<f64>() - top.iter().sum::<f64>();
            let bound = if z == 1.0 { 0.0 } else { -1.0 };
            if gamma_q <= bound {
                bail!(Divergence, "unit-argument series diverges (γ_q = {gamma_q})");
            }
        }
    }
    sum_ratio(1.0, ratio_fn(top, bottom, z))
}

/// pFq(top; bottom; 1); the 2F1 case uses the Gauss sum.
pub fn hyp_pfq_unit(top: &[f64], bottom: &[f64]) -> Result<f64> {
    if top.len() == 2 && bottom.len() == 1 && terminating_terms(top).is_none() {
        return hyp2f1_unit(top[0], top[1], bottom[0]);
    }
    hyp_pfq(top, bottom, 1.0)
}

/// Gauss sum F(a,b;c;1) = Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b)), requiring c−a−b > 0.
pub fn hyp2f1_unit(a: f64, b: f64, c: f64) -> Result<f64> {
    let s = c - a - b;
    if s <= 0.0 {
        bail!(Divergence, "F({a},{b};{c};1) diverges since c-a-b = {s} ≤ 0");
    }
    if is_nonpos_int(c) {
        bail!(Pole, "c = {c} is a nonpositive integer");
    }
    if is_nonpos_int(c - a) || is_nonpos_int(c - b) {
        return Ok(0.0);
    }
    if c - a > 0.0 && c - b > 0.0 && c > 0.0 {
        return Ok((ln_gamma_ratio(c - a, a) - ln_gamma_ratio(s, a)).exp());
    }
    let (l1, s1) = ln_gamma_sign(c)?;
    let (l2, s2) = ln_gamma_sign(s)?;
    let (l3, s3) = ln_gamma_sign(c - a)?;
    let (l4, s4) = ln_gamma_sign(c - b)?;
    Ok(s1 * s2 * s3 * s4 * (l1 + l2 - l3 - l4).exp())
}

fn series_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    sum_ratio(1.0, |k| {
        let k = k as f64;
        (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
    })
}

/// Taylor-series continuation of the hypergeometric ODE from 1/2 to z < 1.
fn ode_continuation(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut w = 0.5;
    let mut f = series_2f1(a, b, c, w)?;
    let mut df = a * b / c * series_2f1(a + 1.0, b + 1.0, c + 1.0, w)?;
    let ab = a * b;
    while w < z {
        let h = (z - w).min(0.5 * (1.0 - w));
        let p0 = w * (1.0 - w);
        let p1 = 1.0 - 2.0 * w;
        let q0 = c - (a + b + 1.0) * w;
        let q1 = -(a + b + 1.0);
        // u_k = f_k h^k
        let mut u0 = f;
        let mut u1 = df * h;
        let mut sum = Kahan::with(u0);
        sum.add(u1);
        let mut dsum = Kahan::with(u1);
        let mut quiet = 0;
        let mut converged = false;
        for k in 0..MAX_TERMS {
            let kf = k as f64;
            let u2 = -((p1 * kf * (kf + 1.0) + q0 * (kf + 1.0)) * u1 * h
                + (-kf * (kf - 1.0) + q1 * kf - ab) * u0 * h * h)
                / (p0 * (kf + 1.0) * (kf + 2.0));
            if !u2.is_finite() {
                bail!(Convergence, "ODE continuation overflowed");
            }
            sum.add(u2);
            dsum.add((kf + 2.0) * u2);
            let small = u2.abs() < REL_TOL * sum.value().abs()
                && ((kf + 2.0) * u2).abs() < REL_TOL * dsum.value().abs().max(f64::MIN_POSITIVE);
            if small || (u2 == 0.0 && u1 == 0.0) {
                quiet += 1;
                if quiet >= QUIET_RUN {
                    converged = true;
                    break;
                }
            } else {
                quiet = 0;
            }
            u0 = u1;
            u1 = u2;
        }
        if !converged {
            bail!(Convergence, "ODE continuation did not converge");
        }
        f = sum.value();
        df = dsum.value() / h;
        w += h;
    }
    Ok(f)
}

/// Below this argument the 1/z connection formula replaces Pfaff's.
const INVERSION_BELOW: f64 = -100.0;

fn far_from_int(x: f64) -> bool {
    (x - x.round()).abs() > 0.05
}

/// ln|Γ(c)/(Γ(p)Γ(q))| and its sign, or None when 1/Γ(p) or 1/Γ(q) vanishes.
fn gamma_coef(c: f64, p: f64, q: f64) -> Result<Option<(f64, f64)>> {
    if is_nonpos_int(p) || is_nonpos_int(q) {
        return Ok(None);
    }
    let (l1, s1) = ln_gamma_sign(c)?;
    let (l2, s2) = ln_gamma_sign(p)?;
    let (l3, s3) = ln_gamma_sign(q)?;
    Ok(Some((l1 - l2 - l3, s1 * s2 * s3)))
}

/// F(a,b;c;z) for z < −1 through the pair of series in 1/z, valid when b − a
/// is not an integer.
fn inversion(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mz = -z;
    let mut acc = Kahan::new();
    for (p, q) in [(a, b), (b, a)] {
        if let Some((lc, sc)) = gamma_coef(c, q, c - p)? {
            let (lg, sg) = ln_gamma_sign(q - p)?;
            let f = hyp2f1(p, p - c + 1.0, p - q + 1.0, 1.0 / z)?;
            acc.add(sc * sg * (lc + lg - p * mz.ln()).exp() * f);
        }
    }
    Ok(acc.value())
}

/// Gauss hypergeometric function F(a,b;c;z) for real z ≤ 1.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if ![a, b, c, z].iter().all(|v| v.is_finite()) {
        bail!(Domain, "non-finite argument to hyp2f1");
    }
    let terms = terminating_terms(&[a, b]);
    check_bottom(&[c], terms)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    if let Some(n) = terms {
        return Ok(sum_ratio_finite(1.0, n, ratio_fn(&[a, b], &[c], z)));
    }
    if z > 1.0 {
        bail!(Domain, "hyp2f1 requires z ≤ 1, got {z}");
    }
    if z == 1.0 {
        return hyp2f1_unit(a, b, c);
    }
    if z.abs() <= 0.5 {
        return series_2f1(a, b, c, z);
    }
    if z < INVERSION_BELOW && far_from_int(b - a) {
        return inversion(a, b, c, z);
    }
    if z < 0.0 {
        let w = z / (z - 1.0);
        let first = if is_nonpos_int(c - b) {
            true
        } else if is_nonpos_int(c - a) {
            false
        } else if a > 0.0 && c - b > 0.0 {
            true
        } else {
            !(b > 0.0 && c - a > 0.0)
        };
        return if first {
            Ok((1.0 - z).powf(-a) * hyp2f1(a, c - b, c, w)?)
        } else {
            Ok((1.0 - z).powf(-b) * hyp2f1(c - a, b, c, w)?)
        };
    }
    if is_nonpos_int(c - a) || is_nonpos_int(c - b) {
        return Ok((1.0 - z).powf(c - a - b) * hyp2f1(c - a, c - b, c, z)?);
    }
    if z <= 0.9 {
        return series_2f1(a, b, c, z);
    }
    ode_continuation(a, b, c, z)
}

/// Regularized F(a,b;c;z)/Γ(c).
pub fn hyp2f1_reg(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if is_nonpos_int(c) {
        // limit: (a)_{m+1}(b)_{m+1} z^{m+1}/(m+1)! F(a+m+1,b+m+1;m+2;z), m = -c
        let m = -c;
        let n = m + 1.0;
        let coef = super::gamma::pochhammer(a, n)? * super::gamma::pochhammer(b, n)? * z.powf(n)
            / super::gamma::gamma(n + 1.0)?;
        return Ok(coef * hyp2f1(a + n, b + n, n + 1.0, z)?);
    }
    let (lg, s) = ln_gamma_sign(c)?;
    Ok(hyp2f1(a, b, c, z)? * s * (-lg).exp())
}

/// Confluent hypergeometric function 1F1(a;b;z).
pub fn hyp1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    let terms = terminating_terms(&[a]);
    check_bottom(&[b], terms)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    if terms.is_some() || z >= 0.0 {
        return hyp_pfq(&[a], &[b], z);
    }
    Ok(z.exp() * hyp_pfq(&[b - a], &[b], -z)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hyp2f1_examples() {
        assert_eq!(hyp2f1(0.3, 2.0, 4.0, 0.0).unwrap(), 1.0);
        assert_relative_eq!(hyp2f1(1.0, 1.0, 4.0, 1.0).unwrap(), 1.5, max_relative = 1e-14);
        assert_relative_eq!(hyp2f1(1.0, 1.0, 2.0, 0.5).unwrap(), 1.386_294_361_119_890_6, max_relative = 1e-14);
    }

    #[test]
    fn log_closed_form_across_regions() {
        // F(1,1;2;z) = -ln(1-z)/z
        for &z in &[-50.0, -3.0, -0.7, -0.2, 0.3, 0.7, 0.95, 0.999, 0.999_999] {
            let exact = -(-z as f64).ln_1p() / z;
            assert_relative_eq!(hyp2f1(1.0, 1.0, 2.0, z).unwrap(), exact, max_relative = 1e-12);
        }
    }

    #[test]
    fn power_closed_form() {
        // F(a,b;b;z) = (1-z)^{-a}
        for &z in &[-5.0f64, -0.8, 0.4, 0.8, 0.97, 0.9999] {
            for &a in &[0.5, 2.5, -1.3] {
                let exact = (1.0 - z).powf(-a);
                assert_relative_eq!(hyp2f1(a, 3.2, 3.2, z).unwrap(), exact, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn integer_gap_near_one() {
        // F(1,2;3;z) = 2(-z - ln(1-z))/z^2, c-a-b = 0
        for &z in &[0.92, 0.99, 0.9999] {
            let exact = 2.0 * (-z - (-z as f64).ln_1p()) / (z * z);
            assert_relative_eq!(hyp2f1(1.0, 2.0, 3.0, z).unwrap(), exact, max_relative = 1e-11);
        }
    }

    #[test]
    fn divergence_and_domain() {
        assert!(matches!(hyp2f1(1.0, 1.0, 2.0, 1.0), Err(crate::error::Error::Divergence(_))));
        assert!(matches!(hyp2f1(1.0, 1.0, 2.0, 1.5), Err(crate::error::Error::Domain(_))));
    }

    #[test]
    fn polynomial_case() {
        // F(-2,b;c;z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
        let (b, c, z) = (1.5, 2.5, 3.0);
        let exact = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        assert_relative_eq!(hyp2f1(-2.0, b, c, z).unwrap(), exact, max_relative = 1e-14);
    }

    #[test]
    fn pfq_unit_examples() {
        assert_relative_eq!(hyp_pfq_unit(&[1.0, 1.0], &[4.0]).unwrap(), 1.5, max_relative = 1e-12);
        let top = [-2.0, 0.5, 1.5];
        let bottom = [2.0, 3.0];
        let direct = 1.0 + (-2.0 * 0.5 * 1.5) / (2.0 * 3.0) + (-2.0 * -1.0 * 0.5 * 1.5 * 1.5 * 2.5) / (2.0 * 3.0 * 3.0 * 4.0 * 2.0);
        assert_relative_eq!(hyp_pfq_unit(&top, &bottom).unwrap(), direct, max_relative = 1e-14);
        assert!(hyp_pfq_unit(&[1.0, 1.0], &[2.0]).is_err());
    }

    #[test]
    fn hyp1f1_examples() {
        assert_eq!(hyp1f1(0.7, 1.3, 0.0).unwrap(), 1.0);
        assert_relative_eq!(hyp1f1(1.0, 1.0, 1.0).unwrap(), std::f64::consts::E, max_relative = 1e-14);
        assert_relative_eq!(hyp1f1(1.0, 2.0, 1.0).unwrap(), std::f64::consts::E - 1.0, max_relative = 1e-14);
        // 1F1(1;2;-x) = (1-e^{-x})/x
        assert_relative_eq!(hyp1f1(1.0, 2.0, -20.0).unwrap(), (1.0 - (-20f64).exp()) / 20.0, max_relative = 1e-13);
    }

    #[test]
    fn regularized_at_pole() {
        let v = hyp2f1_reg(1.0, 2.0, 0.0, 0.3).unwrap();
        // limit: ab z F(a+1,b+1;2;z)
        let exact = 2.0 * 0.3 * hyp2f1(2.0, 3.0, 2.0, 0.3).unwrap();
        assert_relative_eq!(v, exact, max_relative = 1e-13);
    }
}
