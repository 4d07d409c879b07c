//! Fractional finite sums: incomplete geometric series, incomplete Lerch
//! transcendent, sine-modulated incomplete hypergeometric function, and the
//! g / g̃ families built from them.

use crate::error::{bail, Error, Result};
use crate::specfun::combinat::{stirling1, stirling2, TABLE_MAX};
use crate::specfun::gamma::{binomial, falling_factorial, factorial, is_int, pochhammer, rpochhammer};
use crate::specfun::hyper::{hyp2f1, hyp_pfq};
use crate::specfun::series::{Kahan, MAX_TERMS, QUIET_RUN, REL_TOL};

/// Half-width of the window around z = 1 where hypergeometric forms replace
/// closed forms with removable singularities.
pub const NEAR_ONE: f64 = 1e-3;
/// |ν| below this uses the ν → 0 limit of C_{n,ω}(ν).
pub const NU_ZERO: f64 = 1e-8;
/// Beyond this z, g̃ returns its z → ∞ boundary value.
pub const Z_CAP: f64 = 1e8;

fn check_z(z: f64) -> Result<()> {
    if !(z >= 0.0) || !z.is_finite() {
        bail!(Domain, "z must be finite and nonnegative, got {z}");
    }
    Ok(())
}

/// Incomplete geometric series (1 − z^ν)/(1 − z), with value ν at z = 1.
pub fn inc_geom(z: f64, nu: f64) -> Result<f64> {
    check_z(z)?;
    if nu == 0.0 {
        return Ok(0.0);
    }
    if z == 1.0 {
        return Ok(nu);
    }
    if (1.0 - z).abs() < NEAR_ONE {
        return Ok(nu * hyp2f1(1.0, 1.0 - nu, 2.0, 1.0 - z)?);
    }
    if z == 0.0 {
        return if nu > 0.0 { Ok(1.0) } else { bail!(Domain, "z^ν diverges at z = 0 for ν < 0") };
    }
    Ok(-(nu * z.ln()).exp_m1() / (1.0 - z))
}

/// Φ(z, −n, 0)_ν through the Stirling-weighted hypergeometric sum.
fn inc_polylog(z: f64, n: usize, nu: f64) -> Result<f64> {
    if n == 0 {
        return inc_geom(z, nu);
    }
    let x = 1.0 - 1.0 / z;
    let mut acc = Kahan::new();
    for k in 1..=n {
        let s = stirling2(n, k)? as f64;
        let ff = falling_factorial(nu, k as f64 + 1.0)?;
        if ff == 0.0 {
            continue;
        }
        let kf = k as f64;
        acc.add(s * ff / (kf + 1.0) * hyp2f1(1.0 + kf, 1.0 + nu, 2.0 + kf, x)?);
    }
    Ok(acc.value() / z)
}

/// Incomplete Lerch transcendent Φ(z, −n, ω)_ν for integer order n ≥ 0.
///
/// ω > 0 is reduced to ω = 0 through (k+ω)^n = Σ_i C(n,i) ω^{n−i} k^i.
pub fn inc_lerch(z: f64, n: usize, omega: f64, nu: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        bail!(Domain, "inc_lerch needs z > 0, got {z}");
    }
    if n > TABLE_MAX {
        bail!(Range, "order {n} exceeds {TABLE_MAX}");
    }
    if !(omega >= 0.0) {
        bail!(Domain, "inc_lerch needs ω ≥ 0");
    }
    if omega == 0.0 {
        return inc_polylog(z, n, nu);
    }
    let mut acc = Kahan::new();
    for i in 0..=n {
        let c = binomial(n as f64, i as u32) * omega.powi((n - i) as i32);
        acc.add(c * inc_polylog(z, i, nu)?);
    }
    Ok(acc.value())
}

/// Σ_k (k+a)^{−s} z^k for 0 ≤ z < 1 by direct summation.
fn lerch_series(z: f64, s: f64, a: f64) -> Result<f64> {
    let mut acc = Kahan::new();
    let mut zk = 1.0;
    let mut quiet = 0;
    for k in 0..MAX_TERMS {
        let base = k as f64 + a;
        let p = if is_int(s) { base.powi(-(s as i32)) } else { base.powf(-s) };
        let term = p * zk;
        if !term.is_finite() {
            bail!(Domain, "Lerch term undefined at k = {k}");
        }
        acc.add(term);
        if k > 0 && (term.abs() < REL_TOL * acc.value().abs() || term == 0.0) {
            quiet += 1;
            if quiet >= QUIET_RUN {
                return Ok(acc.value());
            }
        } else {
            quiet = 0;
        }
        zk *= z;
    }
    bail!(Convergence, "Lerch series did not converge")
}

/// Φ(z,s,ω) − z^ν Φ(z,s,ω+ν) by direct summation of both series (0 ≤ z < 1).
pub fn inc_lerch_direct(z: f64, s: f64, omega: f64, nu: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&z) {
        bail!(Convergence, "direct Lerch summation needs 0 ≤ z < 1, got {z}");
    }
    if z == 0.0 {
        return lerch_series(z, s, omega);
    }
    Ok(lerch_series(z, s, omega)? - z.powf(nu) * lerch_series(z, s, omega + nu)?)
}

/// Sine-modulated incomplete hypergeometric function 𝓕(α,β;γ;z)_ν.
pub fn inc_hyp_sinemod(alpha: f64, beta: f64, gamma: f64, z: f64, nu: f64) -> Result<f64> {
    if gamma <= 0.0 && is_int(gamma) {
        bail!(Pole, "γ = {gamma} is a nonpositive integer");
    }
    if nu == 0.0 {
        return Ok(0.0);
    }
    let head = hyp2f1(alpha, beta, gamma, z)?;
    let mz = -z;
    let power = if is_int(nu) {
        mz.powi(nu as i32)
    } else if mz >= 0.0 {
        mz.powf(nu)
    } else {
        bail!(Domain, "(−z)^ν is complex for z > 0 and noninteger ν");
    };
    let coef = power * rpochhammer(1.0 - beta, -nu)? * rpochhammer(gamma, nu)?;
    if coef == 0.0 {
        return Ok(head);
    }
    if alpha == 1.0 {
        return Ok(head - coef * hyp2f1(1.0, beta + nu, gamma + nu, z)?);
    }
    let coef = coef * pochhammer(alpha, nu)? * rpochhammer(1.0, nu)?;
    let tail = hyp_pfq(&[1.0, alpha + nu, beta + nu], &[1.0 + nu, gamma + nu], z)?;
    Ok(head - coef * tail)
}

fn check_pair(n: usize, omega: usize) -> Result<()> {
    if omega > n {
        bail!(Domain, "(n, ω) = ({n}, {omega}) needs ω ≤ n");
    }
    Ok(())
}

/// g_{n,ω}(z,ν) = n!(ω+ν)^{(n+1)} z^ν 𝐅(1, ω+ν+1; n+2; 1−z).
pub fn g_nw(n: usize, omega: usize, z: f64, nu: f64) -> Result<f64> {
    check_pair(n, omega)?;
    check_z(z)?;
    let w = omega as f64;
    if z == 0.0 {
        if nu > 0.0 {
            return falling_factorial(w, n as f64);
        }
        if nu == 0.0 {
            return Ok(0.0);
        }
        bail!(Domain, "g diverges at z = 0 for ν < 0");
    }
    let ff = falling_factorial(w + nu, n as f64 + 1.0)?;
    if ff == 0.0 {
        return Ok(0.0);
    }
    Ok(ff * z.powf(nu) * hyp2f1(1.0, w + nu + 1.0, n as f64 + 2.0, 1.0 - z)? / (n as f64 + 1.0))
}

/// g_{n,ω} by the Stirling sum Σ_k s(n,k) Φ(z,−k,ω)_ν.
pub fn g_nw_stirling(n: usize, omega: usize, z: f64, nu: f64) -> Result<f64> {
    check_pair(n, omega)?;
    let mut acc = Kahan::new();
    for k in 0..=n {
        acc.add(stirling1(n, k)? as f64 * inc_lerch(z, k, omega as f64, nu)?);
    }
    Ok(acc.value())
}

/// C_{n,ω}(ν) = (ω+ν)^{(n+1)}/ν, with its finite limit at ν = 0.
pub fn c_nw(n: usize, omega: usize, nu: f64) -> Result<f64> {
    check_pair(n, omega)?;
    if nu.abs() < NU_ZERO {
        let sign = if (n - omega) % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * factorial(omega as u32) * factorial((n - omega) as u32));
    }
    Ok(falling_factorial(omega as f64 + nu, n as f64 + 1.0)? / nu)
}

/// Eh_{n,ω}(z,ν) = F(1, ω+ν+1; n+2; 1−z) / ((n+1) F(1, ν+1; 2; 1−z)), so that
/// g̃_{n,ω} = C_{n,ω}(ν) Eh_{n,ω}.
pub fn eh_nw(n: usize, omega: usize, z: f64, nu: f64) -> Result<f64> {
    check_pair(n, omega)?;
    check_z(z)?;
    let (nf, w) = (n as f64, omega as f64);
    if z == 0.0 {
        if nu >= 0.0 {
            return if n == omega { Ok(factorial(n as u32) * rpochhammer(1.0 + nu, nf)?) } else { Ok(0.0) };
        }
        return Ok(-nu / (nf - w - nu));
    }
    let x = 1.0 - z;
    let num = hyp2f1(1.0, w + nu + 1.0, nf + 2.0, x)?;
    let den = hyp2f1(1.0, nu + 1.0, 2.0, x)?;
    Ok(num / ((nf + 1.0) * den))
}

/// Which explicit form produced a g̃ value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GtildeForm {
    /// Ratio of regularized hypergeometric functions.
    HyperRatio,
    /// Finite sum over (ω+ν−n)_k/k!.
    FiniteSum,
    /// z = 0 or z beyond the evaluation cap.
    BoundaryLimit,
}

/// Boundary values of g̃_{n,ω} as z → 0 and z → ∞.
pub fn gtilde_limits(n: usize, omega: usize, nu: f64) -> Result<(f64, f64)> {
    check_pair(n, omega)?;
    let w = omega as f64;
    let nf = n as f64;
    let at_zero = falling_factorial(w + if nu < 0.0 { nu } else { 0.0 }, nf)?;
    let at_inf = falling_factorial(w + if nu > 0.0 { nu } else { 0.0 } - 1.0, nf)?;
    Ok((at_zero, at_inf))
}

/// g̃_{n,ω}(z,ν) = g_{n,ω}/₁F₀(1;−;z)_ν together with the form used.
pub fn gtilde_nw(n: usize, omega: usize, z: f64, nu: f64) -> Result<(f64, GtildeForm)> {
    check_pair(n, omega)?;
    check_z(z)?;
    if z == 0.0 {
        return Ok((gtilde_limits(n, omega, nu)?.0, GtildeForm::BoundaryLimit));
    }
    if z > Z_CAP {
        return Ok((gtilde_limits(n, omega, nu)?.1, GtildeForm::BoundaryLimit));
    }
    let near_one = (1.0 - z).abs() < NEAR_ONE;
    if z < 1.0 && !near_one && nu.abs() >= NU_ZERO && finite_sum_is_stable(n, z) {
        return Ok((gtilde_finite_sum(n, omega, z, nu)?, GtildeForm::FiniteSum));
    }
    Ok((c_nw(n, omega, nu)? * eh_nw(n, omega, z, nu)?, GtildeForm::HyperRatio))
}

/// The finite sum cancels to O((1−z)^{n+1}); keep it to cases losing < ~6 digits.
fn finite_sum_is_stable(n: usize, z: f64) -> bool {
    (1.0 - z).powi(n as i32 + 1) >= 1e-6
}

/// n!(z^{n−ω} − z^ν Σ_{k≤n} (ω+ν−n)_k/k! (1−z)^k)/((1−z)^n(1−z^ν)).
pub fn gtilde_finite_sum(n: usize, omega: usize, z: f64, nu: f64) -> Result<f64> {
    check_pair(n, omega)?;
    if !(z > 0.0) || z == 1.0 {
        return Err(Error::Domain("finite-sum form needs z > 0, z ≠ 1".into()));
    }
    let a = omega as f64 + nu - n as f64;
    let x = 1.0 - z;
    let mut acc = Kahan::new();
    let mut term = 1.0;
    for k in 0..=n {
        acc.add(term);
        term *= (a + k as f64) / (k as f64 + 1.0) * x;
    }
    let zn = z.powi((n - omega) as i32);
    let znu = z.powf(nu);
    let num = zn - znu * acc.value();
    Ok(factorial(n as u32) * num / (x.powi(n as i32) * (-(nu * z.ln()).exp_m1())))
}

/// True exactly where g̃_{n,ω}(z,ν) vanishes. The factorial power
/// (ω+ν)^{(n+1)} only has zeros ω+ν ∈ {0, …, n}, so a negative integer
/// ω+ν gives no zero even though n−ω−ν is then a natural number.
pub fn gtilde_zeros_predicate(n: usize, omega: usize, z: f64, nu: f64) -> bool {
    let d = n as f64 - omega as f64 - nu;
    let factor_zero = is_int(d) && d >= 0.0 && omega as f64 + nu >= 0.0 && nu != 0.0;
    let boundary_zero = n >= 1 && n > omega && nu >= 0.0 && z == 0.0;
    factor_zero || boundary_zero
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn inc_geom_examples() {
        assert_eq!(inc_geom(0.3, 0.0).unwrap(), 0.0);
        assert_relative_eq!(inc_geom(0.5, 3.0).unwrap(), 1.75, max_relative = 1e-15);
        assert_eq!(inc_geom(1.0, 2.7).unwrap(), 2.7);
        let near = inc_geom(1.0 + 1e-4, 2.7).unwrap();
        let closed = (1.0 - (1.0f64 + 1e-4).powf(2.7)) / (-1e-4);
        assert_relative_eq!(near, closed, max_relative = 1e-9);
        assert!(inc_geom(-0.1, 1.0).is_err());
    }

    #[test]
    fn inc_lerch_examples() {
        for &z in &[0.2, 0.5, 1.0, 3.0] {
            assert_relative_eq!(inc_lerch(z, 0, 0.0, 1.7).unwrap(), inc_geom(z, 1.7).unwrap(), max_relative = 1e-13);
        }
        assert_relative_eq!(inc_lerch(0.5, 1, 0.0, 3.0).unwrap(), 1.0, max_relative = 1e-13);
        let direct = inc_lerch_direct(0.5, -1.0, 0.0, 1.5).unwrap();
        assert_relative_eq!(inc_lerch(0.5, 1, 0.0, 1.5).unwrap(), direct, max_relative = 1e-12);
    }

    #[test]
    fn inc_lerch_shifted_matches_direct() {
        for &(z, n, w, nu) in &[(0.3, 2usize, 1.0, 2.5), (0.7, 3, 2.0, 0.6), (0.5, 4, 0.5, 3.3)] {
            let a = inc_lerch(z, n, w, nu).unwrap();
            let b = inc_lerch_direct(z, -(n as f64), w, nu).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-11);
        }
    }

    #[test]
    fn sinemod_integer_order_is_partial_sum() {
        let (a1, a2, x) = (20.0, 15.0, 0.3);
        let n = 4;
        let v = inc_hyp_sinemod(1.0, 2.0 - a1, a2, -x, n as f64).unwrap();
        let mut s = 0.0;
        let mut t = 1.0;
        for k in 0..n {
            s += t;
            let kf = k as f64;
            t *= (2.0 - a1 + kf) / (a2 + kf) * (-x);
        }
        assert_relative_eq!(v, s, max_relative = 1e-12);
        assert_eq!(inc_hyp_sinemod(1.0, 2.0 - a1, a2, -x, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn sinemod_general_alpha_partial_sum() {
        // for integer ν the function is the first n terms of the series of F(α,β;γ;z)
        let (a, b, c, z) = (1.7, -3.4, 2.2, -0.4);
        let v = inc_hyp_sinemod(a, b, c, z, 3.0).unwrap();
        let mut s = 0.0;
        let mut t = 1.0;
        for k in 0..3 {
            s += t;
            let kf = k as f64;
            t *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        }
        assert_relative_eq!(v, s, max_relative = 1e-12);
    }

    #[test]
    fn g_forms_agree() {
        let a = g_nw(2, 1, 0.5, 2.5).unwrap();
        let b = g_nw_stirling(2, 1, 0.5, 2.5).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-10);
        assert_relative_eq!(g_nw(0, 0, 0.4, 1.3).unwrap(), inc_geom(0.4, 1.3).unwrap(), max_relative = 1e-13);
        // z = 1: n!(ω+ν)^{(n+1)}/Γ(n+2)
        let v = g_nw(3, 2, 1.0, 1.7).unwrap();
        assert_relative_eq!(v, falling_factorial(3.7, 4.0).unwrap() / 4.0, max_relative = 1e-14);
    }

    #[test]
    fn gtilde_examples() {
        assert_relative_eq!(gtilde_nw(0, 0, 0.37, 2.2).unwrap().0, 1.0, max_relative = 1e-14);
        assert_eq!(gtilde_nw(2, 1, 0.0, 3.0).unwrap().0, 0.0);
        let (_, inf) = gtilde_limits(2, 1, 3.0).unwrap();
        assert_eq!(inf, 6.0);
        let big = gtilde_nw(2, 1, 1e6, 3.0).unwrap().0;
        assert_relative_eq!(big, 6.0, max_relative = 1e-4);
    }

    #[test]
    fn gtilde_forms_agree() {
        for &(n, w, z, nu) in &[(3usize, 1usize, 0.4, 2.5), (2, 0, 0.8, -1.5), (4, 4, 0.2, 0.7)] {
            let a = gtilde_finite_sum(n, w, z, nu).unwrap();
            let b = c_nw(n, w, nu).unwrap() * eh_nw(n, w, z, nu).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-10);
        }
    }

    #[test]
    fn eh_boundary_values() {
        let nu = 2.3;
        let v = eh_nw(3, 3, 1e-9, nu).unwrap();
        assert_relative_eq!(v, eh_nw(3, 3, 0.0, nu).unwrap(), max_relative = 1e-6);
        let v = eh_nw(3, 1, 1e-12, -1.4).unwrap();
        assert_relative_eq!(v, 1.4 / (2.0 + 1.4), max_relative = 1e-6);
        // ν = 1: Eh_{n,n} = 1/(n+1)
        for &z in &[0.1, 1.0, 7.0] {
            assert_relative_eq!(eh_nw(4, 4, z, 1.0).unwrap(), 0.2, max_relative = 1e-12);
        }
    }

    #[test]
    fn zeros_predicate_examples() {
        assert!(gtilde_zeros_predicate(3, 1, 0.4, 2.0));
        assert!(!gtilde_zeros_predicate(2, 2, 0.4, 1.5));
        assert!(!gtilde_zeros_predicate(2, 2, 0.0, 0.0));
        assert!(gtilde_zeros_predicate(1, 0, 0.0, 0.5));
        assert!(!gtilde_zeros_predicate(0, 0, 0.4, -2.0));
        assert!(gtilde_zeros_predicate(3, 2, 0.4, -1.0));
    }
}
