//! Upper bounds on the error of truncating the cv² series and the number of
//! rows needed to meet a relative tolerance.

use super::moments::{acv2_partial, Weights};
use crate::error::{bail, Result};
use crate::fracsum::eh_nw;
use crate::specfun::hyper::hyp2f1_unit;
use crate::specfun::series::{sum_ratio, Kahan};

/// α₁ > 2(1+ν) and α₂ > 2(1−ν), where the bound is finite.
fn check_finite(alpha1: f64, alpha2: f64, nu: f64) -> Result<()> {
    if !(alpha1 > 2.0 * (1.0 + nu)) || !(alpha2 > 2.0 * (1.0 - nu)) {
        bail!(Constraint, "truncation bound is infinite unless α₁ > 2(1+ν) and α₂ > 2(1−ν)");
    }
    Ok(())
}

/// Σ_{k≥start} t_k for t_{k+1}/t_k = (p+k)²/((q+k)(k+1)), given the full sum.
/// Sums the tail directly; falls back to total − head when that is too slow.
fn weight_tail(start: usize, first: f64, p: f64, q: f64, total: f64, head: &[f64]) -> f64 {
    if start == 0 {
        return total;
    }
    if first == 0.0 {
        // a zero weight at `start` means the weights terminate there
        return 0.0;
    }
    let s = start as f64;
    match sum_ratio(first, |j| {
        let k = s + j as f64;
        (p + k).powi(2) / ((q + k) * (k + 1.0))
    }) {
        Ok(v) => v,
        Err(_) => {
            let mut acc = Kahan::with(total);
            for h in &head[..start] {
                acc.add(-h);
            }
            acc.value()
        }
    }
}

/// E*_{n,m} with caller-owned weights.
pub(crate) fn e_star_checked(n: usize, m: usize, zeta: f64, alpha1: f64, alpha2: f64, nu: f64, w: &mut Weights) -> Result<f64> {
    check_finite(alpha1, alpha2, nu)?;
    if !(zeta >= 0.0) || !zeta.is_finite() {
        bail!(Domain, "ζ must be finite and nonnegative, got {zeta}");
    }
    let big_a = hyp2f1_unit(1.0 + nu, 1.0 + nu, alpha1)?;
    let big_b = hyp2f1_unit(1.0 - nu, 1.0 - nu, alpha2)?;
    w.ensure(n + m + 2);
    let a_tail = |start: usize, w: &Weights| weight_tail(start, w.a[start], 1.0 + nu, alpha1, big_a, &w.a);
    let b_tail = |start: usize, w: &Weights| weight_tail(start, w.b[start], 1.0 - nu, alpha2, big_b, &w.b);

    let mut acc = Kahan::new();
    for j in 0..m {
        if w.b[j] == 0.0 {
            continue;
        }
        let kp = (n + 1).saturating_sub(j);
        let e = eh_nw(kp + j, kp, zeta, nu)?;
        acc.add(e * e * w.b[j] * a_tail(kp, w));
    }

    let kpp = (n + 1).saturating_sub(m);
    let omega = if zeta <= 1.0 { kpp } else { 0 };
    let e = eh_nw(kpp + m, omega, zeta, nu)?;
    let mut inner = Kahan::with(big_a * b_tail(m, w));
    w.ensure(kpp + m);
    for k in 0..kpp {
        for l in 0..=k {
            inner.add(-w.a[l] * w.b[k - l + m]);
        }
    }
    acc.add(e * e * inner.value().max(0.0));
    Ok(acc.value())
}

/// Upper bound E*_{n,m} on acv² − acv²ₙ at ratio ζ.
pub fn trunc_bound(n: usize, m: usize, zeta: f64, alpha1: f64, alpha2: f64, nu: f64) -> Result<f64> {
    let mut w = Weights::new(alpha1, alpha2, nu);
    e_star_checked(n, m, zeta, alpha1, alpha2, nu, &mut w)
}

/// |(1 + E/acv²ₙ)^{−p/2} − 1|.
pub(crate) fn rel_from_tail(e_star: f64, acv2n: f64, p: f64) -> f64 {
    ((1.0 + e_star / acv2n).powf(-p / 2.0) - 1.0).abs()
}

/// Bound R*_{n,m,p} on the relative error of acvₙ^p at ratio ζ.
pub fn rel_bound(n: usize, m: usize, p: f64, zeta: f64, alpha1: f64, alpha2: f64, nu: f64) -> Result<f64> {
    let e = trunc_bound(n, m, zeta, alpha1, alpha2, nu)?;
    Ok(rel_from_tail(e, acv2_partial(zeta, alpha1, alpha2, nu, n)?, p))
}

/// Bound R⋆_{n,m,p} valid for every ζ in [z_inf, z_sup], as a fraction.
///
/// Uses the monotonicity of both E* and acv²ₙ in ζ, so it needs |ν| > 1.
pub fn rel_bound_star(n: usize, m: usize, p: f64, z_inf: f64, z_sup: f64, alpha1: f64, alpha2: f64, nu: f64) -> Result<f64> {
    if !(nu.abs() > 1.0) {
        bail!(Domain, "uniform bound needs |ν| > 1, got {nu}");
    }
    if !(0.0 <= z_inf && z_inf <= z_sup) {
        bail!(Domain, "need 0 ≤ inf Z ≤ sup Z, got [{z_inf}, {z_sup}]");
    }
    let (ze, za) = if nu > 1.0 { (z_sup, z_inf) } else { (z_inf, z_sup) };
    let e = trunc_bound(n, m, ze, alpha1, alpha2, nu)?;
    Ok(rel_from_tail(e, acv2_partial(za, alpha1, alpha2, nu, n)?, p))
}

/// Smallest K ≤ k_max with R⋆_{K,m,p} ≤ eps over [z_inf, z_sup], with that bound.
#[allow(clippy::too_many_arguments)]
pub fn k_star(eps: f64, m: usize, p: f64, z_inf: f64, z_sup: f64, alpha1: f64, alpha2: f64, nu: f64, k_max: usize) -> Result<(usize, f64)> {
    for k in 1..=k_max {
        let r = rel_bound_star(k, m, p, z_inf, z_sup, alpha1, alpha2, nu)?;
        if r <= eps {
            return Ok((k, r));
        }
    }
    bail!(Convergence, "no K ≤ {k_max} meets the tolerance {eps}")
}
