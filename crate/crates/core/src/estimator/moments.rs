//! First and second moments of 𝒯ᵥ, its coefficient of variation and the
//! boundary values of the coefficient of variation.

use serde::{Deserialize, Serialize};

use super::bounds::{e_star_checked, rel_from_tail};
use super::{check_mean_strip, check_second_moment, PopulationParams};
use crate::error::{bail, Result};
use crate::fracsum::{eh_nw, gtilde_limits, inc_geom};
use crate::specfun::gamma::pochhammer;
use crate::specfun::hyper::{hyp2f1_unit, hyp_pfq_unit};
use crate::specfun::series::Kahan;

/// Default relative tolerance for the dispersion series.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Hard cap on the number of series rows.
pub const MAX_ROWS: usize = 400;

/// The truncation bound costs O(n²); past this many rows it is only checked
/// after every 20% increase in n.
const EVERY_ROW_CHECKS: usize = 32;

/// Moments and dispersion of 𝒯ᵥ at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
    /// Carries the sign of the mean, i.e. of ν.
    pub cv: f64,
    pub acv: f64,
    /// Rows k = 1..=terms_used of the series.
    pub terms_used: usize,
    /// Certified bound on the relative error of acv², infinite when the
    /// truncation bound does not exist for these shapes.
    pub rel_error_bound: f64,
}

/// E𝒯ᵥ = (1 − ζ^ν)/(κ₁ − κ₂), equal to ν/κ₁ when κ₁ = κ₂.
pub fn mean_t_nu(pp: &PopulationParams, nu: f64) -> Result<f64> {
    Ok(inc_geom(pp.zeta, nu)? / pp.kappa1)
}

/// Absolute relative bias ζ^ν.
pub fn arb_t_nu(pp: &PopulationParams, nu: f64) -> f64 {
    pp.zeta.powf(nu)
}

/// Series weights a_j = (1+ν)_j²/((α₁)_j j!) and b_j = (1−ν)_j²/((α₂)_j j!).
#[derive(Debug, Clone)]
pub(crate) struct Weights {
    alpha1: f64,
    alpha2: f64,
    nu: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// 1/((α₁)_j j!) and 1/((α₂)_j j!), used where Eh has no finite form.
    pub ia: Vec<f64>,
    pub ib: Vec<f64>,
}

impl Weights {
    pub fn new(alpha1: f64, alpha2: f64, nu: f64) -> Self {
        Weights { alpha1, alpha2, nu, a: vec![1.0], b: vec![1.0], ia: vec![1.0], ib: vec![1.0] }
    }

    pub fn ensure(&mut self, n: usize) {
        while self.a.len() <= n {
            let j = (self.a.len() - 1) as f64;
            let (ra, rb) = ((self.alpha1 + j) * (j + 1.0), (self.alpha2 + j) * (j + 1.0));
            let (pa, pb) = ((1.0 + self.nu + j).powi(2), (1.0 - self.nu + j).powi(2));
            self.a.push(self.a[self.a.len() - 1] * pa / ra);
            self.b.push(self.b[self.b.len() - 1] * pb / rb);
            self.ia.push(self.ia[self.ia.len() - 1] / ra);
            self.ib.push(self.ib[self.ib.len() - 1] / rb);
        }
    }
}

/// Row k of the cv² series: Σ_ℓ a_ℓ b_{k−ℓ} Eh_{k,ℓ}².
pub(crate) fn cv2_row(k: usize, zeta: f64, nu: f64, w: &mut Weights) -> Result<f64> {
    w.ensure(k);
    let mut acc = Kahan::new();
    for l in 0..=k {
        let t = if zeta.is_infinite() {
            let g = gtilde_limits(k, l, nu)?.1;
            g * g * w.ia[l] * w.ib[k - l]
        } else {
            let ab = w.a[l] * w.b[k - l];
            if ab == 0.0 {
                continue;
            }
            let e = eh_nw(k, l, zeta, nu)?;
            ab * e * e
        };
        acc.add(t);
    }
    Ok(acc.value())
}

/// acv²ₙ, the cv² series truncated after row n. ζ = ∞ gives the boundary limit.
pub fn acv2_partial(zeta: f64, alpha1: f64, alpha2: f64, nu: f64, n: usize) -> Result<f64> {
    check_second_moment(alpha1, alpha2, nu)?;
    let mut w = Weights::new(alpha1, alpha2, nu);
    let mut acc = Kahan::new();
    for k in 1..=n {
        acc.add(cv2_row(k, zeta, nu, &mut w)?);
    }
    Ok(acc.value())
}

/// Alias kept for symmetry with the bound functions: acvₙ (not squared).
pub fn acv_partial(zeta: f64, alpha1: f64, alpha2: f64, nu: f64, n: usize) -> Result<f64> {
    Ok(acv2_partial(zeta, alpha1, alpha2, nu, n)?.sqrt())
}

/// Sums the cv² series until the truncation bound certifies `tol`, or, where
/// no bound exists, until rows stop contributing. Returns (acv², rows, bound).
pub(crate) fn acv2_series(zeta: f64, alpha1: f64, alpha2: f64, nu: f64, tol: f64) -> Result<(f64, usize, f64)> {
    check_second_moment(alpha1, alpha2, nu)?;
    if nu == 0.0 {
        bail!(Domain, "cv of 𝒯₀ is undefined (degenerate at zero)");
    }
    if !(zeta >= 0.0) {
        bail!(Domain, "ζ must be nonnegative, got {zeta}");
    }
    let bounded = zeta.is_finite() && alpha1 > 2.0 * (1.0 + nu) && alpha2 > 2.0 * (1.0 - nu);
    let mut w = Weights::new(alpha1, alpha2, nu);
    let mut acc = Kahan::new();
    let mut quiet = 0;
    let mut next_check = 0;
    for n in 1..=MAX_ROWS {
        let row = cv2_row(n, zeta, nu, &mut w)?;
        acc.add(row);
        let s = acc.value();
        if bounded {
            if n > EVERY_ROW_CHECKS && n < next_check && n < MAX_ROWS {
                continue;
            }
            next_check = n + (n / 5).max(1);
            let e = e_star_checked(n, n + 1, zeta, alpha1, alpha2, nu, &mut w)?;
            let r = rel_from_tail(e, s, 2.0);
            if r <= tol {
                return Ok((s, n, r));
            }
            if n == MAX_ROWS {
                return Ok((s, n, r));
            }
        } else if row <= tol * s {
            quiet += 1;
            if quiet >= 3 {
                return Ok((s, n, f64::INFINITY));
            }
        } else {
            quiet = 0;
        }
    }
    Ok((acc.value(), MAX_ROWS, f64::INFINITY))
}

/// acv 𝒯ᵥ as a function of ζ, shapes and ν, summed to relative tolerance `tol`.
pub fn acv_t_nu(zeta: f64, alpha1: f64, alpha2: f64, nu: f64, tol: f64) -> Result<f64> {
    Ok(acv2_series(zeta, alpha1, alpha2, nu, tol)?.0.sqrt())
}

/// Full moment report: E𝒯ᵥ, E𝒯ᵥ², Var, cv and acv.
pub fn moments_t_nu(pp: &PopulationParams, alpha1: f64, alpha2: f64, nu: f64, tol: f64) -> Result<MomentReport> {
    check_mean_strip(alpha1, alpha2, nu)?;
    let (acv2, terms_used, rel_error_bound) = acv2_series(pp.zeta, alpha1, alpha2, nu, tol)?;
    let mean = mean_t_nu(pp, nu)?;
    let variance = mean * mean * acv2;
    let acv = acv2.sqrt();
    Ok(MomentReport {
        mean,
        second_moment: mean * mean + variance,
        variance,
        cv: acv.copysign(nu),
        acv,
        terms_used,
        rel_error_bound,
    })
}

/// E𝒯ₙ² for integer n with 2n < α₁, as a finite double sum of unit-argument ₂F₁.
pub fn second_moment_t_n(pp: &PopulationParams, alpha1: f64, alpha2: f64, n: usize) -> Result<f64> {
    if 2.0 * n as f64 >= alpha1 {
        bail!(Constraint, "E𝒯ₙ² needs 2n < α₁, got n = {n}, α₁ = {alpha1}");
    }
    let mut acc = Kahan::new();
    for k in 0..n {
        for l in 0..n {
            let (kf, lf) = (k as f64, l as f64);
            let f1 = hyp2f1_unit(kf + 1.0, lf + 1.0, alpha1)?;
            let f2 = hyp_pfq_unit(&[-kf, -lf], &[alpha2])?;
            acc.add(f1 * f2 * pp.zeta.powi((k + l) as i32));
        }
    }
    Ok(acc.value() / (pp.kappa1 * pp.kappa1))
}

/// lim_{ζ→0} cv 𝒯ᵥ.
pub fn cv_limit_zero(alpha1: f64, alpha2: f64, nu: f64) -> Result<f64> {
    check_second_moment(alpha1, alpha2, nu)?;
    if nu > 0.0 {
        if alpha1 <= 2.0 {
            return Ok(f64::INFINITY);
        }
        return Ok(1.0 / (alpha1 - 2.0).sqrt());
    }
    if nu == 0.0 {
        bail!(Domain, "cv of 𝒯₀ is undefined");
    }
    let p = pochhammer(alpha1 - nu - 1.0, -nu - 1.0)? * pochhammer(alpha2 + nu, nu)?
        / (pochhammer(alpha1, -nu - 1.0)? * pochhammer(alpha2, nu)?);
    Ok(-(p - 1.0).sqrt())
}

/// lim_{ζ→∞} cv 𝒯ᵥ.
pub fn cv_limit_inf(alpha1: f64, alpha2: f64, nu: f64) -> Result<f64> {
    check_second_moment(alpha1, alpha2, nu)?;
    if nu < 0.0 {
        if alpha2 <= 2.0 {
            return Ok(f64::NEG_INFINITY);
        }
        return Ok(-1.0 / (alpha2 - 2.0).sqrt());
    }
    if nu == 0.0 {
        bail!(Domain, "cv of 𝒯₀ is undefined");
    }
    let q = pochhammer(alpha1 - nu, -nu)? * pochhammer(alpha2 + nu - 1.0, nu - 1.0)?
        / (pochhammer(alpha1, -nu)? * pochhammer(alpha2, nu - 1.0)?);
    Ok((q - 1.0).sqrt())
}
