//! Limiting estimators when one of the two variances is known.

use crate::error::{bail, Result};
use crate::specfun::hyper::{hyp1f1, hyp2f1};

/// 𝒰 = (1/κ₁) ₁F₁(1; α₂; α₂Y₂/κ₁), unbiased for τ when κ₁ > κ₂ is known.
pub fn estimator_u(y2: f64, alpha2: f64, kappa1: f64) -> Result<f64> {
    if !(kappa1 > 0.0) || !(y2 >= 0.0) || !(alpha2 > 0.0) {
        bail!(Domain, "𝒰 needs κ₁ > 0, Y₂ ≥ 0, α₂ > 0");
    }
    Ok(hyp1f1(1.0, alpha2, alpha2 * y2 / kappa1)? / kappa1)
}

/// 𝒱 = −(1/κ₂) ₁F₁(1; α₁; α₁Y₁/κ₂), unbiased for τ when κ₁ < κ₂ is known.
pub fn estimator_v(y1: f64, alpha1: f64, kappa2: f64) -> Result<f64> {
    if !(kappa2 > 0.0) || !(y1 >= 0.0) || !(alpha1 > 0.0) {
        bail!(Domain, "𝒱 needs κ₂ > 0, Y₁ ≥ 0, α₁ > 0");
    }
    Ok(-hyp1f1(1.0, alpha1, alpha1 * y1 / kappa2)? / kappa2)
}

/// (κ₁−κ₂)⁻²(F(1,1;α;w) − 1) with w = κ_small²/(κ₁−κ₂)², infinite when w > 1.
fn limiting_var(d: f64, small: f64, alpha: f64) -> Result<f64> {
    let w = (small / d).powi(2);
    if w > 1.0 || (w == 1.0 && alpha <= 2.0) {
        return Ok(f64::INFINITY);
    }
    Ok((hyp2f1(1.0, 1.0, alpha, w)? - 1.0) / (d * d))
}

/// Var 𝒰, finite when κ₁ ≥ 2κ₂ (with α₂ > 2 at equality).
pub fn var_u(kappa1: f64, kappa2: f64, alpha2: f64) -> Result<f64> {
    if !(kappa1 > kappa2 && kappa2 > 0.0) {
        bail!(Domain, "𝒰 needs κ₁ > κ₂ > 0");
    }
    limiting_var(kappa1 - kappa2, kappa2, alpha2)
}

/// Var 𝒱, finite when κ₂ ≥ 2κ₁ (with α₁ > 2 at equality).
pub fn var_v(kappa1: f64, kappa2: f64, alpha1: f64) -> Result<f64> {
    if !(kappa2 > kappa1 && kappa1 > 0.0) {
        bail!(Domain, "𝒱 needs κ₂ > κ₁ > 0");
    }
    limiting_var(kappa2 - kappa1, kappa1, alpha1)
}
