//! Exact evaluation of the integer-order and fractional-order estimators.

use super::asym::{t_nu_asym, K_MAX};
use super::{check_mean_strip, VariancePair};
use crate::error::{bail, Result};
use crate::fracsum::inc_hyp_sinemod;
use crate::specfun::gamma::{pochhammer, rpochhammer};
use crate::specfun::series::Kahan;

/// Shapes above this switch [`t_nu_auto`] to the asymptotic expansion.
pub const EXACT_ALPHA_MAX: f64 = 60.0;

/// Relative change between successive asymptotic orders accepted by [`t_nu_auto`].
const ASYM_REL_STEP: f64 = 1e-8;

/// 𝒯ₙ = (1/Y₁) Σ_{k<n} α₁^{−k−1} α₂^k (Y₂/Y₁)^k / ((α₁)_{−k−1} (α₂)_k).
pub fn t_n(vp: &VariancePair, n: usize) -> Result<f64> {
    if n as f64 >= vp.alpha1 {
        bail!(Domain, "𝒯ₙ needs n < α₁, got n = {n}, α₁ = {}", vp.alpha1);
    }
    let r = vp.alpha2 * vp.y2 / (vp.alpha1 * vp.y1);
    let mut acc = Kahan::new();
    let mut rk = 1.0;
    for k in 0..n {
        let kf = k as f64;
        // 1/(α₁)_{−k−1} = (α₁−k−1)_{k+1}
        let inv_low = pochhammer(vp.alpha1 - kf - 1.0, kf + 1.0)?;
        acc.add(inv_low * rpochhammer(vp.alpha2, kf)? * rk);
        rk *= r;
    }
    Ok(acc.value() / (vp.alpha1 * vp.y1))
}

/// Above this Y₂/Y₁ the two terms of the direct form cancel badly and
/// [`t_nu`] evaluates the reflected estimator instead.
pub const REFLECT_RATIO: f64 = 1.5;

/// 𝒯ᵥ = (α₁−1)/(α₁Y₁) · 𝓕(1, 2−α₁; α₂; −α₂Y₂/(α₁Y₁))ᵥ, unbiased for (1 − ζ^ν)/(κ₁ − κ₂).
/// For Y₂ > 1.5·Y₁ it uses 𝒯ᵥ = −𝒯₋ᵥ with the samples exchanged.
pub fn t_nu(vp: &VariancePair, nu: f64) -> Result<f64> {
    check_mean_strip(vp.alpha1, vp.alpha2, nu)?;
    if nu == 0.0 {
        return Ok(0.0);
    }
    if vp.y2 > REFLECT_RATIO * vp.y1 {
        return Ok(-t_nu_direct(&vp.swapped(), -nu)?);
    }
    t_nu_direct(vp, nu)
}

/// The direct form of [`t_nu`], without the exchange.
pub fn t_nu_direct(vp: &VariancePair, nu: f64) -> Result<f64> {
    check_mean_strip(vp.alpha1, vp.alpha2, nu)?;
    if nu == 0.0 {
        return Ok(0.0);
    }
    let r = vp.alpha2 * vp.y2 / (vp.alpha1 * vp.y1);
    let f = inc_hyp_sinemod(1.0, 2.0 - vp.alpha1, vp.alpha2, -r, nu)?;
    Ok((vp.alpha1 - 1.0) / (vp.alpha1 * vp.y1) * f)
}

/// Exact 𝒯ᵥ for moderate shapes; otherwise the asymptotic form, raising the
/// order until successive orders agree.
pub fn t_nu_auto(vp: &VariancePair, nu: f64) -> Result<f64> {
    if vp.alpha1.max(vp.alpha2) <= EXACT_ALPHA_MAX {
        return t_nu(vp, nu);
    }
    check_mean_strip(vp.alpha1, vp.alpha2, nu)?;
    let mut prev = t_nu_asym(vp, nu, 0)?;
    for k in 1..=K_MAX {
        let cur = t_nu_asym(vp, nu, k)?;
        if (cur - prev).abs() <= ASYM_REL_STEP * cur.abs() {
            return Ok(cur);
        }
        prev = cur;
    }
    Ok(prev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn vp() -> VariancePair {
        VariancePair::new(2.0, 1.0, 20.0, 15.0).unwrap()
    }

    #[test]
    fn t_n_small_orders() {
        assert_eq!(t_n(&vp(), 0).unwrap(), 0.0);
        let one = VariancePair::new(2.0, 7.3, 20.0, 15.0).unwrap();
        assert_relative_eq!(t_n(&one, 1).unwrap(), 0.475, max_relative = 1e-15);
        assert!(t_n(&vp(), 20).is_err());
    }

    #[test]
    fn t_n_three_terms_brute_force() {
        // Σ_{k<3} Γ(α₁)/Γ(α₁−k−1) · Γ(α₂)/Γ(α₂+k) · α₁^{−k−1} α₂^k (Y₂/Y₁)^k / Y₁
        let (y1, y2, a1, a2) = (2.0f64, 1.0f64, 20.0f64, 15.0f64);
        let terms = [
            (a1 - 1.0) / a1,
            (a1 - 1.0) * (a1 - 2.0) / (a1 * a1) * (1.0 / a2) * a2 * (y2 / y1),
            (a1 - 1.0) * (a1 - 2.0) * (a1 - 3.0) / a1.powi(3) / (a2 * (a2 + 1.0)) * a2 * a2 * (y2 / y1).powi(2),
        ];
        let expected: f64 = terms.iter().sum::<f64>() / y1;
        assert_relative_eq!(t_n(&vp(), 3).unwrap(), expected, max_relative = 1e-14);
    }

    #[test]
    fn t_nu_matches_t_n_at_integers() {
        assert_eq!(t_nu(&vp(), 0.0).unwrap(), 0.0);
        for n in 1..=3 {
            assert_relative_eq!(t_nu(&vp(), n as f64).unwrap(), t_n(&vp(), n).unwrap(), max_relative = 1e-10);
        }
    }

    #[test]
    fn t_nu_reflection() {
        let v = vp();
        let lhs = t_nu_direct(&v, 1.7).unwrap();
        let rhs = -t_nu_direct(&v.swapped(), -1.7).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
    }

    #[test]
    fn small_illuminated_variance_is_reflected() {
        // Reference from 50-digit arithmetic; the direct form cancels 17 digits here.
        let v = VariancePair::new(0.05, 1.5575460997824195, 20.0, 15.0).unwrap();
        assert_relative_eq!(t_nu(&v, 0.7).unwrap(), 6.420966972185571, max_relative = 1e-12);
    }

    #[test]
    fn t_nu_rejects_outside_strip() {
        assert!(t_nu(&vp(), 20.0).is_err());
        assert!(t_nu(&vp(), -15.0).is_err());
    }

    #[test]
    fn auto_switches_to_asymptotic() {
        let big = VariancePair::new(22.0, 16.0, 1500.0, 750.0).unwrap();
        let nu = std::f64::consts::PI.exp() / 2.0;
        let a = t_nu_auto(&big, nu).unwrap();
        let b = t_nu_asym(&big, nu, 4).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-8);
    }
}
