//! Estimators of the reciprocal difference τ = (κ₁ − κ₂)⁻¹ of two variances,
//! their moments, dispersion and truncation-error bounds.

pub mod asym;
pub mod bounds;
pub mod exact;
pub mod limiting;
pub mod moments;

use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};

pub use asym::{t_nu_asym, AsymCoeffs, K_MAX};
pub use bounds::{k_star, rel_bound, rel_bound_star, trunc_bound};
pub use exact::{t_n, t_nu, t_nu_auto, t_nu_direct, EXACT_ALPHA_MAX, REFLECT_RATIO};
pub use limiting::{estimator_u, estimator_v, var_u, var_v};
pub use moments::{
    acv2_partial, acv_partial, acv_t_nu, arb_t_nu, cv_limit_inf, cv_limit_zero, mean_t_nu, moments_t_nu,
    second_moment_t_n, MomentReport,
};

/// Two independent scaled sample variances with their gamma shapes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariancePair {
    /// Illuminated sample variance.
    pub y1: f64,
    /// Dark sample variance.
    pub y2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl VariancePair {
    pub fn new(y1: f64, y2: f64, alpha1: f64, alpha2: f64) -> Result<Self> {
        if !(y1 > 0.0 && y1.is_finite() && y2 > 0.0 && y2.is_finite()) {
            bail!(Domain, "variances must be finite and positive, got ({y1}, {y2})");
        }
        if !(alpha1 >= 0.5 && alpha2 >= 0.5) || !alpha1.is_finite() || !alpha2.is_finite() {
            bail!(Domain, "shapes must be at least 0.5, got ({alpha1}, {alpha2})");
        }
        Ok(VariancePair { y1, y2, alpha1, alpha2 })
    }

    /// Shapes from sample sizes, α = (n − 1)/2.
    pub fn from_sizes(y1: f64, y2: f64, n1: u64, n2: u64) -> Result<Self> {
        Self::new(y1, y2, shape(n1), shape(n2))
    }

    /// The same pair with the roles of the two samples exchanged.
    pub fn swapped(&self) -> Self {
        VariancePair { y1: self.y2, y2: self.y1, alpha1: self.alpha2, alpha2: self.alpha1 }
    }
}

/// Gamma shape (n − 1)/2 of a sample variance from n observations.
pub fn shape(n: u64) -> f64 {
    (n as f64 - 1.0) / 2.0
}

/// Population variances κ₁, κ₂ and their ratio ζ = κ₂/κ₁.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationParams {
    pub kappa1: f64,
    pub kappa2: f64,
    pub zeta: f64,
}

impl PopulationParams {
    pub fn new(kappa1: f64, kappa2: f64) -> Result<Self> {
        if !(kappa1 > 0.0 && kappa1.is_finite() && kappa2 > 0.0 && kappa2.is_finite()) {
            bail!(Domain, "κ must be finite and positive, got ({kappa1}, {kappa2})");
        }
        Ok(PopulationParams { kappa1, kappa2, zeta: kappa2 / kappa1 })
    }

    pub fn swapped(&self) -> Self {
        PopulationParams { kappa1: self.kappa2, kappa2: self.kappa1, zeta: 1.0 / self.zeta }
    }
}

/// −α₂ < ν < α₁, the strip where the first moment exists.
pub(crate) fn check_mean_strip(alpha1: f64, alpha2: f64, nu: f64) -> Result<()> {
    if !(-alpha2 < nu && nu < alpha1) {
        bail!(Domain, "ν = {nu} outside the strip (−{alpha2}, {alpha1})");
    }
    Ok(())
}

/// α₁ + α₂ > 2 and −α₂ < 2ν < α₁, where the second moment exists.
pub(crate) fn check_second_moment(alpha1: f64, alpha2: f64, nu: f64) -> Result<()> {
    if !(alpha1 + alpha2 > 2.0) {
        bail!(Constraint, "second moment needs α₁ + α₂ > 2, got {}", alpha1 + alpha2);
    }
    if !(-alpha2 < 2.0 * nu && 2.0 * nu < alpha1) {
        bail!(Constraint, "second moment needs −α₂ < 2ν < α₁, got ν = {nu}");
    }
    Ok(())
}
