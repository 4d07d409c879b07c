//! The conversion-gain estimator 𝒢ᵥ = P̄·𝒯ᵥ, its moments, confidence
//! intervals and the dominance ratio ℰ.

pub mod demo;

use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::estimator::asym::t_nu_asym;
use crate::estimator::exact::t_nu_auto;
use crate::estimator::moments::{acv2_partial, acv_t_nu, moments_t_nu, MomentReport};
use crate::estimator::{shape, PopulationParams, VariancePair};
use crate::specfun::beta::f_quantile;
use crate::specfun::dawson::dawson;

pub use demo::{run_demo, DemoConfig, DemoReport};

/// Sensor and experiment parameters of the pixel noise model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorParams {
    /// Dark mean, DN.
    pub mu_d: f64,
    /// Dark variance, DN².
    pub sigma_d2: f64,
    /// Mean photoelectrons.
    pub mu_e: f64,
    /// Conversion gain, e⁻/DN.
    pub g: f64,
    /// Illuminated sample size.
    pub n1: u64,
    /// Dark sample size.
    pub n2: u64,
}

impl SensorParams {
    pub fn new(mu_d: f64, sigma_d2: f64, mu_e: f64, g: f64, n1: u64, n2: u64) -> Result<Self> {
        if !(sigma_d2 > 0.0 && g > 0.0 && mu_e >= 0.0) || ![mu_d, sigma_d2, mu_e, g].iter().all(|v| v.is_finite()) {
            bail!(Domain, "sensor needs σ_d² > 0, g > 0, μ_e ≥ 0 (finite)");
        }
        if n1 < 2 || n2 < 2 {
            bail!(Domain, "sample sizes must be at least 2, got ({n1}, {n2})");
        }
        Ok(SensorParams { mu_d, sigma_d2, mu_e, g, n1, n2 })
    }

    /// μ_{p+d} = μ_d + μ_e/g.
    pub fn mu_pd(&self) -> f64 {
        self.mu_d + self.mu_e / self.g
    }

    /// σ²_{p+d} = σ_d² + μ_e/g².
    pub fn sigma_pd2(&self) -> f64 {
        self.sigma_d2 + self.mu_e / (self.g * self.g)
    }

    /// ζ = σ_d²/σ²_{p+d}.
    pub fn zeta(&self) -> f64 {
        self.sigma_d2 / self.sigma_pd2()
    }

    /// Dark noise in electrons, σ_d·g.
    pub fn sigma_dg(&self) -> f64 {
        self.sigma_d2.sqrt() * self.g
    }

    /// Mean of P̄ = X̄ − Ȳ.
    pub fn mu_p(&self) -> f64 {
        self.mu_e / self.g
    }

    /// Variance of P̄.
    pub fn var_pbar(&self) -> f64 {
        self.sigma_pd2() / self.n1 as f64 + self.sigma_d2 / self.n2 as f64
    }

    pub fn alpha1(&self) -> f64 {
        shape(self.n1)
    }

    pub fn alpha2(&self) -> f64 {
        shape(self.n2)
    }

    /// κ₁ = σ²_{p+d}, κ₂ = σ_d².
    pub fn population(&self) -> Result<PopulationParams> {
        PopulationParams::new(self.sigma_pd2(), self.sigma_d2)
    }

    fn check_illuminated(&self) -> Result<f64> {
        let z = self.zeta();
        if !(z > 0.0 && z < 1.0) {
            bail!(Domain, "needs ζ in (0,1), got {z}");
        }
        Ok(z)
    }
}

/// One observation T = (P̄, X̂, Ŷ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainObservation {
    /// X̄ − Ȳ, DN. May be nonpositive at very low light.
    pub pbar: f64,
    pub vp: VariancePair,
}

/// Quantity bounded by a confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CiTarget {
    Arb,
    Acv,
}

/// Upper-bound confidence set (lower, upper] with coverage `level`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
    pub target: CiTarget,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x <= self.upper
    }
}

fn check_positive_nu(nu: f64) -> Result<()> {
    if !(nu > 0.0) {
        bail!(Domain, "the gain estimator needs ν > 0, got {nu}");
    }
    Ok(())
}

/// 𝒢ᵥ = P̄·𝒯ᵥ, exact or with asymptotic order `asym_k`.
pub fn g_nu_estimate(obs: &GainObservation, nu: f64, asym_k: Option<usize>) -> Result<f64> {
    check_positive_nu(nu)?;
    let t = match asym_k {
        Some(k) => t_nu_asym(&obs.vp, nu, k)?,
        None => t_nu_auto(&obs.vp, nu)?,
    };
    Ok(obs.pbar * t)
}

/// E𝒢ᵥ = (1 − ζ^ν) g.
pub fn mean_g_nu(sp: &SensorParams, nu: f64) -> Result<f64> {
    check_positive_nu(nu)?;
    Ok((1.0 - sp.zeta().powf(nu)) * sp.g)
}

/// Moments of 𝒯ᵥ at the sensor's κ₁, κ₂ and shapes.
pub fn t_moments(sp: &SensorParams, nu: f64, tol: f64) -> Result<MomentReport> {
    moments_t_nu(&sp.population()?, sp.alpha1(), sp.alpha2(), nu, tol)
}

/// Var 𝒢ᵥ = (σ_d²/ζ)(1/n₁ + ζ/n₂ + (σ_d g)²(1−ζ)²/ζ) E𝒯ᵥ² − (E𝒢ᵥ)².
pub fn var_g_nu(sp: &SensorParams, nu: f64, tol: f64) -> Result<f64> {
    let z = sp.check_illuminated()?;
    let mean = mean_g_nu(sp, nu)?;
    let t = t_moments(sp, nu, tol)?;
    let dg2 = sp.sigma_dg().powi(2);
    let ep2 = sp.sigma_d2 / z * (1.0 / sp.n1 as f64 + z / sp.n2 as f64 + dg2 * (1.0 - z).powi(2) / z);
    Ok(ep2 * t.second_moment - mean * mean)
}

/// acv 𝒢ᵥ.
pub fn acv_g_nu(sp: &SensorParams, nu: f64, tol: f64) -> Result<f64> {
    Ok(var_g_nu(sp, nu, tol)?.sqrt() / mean_g_nu(sp, nu)?)
}

/// cv² P̄ = ζ/((σ_d g)²(1−ζ)²) · (1/n₁ + ζ/n₂).
pub fn cv2_pbar(sp: &SensorParams) -> Result<f64> {
    let z = sp.check_illuminated()?;
    Ok(z / (sp.sigma_dg().powi(2) * (1.0 - z).powi(2)) * (1.0 / sp.n1 as f64 + z / sp.n2 as f64))
}

/// ℰ = cv²𝒯ᵥ/cv²𝒢ᵥ = [1 + (1 + cv⁻²𝒯ᵥ) cv²P̄]⁻¹.
pub fn e_ratio(sp: &SensorParams, nu: f64, tol: f64) -> Result<f64> {
    check_positive_nu(nu)?;
    let cv2t = t_moments(sp, nu, tol)?.acv.powi(2);
    Ok(1.0 / (1.0 + (1.0 + 1.0 / cv2t) * cv2_pbar(sp)?))
}

/// Z = (Y₂/Y₁)·F with F the upper-`alpha` quantile of F_{2α₁,2α₂}.
pub fn z_alpha(vp: &VariancePair, alpha: f64) -> Result<f64> {
    Ok(vp.y2 / vp.y1 * f_quantile(alpha, 2.0 * vp.alpha1, 2.0 * vp.alpha2)?)
}

fn check_level(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        bail!(Domain, "α must lie in (0,1), got {alpha}");
    }
    Ok(())
}

/// Upper confidence bound for ARB 𝒯ᵥ = ARB 𝒢ᵥ = ζ^ν.
pub fn ci_arb(vp: &VariancePair, nu: f64, alpha: f64) -> Result<ConfidenceInterval> {
    check_level(alpha)?;
    if !(-vp.alpha2 < nu && nu < vp.alpha1) || nu == 0.0 {
        bail!(Domain, "ARB interval needs −α₂ < ν < α₁ and ν ≠ 0, got {nu}");
    }
    let z = z_alpha(vp, if nu > 0.0 { alpha } else { 1.0 - alpha })?;
    Ok(ConfidenceInterval { level: 1.0 - alpha, lower: 0.0, upper: z.powf(nu), target: CiTarget::Arb })
}

/// Which sample of ACV evaluation to use for the interval's upper end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AcvEval {
    /// Sum the series until the truncation bound certifies this tolerance.
    Tolerance(f64),
    /// Sum a fixed number of rows.
    Terms(usize),
}

/// Upper confidence bound for ACV 𝒯ᵥ, which approximates ACV 𝒢ᵥ when ℰ ≈ 1.
pub fn ci_acv(vp: &VariancePair, nu: f64, alpha: f64, eval: AcvEval) -> Result<ConfidenceInterval> {
    check_level(alpha)?;
    let (a1, a2) = (vp.alpha1, vp.alpha2);
    if !(nu.abs() > 1.0) {
        bail!(Domain, "ACV interval needs |ν| > 1 (monotonicity in ζ), got {nu}");
    }
    crate::estimator::check_second_moment(a1, a2, nu)?;
    let (z, lower) = if nu > 1.0 {
        (z_alpha(vp, alpha)?, (a1 - 2.0).powf(-0.5))
    } else {
        (z_alpha(vp, 1.0 - alpha)?, (a2 - 2.0).powf(-0.5))
    };
    let upper = match eval {
        AcvEval::Tolerance(tol) => acv_t_nu(z, a1, a2, nu, tol)?,
        AcvEval::Terms(n) => acv2_partial(z, a1, a2, nu, n)?.sqrt(),
    };
    Ok(ConfidenceInterval { level: 1.0 - alpha, lower, upper, target: CiTarget::Acv })
}

/// Approximate ARB of the traditional estimator G = P̄/(X̂ − Ŷ):
/// |2x𝒟(x) − 1| with x = (1−ζ)/√(2(1/α₁ + ζ²/α₂)).
pub fn arb_g_traditional(zeta: f64, alpha1: f64, alpha2: f64) -> Result<f64> {
    if !(zeta > 0.0 && zeta < 1.0) {
        bail!(Domain, "needs ζ in (0,1), got {zeta}");
    }
    let x = (1.0 - zeta) / (2.0 * (1.0 / alpha1 + zeta * zeta / alpha2)).sqrt();
    Ok((2.0 * x * dawson(x) - 1.0).abs())
}
