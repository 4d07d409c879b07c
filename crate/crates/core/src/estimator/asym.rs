//! Large-shape asymptotic form 𝒯ᵥ,K.
//!
//! The Pochhammer ratio α₁^{−k−1}α₂^k/((α₁)_{−k−1}(α₂)_k) expands as
//! Σ_j P_{2j}(k) with P_{2j} a polynomial of degree 2j in k whose
//! coefficients are built from Nørlund polynomials. The rational parts are
//! expanded exactly once and cached; only the powers of α₁, α₂ are applied
//! per call.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::VariancePair;
use crate::error::{bail, Result};
use crate::specfun::combinat::{norlund_poly, stirling2, RatPoly};
use crate::specfun::gamma::falling_factorial;
use crate::specfun::hyper::hyp2f1;
use crate::specfun::series::Kahan;

/// Highest supported expansion order.
pub const K_MAX: usize = 6;

/// q[k][m][ℓ] = [x^ℓ] C(x+1,m) C(−x,k−m) B_m^{(2+x)} B_{k−m}^{(1−x)}.
type QTable = Vec<Vec<Vec<f64>>>;

static Q: OnceLock<QTable> = OnceLock::new();

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn q_table() -> &'static QTable {
    Q.get_or_init(|| {
        (0..=K_MAX)
            .map(|k| {
                (0..=k)
                    .map(|m| {
                        let b1 = norlund_poly(m).expect("table size").compose_linear(&int(2), &int(1));
                        let b2 = norlund_poly(k - m).expect("table size").compose_linear(&int(1), &int(-1));
                        let poly = RatPoly::binomial_linear(1, 1, m)
                            .mul(&RatPoly::binomial_linear(0, -1, k - m))
                            .mul(&b1)
                            .mul(&b2);
                        (0..=2 * k).map(|l| poly.coeff(l).to_f64().unwrap_or(f64::NAN)).collect()
                    })
                    .collect()
            })
            .collect()
    })
}

/// p_{k,ℓ}(α₁, α₂) = [x^ℓ] P_{2k}(x).
pub fn p_coeff(k: usize, l: usize, alpha1: f64, alpha2: f64) -> Result<f64> {
    if k > K_MAX {
        bail!(Range, "expansion order {k} exceeds {K_MAX}");
    }
    if l > 2 * k {
        return Ok(0.0);
    }
    let q = &q_table()[k];
    let mut acc = Kahan::new();
    for (m, row) in q.iter().enumerate() {
        acc.add(row[l] * alpha1.powi(-(m as i32)) * alpha2.powi(m as i32 - k as i32));
    }
    Ok(acc.value())
}

/// P_{2k}(x) evaluated through its coefficients.
pub fn p_poly(k: usize, x: f64, alpha1: f64, alpha2: f64) -> Result<f64> {
    let mut acc = 0.0;
    for l in (0..=2 * k).rev() {
        acc = acc * x + p_coeff(k, l, alpha1, alpha2)?;
    }
    Ok(acc)
}

/// Coefficients c_{m,K}(α₁, α₂), m = 0..=2K, reusable across observations.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymCoeffs {
    pub order: usize,
    pub c: Vec<f64>,
}

impl AsymCoeffs {
    /// c_{m,K} = (1/(m+1)) Σ_{ℓ=m}^{2K} Σ_{k≤K} S₂(ℓ,m) p_{k,ℓ}.
    pub fn new(alpha1: f64, alpha2: f64, order: usize) -> Result<Self> {
        if order > K_MAX {
            bail!(Range, "expansion order {order} exceeds {K_MAX}");
        }
        let mut p = vec![0.0; 2 * order + 1];
        for k in 0..=order {
            for (l, pl) in p.iter_mut().enumerate().take(2 * k + 1) {
                *pl += p_coeff(k, l, alpha1, alpha2)?;
            }
        }
        let mut c = Vec::with_capacity(2 * order + 1);
        for m in 0..=2 * order {
            let mut acc = Kahan::new();
            for (l, pl) in p.iter().enumerate().skip(m) {
                acc.add(stirling2(l, m)? as f64 * pl);
            }
            c.push(acc.value() / (m as f64 + 1.0));
        }
        Ok(AsymCoeffs { order, c })
    }

    /// 𝒯ᵥ,K at one pair of sample variances.
    pub fn eval(&self, y1: f64, y2: f64, nu: f64) -> Result<f64> {
        if nu == 0.0 {
            return Ok(0.0);
        }
        let x = 1.0 - y1 / y2;
        let mut acc = Kahan::new();
        for (m, &cm) in self.c.iter().enumerate() {
            let mf = m as f64;
            let ff = falling_factorial(nu, mf + 1.0)?;
            if ff == 0.0 || cm == 0.0 {
                continue;
            }
            acc.add(cm * ff * hyp2f1(mf + 1.0, 1.0 + nu, mf + 2.0, x)?);
        }
        Ok(acc.value() / y2)
    }
}

/// 𝒯ᵥ,K = (1/Y₂) Σ_{m≤2K} c_{m,K} (ν)^{(m+1)} F(m+1, 1+ν; m+2; 1 − Y₁/Y₂).
pub fn t_nu_asym(vp: &VariancePair, nu: f64, order: usize) -> Result<f64> {
    AsymCoeffs::new(vp.alpha1, vp.alpha2, order)?.eval(vp.y1, vp.y2, nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::exact::t_n;
    use crate::specfun::gamma::{pochhammer, rpochhammer};
    use approx::assert_relative_eq;

    #[test]
    fn first_order_coefficients() {
        let (a1, a2) = (37.0, 11.0);
        let c = AsymCoeffs::new(a1, a2, 1).unwrap().c;
        assert_relative_eq!(c[0], 1.0 - 1.0 / a1, max_relative = 1e-14);
        assert_relative_eq!(c[1], -1.0 / a1, max_relative = 1e-14);
        assert_relative_eq!(c[2], -(a1 + a2) / (6.0 * a1 * a2), max_relative = 1e-14);
    }

    #[test]
    fn zeroth_order_is_tau_of_sample() {
        let vp = VariancePair::new(22.0, 16.0, 1500.0, 750.0).unwrap();
        let nu = 2.3;
        let expected = (1.0 - (16.0f64 / 22.0).powf(nu)) / (22.0 - 16.0);
        assert_relative_eq!(t_nu_asym(&vp, nu, 0).unwrap(), expected, max_relative = 1e-13);
    }

    #[test]
    fn first_order_three_term_form() {
        let (x, y, a1, a2) = (22.0, 16.0, 1500.0, 750.0);
        let nu = std::f64::consts::PI.exp() / 2.0;
        let z = 1.0 - x / y;
        let f = |a: f64, c: f64| hyp2f1(a, 1.0 + nu, c, z).unwrap();
        let ff = |k: f64| falling_factorial(nu, k).unwrap();
        let expected = ((1.0 - 1.0 / a1) * nu * f(1.0, 2.0)
            - ff(2.0) / a1 * f(2.0, 3.0)
            - (a1 + a2) / (6.0 * a1 * a2) * ff(3.0) * f(3.0, 4.0))
            / y;
        let vp = VariancePair::new(x, y, a1, a2).unwrap();
        assert_relative_eq!(t_nu_asym(&vp, nu, 1).unwrap(), expected, max_relative = 1e-13);
    }

    #[test]
    fn polynomial_reproduces_pochhammer_ratio() {
        let (a1, a2) = (400.0, 300.0);
        for k in 0..4 {
            let kf = k as f64;
            let exact = pochhammer(a1 - kf - 1.0, kf + 1.0).unwrap() * a1.powf(-kf - 1.0)
                * rpochhammer(a2, kf).unwrap()
                * a2.powf(kf);
            let approx: f64 = (0..=K_MAX).map(|j| p_poly(j, kf, a1, a2).unwrap()).sum();
            assert_relative_eq!(approx, exact, max_relative = 1e-13);
        }
    }

    #[test]
    fn ladder_toward_exact_integer_order() {
        let vp = VariancePair::new(1.3, 1.0, 200.0, 200.0).unwrap();
        let exact = t_n(&vp, 3).unwrap();
        let err: Vec<f64> = (0..3).map(|k| (t_nu_asym(&vp, 3.0, k).unwrap() - exact).abs()).collect();
        assert!(err[1] < err[0] && err[2] < err[1], "{err:?}");
    }

    #[test]
    fn order_cap() {
        let vp = VariancePair::new(1.0, 1.0, 100.0, 100.0).unwrap();
        assert!(matches!(t_nu_asym(&vp, 1.0, 7), Err(crate::Error::Range(_))));
        assert!(t_nu_asym(&vp, 1.5, 6).unwrap().is_finite());
    }
}
