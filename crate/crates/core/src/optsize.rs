//! Bias profiles, optimal sample sizes for 𝒯ᵥ† and P̄, and the low-illumination
//! constants C that govern them as ζ → 1⁻.
//!
//! Sizes are optimal in the sense of minimizing n₁ + n₂ subject to a target
//! ACV. For 𝒯ᵥ† the bias is fixed by the profile ρ(ζ) = ARB₀·ζᵇ, so only the
//! ACV constraint enters the solve.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{bail, Error, Result};
use crate::estimator::bounds::rel_bound;
use crate::fracsum::gtilde_nw;
use crate::specfun::expint::{expint_ei_scaled, lower_gamma};
use crate::specfun::series::Kahan;

/// Tolerance on ζ for hitting an exact point.
pub const EXACT_POINT_TOL: f64 = 1e-12;
/// Truncation tolerance used for the reference curves.
pub const DEFAULT_EPS: f64 = 5e-7;
/// Maximum series order used for the reference curves.
pub const DEFAULT_N_MAX: usize = 20;
const NEWTON_MAX_ITER: usize = 100;

/// Bias profile ρ(ζ) = ARB₀·ζᵇ, realized by ν† = log_ζ ARB₀ + b.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasProfile {
    pub arb0: f64,
    pub b: f64,
}

impl BiasProfile {
    /// b > 1 is accepted, but then ζ_{b,1} = 0 and only the ζ = 0 exact point
    /// remains.
    pub fn new(arb0: f64, b: f64) -> Result<Self> {
        if !(arb0 > 0.0 && arb0 < 1.0) {
            bail!(Domain, "ARB₀ must lie in (0, 1), got {arb0}");
        }
        if !(b >= 0.0) || !b.is_finite() {
            bail!(Domain, "b must be finite and nonnegative, got {b}");
        }
        Ok(BiasProfile { arb0, b })
    }

    /// ρ(ζ) = ARB₀·ζᵇ.
    pub fn rho(&self, zeta: f64) -> f64 {
        self.arb0 * zeta.powf(self.b)
    }

    /// ζ_{b,1} = ARB₀^{1/(1−b)} for b < 1, else 0; ν† = 1 there.
    pub fn zeta_b1(&self) -> f64 {
        if self.b < 1.0 {
            self.arb0.powf(1.0 / (1.0 - self.b))
        } else {
            0.0
        }
    }

    /// True at ζ ∈ {0, ζ_{b,1}}, where the optimum is known in closed form.
    pub fn is_exact_point(&self, zeta: f64) -> bool {
        zeta.abs() < EXACT_POINT_TOL || (zeta - self.zeta_b1()).abs() < EXACT_POINT_TOL
    }

    /// ν† on [0, 1), with its limit b at ζ = 0.
    fn nudag_closed(&self, zeta: f64) -> Result<f64> {
        if zeta == 0.0 {
            return Ok(self.b);
        }
        nudag(zeta, self)
    }
}

/// ν† = ln ARB₀ / ln ζ + b, strictly increasing from (0,1) onto (b, ∞).
pub fn nudag(zeta: f64, spec: &BiasProfile) -> Result<f64> {
    if !(zeta > 0.0 && zeta < 1.0) {
        bail!(Domain, "ν† needs ζ in (0, 1), got {zeta}");
    }
    Ok(spec.arb0.ln() / zeta.ln() + spec.b)
}

/// How a set of optimal sizes was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeMethod {
    ExactPoint,
    Approx,
    Newton,
}

/// Optimal sample sizes for 𝒯ᵥ† at one ζ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalSizes {
    /// Rounded up, with n₂ ≥ 1.
    pub n1: u64,
    pub n2: u64,
    pub n1_real: f64,
    pub n2_real: f64,
    pub zeta: f64,
    pub nudag: f64,
    pub acv_target: f64,
    /// Series order n of the truncated acv² used in the solve.
    pub terms_used: usize,
    /// Bound R*_{n,n+1,2} at the solution; infinite where it does not exist.
    pub rel_bound: f64,
    pub method: SizeMethod,
    /// (∂_{α₂} acv²ₙ at fixed α₁+α₂, acv²ₙ − ACV₀²) at the solution.
    pub residuals: [f64; 2],
}

/// Rounds a real sample size up, ignoring relative round-off below 1e-12.
pub fn ceil_size(n: f64) -> u64 {
    (n * (1.0 - 1e-12)).ceil().max(1.0) as u64
}

fn check_acv0(acv0: f64) -> Result<()> {
    if !(acv0 > 0.0) || !acv0.is_finite() {
        bail!(Domain, "ACV₀ must be positive, got {acv0}");
    }
    Ok(())
}

fn check_zeta_open(zeta: f64) -> Result<()> {
    if !(zeta >= 0.0 && zeta < 1.0) {
        bail!(Domain, "ζ must lie in [0, 1), got {zeta}");
    }
    Ok(())
}

/// Optimal (n₁, n₂) for P̄ at ACV₀; n₂/n₁ = √ζ.
pub fn pbar_opt_sizes(zeta: f64, sigma_dg: f64, acv0: f64) -> Result<(f64, f64)> {
    check_zeta_open(zeta)?;
    check_acv0(acv0)?;
    if !(sigma_dg > 0.0) {
        bail!(Domain, "σ_d·g must be positive, got {sigma_dg}");
    }
    let s = 1.0 / (sigma_dg * sigma_dg * acv0 * acv0 * (1.0 - zeta).powi(2));
    let r = zeta.sqrt();
    Ok((s * zeta * (1.0 + r), s * zeta * (r + zeta)))
}

/// γ(k+1, −ln ARB₀)/(1 − ARB₀), the low-illumination limit of g̃_{k,·}.
fn a_k(k: usize, arb0: f64) -> Result<f64> {
    Ok(lower_gamma(k as f64 + 1.0, -arb0.ln())? / (1.0 - arb0))
}

/// Limiting acv² of 𝒯ᵥ† at n_i ~ C(1−ζ)⁻², from the exponential-integral form.
pub fn acvbar2_t(c: f64, arb0: f64) -> Result<f64> {
    if !(c > 0.0) {
        bail!(Domain, "C must be positive, got {c}");
    }
    let q = c / 4.0;
    let la = arb0.ln();
    let w = (q + la) * (q + la) / q;
    if q + la == 0.0 {
        return acvbar2_t_series(c, arb0);
    }
    // e^{-q}Ei(q+ln ARB₀) = ARB₀·S(q+ln ARB₀) and e^{-q}Ei(w) = ARB₀²e^{ln²ARB₀/q}·S(w)
    let t1 = expint_ei_scaled(q)?;
    let t2 = arb0 * expint_ei_scaled(q + la)?;
    let t3 = arb0 * arb0 * (la * la / q).exp() * expint_ei_scaled(w)?;
    Ok(q * (t1 - 2.0 * t2 + t3) / (1.0 - arb0).powi(2) - 1.0)
}

/// Same quantity by its defining series Σ_k a_k²(4/C)^k/k!.
pub fn acvbar2_t_series(c: f64, arb0: f64) -> Result<f64> {
    Ok(acvbar2_series_terms(c, arb0)?.0)
}

/// (Σ a_k²x^k/k!, Σ k a_k²x^k/k!) with x = 4/C.
fn acvbar2_series_terms(c: f64, arb0: f64) -> Result<(f64, f64)> {
    if !(c > 0.0) {
        bail!(Domain, "C must be positive, got {c}");
    }
    let x = 4.0 / c;
    let (mut s, mut ds) = (Kahan::new(), Kahan::new());
    let mut xk = 1.0;
    for k in 1..2000 {
        xk *= x / k as f64;
        let t = a_k(k, arb0)?.powi(2) * xk;
        s.add(t);
        ds.add(k as f64 * t);
        if t <= 1e-17 * s.value() && k > 2 {
            return Ok((s.value(), ds.value()));
        }
    }
    Err(Error::Convergence(format!("limiting acv² series at C = {c} did not converge")))
}

/// Two-term starting value C*_𝒯 obtained from the approximate sizes as ζ → 1⁻.
pub fn c_t_star(spec: &BiasProfile, acv0: f64) -> Result<f64> {
    check_acv0(acv0)?;
    let l = -spec.arb0.ln();
    let g2 = lower_gamma(2.0, l)?;
    let g3 = lower_gamma(3.0, l)?;
    let om = (1.0 - spec.arb0).powi(2);
    let d2 = acv0 * acv0;
    Ok(2.0 * g2 * g2 / (d2 * om) * (1.0 + (1.0 + d2 * om * g3 * g3 / g2.powi(4)).sqrt()))
}

/// Newton solve of f(C) = 0 for decreasing f, safeguarded by bisection on
/// [lo, hi]. `f` returns (value, derivative).
fn solve_decreasing<F>(mut f: F, start: f64, lo: f64, hi: f64, what: &str) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo)?.0, f(hi)?.0);
    if !(flo > 0.0 && fhi < 0.0) {
        bail!(Convergence, "{what}: root not bracketed by [{lo}, {hi}]");
    }
    let mut c = start.clamp(lo, hi);
    for _ in 0..200 {
        let (v, dv) = f(c)?;
        if v == 0.0 {
            return Ok(c);
        }
        if v > 0.0 {
            lo = c;
        } else {
            hi = c;
        }
        let mut next = c - v / dv;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - c).abs() <= 1e-12 * c {
            return Ok(next);
        }
        c = next;
    }
    Err(Error::Convergence(format!("{what}: no convergence in 200 iterations")))
}

/// (acv̄²_𝒯(C), d acv̄²_𝒯/dC).
fn acvbar2_with_slope(c: f64, arb0: f64) -> Result<(f64, f64)> {
    let v = acvbar2_t(c, arb0)?;
    let (_, ds) = acvbar2_series_terms(c, arb0)?;
    Ok((v, -ds / c))
}

/// C_𝒯: n₁ ~ n₂ ~ C_𝒯(1−ζ)⁻² as ζ → 1⁻ at fixed ARB₀ and ACV₀.
pub fn c_t_constant(spec: &BiasProfile, acv0: f64) -> Result<f64> {
    let start = c_t_star(spec, acv0)?;
    let d2 = acv0 * acv0;
    solve_decreasing(
        |c| {
            let (v, dv) = acvbar2_with_slope(c, spec.arb0)?;
            Ok((v - d2, dv))
        },
        start,
        start / 10.0,
        start * 10.0,
        "C_𝒯",
    )
}

/// Limiting acv² of 𝒢ᵥ† at n_i ~ C(1−ζ)⁻².
pub fn acvbar2_g(c: f64, arb0: f64, sigma_dg: f64) -> Result<f64> {
    let t = acvbar2_t(c, arb0)?;
    let p = 2.0 / (sigma_dg * sigma_dg * c);
    Ok(t + t * p + p)
}

/// C_𝒢, the analogue of C_𝒯 for the gain estimator; always ≥ C_𝒯.
pub fn gain_c_constant(spec: &BiasProfile, acv0: f64, sigma_dg: f64) -> Result<f64> {
    if !(sigma_dg > 0.0) {
        bail!(Domain, "σ_d·g must be positive, got {sigma_dg}");
    }
    let ct = c_t_constant(spec, acv0)?;
    let d2 = acv0 * acv0;
    let s2 = sigma_dg * sigma_dg;
    let f = |c: f64| -> Result<(f64, f64)> {
        let (t, dt) = acvbar2_with_slope(c, spec.arb0)?;
        let p = 2.0 / (s2 * c);
        let dp = -p / c;
        Ok((t + t * p + p - d2, dt * (1.0 + p) + dp * (1.0 + t)))
    };
    let mut hi = 2.0 * ct;
    while f(hi)?.0 >= 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            bail!(Convergence, "C_𝒢: no upper bracket");
        }
    }
    solve_decreasing(f, ct, ct, hi, "C_𝒢")
}

/// Which estimator's optimal sizes enter ℰ̄.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    T,
    G,
}

/// ℰ̄, the limit of ℰ as ζ → 1⁻ under the optimal sizes of 𝒯ᵥ† or 𝒢ᵥ†.
pub fn ebar(spec: &BiasProfile, acv0: f64, sigma_dg: f64, which: Which) -> Result<f64> {
    let s2 = sigma_dg * sigma_dg;
    match which {
        Which::T => {
            let c = c_t_constant(spec, acv0)?;
            Ok(1.0 / (1.0 + 2.0 * (1.0 + 1.0 / (acv0 * acv0)) / (s2 * c)))
        }
        Which::G => {
            let c = gain_c_constant(spec, acv0, sigma_dg)?;
            let t = acvbar2_t(c, spec.arb0)?;
            Ok(1.0 / (1.0 + (1.0 + 1.0 / t) * 2.0 / (s2 * c)))
        }
    }
}

/// ℰ for 𝒯ᵥ† at sample sizes (n₁, n₂) sized for ACV₀.
pub fn e_from_sizes(zeta: f64, n1: f64, n2: f64, acv0: f64, sigma_dg: f64) -> f64 {
    if zeta == 0.0 {
        return 1.0;
    }
    let acv2p = zeta / (sigma_dg * sigma_dg * (1.0 - zeta).powi(2)) * (1.0 / n1 + zeta / n2);
    1.0 / (1.0 + (1.0 + 1.0 / (acv0 * acv0)) * acv2p)
}

/// ℰ_𝒯ᵥ†(ζ) under the solved optimal sizes.
pub fn e_curve(zeta: f64, spec: &BiasProfile, acv0: f64, sigma_dg: f64, eps: f64, n_max: usize) -> Result<f64> {
    let s = solve_opt_sizes(zeta, spec, acv0, eps, n_max)?;
    Ok(e_from_sizes(zeta, s.n1_real, s.n2_real, acv0, sigma_dg))
}

/// g̃_{1,1}, g̃_{2,1} and g̃_{1,0} at (ζ, ν†).
fn gtilde_triple(zeta: f64, nu: f64) -> Result<(f64, f64, f64)> {
    Ok((gtilde_nw(1, 1, zeta, nu)?.0, gtilde_nw(2, 1, zeta, nu)?.0, gtilde_nw(1, 0, zeta, nu)?.0))
}

/// Closed-form approximate optimal sizes (n₁*, n₂*), exact at ζ ∈ {0, ζ_{b,1}}.
pub fn approx_opt_sizes(zeta: f64, spec: &BiasProfile, acv0: f64) -> Result<(f64, f64)> {
    check_zeta_open(zeta)?;
    check_acv0(acv0)?;
    let nu = spec.nudag_closed(zeta)?;
    let (g11, g21, g10) = gtilde_triple(zeta, nu)?;
    let d2 = acv0 * acv0;
    let root = (g11 * g11 * g10 * g10 + g21 * g21 * d2).sqrt();
    Ok((2.0 / d2 * (g11 * g11 + root) + 5.0, 2.0 / d2 * (g10 * g10 + root) + 1.0))
}

/// (n₁, n₂) from the negative root, which the positive-root choice discards.
pub fn approx_opt_sizes_negative_root(zeta: f64, spec: &BiasProfile, acv0: f64) -> Result<(f64, f64)> {
    check_zeta_open(zeta)?;
    let nu = spec.nudag_closed(zeta)?;
    let (g11, g21, g10) = gtilde_triple(zeta, nu)?;
    let d2 = acv0 * acv0;
    let root = (g11 * g11 * g10 * g10 + g21 * g21 * d2).sqrt();
    Ok((2.0 / d2 * (g11 * g11 - root) + 1.0, 2.0 / d2 * (g10 * g10 - root) + 1.0))
}

/// acv²ₙ of 𝒯ᵥ at fixed (ζ, ν) as a function of the shapes, with the g̃²
/// table computed once.
#[derive(Debug, Clone)]
pub struct TruncatedAcv2 {
    /// g2[k][ℓ] = g̃²_{k,ℓ}/(ℓ!(k−ℓ)!)
    g2: Vec<Vec<f64>>,
}

/// Value and partial derivatives of acv²ₙ in log-shape coordinates.
#[derive(Debug, Clone, Copy)]
struct Acv2Eval {
    v: f64,
    /// α₁∂_{α₁}, α₂∂_{α₂}
    d1: f64,
    d2: f64,
    /// second derivatives in (ln α₁, ln α₂)
    h11: f64,
    h12: f64,
    h22: f64,
}

impl TruncatedAcv2 {
    pub fn new(zeta: f64, nu: f64, n: usize) -> Result<Self> {
        let mut g2 = vec![Vec::new()];
        for k in 1..=n {
            let mut row = Vec::with_capacity(k + 1);
            let mut fact_l = 1.0;
            for l in 0..=k {
                if l > 0 {
                    fact_l *= l as f64;
                }
                let fact_kl: f64 = (1..=(k - l)).map(|j| j as f64).product();
                let g = gtilde_nw(k, l, zeta, nu)?.0;
                row.push(g * g / (fact_l * fact_kl));
            }
            g2.push(row);
        }
        Ok(TruncatedAcv2 { g2 })
    }

    pub fn order(&self) -> usize {
        self.g2.len() - 1
    }

    /// acv²ₙ(α₁, α₂).
    pub fn value(&self, alpha1: f64, alpha2: f64) -> f64 {
        self.eval(alpha1, alpha2).v
    }

    /// ∂_{α₂} acv²ₙ(A − α₂, α₂) at fixed A = α₁ + α₂.
    pub fn slope_fixed_total(&self, alpha1: f64, alpha2: f64) -> f64 {
        let e = self.eval(alpha1, alpha2);
        e.d2 / alpha2 - e.d1 / alpha1
    }

    fn eval(&self, alpha1: f64, alpha2: f64) -> Acv2Eval {
        let n = self.order();
        // running 1/(α)_j and the partial sums of 1/(α+i) and 1/(α+i)²
        let pre = |a: f64| {
            let (mut inv, mut h, mut h2) = (vec![1.0], vec![0.0], vec![0.0]);
            for j in 0..n {
                let x = a + j as f64;
                inv.push(inv[j] / x);
                h.push(h[j] + 1.0 / x);
                h2.push(h2[j] + 1.0 / (x * x));
            }
            (inv, h, h2)
        };
        let (i1, h1, q1) = pre(alpha1);
        let (i2, h2, q2) = pre(alpha2);
        let mut out = [Kahan::new(), Kahan::new(), Kahan::new(), Kahan::new(), Kahan::new(), Kahan::new()];
        for k in 1..=n {
            for l in 0..=k {
                let m = k - l;
                let t = self.g2[k][l] * i1[l] * i2[m];
                if t == 0.0 {
                    continue;
                }
                // ∂ ln t / ∂ ln α = −α Σ 1/(α+i); its derivative adds α² Σ 1/(α+i)²
                let u1 = -alpha1 * h1[l];
                let u2 = -alpha2 * h2[m];
                let w1 = u1 + alpha1 * alpha1 * q1[l];
                let w2 = u2 + alpha2 * alpha2 * q2[m];
                out[0].add(t);
                out[1].add(t * u1);
                out[2].add(t * u2);
                out[3].add(t * (u1 * u1 + w1));
                out[4].add(t * u1 * u2);
                out[5].add(t * (u2 * u2 + w2));
            }
        }
        let [v, d1, d2, h11, h12, h22] = out.map(|k| k.value());
        Acv2Eval { v, d1, d2, h11, h12, h22 }
    }
}

/// R*_{n,n+1,2} at real sizes, infinite where no bound exists.
fn rel_bound_at(n: usize, zeta: f64, a1: f64, a2: f64, nu: f64) -> f64 {
    match rel_bound(n, n + 1, 2.0, zeta, a1, a2, nu) {
        Ok(r) if r.is_finite() => r,
        _ => f64::INFINITY,
    }
}

/// Damped Newton on the optimality system in (ln α₁, ln α₂). The equations
/// are scaled to α₁α₂/(α₁+α₂)·∂_{α₂}acv²/ACV₀² = 0 and acv²/ACV₀² − 1 = 0.
fn newton_alphas(t: &TruncatedAcv2, acv0: f64, start: (f64, f64)) -> Result<(f64, f64)> {
    let d2 = acv0 * acv0;
    let resid = |a1: f64, a2: f64| {
        let e = t.eval(a1, a2);
        let s = 1.0 / (a1 + a2);
        // α₁α₂/(α₁+α₂)·(∂₂ − ∂₁) = (α₁·d2 − α₂·d1)/(α₁+α₂)
        let f1 = (a1 * e.d2 - a2 * e.d1) * s / d2;
        let f2 = e.v / d2 - 1.0;
        (f1, f2, e, s)
    };
    let (mut x1, mut x2) = (start.0.ln(), start.1.ln());
    for _ in 0..NEWTON_MAX_ITER {
        let (a1, a2) = (x1.exp(), x2.exp());
        let (f1, f2, e, s) = resid(a1, a2);
        let norm = f1.hypot(f2);
        if norm < 1e-13 {
            return Ok((a1, a2));
        }
        // Jacobian in ln-coordinates
        let p = a1 * s;
        let q = a2 * s;
        let dp1 = p * q;
        let dq1 = -p * q;
        let j11 = (dp1 * e.d2 + p * e.h12 - dq1 * e.d1 - q * e.h11) / d2;
        let j12 = (-dp1 * e.d2 + p * e.h22 - dp1 * e.d1 - q * e.h12) / d2;
        let j21 = e.d1 / d2;
        let j22 = e.d2 / d2;
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            bail!(Convergence, "singular Jacobian in optimal-size solve");
        }
        let s1 = -(j22 * f1 - j12 * f2) / det;
        let s2 = -(-j21 * f1 + j11 * f2) / det;
        let mut lam = 1.0;
        loop {
            let (y1, y2) = (x1 + lam * s1, x2 + lam * s2);
            let (g1, g2, _, _) = resid(y1.exp(), y2.exp());
            let nn = g1.hypot(g2);
            if nn.is_finite() && nn < norm * (1.0 - 1e-4 * lam) {
                x1 = y1;
                x2 = y2;
                break;
            }
            lam *= 0.5;
            if lam < 1e-10 {
                // no descent left: accept if already at round-off level
                if norm < 1e-9 {
                    return Ok((a1, a2));
                }
                bail!(Convergence, "line search stalled at residual {norm:e}");
            }
        }
    }
    Err(Error::Convergence(format!("optimal-size Newton exceeded {NEWTON_MAX_ITER} iterations")))
}

/// Optimal sizes for 𝒯ᵥ† at ζ: closed form at ζ ∈ {0, ζ_{b,1}}, otherwise
/// Newton on the truncated acv²ₙ with n grown until R*_{n,n+1,2} ≤ eps or
/// n = n_max.
pub fn solve_opt_sizes(zeta: f64, spec: &BiasProfile, acv0: f64, eps: f64, n_max: usize) -> Result<OptimalSizes> {
    check_zeta_open(zeta)?;
    check_acv0(acv0)?;
    if !(eps > 0.0) || n_max == 0 {
        bail!(Domain, "need eps > 0 and n_max ≥ 1");
    }
    let d2 = acv0 * acv0;
    if spec.is_exact_point(zeta) {
        let n1 = 2.0 / d2 + 5.0;
        let nu = spec.nudag_closed(zeta)?;
        return Ok(OptimalSizes {
            n1: ceil_size(n1),
            n2: 1,
            n1_real: n1,
            n2_real: 1.0,
            zeta,
            nudag: nu,
            acv_target: acv0,
            terms_used: 0,
            rel_bound: 0.0,
            method: SizeMethod::ExactPoint,
            residuals: [0.0, 0.0],
        });
    }
    let nu = nudag(zeta, spec)?;
    let (s1, s2) = approx_opt_sizes(zeta, spec, acv0)?;
    let start = ((s1 - 1.0) / 2.0, ((s2 - 1.0) / 2.0).max(1e-8));
    let mut n = 1;
    while n < n_max && rel_bound_at(n, zeta, start.0, start.1, nu) > eps {
        n += 1;
    }
    let full = TruncatedAcv2::new(zeta, nu, n_max)?;
    let mut guess = start;
    loop {
        let t = TruncatedAcv2 { g2: full.g2[..=n].to_vec() };
        let (a1, a2) = newton_alphas(&t, acv0, guess)?;
        let r = rel_bound_at(n, zeta, a1, a2, nu);
        if r <= eps || n >= n_max {
            let (n1, n2) = (2.0 * a1 + 1.0, 2.0 * a2 + 1.0);
            return Ok(OptimalSizes {
                n1: ceil_size(n1),
                n2: ceil_size(n2),
                n1_real: n1,
                n2_real: n2,
                zeta,
                nudag: nu,
                acv_target: acv0,
                terms_used: n,
                rel_bound: r,
                method: SizeMethod::Newton,
                residuals: [t.slope_fixed_total(a1, a2), t.value(a1, a2) - d2],
            });
        }
        guess = (a1, a2);
        n += 1;
    }
}

/// One row of an optimal-size curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub zeta: f64,
    pub nudag: f64,
    pub n1_opt: f64,
    pub n2_opt: f64,
    pub terms: usize,
    pub rel_bound: f64,
    pub e_ratio: f64,
}

/// Optimal sizes and ℰ on the grid ζ = i/grid, i = 0..grid, solved in
/// parallel.
pub fn opt_size_curve(spec: &BiasProfile, acv0: f64, sigma_dg: f64, grid: usize, eps: f64, n_max: usize) -> Result<Vec<CurveRow>> {
    if grid == 0 {
        bail!(Domain, "grid must have at least one point");
    }
    (0..grid)
        .into_par_iter()
        .map(|i| {
            let zeta = i as f64 / grid as f64;
            let s = solve_opt_sizes(zeta, spec, acv0, eps, n_max)?;
            Ok(CurveRow {
                zeta,
                nudag: s.nudag,
                n1_opt: s.n1_real,
                n2_opt: s.n2_real,
                terms: s.terms_used,
                rel_bound: s.rel_bound,
                e_ratio: e_from_sizes(zeta, s.n1_real, s.n2_real, acv0, sigma_dg),
            })
        })
        .collect()
}
