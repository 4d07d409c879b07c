//! Stirling numbers, Bernoulli numbers and Nørlund polynomials with exact arithmetic.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{bail, Result};

/// Largest n (and polynomial degree) held in the exact tables.
pub const TABLE_MAX: usize = 24;

struct Tables {
    stirling1: Vec<Vec<i128>>,
    stirling2: Vec<Vec<i128>>,
    /// B_k^{(ℓ)}(0) as a polynomial in ℓ.
    norlund: Vec<RatPoly>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(build_tables)
}

/// Forces construction of the coefficient cache.
pub fn warm_cache() {
    let _ = tables();
}

fn build_tables() -> Tables {
    let n = TABLE_MAX;
    let mut s1 = vec![vec![0i128; n + 1]; n + 1];
    let mut s2 = vec![vec![0i128; n + 1]; n + 1];
    s1[0][0] = 1;
    s2[0][0] = 1;
    for i in 1..=n {
        for k in 1..=i {
            // signed: s(i,k) = s(i-1,k-1) - (i-1) s(i-1,k)
            s1[i][k] = s1[i - 1][k - 1] - (i as i128 - 1) * s1[i - 1][k];
            s2[i][k] = s2[i - 1][k - 1] + k as i128 * s2[i - 1][k];
        }
    }
    Tables { stirling1: s1, stirling2: s2, norlund: build_norlund(n) }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Coefficients of t/(e^t − 1) = Σ f_n t^n, i.e. f_n = B_n/n!.
fn bernoulli_series(n: usize) -> Vec<BigRational> {
    // (e^t − 1)/t = Σ t^j/(j+1)!; invert the series
    let mut g = Vec::with_capacity(n + 1);
    let mut fact = BigInt::one();
    for j in 0..=n {
        fact *= BigInt::from(j as i64 + 1);
        g.push(BigRational::new(BigInt::one(), fact.clone()));
    }
    let mut f: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let mut s = BigRational::zero();
        for j in 1..=m {
            s += &g[j] * &f[m - j];
        }
        f.push(-s);
    }
    f
}

fn build_norlund(n: usize) -> Vec<RatPoly> {
    let f = bernoulli_series(n);
    // L = log f: m f_m = Σ_{j=1}^m j L_j f_{m-j}
    let mut l = vec![BigRational::zero(); n + 1];
    for m in 1..=n {
        let mut s = BigRational::zero();
        for j in 1..m {
            s += BigRational::from_integer(BigInt::from(j as i64)) * &l[j] * &f[m - j];
        }
        l[m] = &f[m] - s / BigRational::from_integer(BigInt::from(m as i64));
    }
    // f^ℓ = exp(ℓL) = Σ e_m(ℓ) t^m with m e_m = ℓ Σ_{j=1}^m j L_j e_{m-j}
    let mut e: Vec<RatPoly> = vec![RatPoly::constant(BigRational::one())];
    for m in 1..=n {
        let mut s = RatPoly::zero();
        for j in 1..=m {
            let c = BigRational::from_integer(BigInt::from(j as i64)) * &l[j];
            s = s.add(&e[m - j].scale(&c));
        }
        let ell = RatPoly(vec![BigRational::zero(), BigRational::one()]);
        e.push(s.mul(&ell).scale(&rat(1, m as i64)));
    }
    // B_m^{(ℓ)}(0) = m! e_m(ℓ)
    let mut fact = BigInt::one();
    let mut out = Vec::with_capacity(n + 1);
    for (m, em) in e.into_iter().enumerate() {
        if m > 0 {
            fact *= BigInt::from(m as i64);
        }
        out.push(em.scale(&BigRational::from_integer(fact.clone())));
    }
    out
}

fn check_range(n: usize, k: usize) -> Result<()> {
    if n > TABLE_MAX || k > TABLE_MAX {
        bail!(Range, "index ({n},{k}) beyond table bound {TABLE_MAX}");
    }
    Ok(())
}

/// Signed Stirling number of the first kind s(n,k): (x)^{(n)} = Σ_k s(n,k) x^k.
pub fn stirling1(n: usize, k: usize) -> Result<i128> {
    check_range(n, k)?;
    Ok(if k > n { 0 } else { tables().stirling1[n][k] })
}

/// Unsigned Stirling number of the first kind |s(n,k)|.
pub fn stirling1_unsigned(n: usize, k: usize) -> Result<i128> {
    Ok(stirling1(n, k)?.abs())
}

/// Stirling number of the second kind.
pub fn stirling2(n: usize, k: usize) -> Result<i128> {
    check_range(n, k)?;
    Ok(if k > n { 0 } else { tables().stirling2[n][k] })
}

/// B_k^{(ℓ)}(0) as an exact polynomial in ℓ.
pub fn norlund_poly(k: usize) -> Result<&'static RatPoly> {
    check_range(k, 0)?;
    Ok(&tables().norlund[k])
}

/// Generalized Nørlund polynomial B_k^{(ℓ)}(x) at real ℓ and x.
pub fn norlund(k: usize, ell: f64, x: f64) -> Result<f64> {
    check_range(k, 0)?;
    let t = tables();
    let mut acc = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        acc += binom * t.norlund[j].eval_f64(ell) * x.powi((k - j) as i32);
        binom *= (k - j) as f64 / (j + 1) as f64;
    }
    Ok(acc)
}

/// Dense polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct RatPoly(pub Vec<BigRational>);

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        RatPoly(vec![c])
    }

    /// a + b·x
    pub fn linear(a: BigRational, b: BigRational) -> Self {
        RatPoly(vec![a, b])
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn add(&self, o: &RatPoly) -> RatPoly {
        let n = self.0.len().max(o.0.len());
        RatPoly((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &RatPoly) -> RatPoly {
        if self.0.is_empty() || o.0.is_empty() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly(out)
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        RatPoly(self.0.iter().map(|a| a * c).collect())
    }

    /// p(a + b·x).
    pub fn compose_linear(&self, a: &BigRational, b: &BigRational) -> RatPoly {
        let inner = RatPoly::linear(a.clone(), b.clone());
        let mut out = RatPoly::zero();
        for c in self.0.iter().rev() {
            out = out.mul(&inner).add(&RatPoly::constant(c.clone()));
        }
        out
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Generalized binomial C(a + b·x, k) as a polynomial in x.
    pub fn binomial_linear(a: i64, b: i64, k: usize) -> RatPoly {
        let mut out = RatPoly::constant(BigRational::one());
        for j in 0..k {
            let f = RatPoly::linear(rat(a - j as i64, j as i64 + 1), rat(b, j as i64 + 1));
            out = out.mul(&f);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::pochhammer;

    #[test]
    fn small_values() {
        assert_eq!(stirling1_unsigned(3, 2).unwrap(), 3);
        assert_eq!(stirling1(3, 2).unwrap(), -3);
        assert_eq!(stirling2(3, 2).unwrap(), 3);
        assert_eq!(stirling1(0, 0).unwrap(), 1);
        assert!(stirling1(25, 1).is_err());
    }

    #[test]
    fn rising_factorial_expansion() {
        for &s in &[0.5f64, 1.0, 2.0] {
            for n in 0..=12usize {
                let mut acc = 0.0;
                for k in 0..=n {
                    let sign = if (n - k) % 2 == 0 { 1.0 } else { -1.0 };
                    acc += sign * stirling1(n, k).unwrap() as f64 * s.powi(k as i32);
                }
                let exact = pochhammer(s, n as f64).unwrap();
                assert!((acc - exact).abs() <= 1e-10 * exact.abs().max(1.0), "s={s} n={n}");
            }
        }
    }

    #[test]
    fn power_from_second_kind() {
        for &s in &[0.5f64, 1.5, 3.0] {
            for n in 0..=10usize {
                let mut acc = 0.0;
                for k in 0..=n {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    acc += sign * stirling2(n, k).unwrap() as f64 * pochhammer(-s, k as f64).unwrap();
                }
                let exact = s.powi(n as i32);
                assert!((acc - exact).abs() <= 1e-9 * exact.max(1.0), "s={s} n={n}");
            }
        }
    }

    #[test]
    fn norlund_basics() {
        for &ell in &[0.5, 1.0, 3.0] {
            assert_eq!(norlund(0, ell, 0.7).unwrap(), 1.0);
        }
        assert_eq!(norlund(1, 1.0, 0.0).unwrap(), -0.5);
        // ordinary Bernoulli numbers at ℓ = 1
        assert!((norlund(2, 1.0, 0.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!((norlund(4, 1.0, 0.0).unwrap() + 1.0 / 30.0).abs() < 1e-15);
        // B_1^{(ℓ)}(x) = x − ℓ/2, B_2^{(ℓ)}(x) = x² − ℓx + ℓ(3ℓ−1)/12
        assert!((norlund(1, 2.5, 0.3).unwrap() - (0.3 - 1.25)).abs() < 1e-15);
        let (l, x) = (2.5, 0.3);
        let b2 = x * x - l * x + l * (3.0 * l - 1.0) / 12.0;
        assert!((norlund(2, l, x).unwrap() - b2).abs() < 1e-14);
    }

    #[test]
    fn norlund_negative_order_is_polynomial_inverse() {
        // ℓ = -1: (e^t − 1)/t, so B_k^{(-1)}(0) = 1/(k+1)
        for k in 0..10 {
            let v = norlund(k, -1.0, 0.0).unwrap();
            assert!((v - 1.0 / (k as f64 + 1.0)).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn poly_helpers() {
        // C(x+1, 2) = (x+1)x/2
        let p = RatPoly::binomial_linear(1, 1, 2);
        assert_eq!(p.eval_f64(3.0), 6.0);
        let q = RatPoly(vec![rat(1, 1), rat(2, 1)]).compose_linear(&rat(2, 1), &rat(-1, 1));
        assert_eq!(q.eval_f64(1.0), 3.0);
    }
}
