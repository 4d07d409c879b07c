//! Grid checks shared by the identity, oracle and acceptance tests. Each
//! returns the first violation as an error message.

#![allow(dead_code)]

use photon_gain::estimator::{moments_t_nu, t_nu, t_nu_direct, PopulationParams, VariancePair, REFLECT_RATIO};
use photon_gain::fracsum::{g_nw, gtilde_limits, gtilde_nw, gtilde_zeros_predicate};
use photon_gain::gain::{acv_g_nu, cv2_pbar, t_moments, SensorParams};
use photon_gain::specfun::hyp2f1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::{digamma, ln_gamma};

pub type Check = Result<(), String>;

/// |a − b| ≤ rel·max(|a|, |b|, scale) + abs.
pub fn close_abs(a: f64, b: f64, rel: f64, scale: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * scale.max(a.abs()).max(b.abs()) + abs
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    close_abs(a, b, rel, 0.0, 0.0)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Roundoff floor for values that vanish exactly, on the O(n!) scale of g̃.
pub const ZERO_FLOOR: f64 = 1e-13;

pub fn hyp2f1_transformations() -> Check {
    for a in [0.5, 1.0, 2.5] {
        for b in [0.5, 1.0, 2.5] {
            for c in [2.0, 4.0] {
                for z in [-2.0, -0.5, 0.3, 0.8] {
                    let f = hyp2f1(a, b, c, z).map_err(|e| e.to_string())?;
                    let w = z / (z - 1.0);
                    let forms = [
                        ("pfaff a", (1.0 - z).powf(-a) * hyp2f1(a, c - b, c, w).unwrap()),
                        ("pfaff b", (1.0 - z).powf(-b) * hyp2f1(c - a, b, c, w).unwrap()),
                        ("euler", (1.0 - z).powf(c - a - b) * hyp2f1(c - a, c - b, c, z).unwrap()),
                    ];
                    for (name, g) in forms {
                        ensure(close(f, g, 1e-10), || format!("{name} at ({a},{b},{c},{z}): {f} vs {g}"))?;
                    }
                }
            }
        }
    }
    Ok(())
}

pub const Z_GRID: [f64; 3] = [0.2, 0.7, 1.3];
pub const NU_GRID: [f64; 3] = [-2.5, 1.5, 3.0];

pub fn g_recurrence() -> Check {
    for n in 0..4usize {
        for w in 0..=n {
            for z in Z_GRID {
                for nu in NU_GRID {
                    for (name, f) in [("g", g_nw as fn(usize, usize, f64, f64) -> _), ("g~", |n, w, z, nu| gtilde_nw(n, w, z, nu).map(|v| v.0))] {
                        let lhs = f(n + 1, w + 1, z, nu).unwrap();
                        let (a, b) = (f(n + 1, w, z, nu).unwrap(), (n + 1) as f64 * f(n, w, z, nu).unwrap());
                        let scale = a.abs().max(b.abs());
                        ensure(close_abs(lhs, a + b, 1e-10, scale, ZERO_FLOOR), || format!("{name} ({n},{w},{z},{nu}): {lhs} vs {}", a + b))?;
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn gtilde_reflection() -> Check {
    for n in 0..=4usize {
        for w in 0..=n {
            for z in Z_GRID {
                for nu in NU_GRID {
                    let lhs = gtilde_nw(n, w, z, nu).unwrap().0;
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    let rhs = sign * gtilde_nw(n, n - w, 1.0 / z, -nu).unwrap().0;
                    ensure(close_abs(lhs, rhs, 1e-10, 0.0, ZERO_FLOOR), || format!("({n},{w},{z},{nu}): {lhs} vs {rhs}"))?;
                }
            }
        }
    }
    Ok(())
}

pub fn gtilde_boundary_values() -> Check {
    for n in 0..=4usize {
        for w in 0..=n {
            for nu in NU_GRID {
                let (zero, inf) = gtilde_limits(n, w, nu).unwrap();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let mirrored = sign * gtilde_limits(n, n - w, -nu).unwrap().0;
                ensure(inf == mirrored, || format!("limits ({n},{w},{nu}): {inf} vs mirrored {mirrored}"))?;
                let scale = factorial(n);
                let near = gtilde_nw(n, w, 1e-12, nu).unwrap().0;
                ensure(close_abs(near, zero, 1e-10, scale, 0.0), || format!("z→0 ({n},{w},{nu}): {near} vs {zero}"))?;
                // The approach at infinity is O(n!/z); 1e7 sits inside the evaluation cap.
                let far = gtilde_nw(n, w, 1e7, nu).unwrap().0;
                ensure(close_abs(far, inf, 1e-6, scale, 0.0), || format!("z→∞ ({n},{w},{nu}): {far} vs {inf}"))?;
            }
        }
    }
    Ok(())
}

pub fn gtilde_zero_set() -> Check {
    for n in 0..=4usize {
        for w in 0..=n {
            for nu in [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0, 5.0] {
                for z in [0.0, 0.3, 0.8, 1.5, 4.0] {
                    let v = gtilde_nw(n, w, z, nu).unwrap().0;
                    let pred = gtilde_zeros_predicate(n, w, z, nu);
                    ensure((v.abs() < 1e-9) == pred, || format!("({n},{w},{z},{nu}): value {v}, predicate {pred}"))?;
                }
            }
        }
    }
    Ok(())
}

/// Reflection with both sides on the direct form, for Y₂/Y₁ inside the band
/// where neither is routed through the exchange.
pub fn t_reflection_direct(y1: f64, y2: f64, shapes: (f64, f64), nu: f64) -> Check {
    let vp = VariancePair::new(y1, y2, shapes.0, shapes.1).map_err(|e| e.to_string())?;
    let lhs = t_nu_direct(&vp, nu).map_err(|e| e.to_string())?;
    let rhs = -t_nu_direct(&vp.swapped(), -nu).map_err(|e| e.to_string())?;
    ensure(close(lhs, rhs, 1e-10), || format!("({y1},{y2},{shapes:?},{nu}): {lhs} vs {rhs}"))
}

pub fn t_reflection(y1: f64, y2: f64, shapes: (f64, f64), nu: f64) -> Check {
    let vp = VariancePair::new(y1, y2, shapes.0, shapes.1).map_err(|e| e.to_string())?;
    let lhs = t_nu(&vp, nu).map_err(|e| e.to_string())?;
    let rhs = -t_nu(&vp.swapped(), -nu).map_err(|e| e.to_string())?;
    ensure(close(lhs, rhs, 1e-10), || format!("({y1},{y2},{shapes:?},{nu}): {lhs} vs {rhs}"))
}

pub const T_SHAPES: [(f64, f64); 2] = [(20.0, 15.0), (7.0, 5.0)];
pub const T_NUS: [f64; 6] = [0.7, -0.7, 1.7, -1.7, 3.0, -3.0];

/// Seeded sweep of the reflection identity over the stated grid.
pub fn t_reflection_sweep(samples: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let band = REFLECT_RATIO.ln();
    for _ in 0..samples {
        let shapes = T_SHAPES[rng.random_range(0..T_SHAPES.len())];
        let nu = T_NUS[rng.random_range(0..T_NUS.len())];
        let y1 = rng.random_range(0.05..20.0);
        t_reflection_direct(y1, y1 * rng.random_range(-band..band).exp(), shapes, nu)?;
        t_reflection(y1, rng.random_range(0.05..20.0), shapes, nu)?;
    }
    Ok(())
}

pub fn moment_reflection() -> Check {
    for (a1, a2) in T_SHAPES {
        for nu in [0.7, 1.7, -1.7] {
            let pp = PopulationParams::new(1.0, 0.45).unwrap();
            let m = moments_t_nu(&pp, a1, a2, nu, 1e-14).map_err(|e| e.to_string())?;
            let r = moments_t_nu(&pp.swapped(), a2, a1, -nu, 1e-14).map_err(|e| e.to_string())?;
            ensure(close(m.mean, -r.mean, 1e-10), || format!("mean ({a1},{a2},{nu}): {} vs {}", m.mean, -r.mean))?;
            ensure(close(m.second_moment, r.second_moment, 1e-10), || {
                format!("second ({a1},{a2},{nu}): {} vs {}", m.second_moment, r.second_moment)
            })?;
        }
    }
    Ok(())
}

pub fn cv2_decomposition(sp: &SensorParams, nu: f64) -> Check {
    let cv2t = t_moments(sp, nu, 1e-13).map_err(|e| e.to_string())?.acv.powi(2);
    let cv2p = cv2_pbar(sp).map_err(|e| e.to_string())?;
    let acv2g = acv_g_nu(sp, nu, 1e-13).map_err(|e| e.to_string())?.powi(2);
    let rhs = cv2t + cv2t * cv2p + cv2p;
    ensure(close(acv2g, rhs, 1e-10), || format!("{sp:?} ν={nu}: {acv2g} vs {rhs}"))
}

pub fn cv2_decomposition_sweep(samples: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let sp = SensorParams::new(
            10.0,
            rng.random_range(1.0..50.0),
            rng.random_range(1.0..2000.0),
            rng.random_range(0.5..8.0),
            rng.random_range(200..5000),
            rng.random_range(200..5000),
        )
        .unwrap();
        cv2_decomposition(&sp, rng.random_range(2.5..20.0))?;
    }
    Ok(())
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on Pₙ.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    (p0, p1) = (p1, ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf);
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Nodes and weights for u = ln Y, Y = κ·Gamma(α, 1)/α, with the density folded in.
fn log_gamma_rule(kappa: f64, alpha: f64, gl: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let center = kappa.ln() + digamma(alpha) - alpha.ln();
    let half = 14.0 / alpha.sqrt();
    let norm = alpha * alpha.ln() - ln_gamma(alpha) - alpha * kappa.ln();
    gl.iter()
        .map(|&(x, w)| {
            let u = center + half * x;
            let ln_f = norm + alpha * u - alpha * u.exp() / kappa;
            (u.exp(), w * half * ln_f.exp())
        })
        .collect()
}

pub const QUADRATURE_POINTS: [(f64, f64, f64, f64); 3] = [(20.0, 15.0, 0.45, 1.7), (25.0, 30.0, 0.7, 3.0), (40.0, 20.0, 0.2, -2.0)];

/// E𝒯ᵥ² by the series and by 128×128 Gauss–Legendre over both gamma
/// densities; returns the relative difference.
pub fn second_moment_quadrature(a1: f64, a2: f64, zeta: f64, nu: f64) -> Result<f64, String> {
    let gl = gauss_legendre(128);
    let (k1, k2) = (1.0, zeta);
    let r1 = log_gamma_rule(k1, a1, &gl);
    let r2 = log_gamma_rule(k2, a2, &gl);
    let (mut mass, mut m2) = (0.0, 0.0);
    for &(y1, w1) in &r1 {
        for &(y2, w2) in &r2 {
            let t = t_nu(&VariancePair::new(y1, y2, a1, a2).unwrap(), nu).map_err(|e| e.to_string())?;
            m2 += w1 * w2 * t * t;
            mass += w1 * w2;
        }
    }
    ensure((mass - 1.0).abs() < 1e-12, || format!("density mass {mass}"))?;
    let series = moments_t_nu(&PopulationParams::new(k1, k2).unwrap(), a1, a2, nu, 1e-12).map_err(|e| e.to_string())?.second_moment;
    Ok((series - m2).abs() / m2)
}
