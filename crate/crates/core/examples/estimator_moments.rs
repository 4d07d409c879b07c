//! Moments of the reciprocal-difference estimator, its asymptotic form and the
//! truncation bounds that decide how many series rows are needed.
//!
//! `cargo run --release --example estimator_moments`

use photon_gain::estimator::{
    k_star, moments_t_nu, shape, t_nu_asym, t_nu_auto, var_u, var_v, PopulationParams, VariancePair,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n1, n2) = (3001, 1501);
    let (a1, a2) = (shape(n1), shape(n2));
    let nu = std::f64::consts::PI.exp() / 2.0;

    println!("zeta    mean*(k1-k2)   acv          terms  bound");
    for zeta in [0.1, 0.5, 8.0 / 11.0, 0.9] {
        let m = moments_t_nu(&PopulationParams::new(1.0, zeta)?, a1, a2, nu, 1e-12)?;
        println!("{zeta:<7.4} {:<14.10} {:<12.6e} {:<6} {:.2e}", m.mean * (1.0 - zeta), m.acv, m.terms_used, m.rel_error_bound);
    }

    let vp = VariancePair::from_sizes(22.0, 16.0, n1, n2)?;
    println!("\nT at (X^, Y^) = (22, 16): exact {}", t_nu_auto(&vp, nu)?);
    for k in 0..=3 {
        println!("  asymptotic order {k}: {}", t_nu_asym(&vp, nu, k)?);
    }

    let (k, r) = k_star(5e-4, 0, 1.0, 0.6, 0.85, a1, a2, nu, 50)?;
    println!("\nrows for a 5e-4 relative bound on zeta in [0.6, 0.85]: {k} (bound {r:.3e})");

    println!("\nlimiting estimators: Var U (k1 = 1, k2 = 0.3) = {:.4e}", var_u(1.0, 0.3, a2)?);
    println!("                     Var V (k1 = 0.3, k2 = 1) = {:.4e}", var_v(0.3, 1.0, a1)?);
    Ok(())
}
