//! Optimal sample sizes for 𝒯ᵥ† across the ζ grid and at one point.
//!
//! `cargo run --release --example optimal_sizes -- [arb0] [acv0] [b] [sigma_dg]`

use photon_gain::optsize::{
    c_t_constant, ebar, opt_size_curve, solve_opt_sizes, BiasProfile, Which, DEFAULT_EPS, DEFAULT_N_MAX,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let get = |i: usize, d: f64| args.get(i).copied().unwrap_or(d);
    let (arb0, acv0, b, sdg) = (get(0, 0.5), get(1, 0.05), get(2, 0.0), get(3, 1.0));
    let spec = BiasProfile::new(arb0, b)?;

    let rows = opt_size_curve(&spec, acv0, sdg, 200, DEFAULT_EPS, DEFAULT_N_MAX)?;
    println!("zeta,nudag,n1_opt,n2_opt,terms,rel_bound,e_ratio");
    for r in rows.iter().step_by(10) {
        println!("{:.3},{:.4},{:.2},{:.2},{},{:.2e},{:.5}", r.zeta, r.nudag, r.n1_opt, r.n2_opt, r.terms, r.rel_bound, r.e_ratio);
    }
    let capped = rows.iter().filter(|r| r.terms == DEFAULT_N_MAX).count();
    println!("points at the order cap: {capped}");

    for z in [0.9, 0.99, 0.999] {
        let s = solve_opt_sizes(z, &spec, acv0, DEFAULT_EPS, DEFAULT_N_MAX)?;
        println!("ζ = {z}: (n₁, n₂) = ({}, {}), n·(1−ζ)² = {:.2}", s.n1, s.n2, s.n1_real * (1.0 - z) * (1.0 - z));
    }
    println!("C_T = {:.4}", c_t_constant(&spec, acv0)?);
    println!("Ebar_T = {:.5}, Ebar_G = {:.5}", ebar(&spec, acv0, sdg, Which::T)?, ebar(&spec, acv0, sdg, Which::G)?);
    Ok(())
}
