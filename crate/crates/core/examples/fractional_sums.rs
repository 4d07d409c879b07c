//! Sums with a fractional number of terms and the normalized G̃ function.
//!
//! `cargo run --release --example fractional_sums`

use photon_gain::fracsum::{c_nw, eh_nw, g_nw, gtilde_nw, inc_geom, inc_lerch};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Σ_{k=0}^{ν−1} z^k for ν = 2.5 terms, and its integer check at ν = 3.
    println!("inc_geom(0.4, 2.5) = {}", inc_geom(0.4, 2.5)?);
    println!("inc_geom(0.4, 3)   = {}  (1 + 0.4 + 0.16 = 1.56)", inc_geom(0.4, 3.0)?);
    println!("inc_lerch(0.4, 2, 0, 3) = {}  (0 + 0.4 + 4*0.16 = 1.04)", inc_lerch(0.4, 2, 0.0, 3.0)?);

    let nu = std::f64::consts::PI.exp() / 2.0;
    println!("\n n  w      G_nw(0.6)          C_nw         Eh_nw(0.6)        G~_nw(0.6)");
    for (n, w) in [(1, 0), (2, 1), (3, 1), (4, 2)] {
        let g = g_nw(n, w, 0.6, nu)?;
        let (gt, form) = gtilde_nw(n, w, 0.6, nu)?;
        println!("{n:2} {w:2}  {g:>18.10e}  {:>12.6}  {:>16.10}  {gt:>16.10}  ({form:?})", c_nw(n, w, nu)?, eh_nw(n, w, 0.6, nu)?);
    }
    Ok(())
}
