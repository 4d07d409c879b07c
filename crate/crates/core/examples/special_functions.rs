//! Evaluates the special functions at a few points, next to closed forms
//! where one exists.
//!
//! `cargo run --release --example special_functions`

use photon_gain::specfun::{
    dawson, digamma, expint_ei, f_quantile, gamma, hyp1f1, hyp2f1, lower_gamma, norlund, pochhammer, reg_inc_beta, stirling1,
    stirling2,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z: f64 = 0.5;
    println!("2F1(1,1;2;{z})      = {:<22} -ln(1-z)/z = {}", hyp2f1(1.0, 1.0, 2.0, z)?, -(1.0 - z).ln() / z);
    println!("2F1(1,1;2;-50)     = {:<22} ln(51)/50  = {}", hyp2f1(1.0, 1.0, 2.0, -50.0)?, 51f64.ln() / 50.0);
    println!("1F1(1;2;1)         = {:<22} e - 1      = {}", hyp1f1(1.0, 2.0, 1.0)?, 1f64.exp() - 1.0);
    println!("Gamma(0.5)^2       = {:<22} pi         = {}", gamma(0.5)?.powi(2), std::f64::consts::PI);
    println!("(0.5)_3            = {:<22} 15/8", pochhammer(0.5, 3.0)?);
    println!("psi(1)             = {:<22} -gamma_E", digamma(1.0)?);
    println!("Ei(1)              = {}", expint_ei(1.0)?);
    println!("gamma(2, 1)        = {:<22} 1 - 2/e    = {}", lower_gamma(2.0, 1.0)?, 1.0 - 2.0 / 1f64.exp());
    println!("I_0.3(2, 3)        = {}", reg_inc_beta(0.3, 2.0, 3.0)?);
    println!("F upper 5% (10,20) = {}", f_quantile(0.05, 10.0, 20.0)?);
    println!("Dawson(1)          = {}", dawson(1.0));
    println!("s(6,3), S(6,3)     = {}, {}", stirling1(6, 3)?, stirling2(6, 3)?);
    println!("B_2^(1)(x=0.5)     = {:<22} Bernoulli B_2(1/2) = -1/12", norlund(2, 1.0, 0.5)?);
    Ok(())
}
