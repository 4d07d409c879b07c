//! Upper confidence bounds on the relative bias and dispersion of the gain
//! estimator from a single pair of sample variances.
//!
//! `cargo run --release --example confidence_intervals`

use photon_gain::estimator::VariancePair;
use photon_gain::gain::{ci_acv, ci_arb, g_nu_estimate, AcvEval, GainObservation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let nu = std::f64::consts::PI.exp() / 2.0;
    let obs = GainObservation { pbar: 40.0, vp: VariancePair::from_sizes(22.3, 15.8, 3001, 1501)? };
    println!("gain estimate: {:.5}", g_nu_estimate(&obs, nu, None)?);
    for alpha in [0.1, 0.05, 0.01] {
        let arb = ci_arb(&obs.vp, nu, alpha)?;
        let acv = ci_acv(&obs.vp, nu, alpha, AcvEval::Tolerance(1e-10))?;
        println!(
            "level {:.2}: ARB in ({:.1e}, {:.3e}]   ACV in ({:.4}, {:.4}]",
            arb.level, arb.lower, arb.upper, acv.lower, acv.upper
        );
    }
    Ok(())
}
