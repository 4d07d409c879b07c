//! Monte Carlo check of the gain estimator and its confidence intervals.
//!
//! `cargo run --release --example gain_demo -- [trials]`

use photon_gain::gain::{run_demo, DemoConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trials = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(100_000);
    let report = run_demo(&DemoConfig { trials, ..Default::default() })?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
