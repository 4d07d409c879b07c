//! Simulated pixel-level gain experiment: a sensor model, streaming master
//! frames, grouped ζ estimation, the adaptive collection loop and g-maps.

pub mod collect;
pub mod gmap;
pub mod welford;

pub use collect::{collect, group_zeta, group_zeta_variance, CollectResult, CollectRules, GroupTrace};
pub use gmap::{gmap, gmap_traditional, map_stats, MapStats};
pub use welford::MasterFrames;

use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::rng::{draw, normal, stream};

/// Noise parameters of one sensor column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnParams {
    /// Dark mean, DN.
    pub mu_d: f64,
    /// Dark variance, DN².
    pub sigma_d2: f64,
    /// Mean photoelectrons per pixel under illumination.
    pub mu_e: f64,
    /// Conversion gain, e⁻/DN.
    pub g: f64,
}

impl ColumnParams {
    pub fn mu_pd(&self) -> f64 {
        self.mu_d + self.mu_e / self.g
    }

    pub fn sigma_pd2(&self) -> f64 {
        self.sigma_d2 + self.mu_e / (self.g * self.g)
    }

    pub fn zeta(&self) -> f64 {
        self.sigma_d2 / self.sigma_pd2()
    }
}

/// Simulated sensor. `columns` overrides `base` per column when given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSensorConfig {
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
    pub base: ColumnParams,
    #[serde(default)]
    pub columns: Option<Vec<ColumnParams>>,
    /// Round every pixel to an integer DN.
    #[serde(default)]
    pub quantize: bool,
}

impl SimSensorConfig {
    pub fn uniform(rows: usize, cols: usize, seed: u64, base: ColumnParams) -> Self {
        SimSensorConfig { rows, cols, seed, base, columns: None, quantize: false }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            bail!(Shape, "sensor must have at least one pixel");
        }
        if let Some(c) = &self.columns {
            if c.len() != self.cols {
                bail!(Shape, "{} column records for {} columns", c.len(), self.cols);
            }
        }
        for j in 0..self.cols {
            let c = self.column(j);
            if !(c.sigma_d2 >= 0.0 && c.mu_e >= 0.0 && c.g > 0.0) {
                bail!(Domain, "column {j}: need σ_d² ≥ 0, μ_e ≥ 0, g > 0");
            }
            if !(c.sigma_pd2() > 0.0) {
                bail!(Domain, "column {j}: illuminated variance must be positive");
            }
        }
        Ok(())
    }

    pub fn column(&self, j: usize) -> ColumnParams {
        match &self.columns {
            Some(c) => c[j],
            None => self.base,
        }
    }

    /// Pixel → group map with one group per column.
    pub fn column_groups(&self) -> Vec<usize> {
        (0..self.rows * self.cols).map(|p| p % self.cols).collect()
    }
}

/// Dark (Y) or illuminated (X) exposure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrameMode {
    Dark,
    Illuminated,
}

/// Row-major 2-D array of pixel values.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Frame {
    pub fn filled(rows: usize, cols: usize, v: f64) -> Self {
        Frame { rows, cols, data: vec![v; rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }
}

/// Frame number `index` of the given mode. Every frame has its own random
/// stream, so frames can be produced in any order.
pub fn simulate_frame(cfg: &SimSensorConfig, mode: FrameMode, index: u64) -> Result<Frame> {
    cfg.validate()?;
    let tag = match mode {
        FrameMode::Dark => 0,
        FrameMode::Illuminated => 1,
    };
    let mut rng = stream(cfg.seed, 2 * index + tag);
    let dists = (0..cfg.cols)
        .map(|j| {
            let c = cfg.column(j);
            match mode {
                FrameMode::Dark => normal(c.mu_d, c.sigma_d2.sqrt()),
                FrameMode::Illuminated => normal(c.mu_pd(), c.sigma_pd2().sqrt()),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut data = Vec::with_capacity(cfg.rows * cfg.cols);
    for _ in 0..cfg.rows {
        for d in &dists {
            let v = draw(d, &mut rng);
            data.push(if cfg.quantize { v.round() } else { v });
        }
    }
    Ok(Frame { rows: cfg.rows, cols: cfg.cols, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SimSensorConfig {
        let base = ColumnParams { mu_d: 100.0, sigma_d2: 40.0, mu_e: 297.0, g: 2.0 };
        let mut c = SimSensorConfig::uniform(4, 3, 7, base);
        c.columns = Some(vec![base, ColumnParams { mu_d: 120.0, ..base }, ColumnParams { g: 3.0, ..base }]);
        c
    }

    #[test]
    fn zero_variance_gives_constant_frame() {
        let base = ColumnParams { mu_d: 12.5, sigma_d2: 0.0, mu_e: 10.0, g: 2.0 };
        let f = simulate_frame(&SimSensorConfig::uniform(3, 5, 1, base), FrameMode::Dark, 0).unwrap();
        assert!(f.data.iter().all(|&v| v == 12.5));
    }

    #[test]
    fn frames_are_deterministic() {
        let c = cfg();
        let a = simulate_frame(&c, FrameMode::Illuminated, 3).unwrap();
        assert_eq!(a, simulate_frame(&c, FrameMode::Illuminated, 3).unwrap());
        assert_ne!(a, simulate_frame(&c, FrameMode::Illuminated, 4).unwrap());
        assert_ne!(a, simulate_frame(&c, FrameMode::Dark, 3).unwrap());
        let other = SimSensorConfig { seed: 8, ..c.clone() };
        assert_ne!(a, simulate_frame(&other, FrameMode::Illuminated, 3).unwrap());
    }

    #[test]
    fn column_statistics_match_population() {
        let c = cfg();
        let n = 10_000;
        for mode in [FrameMode::Dark, FrameMode::Illuminated] {
            let mut mf = MasterFrames::new(c.rows, c.cols);
            for k in 0..n {
                mf.update(&simulate_frame(&c, mode, k).unwrap()).unwrap();
            }
            let var = mf.variance();
            for j in 0..c.cols {
                let p = c.column(j);
                let (mu, s2) = match mode {
                    FrameMode::Dark => (p.mu_d, p.sigma_d2),
                    FrameMode::Illuminated => (p.mu_pd(), p.sigma_pd2()),
                };
                for i in 0..c.rows {
                    let m = mf.mean.get(i, j);
                    let v = var.get(i, j);
                    assert!((m - mu).abs() < 4.0 * (s2 / n as f64).sqrt(), "mean {m} vs {mu}");
                    assert!((v - s2).abs() < 4.0 * s2 * (2.0 / (n as f64 - 1.0)).sqrt(), "var {v} vs {s2}");
                }
            }
        }
    }

    #[test]
    fn quantization_rounds() {
        let mut c = cfg();
        c.quantize = true;
        let f = simulate_frame(&c, FrameMode::Illuminated, 0).unwrap();
        assert!(f.data.iter().all(|v| v.fract() == 0.0));
    }

    #[test]
    fn config_validation() {
        let mut c = cfg();
        c.columns = Some(vec![c.base]);
        assert!(c.validate().is_err());
        assert_eq!(cfg().column_groups()[..4], [0, 1, 2, 0]);
    }
}
