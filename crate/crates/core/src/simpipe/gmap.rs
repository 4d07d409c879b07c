//! Pixel-level gain maps and their summary statistics.

use serde::{Deserialize, Serialize};

use super::{Frame, MasterFrames};
use crate::error::{bail, Result};
use crate::estimator::asym::AsymCoeffs;

/// A g-map with the number of pixels whose ν† had to be clamped.
#[derive(Debug, Clone)]
pub struct GainMap {
    pub map: Frame,
    pub clamped: usize,
}

fn check_pair(dark: &MasterFrames, light: &MasterFrames) -> Result<()> {
    if dark.mean.rows != light.mean.rows || dark.mean.cols != light.mean.cols {
        bail!(Shape, "dark and illuminated masters differ in shape");
    }
    if dark.count < 2 || light.count < 2 {
        bail!(Domain, "masters need at least two frames each");
    }
    Ok(())
}

/// (𝒢ᵥ†,K)ᵢⱼ = (X̄ᵢⱼ − Ȳᵢⱼ)·𝒯_{V,K}(X̂ᵢⱼ, Ŷᵢⱼ) with α = (n−1)/2 from the stack
/// sizes. Each pixel takes the ν† of its group, clamped to [b + 10⁻³, α₁/2 − 1].
pub fn gmap(dark: &MasterFrames, light: &MasterFrames, v_groups: &[f64], groups: &[usize], b: f64, order: usize) -> Result<GainMap> {
    check_pair(dark, light)?;
    let pixels = dark.mean.data.len();
    if groups.len() != pixels {
        bail!(Shape, "group map has {} entries for {pixels} pixels", groups.len());
    }
    let a1 = (light.count as f64 - 1.0) / 2.0;
    let a2 = (dark.count as f64 - 1.0) / 2.0;
    let coeffs = AsymCoeffs::new(a1, a2, order)?;
    let (lo, hi) = (b + 1e-3, a1 / 2.0 - 1.0);
    if !(lo <= hi) {
        bail!(Domain, "no admissible ν† for α₁ = {a1}");
    }
    let (xv, yv) = (light.variance(), dark.variance());
    let mut clamped = 0;
    let mut data = Vec::with_capacity(pixels);
    for p in 0..pixels {
        let v = *v_groups.get(groups[p]).ok_or_else(|| crate::Error::Shape(format!("no ν† for group {}", groups[p])))?;
        let vc = v.clamp(lo, hi);
        if vc != v {
            clamped += 1;
        }
        let pbar = light.mean.data[p] - dark.mean.data[p];
        data.push(pbar * coeffs.eval(xv.data[p], yv.data[p], vc)?);
    }
    Ok(GainMap { map: Frame { rows: dark.mean.rows, cols: dark.mean.cols, data }, clamped })
}

/// Gᵢⱼ = (X̄ᵢⱼ − Ȳᵢⱼ)/(X̂ᵢⱼ − Ŷᵢⱼ). Pixels with X̂ − Ŷ ≤ 0 are NaN and counted.
pub fn gmap_traditional(dark: &MasterFrames, light: &MasterFrames) -> Result<(Frame, usize)> {
    check_pair(dark, light)?;
    let (xv, yv) = (light.variance(), dark.variance());
    let mut flagged = 0;
    let data = (0..dark.mean.data.len())
        .map(|p| {
            let d = xv.data[p] - yv.data[p];
            if d <= 0.0 {
                flagged += 1;
                f64::NAN
            } else {
                (light.mean.data[p] - dark.mean.data[p]) / d
            }
        })
        .collect();
    Ok((Frame { rows: dark.mean.rows, cols: dark.mean.cols, data }, flagged))
}

/// Sample statistics of the finite entries of a map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapStats {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub acv: f64,
    /// Third central moment over the cubed standard deviation (both 1/n).
    pub skewness: f64,
}

pub fn map_stats(map: &Frame) -> Result<MapStats> {
    let v: Vec<f64> = map.data.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        bail!(Domain, "map has no finite entries");
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let m2 = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = v.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    let variance = if v.len() > 1 { m2 * n / (n - 1.0) } else { 0.0 };
    let skewness = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
    Ok(MapStats { count: v.len(), mean, variance, acv: variance.sqrt() / mean.abs(), skewness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{draw, normal, stream};

    #[test]
    fn constant_map() {
        let s = map_stats(&Frame::filled(3, 3, 2.5)).unwrap();
        assert_eq!((s.mean, s.variance, s.skewness), (2.5, 0.0, 0.0));
    }

    #[test]
    fn symmetric_map_has_no_skew() {
        let f = Frame { rows: 1, cols: 5, data: vec![-2.0, -1.0, 0.0, 1.0, 2.0] };
        let s = map_stats(&f).unwrap();
        assert_eq!(s.skewness, 0.0);
        assert_eq!(s.variance, 2.5);
    }

    #[test]
    fn normal_map_skew_is_within_its_standard_error() {
        let d = normal(3.0, 0.5).unwrap();
        let mut rng = stream(4, 0);
        let n = 40_000;
        let f = Frame { rows: 1, cols: n, data: (0..n).map(|_| draw(&d, &mut rng)).collect() };
        let s = map_stats(&f).unwrap();
        assert!(s.skewness.abs() < 4.0 * (6.0 / n as f64).sqrt());
        assert!(map_stats(&Frame::filled(1, 1, f64::NAN)).is_err());
    }

    #[test]
    fn traditional_map_flags_nonpositive_differences() {
        let mut dark = MasterFrames::new(1, 2);
        let mut light = MasterFrames::new(1, 2);
        for (y, x) in [([0.0, 0.0], [10.0, 1.0]), ([2.0, 2.0], [14.0, 1.5])] {
            dark.update(&Frame { rows: 1, cols: 2, data: y.to_vec() }).unwrap();
            light.update(&Frame { rows: 1, cols: 2, data: x.to_vec() }).unwrap();
        }
        let (g, flagged) = gmap_traditional(&dark, &light).unwrap();
        assert_eq!(flagged, 1);
        assert!(g.data[1].is_nan());
        assert_eq!(g.data[0], (12.0 - 1.0) / (8.0 - 2.0));
    }
}
