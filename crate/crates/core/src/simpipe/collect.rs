//! Grouped ζ estimation and the adaptive data-collection loop.
//!
//! The capture rules follow the intended reading: a stack keeps growing while
//! some group's estimated optimal size exceeds the current size, and the run
//! stops once the current sizes cover the estimates for the halting fraction
//! of groups.

use serde::{Deserialize, Serialize};

use super::{simulate_frame, Frame, FrameMode, MasterFrames, SimSensorConfig};
use crate::error::{bail, Result};
use crate::optsize::{approx_opt_sizes, ceil_size, nudag, solve_opt_sizes, BiasProfile, SizeMethod, DEFAULT_EPS, DEFAULT_N_MAX};

/// Z = (mn₁−3)/(mn₁−1)·ΣŶ/ΣX̂ over a group of m pixels.
pub fn group_zeta(sum_yhat: f64, sum_xhat: f64, m: usize, n1: u64) -> Result<f64> {
    if m == 0 || n1 < 2 {
        bail!(Domain, "group ζ needs m ≥ 1 and n₁ ≥ 2");
    }
    if !(sum_xhat > 0.0) {
        bail!(Domain, "ΣX̂ must be positive, got {sum_xhat}");
    }
    let mn = m as f64 * n1 as f64;
    Ok((mn - 3.0) / (mn - 1.0) * sum_yhat / sum_xhat)
}

/// Var Z, with each stack treated as one of m(nᵢ−1)+1 pooled samples.
pub fn group_zeta_variance(zeta: f64, m: usize, n1: u64, n2: u64) -> Result<f64> {
    let e1 = m as f64 * (n1 as f64 - 1.0) + 1.0;
    let e2 = m as f64 * (n2 as f64 - 1.0) + 1.0;
    if !(e1 > 5.0 && e2 > 1.0) {
        bail!(Domain, "Var Z needs more than 5 pooled illuminated samples");
    }
    Ok(((e1 - 3.0) * (e2 + 1.0) / ((e1 - 5.0) * (e2 - 1.0)) - 1.0) * zeta * zeta)
}

/// Half the spatial variance of a − b, an estimate of the temporal variance
/// on a uniform sensor.
pub fn difference_variance(a: &Frame, b: &Frame) -> Result<f64> {
    if a.data.len() != b.data.len() || a.data.len() < 2 {
        bail!(Shape, "difference needs two equal frames of at least two pixels");
    }
    let d: Vec<f64> = a.data.iter().zip(&b.data).map(|(x, y)| x - y).collect();
    let n = d.len() as f64;
    let m = d.iter().sum::<f64>() / n;
    Ok(d.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (2.0 * (n - 1.0)))
}

/// Knobs of the collection loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CollectRules {
    /// Fraction of groups whose estimates must be covered to stop.
    pub halt_fraction: f64,
    /// Cap on n₁ + n₂.
    pub max_frames: u64,
    /// Keep the per-iteration group estimates.
    pub record_trace: bool,
    /// Refine the final group sizes with the Newton solver.
    pub newton_final: bool,
}

impl Default for CollectRules {
    fn default() -> Self {
        CollectRules { halt_fraction: 0.95, max_frames: 50_000, record_trace: true, newton_final: true }
    }
}

/// Group estimates at one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupTrace {
    pub iteration: usize,
    pub group: usize,
    pub z: f64,
    pub nudag: f64,
    pub n1_opt: f64,
    pub n2_opt: f64,
}

/// Outcome of a collection run.
#[derive(Debug, Clone)]
pub struct CollectResult {
    pub n1: u64,
    pub n2: u64,
    pub iterations: usize,
    /// Final per-group ζ and ν† estimates.
    pub z: Vec<f64>,
    pub v: Vec<f64>,
    /// Final per-group optimal-size estimates and how they were obtained.
    pub n1_opt: Vec<f64>,
    pub n2_opt: Vec<f64>,
    pub methods: Vec<SizeMethod>,
    pub trace: Vec<GroupTrace>,
    pub dark: MasterFrames,
    pub light: MasterFrames,
}

struct Groups {
    of_pixel: Vec<usize>,
    sizes: Vec<usize>,
}

impl Groups {
    fn new(of_pixel: &[usize], pixels: usize) -> Result<Self> {
        if of_pixel.len() != pixels {
            bail!(Shape, "group map has {} entries for {pixels} pixels", of_pixel.len());
        }
        let n = of_pixel.iter().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0; n];
        of_pixel.iter().for_each(|&g| sizes[g] += 1);
        if sizes.contains(&0) {
            bail!(Shape, "group ids must be contiguous from 0");
        }
        Ok(Groups { of_pixel: of_pixel.to_vec(), sizes })
    }

    fn sums(&self, f: &Frame) -> Vec<f64> {
        let mut s = vec![0.0; self.sizes.len()];
        for (p, &g) in self.of_pixel.iter().enumerate() {
            s[g] += f.data[p];
        }
        s
    }
}

/// (Z, ν†, n̂₁, n̂₂) for every group from the current masters. A group whose
/// Z is not below one asks for more data through infinite size estimates.
fn estimate(groups: &Groups, dark: &MasterFrames, light: &MasterFrames, spec: &BiasProfile, acv0: f64) -> Result<Vec<(f64, f64, f64, f64)>> {
    let sy = groups.sums(&dark.variance());
    let sx = groups.sums(&light.variance());
    (0..groups.sizes.len())
        .map(|g| {
            let z = group_zeta(sy[g], sx[g], groups.sizes[g], light.count)?;
            if !(z < 1.0) {
                return Ok((z, f64::INFINITY, f64::INFINITY, f64::INFINITY));
            }
            let v = if z > 0.0 { nudag(z, spec)? } else { spec.b };
            let (n1, n2) = approx_opt_sizes(z, spec, acv0)?;
            Ok((z, v, n1, n2))
        })
        .collect()
}

/// Runs the adaptive collection on a simulated sensor. `groups` maps each
/// pixel (row-major) to a group id; use [`SimSensorConfig::column_groups`]
/// for one group per column.
pub fn collect(cfg: &SimSensorConfig, groups: &[usize], spec: &BiasProfile, acv0: f64, rules: &CollectRules) -> Result<CollectResult> {
    cfg.validate()?;
    if !(acv0 > 0.0) {
        bail!(Domain, "ACV₀ must be positive");
    }
    let groups = Groups::new(groups, cfg.rows * cfg.cols)?;
    let n1_min = ceil_size(2.0 / (acv0 * acv0) + 5.0);
    if n1_min + 1 > rules.max_frames {
        bail!(IterationCap, "frame cap {} is below the initial {n1_min} frames", rules.max_frames);
    }
    let mut dark = MasterFrames::new(cfg.rows, cfg.cols);
    let mut light = MasterFrames::new(cfg.rows, cfg.cols);
    dark.update(&simulate_frame(cfg, FrameMode::Dark, 0)?)?;
    while light.count < n1_min {
        light.update(&simulate_frame(cfg, FrameMode::Illuminated, light.count)?)?;
    }

    let (mut yflag, mut xflag) = (false, false);
    let mut trace = Vec::new();
    let mut iterations = 0;
    let est = loop {
        if dark.count + light.count >= rules.max_frames {
            bail!(IterationCap, "collection exceeded {} frames", rules.max_frames);
        }
        if !yflag {
            dark.update(&simulate_frame(cfg, FrameMode::Dark, dark.count)?)?;
        }
        if !xflag {
            light.update(&simulate_frame(cfg, FrameMode::Illuminated, light.count)?)?;
        }
        iterations += 1;
        let est = estimate(&groups, &dark, &light, spec, acv0)?;
        if rules.record_trace {
            trace.extend(est.iter().enumerate().map(|(g, e)| GroupTrace {
                iteration: iterations,
                group: g,
                z: e.0,
                nudag: e.1,
                n1_opt: e.2,
                n2_opt: e.3,
            }));
        }
        let (n1, n2) = (light.count as f64, dark.count as f64);
        yflag = est.iter().all(|e| e.3 <= n2);
        xflag = est.iter().all(|e| e.2 <= n1);
        let covered = est.iter().filter(|e| e.2 <= n1 && e.3 <= n2).count();
        if covered as f64 >= rules.halt_fraction * est.len() as f64 {
            break est;
        }
    };

    let mut methods = vec![SizeMethod::Approx; est.len()];
    let (mut n1_opt, mut n2_opt): (Vec<f64>, Vec<f64>) = est.iter().map(|e| (e.2, e.3)).unzip();
    if rules.newton_final {
        for (g, e) in est.iter().enumerate() {
            if !(e.0 < 1.0) {
                continue;
            }
            // the approximation stays as the estimate if the solve fails
            if let Ok(s) = solve_opt_sizes(e.0, spec, acv0, DEFAULT_EPS, DEFAULT_N_MAX) {
                n1_opt[g] = s.n1_real;
                n2_opt[g] = s.n2_real;
                methods[g] = s.method;
            }
        }
    }
    Ok(CollectResult {
        n1: light.count,
        n2: dark.count,
        iterations,
        z: est.iter().map(|e| e.0).collect(),
        v: est.iter().map(|e| e.1).collect(),
        n1_opt,
        n2_opt,
        methods,
        trace,
        dark,
        light,
    })
}
