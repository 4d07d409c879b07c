mod eval;
mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use photon_gain::estimator::{moments_t_nu, t_nu_asym, t_nu_auto, PopulationParams, VariancePair};
use photon_gain::gain::demo::{run_demo, DemoConfig};
use photon_gain::gain::{ci_acv, ci_arb, AcvEval};
use photon_gain::optsize::{opt_size_curve, solve_opt_sizes, BiasProfile, SizeMethod, DEFAULT_EPS, DEFAULT_N_MAX};
use photon_gain::simpipe::{collect, gmap, gmap_traditional, map_stats, CollectRules, MasterFrames, SimSensorConfig};
use serde::{Deserialize, Serialize};
use serde_json::json;

const THREADS_VAR: &str = "PHOTON_GAIN_THREADS";

#[derive(Parser)]
#[command(name = "photon-gain", version, about = "Conversion-gain estimation with bounded bias")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Special functions.
    Specfun {
        #[command(subcommand)]
        cmd: SpecfunCmd,
    },
    /// Gain estimator demonstration and confidence intervals.
    Gain {
        #[command(subcommand)]
        cmd: GainCmd,
    },
    /// Reciprocal-difference estimator and its moments.
    Estimate {
        #[command(subcommand)]
        cmd: EstimateCmd,
    },
    /// Optimal sample sizes.
    Optsize {
        #[command(subcommand)]
        cmd: OptsizeCmd,
    },
    /// Simulated acquisition pipeline.
    Simulate {
        #[command(subcommand)]
        cmd: SimulateCmd,
    },
    /// Recompute the gain maps of a finished run directory.
    Gmap(GmapArgs),
}

#[derive(Subcommand)]
enum SpecfunCmd {
    /// Evaluate one function, e.g. `specfun eval hyp2f1 1 1 2 0.5`.
    Eval {
        name: String,
        #[arg(allow_negative_numbers = true)]
        args: Vec<f64>,
    },
    /// List the available functions.
    List,
}

#[derive(Subcommand)]
enum GainCmd {
    /// Monte Carlo check of the moments and interval coverage.
    McDemo {
        /// JSON file overriding any of the default settings.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Upper confidence bounds on ARB and ACV from one observation.
    Ci {
        #[command(flatten)]
        obs: Observation,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Sum this many rows of the ACV series instead of using a tolerance.
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Args)]
struct Observation {
    /// Illuminated sample variance X̂.
    #[arg(long)]
    xhat: f64,
    /// Dark sample variance Ŷ.
    #[arg(long)]
    yhat: f64,
    #[arg(long)]
    n1: u64,
    #[arg(long)]
    n2: u64,
    #[arg(long, allow_negative_numbers = true)]
    nu: f64,
}

#[derive(Subcommand)]
enum EstimateCmd {
    /// Evaluate 𝒯ᵥ at one observation; with --pbar also the gain estimate.
    TNu {
        #[command(flatten)]
        obs: Observation,
        /// Asymptotic order; exact evaluation when omitted.
        #[arg(long)]
        order: Option<usize>,
        /// Mean difference X̄ − Ȳ.
        #[arg(long, allow_negative_numbers = true)]
        pbar: Option<f64>,
    },
    /// Exact moments of 𝒯ᵥ.
    Moments {
        #[arg(long)]
        zeta: f64,
        #[arg(long, default_value_t = 1.0)]
        kappa1: f64,
        #[arg(long)]
        n1: u64,
        #[arg(long)]
        n2: u64,
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Args, Clone, Copy)]
struct Profile {
    /// Target ARB at ζ = 1 (ARB₀).
    #[arg(long, default_value_t = 0.01)]
    arb0: f64,
    /// Exponent of the ARB profile, in [0, 1].
    #[arg(long, default_value_t = 0.0)]
    b: f64,
    /// Target ACV.
    #[arg(long)]
    acv0: f64,
}

impl Profile {
    fn spec(&self) -> Result<BiasProfile> {
        if !(0.0..=1.0).contains(&self.b) {
            return Err(Usage(format!("--b must lie in [0, 1], got {}", self.b)).into());
        }
        Ok(BiasProfile::new(self.arb0, self.b)?)
    }
}

#[derive(Subcommand)]
enum OptsizeCmd {
    /// Tabulate optimal sizes over ζ = i/grid.
    Curve {
        #[command(flatten)]
        profile: Profile,
        /// σ_d·g, used for the efficiency column.
        #[arg(long)]
        sigma_dg: f64,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: usize,
        /// CSV output; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal sizes at one ζ.
    Point {
        #[arg(long)]
        zeta: f64,
        #[command(flatten)]
        profile: Profile,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: usize,
    },
}

#[derive(Subcommand)]
enum SimulateCmd {
    /// Collect frames until the optimal sizes are met, then build gain maps.
    Run {
        /// Sensor description (JSON).
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        profile: Profile,
        /// Asymptotic order of the g-map estimator.
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, default_value_t = 0.95)]
        halt_fraction: f64,
        #[arg(long, default_value_t = 50_000)]
        max_frames: u64,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct GmapArgs {
    /// Directory written by `simulate run`.
    #[arg(long)]
    run: PathBuf,
    #[arg(long, default_value_t = 1)]
    order: usize,
    /// CSV output for the map; the summary goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Bad invocation that clap cannot see.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn exit_code(e: &anyhow::Error) -> u8 {
    use photon_gain::Error as E;
    match e.downcast_ref::<E>() {
        Some(E::Convergence(_) | E::IterationCap(_)) => 4,
        Some(_) => 3,
        None => 2,
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    print_text(&serde_json::to_string_pretty(v)?)
}

/// Writes a line to stdout; a closed pipe is not an error.
fn print_text(s: &str) -> Result<()> {
    use std::io::Write;
    match writeln!(std::io::stdout().lock(), "{s}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn init_threads() -> Result<()> {
    let Ok(s) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = s.trim().parse().map_err(|_| Usage(format!("{THREADS_VAR} must be a positive integer, got {s:?}")))?;
    if n == 0 {
        return Err(Usage(format!("{THREADS_VAR} must be positive")).into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn specfun_cmd(cmd: SpecfunCmd) -> Result<()> {
    match cmd {
        SpecfunCmd::Eval { name, args } => {
            let v = eval::eval(&name, &args).map_err(|e| match e.downcast::<photon_gain::Error>() {
                Ok(lib) => anyhow::Error::new(lib),
                Err(other) => Usage(other.to_string()).into(),
            })?;
            print_text(&v.to_string())?;
        }
        SpecfunCmd::List => {
            for (name, args, about) in eval::FUNCTIONS {
                print_text(&format!("{name:<16} {args:<24} {about}"))?;
            }
        }
    }
    Ok(())
}

fn gain_cmd(cmd: GainCmd) -> Result<()> {
    match cmd {
        GainCmd::McDemo { config, trials, seed, out } => {
            let mut cfg: DemoConfig = match config {
                Some(p) => io::read_json(&p).map_err(|e| Usage(format!("{e:#}")))?,
                None => DemoConfig::default(),
            };
            cfg.trials = trials.unwrap_or(cfg.trials);
            cfg.seed = seed.unwrap_or(cfg.seed);
            let report = run_demo(&cfg)?;
            let doc = json!({ "config": cfg, "report": report });
            if let Some(p) = out {
                io::write_json(&p, &doc)?;
            }
            print_json(&doc)
        }
        GainCmd::Ci { obs, alpha, terms, tol } => {
            let vp = VariancePair::from_sizes(obs.xhat, obs.yhat, obs.n1, obs.n2)?;
            let eval = terms.map_or(AcvEval::Tolerance(tol), AcvEval::Terms);
            let arb = ci_arb(&vp, obs.nu, alpha)?;
            let acv = ci_acv(&vp, obs.nu, alpha, eval)?;
            print_json(&json!({ "arb": arb, "acv": acv }))
        }
    }
}

fn estimate_cmd(cmd: EstimateCmd) -> Result<()> {
    match cmd {
        EstimateCmd::TNu { obs, order, pbar } => {
            let vp = VariancePair::from_sizes(obs.xhat, obs.yhat, obs.n1, obs.n2)?;
            let t = match order {
                Some(k) => t_nu_asym(&vp, obs.nu, k)?,
                None => t_nu_auto(&vp, obs.nu)?,
            };
            let gain = pbar.map(|p| p * t);
            print_json(&json!({ "t_nu": t, "gain": gain, "order": order }))
        }
        EstimateCmd::Moments { zeta, kappa1, n1, n2, nu, tol } => {
            let pp = PopulationParams::new(kappa1, zeta * kappa1)?;
            let (a1, a2) = (photon_gain::estimator::shape(n1), photon_gain::estimator::shape(n2));
            print_json(&moments_t_nu(&pp, a1, a2, nu, tol)?)
        }
    }
}

fn optsize_cmd(cmd: OptsizeCmd) -> Result<()> {
    match cmd {
        OptsizeCmd::Curve { profile, sigma_dg, grid, eps, n_max, out } => {
            let rows = opt_size_curve(&profile.spec()?, profile.acv0, sigma_dg, grid, eps, n_max)?;
            match out {
                Some(p) => io::write_rows(&p, &rows),
                None => {
                    let mut w = csv::Writer::from_writer(std::io::stdout());
                    rows.iter().try_for_each(|r| w.serialize(r))?;
                    w.flush()?;
                    Ok(())
                }
            }
        }
        OptsizeCmd::Point { zeta, profile, eps, n_max } => {
            print_json(&solve_opt_sizes(zeta, &profile.spec()?, profile.acv0, eps, n_max)?)
        }
    }
}

const FILES: [&str; 8] = [
    "masters_ybar.csv",
    "masters_xbar.csv",
    "masters_yhat.csv",
    "masters_xhat.csv",
    "pixel_groups.csv",
    "groups.csv",
    "gmap.csv",
    "gmap_traditional.csv",
];

/// Everything `gmap` needs to redo the maps from a run directory.
#[derive(Serialize, Deserialize)]
struct Manifest {
    tool: String,
    version: String,
    sensor: SimSensorConfig,
    arb0: f64,
    acv0: f64,
    b: f64,
    order: usize,
    rules: CollectRules,
    files: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct GroupRow {
    group: usize,
    pixels: usize,
    z: f64,
    nudag: f64,
    n1_opt: f64,
    n2_opt: f64,
    method: SizeMethod,
}

fn simulate_cmd(cmd: SimulateCmd) -> Result<()> {
    let SimulateCmd::Run { config, profile, order, halt_fraction, max_frames, out } = cmd;
    let sensor: SimSensorConfig = io::read_json(&config).map_err(|e| Usage(format!("{e:#}")))?;
    let spec = profile.spec()?;
    let rules = CollectRules { halt_fraction, max_frames, record_trace: false, newton_final: true };
    let groups = sensor.column_groups();
    let res = collect(&sensor, &groups, &spec, profile.acv0, &rules)?;

    std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    io::write_frame(&out.join(FILES[0]), &res.dark.mean)?;
    io::write_frame(&out.join(FILES[1]), &res.light.mean)?;
    io::write_frame(&out.join(FILES[2]), &res.dark.variance())?;
    io::write_frame(&out.join(FILES[3]), &res.light.variance())?;
    let gframe = photon_gain::simpipe::Frame { rows: sensor.rows, cols: sensor.cols, data: groups.iter().map(|&g| g as f64).collect() };
    io::write_frame(&out.join(FILES[4]), &gframe)?;
    let rows: Vec<GroupRow> = (0..res.z.len())
        .map(|g| GroupRow {
            group: g,
            pixels: groups.iter().filter(|&&x| x == g).count(),
            z: res.z[g],
            nudag: res.v[g],
            n1_opt: res.n1_opt[g],
            n2_opt: res.n2_opt[g],
            method: res.methods[g],
        })
        .collect();
    io::write_rows(&out.join(FILES[5]), &rows)?;

    let manifest = Manifest {
        tool: "photon-gain".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        sensor,
        arb0: profile.arb0,
        acv0: profile.acv0,
        b: profile.b,
        order,
        rules,
        files: FILES.iter().map(|s| s.to_string()).collect(),
    };
    let maps = build_maps(&res.dark, &res.light, &res.v, &groups, profile.b, order, &out.join(FILES[6]), &out.join(FILES[7]))?;
    let summary = json!({
        "manifest": manifest,
        "n1": res.n1,
        "n2": res.n2,
        "iterations": res.iterations,
        "maps": maps,
    });
    io::write_json(&out.join("summary.json"), &summary)?;
    print_json(&summary)
}

#[allow(clippy::too_many_arguments)]
fn build_maps(
    dark: &MasterFrames,
    light: &MasterFrames,
    v: &[f64],
    groups: &[usize],
    b: f64,
    order: usize,
    out: &Path,
    out_trad: &Path,
) -> Result<serde_json::Value> {
    let g = gmap(dark, light, v, groups, b, order)?;
    let (trad, flagged) = gmap_traditional(dark, light)?;
    io::write_frame(out, &g.map)?;
    io::write_frame(out_trad, &trad)?;
    Ok(json!({
        "gmap": map_stats(&g.map)?,
        "clamped": g.clamped,
        "traditional": map_stats(&trad)?,
        "flagged": flagged,
    }))
}

fn gmap_cmd(args: GmapArgs) -> Result<()> {
    let dir = &args.run;
    let summary: serde_json::Value = io::read_json(&dir.join("summary.json"))?;
    let manifest: Manifest = serde_json::from_value(summary["manifest"].clone()).context("summary.json manifest")?;
    let count = |k: &str| summary[k].as_u64().with_context(|| format!("summary.json lacks {k}"));
    let (n1, n2) = (count("n1")?, count("n2")?);
    let dark = MasterFrames::from_variance(n2, io::read_frame(&dir.join(FILES[0]))?, io::read_frame(&dir.join(FILES[2]))?)?;
    let light = MasterFrames::from_variance(n1, io::read_frame(&dir.join(FILES[1]))?, io::read_frame(&dir.join(FILES[3]))?)?;
    let groups: Vec<usize> = io::read_frame(&dir.join(FILES[4]))?.data.iter().map(|&g| g as usize).collect();
    let mut rdr = csv::Reader::from_path(dir.join(FILES[5]))?;
    let rows: Vec<GroupRow> = rdr.deserialize().collect::<std::result::Result<_, _>>()?;
    let v: Vec<f64> = rows.iter().map(|r| r.nudag).collect();
    let out = args.out.unwrap_or_else(|| dir.join(format!("gmap_k{}.csv", args.order)));
    let trad = out.with_file_name("gmap_traditional.csv");
    print_json(&build_maps(&dark, &light, &v, &groups, manifest.b, args.order, &out, &trad)?)
}

fn run(cli: Cli) -> Result<()> {
    init_threads()?;
    match cli.cmd {
        Cmd::Specfun { cmd } => specfun_cmd(cmd),
        Cmd::Gain { cmd } => gain_cmd(cmd),
        Cmd::Estimate { cmd } => estimate_cmd(cmd),
        Cmd::Optsize { cmd } => optsize_cmd(cmd),
        Cmd::Simulate { cmd } => simulate_cmd(cmd),
        Cmd::Gmap(args) => gmap_cmd(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                return ExitCode::from(2);
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
