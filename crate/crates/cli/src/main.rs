mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use harmonic_annulus::bounds::{kalaj_bound, nitsche_bound, weitsman_bound, Verdict};
use harmonic_annulus::means::{initial_speed, lambda_from_speed};
use harmonic_annulus::operators::mean0_bound_check;
use harmonic_annulus::sampling::random_series;
use harmonic_annulus::{
    extremal_map, run_suite, theorem_gate, u_closed, u_mode, v_closed, Annulus, HarmonicSeries, QuadratureConfig,
    RadialProfile, SamplerConfig, Suite, Tolerances,
};
use serde::{Deserialize, Serialize};

use output::{Format, Manifest, Sink};

/// Exit code for bad arguments or unreadable input.
const EXIT_USAGE: u8 = 1;
const EXIT_FAIL: u8 = 2;
const EXIT_NOT_APPLICABLE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "annulus", version, about = "Harmonic maps between annuli: bounds, checks and verification suites")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Serialize)]
struct Global {
    /// Angular trapezoid nodes per circle.
    #[arg(long, global = true)]
    angular_nodes: Option<usize>,
    /// Radial Gauss nodes per unit of log(rho).
    #[arg(long, global = true)]
    radial_nodes: Option<usize>,
    /// JSON file with optional "quadrature" and "tolerances" objects.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output encoding; reports default to json, tables to csv.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    tol: TolFlags,
}

#[derive(Debug, Args, Serialize)]
struct TolFlags {
    /// Absolute tolerance for L^lambda annihilating the extremal mean
    #[arg(long, global = true)]
    tol_annihilation: Option<f64>,
    /// Absolute tolerance for the two operator identities
    #[arg(long, global = true)]
    tol_identity: Option<f64>,
    /// Relative tolerance for the K-functional endpoint identity
    #[arg(long, global = true)]
    tol_k: Option<f64>,
    /// Slack allowed below zero for L^lambda[V]
    #[arg(long, global = true)]
    tol_subsolution: Option<f64>,
    /// Slack allowed below the mean-radius bound
    #[arg(long, global = true)]
    tol_bound: Option<f64>,
    /// Absolute tolerance for the per-mode quadratic form
    #[arg(long, global = true)]
    tol_per_mode: Option<f64>,
    /// Absolute tolerance for the inner-circle boundary identity
    #[arg(long, global = true)]
    tol_boundary: Option<f64>,
    /// Slack for the conformal area comparison
    #[arg(long, global = true)]
    tol_schottky: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Nitsche, Kalaj and Weitsman bounds for one R or a sweep.
    Bounds {
        #[arg(long = "R", conflicts_with_all = ["r_min", "r_max"])]
        r: Option<f64>,
        #[arg(long = "R-min", requires = "r_max")]
        r_min: Option<f64>,
        #[arg(long = "R-max", requires = "r_min")]
        r_max: Option<f64>,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Run a verification suite and emit its report.
    Verify {
        #[arg(value_parser = Suite::NAMES)]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Mean radius along rho against the initial-speed bound, as CSV.
    Evolve {
        #[command(flatten)]
        source: SeriesSource,
        #[arg(long = "R")]
        r: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
    /// Bound verdict for a series on A(1, R).
    Check {
        #[arg(long)]
        series: PathBuf,
        #[arg(long = "R")]
        r: f64,
    },
    /// Write a seeded random series as JSON.
    Sample {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long = "N", default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = SamplerConfig::DEFAULT_DECAY)]
        decay: f64,
        #[arg(long)]
        include_log: bool,
        #[arg(long)]
        include_const: bool,
    },
    /// Sample a closed-form radial profile (rho, value, deriv1, deriv2) as CSV.
    Profile {
        #[command(flatten)]
        source: SeriesSource,
        #[arg(long, value_enum, default_value_t = ProfileKind::U)]
        kind: ProfileKind,
        /// Mode index for `--kind mode`.
        #[arg(long, allow_hyphen_values = true)]
        mode: Option<i64>,
        #[arg(long = "R-min", default_value_t = 1.0)]
        r_min: f64,
        #[arg(long = "R-max")]
        r_max: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Bounds { .. } => "bounds",
            Command::Verify { .. } => "verify",
            Command::Evolve { .. } => "evolve",
            Command::Check { .. } => "check",
            Command::Sample { .. } => "sample",
            Command::Profile { .. } => "profile",
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct SeriesSource {
    /// Series JSON file.
    #[arg(long)]
    series: Option<PathBuf>,
    /// Use the extremal map with this parameter.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProfileKind {
    U,
    V,
    Mode,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    quadrature: Option<QuadratureConfig>,
    #[serde(default)]
    tolerances: Option<Tolerances>,
}

struct Settings {
    quadrature: QuadratureConfig,
    tolerances: Tolerances,
}

fn settings(global: &Global) -> anyhow::Result<Settings> {
    let file = match &global.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<ConfigFile>(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => ConfigFile::default(),
    };
    let mut quadrature = file.quadrature.unwrap_or_default();
    if let Some(m) = global.angular_nodes {
        quadrature.angular_nodes = m;
    }
    if let Some(k) = global.radial_nodes {
        quadrature.radial_nodes = k;
    }
    let mut t = file.tolerances.unwrap_or_default();
    let f = &global.tol;
    let overrides: [(Option<f64>, &mut f64); 8] = [
        (f.tol_annihilation, &mut t.annihilation),
        (f.tol_identity, &mut t.identity),
        (f.tol_k, &mut t.k_relative),
        (f.tol_subsolution, &mut t.subsolution),
        (f.tol_bound, &mut t.bound),
        (f.tol_per_mode, &mut t.per_mode),
        (f.tol_boundary, &mut t.boundary),
        (f.tol_schottky, &mut t.schottky_area),
    ];
    for (flag, slot) in overrides {
        if let Some(v) = flag {
            *slot = v;
        }
    }
    t.validate()?;
    quadrature.validate(0)?;
    Ok(Settings {
        quadrature,
        tolerances: t,
    })
}

fn load_series(path: &Path) -> anyhow::Result<HarmonicSeries> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    HarmonicSeries::from_json(&text).with_context(|| format!("parsing series {}", path.display()))
}

fn source_series(src: &SeriesSource) -> anyhow::Result<HarmonicSeries> {
    match (&src.series, src.lambda) {
        (Some(path), _) => load_series(path),
        (None, Some(lambda)) => Ok(extremal_map(lambda)?),
        (None, None) => bail!("one of --series or --lambda is required"),
    }
}

fn grid(lo: f64, hi: f64, steps: usize) -> anyhow::Result<Vec<f64>> {
    if steps == 0 {
        bail!("--steps must be at least 1");
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        bail!("need a finite range with lower end <= upper end, got [{lo}, {hi}]");
    }
    Ok(if steps == 1 {
        vec![lo]
    } else {
        (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect()
    })
}

#[derive(Debug, Serialize)]
struct BoundsRow {
    #[serde(rename = "R")]
    r: f64,
    modulus: f64,
    nitsche: f64,
    cosh_modulus: f64,
    kalaj: f64,
    weitsman: f64,
}

fn bounds_row(r: f64) -> anyhow::Result<BoundsRow> {
    let annulus = Annulus::new(r)?;
    Ok(BoundsRow {
        r,
        modulus: annulus.modulus(),
        nitsche: nitsche_bound(r),
        cosh_modulus: annulus.modulus().cosh(),
        kalaj: kalaj_bound(r),
        weitsman: weitsman_bound(r),
    })
}

fn profile_rows(p: &RadialProfile, rhos: &[f64]) -> Vec<Vec<f64>> {
    rhos.iter()
        .map(|&rho| {
            let (v, d1, d2) = p.eval_all(rho);
            vec![rho, v, d1, d2]
        })
        .collect()
}

/// Runs the command; returns the process exit code on success.
fn run(cli: Cli, manifest: Manifest) -> anyhow::Result<u8> {
    let settings = settings(&cli.global)?;
    let manifest = manifest.with_tolerances(settings.tolerances);
    let sink = Sink::new(cli.global.out.clone(), cli.global.format, manifest);
    let cfg = settings.quadrature;
    match cli.command {
        Command::Bounds { r, r_min, r_max, steps } => {
            let rs = match (r, r_min, r_max) {
                (Some(r), _, _) => vec![r],
                (None, Some(lo), Some(hi)) => grid(lo, hi, steps)?,
                _ => bail!("give --R or both --R-min and --R-max"),
            };
            let rows = rs.into_iter().map(bounds_row).collect::<anyhow::Result<Vec<_>>>()?;
            let table: Vec<Vec<f64>> = rows
                .iter()
                .map(|b| vec![b.r, b.modulus, b.nitsche, b.cosh_modulus, b.kalaj, b.weitsman])
                .collect();
            sink.emit(&rows, &["R", "modulus", "nitsche", "cosh_modulus", "kalaj", "weitsman"], &table)?;
            Ok(0)
        }
        Command::Verify { suite, seed, trials } => {
            let suite: Suite = suite.parse()?;
            let sink = sink.with_seed(seed);
            let report = run_suite(suite, seed, trials, &settings.tolerances, &cfg)?;
            let table: Vec<Vec<String>> = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        format!("{:?}", c.anchor),
                        c.residual.to_string(),
                        c.tolerance.to_string(),
                        c.cases.to_string(),
                        c.pass.to_string(),
                    ]
                })
                .collect();
            sink.emit_strings(&report, &["name", "anchor", "residual", "tolerance", "cases", "pass"], &table)?;
            Ok(if report.all_pass { 0 } else { EXIT_FAIL })
        }
        Command::Evolve { source, r, steps } => {
            let h = source_series(&source)?;
            Annulus::new(r)?;
            let lambda = lambda_from_speed(initial_speed(&h)?)?;
            let mut rows = Vec::with_capacity(steps);
            for rho in grid(1.0, r, steps)? {
                let (sqrt_u, bound) = mean0_bound_check(&h, rho)?;
                rows.push(vec![rho, sqrt_u, bound, sqrt_u - bound]);
            }
            let sink = sink.with_note(format!("lambda: {lambda}"));
            sink.emit_table(&["rho", "sqrt_u", "bound", "margin"], &rows)?;
            Ok(0)
        }
        Command::Check { series, r } => {
            let h = load_series(&series)?;
            let report = theorem_gate(&h, r)?;
            sink.emit_json(&report)?;
            Ok(match report.verdict {
                Verdict::Pass => 0,
                Verdict::Fail => EXIT_FAIL,
                Verdict::NotApplicable => EXIT_NOT_APPLICABLE,
            })
        }
        Command::Sample { seed, n, decay, include_log, include_const } => {
            let cfg = SamplerConfig {
                seed,
                n_max: n,
                decay,
                include_log,
                include_const,
            };
            let h = random_series(&cfg)?;
            sink.emit_raw(&h.to_json()?)?;
            Ok(0)
        }
        Command::Profile { source, kind, mode, r_min, r_max, steps } => {
            let h = source_series(&source)?;
            if r_min <= 0.0 {
                bail!("--R-min must be positive");
            }
            let p = match (kind, mode) {
                (ProfileKind::U, _) => u_closed(&h),
                (ProfileKind::V, _) => v_closed(&h),
                (ProfileKind::Mode, Some(n)) => u_mode(&h, n)?,
                (ProfileKind::Mode, None) => bail!("--kind mode needs --mode"),
            };
            let rows = profile_rows(&p, &grid(r_min, r_max, steps)?);
            sink.emit_table(&["rho", "value", "deriv1", "deriv2"], &rows)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let manifest = Manifest::new(cli.command.name().to_string(), argv[1..].to_vec());
    match run(cli, manifest) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
