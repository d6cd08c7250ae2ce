//! Seeded verification suites producing per-check residuals.

use std::f64::consts::{E, PI};
use std::str::FromStr;

use num_complex::Complex64;
use rand::RngExt;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    boundary_identity_smoothh, coeffs_abc, d_certificate, d_certificate_expanded, d_certificate_n2_factored,
    kalaj_bound, lemma_lvest_check, log_space, nitsche_bound, per_mode_identity_p10, phi,
    phi_scaled_second_derivative, schottky_check, theorem_gate, uniqueness_probe, weight_re15, weitsman_bound,
};
use crate::error::{Error, Result};
use crate::means::{initial_speed, u_closed};
use crate::operators::{
    identity_uc3_residual, identity_uc4_residual, k_endpoint, k_quadrature, mean0_bound_check,
    variance_chain_gap, variance_subsolution_min, LambdaOperator,
};
use crate::quadrature::{dirichlet_energy, enclosed_area, quadratic_mean_numeric, QuadratureConfig};
use crate::sampling::{
    equality_family, injectivity_probe, normalize_prop71, random_coefficient, random_series_from, stream_rng,
    SamplerConfig,
};
use crate::series::{extremal_map, HarmonicSeries};
use crate::tolerances::Tolerances;

/// Outer radius `e^{3/2}` of the largest annulus covered without class conditions.
pub fn max_outer() -> f64 {
    1.5f64.exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Subsolution,
    Kfunctional,
    Certificates,
    Schottky,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["identities", "subsolution", "kfunctional", "certificates", "schottky", "all"];

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "identities" => Suite::Identities,
            "subsolution" => Suite::Subsolution,
            "kfunctional" => Suite::Kfunctional,
            "certificates" => Suite::Certificates,
            "schottky" => Suite::Schottky,
            "all" => Suite::All,
            other => {
                return Err(Error::Precondition(format!(
                    "unknown suite {other:?}; expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Which identity or inequality the check exercises.
    pub anchor: String,
    /// Worst residual over all cases; for sign conditions, the worst shortfall.
    pub residual: f64,
    pub tolerance: f64,
    pub cases: usize,
    pub pass: bool,
}

impl Check {
    fn residual(name: &str, anchor: &str, residual: f64, tolerance: f64, cases: usize) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            residual,
            tolerance,
            cases,
            pass: residual.is_finite() && residual <= tolerance,
        }
    }

    /// Strict positivity: `residual` is `-min`, and the check passes iff `min > 0`.
    fn positive(name: &str, anchor: &str, min: f64, cases: usize) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            residual: -min,
            tolerance: 0.0,
            cases,
            pass: min > 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub all_pass: bool,
    /// Sorted by name.
    pub checks: Vec<Check>,
}

/// Random series with `1 <= N <= n_max`, log and constant terms, `|coef| <= 0.6^|n|`.
pub fn draw_series(rng: &mut ChaCha8Rng, n_max: usize) -> Result<HarmonicSeries> {
    let n = rng.random_range(1..=n_max);
    random_series_from(rng, &SamplerConfig::new(0, n).with_log(true).with_const(true))
}

/// Normalized zero-inner-mean series with nonnegative initial speed, by rejection.
pub fn draw_normalized_class_d(rng: &mut ChaCha8Rng, n_max: usize) -> Result<HarmonicSeries> {
    loop {
        let n = rng.random_range(1..=n_max);
        let h = normalize_prop71(&random_series_from(rng, &SamplerConfig::new(0, n).with_log(true))?)?;
        if initial_speed(&h)? >= 0.0 {
            return Ok(h);
        }
    }
}

/// Rotation `alpha z` plus analytic terms `z^2 .. z^4` of size at most `1e-7`,
/// rescaled so that `U(1) = 1`; stays within `1e-6` of the unit circle on `C_1`.
pub fn draw_near_conformal(rng: &mut ChaCha8Rng) -> Result<HarmonicSeries> {
    let alpha = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    let mut h = HarmonicSeries::identity().scale_rotate(alpha);
    for n in 2..=4 {
        h = h.with_a(n, random_coefficient(rng, 1e-7));
    }
    normalize_prop71(&h)
}

/// Single mode `n` with `|a_n| <= R^-n`, `|b_n| <= 1`, so the mode stays `O(1)` on `[1, R]`.
pub fn draw_mode(rng: &mut ChaCha8Rng, n: i64, outer: f64) -> HarmonicSeries {
    let scale_a = outer.powi(-(n as i32)).min(1.0);
    let scale_b = outer.powi(n as i32).min(1.0);
    HarmonicSeries::zero(n.unsigned_abs() as usize)
        .with_a(n, random_coefficient(rng, scale_a))
        .with_b(n, random_coefficient(rng, scale_b))
}

/// `cfg` with enough angular nodes for `h`.
fn sized(cfg: &QuadratureConfig, h: &HarmonicSeries) -> QuadratureConfig {
    QuadratureConfig {
        angular_nodes: cfg.angular_nodes.max(4 * h.order() + 8),
        ..*cfg
    }
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 })
}

type CheckFn = Box<dyn Fn(&mut ChaCha8Rng) -> Result<Check> + Send + Sync>;

struct Ctx {
    trials: usize,
    tol: Tolerances,
    cfg: QuadratureConfig,
}

fn max_over<F>(rng: &mut ChaCha8Rng, trials: usize, mut f: F) -> Result<f64>
where
    F: FnMut(&mut ChaCha8Rng) -> Result<f64>,
{
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let r = f(rng)?;
        worst = if r.is_nan() { f64::NAN } else { worst.max(r) };
    }
    Ok(worst)
}

fn identities(ctx: &Ctx) -> Vec<(&'static str, CheckFn)> {
    let t = ctx.trials;
    let tol = ctx.tol;
    let cfg = ctx.cfg;
    vec![
        (
            "annihilation-extremal",
            Box::new(move |rng: &mut ChaCha8Rng| {
                let mut worst = 0.0f64;
                for lambda in [-0.9, -0.5, 0.0, 0.5, 1.0] {
                    let op = LambdaOperator::new(lambda)?;
                    let u = u_closed(&extremal_map(lambda)?);
                    for _ in 0..t {
                        let rho = rng.random_range(1.0..=max_outer());
                        worst = worst.max(op.apply(&u, rho)?.abs());
                    }
                }
                Ok(Check::residual("annihilation-extremal", "L^lambda annihilates the extremal quadratic mean", worst, tol.annihilation, 5 * t))
            }) as CheckFn,
        ),
        (
            "identity-energy-form",
            Box::new(move |rng: &mut ChaCha8Rng| {
                let r = max_over(rng, t, |rng| {
                    let h = draw_series(rng, 16)?;
                    identity_uc3_residual(&h, rng.random_range(-0.9..=1.0), rng.random_range(1.0..=2.0), &sized(&cfg, &h))
                })?;
                Ok(Check::residual("identity-energy-form", "L^lambda[U] as a mean of energy density minus a radial flux", r, tol.identity, t))
            }),
        ),
        (
            "identity-square-form",
            Box::new(move |rng: &mut ChaCha8Rng| {
                let r = max_over(rng, t, |rng| {
                    let h = draw_series(rng, 16)?;
                    identity_uc4_residual(&h, rng.random_range(-0.9..=1.0), rng.random_range(1.0..=2.0), &sized(&cfg, &h))
                })?;
                Ok(Check::residual("identity-square-form", "L^lambda[U] as a mean of angular and weighted radial squares", r, tol.identity, t))
            }),
        ),
        (
            "boundary-identity",
            Box::new(move |rng: &mut ChaCha8Rng| {
                let r = max_over(rng, t, |rng| {
                    let h = draw_series(rng, 12)?;
                    boundary_identity_smoothh(&h, &sized(&cfg, &h))
                })?;
                Ok(Check::residual("boundary-identity", "inner-circle flux identity sum (n-1)|a_n+b_n|^2", r, tol.boundary, t))
            }),
        ),
        (
            "quadratic-mean-oracle",
            Box::new(move |rng: &mut ChaCha8Rng| {
                let r = max_over(rng, t, |rng| {
                    let h = draw_series(rng, 12)?;
                    let rho = rng.random_range(1.0..=2.0);
                    let closed = u_closed(&h).value(rho);
                    let numeric = quadratic_mean_numeric(&h, rho, &sized(&cfg, &h))?;
                    Ok((closed - numeric).abs() / closed.max(1.0))
                })?;
                Ok(Check::residual("quadratic-mean-oracle", "mode orthogonality on circles", r, tol.oracle, t))
            }),
        ),
        (
            "energy-identity",
            Box::new(move |rng: &mut ChaCha8Rng| {
                let r = max_over(rng, t.min(10), |rng| {
                    let h = draw_series(rng, 4)?;
                    let (r1, r2) = (1.2, 1.8);
                    let u = u_closed(&h);
                    let closed = PI * (r2 * u.deriv1(r2) - r1 * u.deriv1(r1));
                    let e = dirichlet_energy(&h, r1, r2, &sized(&cfg, &h))?;
                    Ok((e - closed).abs() / closed.abs().max(f64::MIN_POSITIVE))
                })?;
                Ok(Check::residual("energy-identity", "Dirichlet energy equals pi [rho U']", r, tol.energy_relative, t.min(10)))
            }),
        ),
        (
            "inner-area-limit",
            Box::new(move |_: &mut ChaCha8Rng| {
                let a = enclosed_area(&extremal_map(1.0)?, 1.0 + 1e-12, &cfg)?;
                Ok(Check::residual("inner-area-limit", "area enclosed by the critical map tends to pi at the inner circle", (a - PI).abs(), tol.area_limit, 1))
            }),
        ),
    ]
}

fn subsolution(ctx: &Ctx) -> Vec<(&'static str, CheckFn)> {
    let t = ctx.trials;
    let tol = ctx.tol;
    let grid: Vec<f64> = linspace(1.0, max_outer(), 200).collect();
    let grid2 = grid.clone();
    let grid3 = grid.clone();
    vec![
        (
            "variance-subsolution",
            Box::new(move |rng: &mut ChaCha8Rng| {
                let r = max_over(rng, t, |rng| {
                    let h = draw_series(rng, 10)?;
                    Ok(-variance_subsolution_min(&h, rng.random_range(-0.9..=1.0), &grid)?)
                })?;
                Ok(Check::residual("variance-subsolution", "variance is a subsolution of L^lambda", r.max(0.0), tol.subsolution, t))
            }) as CheckFn,
        ),
        (
            "variance-chain",
            Box::new(move |rng: &mut ChaCha8Rng| {
                let r = max_over(rng, t, |rng| {
                    let h = draw_series(rng, 10)?;
                    let lambda = rng.random_range(-0.9..=1.0);
                    grid2.iter().try_fold(0.0f64, |acc, &rho| Ok(acc.max(-variance_chain_gap(&h, lambda, rho)?)))
                })?;
                Ok(Check::residual("variance-chain", "L^lambda[V] dominates (2/rho^2) sum (n^2-1) U_n", r, tol.subsolution, t))
            }),
        ),
        (
            "variance-equality-family",
            Box::new(move |rng: &mut ChaCha8Rng| {
                let r = max_over(rng, t, |rng| {
                    let lambda = rng.random_range(-0.9..=1.0);
                    let h = equality_family(
                        lambda,
                        random_coefficient(rng, 1.0),
                        random_coefficient(rng, 1.0),
                        random_coefficient(rng, 1.0),
                        random_coefficient(rng, 1.0),
                    )?;
                    Ok(variance_subsolution_min(&h, lambda, &grid3)?.abs().max(
                        -variance_subsolution_min(&h.scale_rotate(Complex64::new(-1.0, 0.0)), lambda, &grid3)?,
                    ))
                })?;
                Ok(Check::residual("variance-equality-family", "L^lambda[V] vanishes for the equality family", r, tol.equality, t))
            }),
        ),
        (
            "mean-radius-bound",
            Box::new(move |rng: &mut ChaCha8Rng| {
                let r = max_over(rng, t, |rng| {
                    let h = draw_normalized_class_d(rng, 8)?;
                    linspace(1.0, max_outer(), 50).try_fold(0.0f64, |acc, s| {
                        let (lhs, rhs) = mean0_bound_check(&h, s)?;
                        Ok(acc.max(rhs - lhs))
                    })
                })?;
                Ok(Check::residual("mean-radius-bound", "mean radius dominates the initial-speed extremal", r.max(0.0), tol.bound, t))
            }),
        ),
        (
            "mean-radius-equality",
            Box::new(move |rng: &mut ChaCha8Rng| {
                let r = max_over(rng, t, |rng| {
                    let lambda = rng.random_range(-0.9..=1.0);
                    let alpha = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
                    let h = extremal_map(lambda)?.scale_rotate(alpha);
                    linspace(1.0, max_outer(), 50).try_fold(0.0f64, |acc, s| {
                        let (lhs, rhs) = mean0_bound_check(&h, s)?;
                        Ok(acc.max((lhs - rhs).abs()))
                    })
                })?;
                Ok(Check::residual("mean-radius-equality", "equality for rotated extremal maps", r, tol.bound_equality, t))
            }),
        ),
    ]
}

fn kfunctional(ctx: &Ctx) -> Vec<(&'static str, CheckFn)> {
    let t = ctx.trials;
    let tol = ctx.tol;
    let cfg = ctx.cfg;
    vec![
        (
            "k-endpoint-identity",
            Box::new(move |rng: &mut ChaCha8Rng| {
                let r = max_over(rng, t, |rng| {
                    let h = draw_series(rng, 8)?;
                    let lambda = rng.random_range(-0.9..=1.0);
                    let outer = rng.random_range(1.05..=max_outer());
                    let e = k_endpoint(&h, lambda, outer)?;
                    Ok((k_quadrature(&h, lambda, outer, &cfg)? - e).abs() / (1.0 + e.abs()))
                })?;
                Ok(Check::residual("k-endpoint-identity", "K^lambda depends only on endpoint data", r, tol.k_relative, t))
            }) as CheckFn,
        ),
        (
            "k-extremal-zero",
            Box::new(move |rng: &mut ChaCha8Rng| {
                let r = max_over(rng, t, |rng| {
                    let lambda = rng.random_range(-0.9..=1.0);
                    let outer = rng.random_range(1.05..=max_outer());
                    Ok(k_quadrature(&extremal_map(lambda)?, lambda, outer, &cfg)?.abs())
                })?;
                Ok(Check::residual("k-extremal-zero", "K^lambda vanishes on the extremal map", r, tol.k_extremal, t))
            }),
        ),
        (
            "per-mode-identity",
            Box::new(move |rng: &mut ChaCha8Rng| {
                let r = max_over(rng, t, |rng| {
                    let outer = [E, 2.9, max_outer()][rng.random_range(0..3usize)];
                    let n = rng.random_range(1..=8i64);
                    per_mode_identity_p10(&draw_mode(rng, n, outer), n, outer, &cfg)
                })?;
                Ok(Check::residual("per-mode-identity", "per-mode quadratic form of K^1", r, tol.per_mode, t))
            }),
        ),
        (
            "variance-functional-inequality",
            Box::new(move |rng: &mut ChaCha8Rng| {
                let r = max_over(rng, t, |rng| {
                    let h = draw_series(rng, 6)?;
                    let outer = E + (max_outer() - E) * rng.random_range(1e-6..=1.0);
                    let (lhs, rhs) = lemma_lvest_check(&h, outer, &cfg)?;
                    Ok(rhs - lhs)
                })?;
                Ok(Check::residual("variance-functional-inequality", "K^1[V] dominates (R^2-1) sum (n-1)|a_n+b_n|^2", r.max(0.0), tol.lvest, t))
            }),
        ),
    ]
}

fn certificates(ctx: &Ctx) -> Vec<(&'static str, CheckFn)> {
    let tol = ctx.tol;
    vec![
        (
            "phi-positive",
            Box::new(|_: &mut ChaCha8Rng| {
                let min = linspace(E, max_outer(), 1000).map(phi).fold(f64::INFINITY, f64::min);
                Ok(Check::positive("phi-positive", "phi(R) > 0 on [e, e^{3/2}]", min, 1000))
            }) as CheckFn,
        ),
        (
            "phi-endpoint-values",
            Box::new(move |_: &mut ChaCha8Rng| {
                let e = |x: f64| x.exp();
                let at_e = 13.0 * e(4.0) - e(6.0) - 19.0 * e(2.0) - 1.0;
                let at_top = 22.0 * e(6.0) - e(9.0) - 38.0 * e(3.0) - 1.0;
                let r = ((phi(E) - at_e) / at_e).abs().max(((phi(max_outer()) - at_top) / at_top).abs());
                Ok(Check::residual("phi-endpoint-values", "phi(e) = 13e^4-e^6-19e^2-1, phi(e^{3/2}) = 22e^6-e^9-38e^3-1", r, tol.d_relative, 2))
            }),
        ),
        (
            "phi-concavity",
            Box::new(|_: &mut ChaCha8Rng| {
                let max = linspace(E, 20.0, 1000).map(phi_scaled_second_derivative).fold(f64::NEG_INFINITY, f64::max);
                Ok(Check::positive("phi-concavity", "R^-4 phi(R) is concave for R >= e", -max, 1000))
            }),
        ),
        (
            "d-certificate-positive",
            Box::new(|_: &mut ChaCha8Rng| {
                let mut min = f64::INFINITY;
                for n in 2..=50 {
                    for r in linspace(E, 10.0, 100) {
                        min = min.min(d_certificate(n, r)?);
                    }
                }
                Ok(Check::positive("d-certificate-positive", "D(n, R) > 0 for n >= 2, R >= e", min, 4900))
            }),
        ),
        (
            "d-certificate-forms",
            Box::new(move |_: &mut ChaCha8Rng| {
                let mut worst = 0.0f64;
                for r in linspace(E, 10.0, 100) {
                    for n in 2..=50 {
                        let d = d_certificate(n, r)?;
                        worst = worst.max(((d - d_certificate_expanded(n, r)) / d).abs());
                    }
                    let d2 = d_certificate(2, r)?;
                    worst = worst.max(((d2 - d_certificate_n2_factored(r)) / d2).abs());
                }
                Ok(Check::residual("d-certificate-forms", "D(n, R) expanded and n = 2 factored forms", worst, tol.d_relative, 5000))
            }),
        ),
        (
            "mode-coefficient-signs",
            Box::new(|_: &mut ChaCha8Rng| {
                let mut min = f64::INFINITY;
                for n in 2..=50 {
                    for r in linspace(E, 10.0, 50) {
                        let (a, _, c) = coeffs_abc(n, r)?;
                        min = min.min(a.signum()).min(-c.signum());
                    }
                }
                Ok(Check::positive("mode-coefficient-signs", "A_n > 0 and C_n < 0 for n >= 2, R >= e", min, 2450))
            }),
        ),
        (
            "weight-nonnegative",
            Box::new(|_: &mut ChaCha8Rng| {
                let mut min = f64::INFINITY;
                for r in linspace(1.01, 10.0, 40) {
                    for l in linspace(-1.0 + 1e-6, 1.0, 40) {
                        for frac in linspace(0.0, 1.0, 40) {
                            min = min.min(weight_re15(r, l, 1.0 + (r - 1.0) * frac));
                        }
                    }
                }
                // the weight vanishes at rho = R, so this is a nonnegativity check
                Ok(Check::residual("weight-nonnegative", "K-weight (R^2-lambda) log(R/rho) + (R^2-rho^2) lambda/rho^2 >= 0", (-min).max(0.0), 1e-12, 64000))
            }),
        ),
        (
            "bound-ordering",
            Box::new(|_: &mut ChaCha8Rng| {
                let min = linspace(1.01, 20.0, 1000)
                    .map(|r| (kalaj_bound(r) - weitsman_bound(r)).min(nitsche_bound(r) - kalaj_bound(r)))
                    .fold(f64::INFINITY, f64::min);
                Ok(Check::positive("bound-ordering", "weitsman < kalaj < nitsche on (1, 20]", min, 1000))
            }),
        ),
        (
            "critical-configuration",
            Box::new(move |_: &mut ChaCha8Rng| {
                let h1 = extremal_map(1.0)?;
                let mut worst = 0.0f64;
                for r in [1.5, E, max_outer()] {
                    worst = worst.max(theorem_gate(&h1, r)?.margin.abs());
                }
                Ok(Check::residual("critical-configuration", "critical map attains the Nitsche bound", worst, tol.critical_margin, 3))
            }),
        ),
        (
            "uniqueness-gap-order",
            Box::new(move |_: &mut ChaCha8Rng| {
                let rep = uniqueness_probe(2.0, 2, &log_space(1e-4, 1e-2, 9))?;
                let r = if rep.all_gaps_positive && rep.const_perturbation_leaves_class {
                    (rep.log_log_slope - 2.0).abs()
                } else {
                    f64::INFINITY
                };
                Ok(Check::residual("uniqueness-gap-order", "perturbing the critical map opens a second-order gap", r, tol.slope, 9))
            }),
        ),
    ]
}

fn schottky(ctx: &Ctx) -> Vec<(&'static str, CheckFn)> {
    let t = ctx.trials;
    let tol = ctx.tol;
    let cfg = ctx.cfg;
    vec![(
        "schottky-refinement",
        Box::new(move |rng: &mut ChaCha8Rng| {
            let mut worst = 0.0f64;
            let mut cases = 0;
            for _ in 0..t {
                let h = draw_near_conformal(rng)?;
                let probe = injectivity_probe(&h, 2.0, 24, &cfg)?;
                if !(probe.jacobian_min > 0.0 && probe.windings_ok) {
                    continue;
                }
                let rep = schottky_check(&h, 2.0, &cfg)?;
                if !rep.applicable {
                    return Err(Error::InternalInconsistency {
                        what: "near-conformal sample outside the conformal class",
                        first: rep.inner_deviation,
                        second: 1e-6,
                    });
                }
                cases += 1;
                worst = worst
                    .max((rep.outer - rep.r_star) / tol.schottky_radius)
                    .max((rep.area_target - rep.area_quadrature) / tol.schottky_area);
            }
            // residual in units of the respective tolerance
            Ok(Check::residual("schottky-refinement", "conformal maps do not shrink outer radius or area", worst.max(0.0), 1.0, cases))
        }) as CheckFn,
    )]
}

/// Runs `suite` with `trials` random cases per check.
pub fn run_suite(
    suite: Suite,
    seed: u64,
    trials: usize,
    tol: &Tolerances,
    cfg: &QuadratureConfig,
) -> Result<VerificationReport> {
    tol.validate()?;
    cfg.validate(0)?;
    if trials == 0 {
        return Ok(VerificationReport {
            suite,
            seed,
            trials,
            all_pass: true,
            checks: Vec::new(),
        });
    }
    // the check closures borrow a context that lives for the duration of the run
    let ctx: &Ctx = Box::leak(Box::new(Ctx {
        trials,
        tol: *tol,
        cfg: *cfg,
    }));
    let mut jobs: Vec<(&'static str, CheckFn)> = Vec::new();
    for (part, build) in [
        (Suite::Identities, identities as fn(&Ctx) -> Vec<(&'static str, CheckFn)>),
        (Suite::Subsolution, subsolution),
        (Suite::Kfunctional, kfunctional),
        (Suite::Certificates, certificates),
        (Suite::Schottky, schottky),
    ] {
        if suite.includes(part) {
            jobs.extend(build(ctx));
        }
    }
    let mut checks = jobs
        .par_iter()
        .map(|(name, job)| job(&mut stream_rng(seed, stream_id(name))))
        .collect::<Result<Vec<_>>>()?;
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(VerificationReport {
        suite,
        seed,
        trials,
        all_pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

/// Stable stream index for a check name (FNV-1a).
fn stream_id(name: &str) -> u64 {
    name.bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for name in Suite::NAMES {
            assert!(name.parse::<Suite>().is_ok());
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn zero_trials_is_empty() {
        let rep = run_suite(Suite::All, 1, 0, &Tolerances::default(), &QuadratureConfig::default()).unwrap();
        assert!(rep.checks.is_empty() && rep.all_pass);
    }

    #[test]
    fn certificates_pass() {
        let rep = run_suite(Suite::Certificates, 1, 1, &Tolerances::default(), &QuadratureConfig::default()).unwrap();
        assert!(rep.all_pass, "{rep:#?}");
        assert!(rep.checks.iter().any(|c| c.name == "phi-positive"));
        let names: Vec<_> = rep.checks.iter().map(|c| c.name.clone()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn small_run_is_deterministic_and_passes() {
        let tol = Tolerances::default();
        let cfg = QuadratureConfig::default();
        let a = run_suite(Suite::Identities, 7, 2, &tol, &cfg).unwrap();
        let b = run_suite(Suite::Identities, 7, 2, &tol, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.all_pass, "{a:#?}");
    }

    #[test]
    fn near_conformal_draws_hug_the_unit_circle() {
        let mut rng = stream_rng(3, 0);
        for _ in 0..5 {
            let h = draw_near_conformal(&mut rng).unwrap();
            let rep = schottky_check(&h, 2.0, &QuadratureConfig::default()).unwrap();
            assert!(rep.applicable, "{rep:?}");
        }
    }
}
