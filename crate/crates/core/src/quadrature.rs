//! Integration over circles `C_rho` and over radial intervals.
//!
//! The angular rule is the equal-spaced trapezoid, exact for trigonometric
//! polynomials of degree below the node count, so means of products of modes
//! of a truncated series are computed exactly up to rounding. Radial integrals
//! use composite Gauss-Legendre panels on a cosine-clustered map of the
//! interval, refined until two successive levels agree.

use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{HarmonicSeries, PolarPoint};

const PANEL_ORDER: usize = 8;
const MIN_PANELS: usize = 4;
const MAX_REFINEMENTS: usize = 12;
const MIN_RADIAL_NODES: usize = 32;

/// Node counts and refinement policy for circle and radial quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    /// Angular trapezoid nodes `M` per circle.
    pub angular_nodes: usize,
    /// Radial Gauss nodes `K` per unit of `log rho`.
    pub radial_nodes: usize,
    /// Panel multiplier between refinement levels.
    pub refinement: usize,
    /// Relative agreement required between successive refinement levels.
    pub rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            angular_nodes: 256,
            radial_nodes: 64,
            refinement: 2,
            rel_tol: 1e-9,
        }
    }
}

impl QuadratureConfig {
    /// Default configuration with enough angular nodes for a series of order `order`.
    pub fn for_order(order: usize) -> Self {
        let mut cfg = Self::default();
        cfg.angular_nodes = cfg.angular_nodes.max(4 * order + 8);
        cfg
    }

    pub fn for_series(h: &HarmonicSeries) -> Self {
        Self::for_order(h.order())
    }

    /// Checks the node-count invariants for series up to order `order`.
    pub fn validate(&self, order: usize) -> Result<()> {
        if self.angular_nodes < 4 * order + 4 {
            return Err(Error::Precondition(format!(
                "angular nodes {} < 4N + 4 = {} for N = {order}",
                self.angular_nodes,
                4 * order + 4
            )));
        }
        if self.radial_nodes < MIN_RADIAL_NODES {
            return Err(Error::Precondition(format!(
                "radial nodes {} < {MIN_RADIAL_NODES}",
                self.radial_nodes
            )));
        }
        if self.refinement < 2 {
            return Err(Error::Precondition("refinement factor must be at least 2".into()));
        }
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(Error::Precondition("rel_tol must be positive".into()));
        }
        Ok(())
    }
}

fn circle_nodes(rho: f64, m: usize) -> Result<impl Iterator<Item = PolarPoint>> {
    // validates rho once; theta values are already in [0, 2 pi)
    PolarPoint::new(rho, 0.0)?;
    let m = m.max(1);
    Ok((0..m).map(move |k| {
        PolarPoint::new(rho, TAU * k as f64 / m as f64).expect("validated radius")
    }))
}

/// Normalized mean of `f` over `C_rho` by the `M`-point trapezoid.
pub fn circular_mean<F>(f: F, rho: f64, cfg: &QuadratureConfig) -> Result<Complex64>
where
    F: Fn(PolarPoint) -> Complex64,
{
    try_circular_mean(|p| Ok(f(p)), rho, cfg)
}

/// [`circular_mean`] for a fallible integrand.
pub fn try_circular_mean<F>(f: F, rho: f64, cfg: &QuadratureConfig) -> Result<Complex64>
where
    F: Fn(PolarPoint) -> Result<Complex64>,
{
    let m = cfg.angular_nodes.max(1);
    let mut sum = Complex64::new(0.0, 0.0);
    for p in circle_nodes(rho, m)? {
        sum += f(p)?;
    }
    Ok(sum / m as f64)
}

/// Mean of a real integrand over `C_rho`.
pub fn try_real_mean<F>(f: F, rho: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(PolarPoint) -> Result<f64>,
{
    let m = cfg.angular_nodes.max(1);
    let mut sum = 0.0;
    for p in circle_nodes(rho, m)? {
        sum += f(p)?;
    }
    Ok(sum / m as f64)
}

/// `U(rho)` by quadrature of `|h|^2` over `C_rho`.
pub fn quadratic_mean_numeric(h: &HarmonicSeries, rho: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate(h.order())?;
    let mean = try_circular_mean(|p| Ok(Complex64::new(h.evaluate(p)?.norm_sqr(), 0.0)), rho, cfg)?;
    debug_assert!(mean.im.abs() <= 1e-14 * mean.re.abs().max(1.0));
    Ok(mean.re)
}

/// Mean of `||Dh||^2` over `C_rho`.
pub fn mean_grad_norm_sq(h: &HarmonicSeries, rho: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate(h.order())?;
    try_real_mean(|p| h.grad_norm_sq(p), rho, cfg)
}

/// Mean of the Jacobian determinant over `C_rho`.
pub fn mean_jacobian(h: &HarmonicSeries, rho: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate(h.order())?;
    try_real_mean(|p| h.jacobian(p), rho, cfg)
}

/// Largest distance to an integer accepted for a winding integral.
pub const WINDING_INTEGER_TOL: f64 = 1e-6;
/// Smallest `|h|` on the nodes for which the winding integral is attempted.
pub const WINDING_MIN_MODULUS: f64 = 1e-9;

/// Winding number of `h(C_rho)` about the origin, `(1 / 2 pi i) \oint dh / h`.
pub fn winding_number(h: &HarmonicSeries, rho: f64, cfg: &QuadratureConfig) -> Result<i64> {
    cfg.validate(h.order())?;
    let mut min_modulus = f64::INFINITY;
    let mut sum = Complex64::new(0.0, 0.0);
    let m = cfg.angular_nodes;
    for p in circle_nodes(rho, m)? {
        let value = h.evaluate(p)?;
        min_modulus = min_modulus.min(value.norm());
        if min_modulus <= WINDING_MIN_MODULUS {
            return Err(Error::ZeroOnCircle { rho, min_modulus });
        }
        sum += h.derivatives(p)?.h_theta / value;
    }
    // mean of h_theta / h equals i * winding
    let winding = (sum / m as f64).im;
    let nearest = winding.round();
    if (winding - nearest).abs() < WINDING_INTEGER_TOL {
        Ok(nearest as i64)
    } else {
        Err(Error::NonInteger { value: winding })
    }
}

/// Area enclosed by the image curve `h(C_rho)`: `pi * mean(Im(conj(h) h_theta))`.
pub fn enclosed_area(h: &HarmonicSeries, rho: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate(h.order())?;
    let mean = try_real_mean(
        |p| {
            let v = h.evaluate(p)?;
            Ok((v.conj() * h.derivatives(p)?.h_theta).im)
        },
        rho,
        cfg,
    )?;
    Ok(PI * mean)
}

/// Dirichlet energy `\iint ||Dh||^2` over `A(rho1, rho2)`.
pub fn dirichlet_energy(
    h: &HarmonicSeries,
    rho1: f64,
    rho2: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate(h.order())?;
    if !(rho1 > 0.0 && rho1 < rho2) {
        return Err(Error::Precondition(format!(
            "need 0 < rho1 < rho2, got {rho1}, {rho2}"
        )));
    }
    try_radial_integrate(
        |rho| Ok(TAU * rho * try_real_mean(|p| h.grad_norm_sq(p), rho, cfg)?),
        rho1,
        rho2,
        cfg,
    )
}

/// Composite Gauss-Legendre integral of `g` over `[a, b]` with refinement.
pub fn radial_integrate<G>(g: G, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    try_radial_integrate(|x| Ok(g(x)), a, b, cfg)
}

/// [`radial_integrate`] for a fallible integrand.
pub fn try_radial_integrate<G>(g: G, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    try_radial_integrate_scaled(
        |x| {
            let v = g(x)?;
            Ok((v, v.abs()))
        },
        a,
        b,
        cfg,
    )
}

/// Radial integral of an integrand returning `(value, scale)`.
///
/// Refinement stops once successive levels agree to `rel_tol` times the
/// integral of `scale`; integrands that cancel to roundoff should report the
/// size of their parts as `scale`.
pub fn try_radial_integrate_scaled<G>(g: G, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    G: Fn(f64) -> Result<(f64, f64)>,
{
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Precondition(format!("need finite a < b, got [{a}, {b}]")));
    }
    if cfg.refinement < 2 {
        return Err(Error::Precondition("refinement factor must be at least 2".into()));
    }
    let rule = GaussLegendre::new(NonZeroUsize::new(PANEL_ORDER).expect("nonzero"));
    let length = if a > 0.0 { (b / a).ln() } else { b - a };
    let mut panels = MIN_PANELS
        .max((cfg.radial_nodes as f64 * length / PANEL_ORDER as f64).ceil() as usize);
    let (mut coarse, _) = composite(&g, a, b, panels, &rule)?;
    for _ in 0..MAX_REFINEMENTS {
        panels *= cfg.refinement;
        let (fine, magnitude) = composite(&g, a, b, panels, &rule)?;
        if !fine.is_finite() {
            return Err(Error::NumericOverflow("radial integrand"));
        }
        if (fine - coarse).abs() <= cfg.rel_tol * magnitude.max(f64::MIN_POSITIVE) {
            return Ok(fine);
        }
        coarse = fine;
    }
    let (fine, _) = composite(&g, a, b, panels * cfg.refinement, &rule)?;
    Err(Error::Nonconvergence { coarse, fine })
}

/// Returns `(integral of value, integral of scale)`.
///
/// Integrates in `u` over `[0, 1]` with `x = a + (b - a)(1 - cos(pi u)) / 2`,
/// which clusters nodes at both endpoints.
fn composite<G>(g: &G, a: f64, b: f64, panels: usize, rule: &GaussLegendre) -> Result<(f64, f64)>
where
    G: Fn(f64) -> Result<(f64, f64)>,
{
    let half = 0.5 * (b - a);
    let width = 1.0 / panels as f64;
    let mut sum = 0.0;
    let mut magnitude = 0.0;
    for k in 0..panels {
        let u0 = k as f64 * width;
        for (node, weight) in rule.as_node_weight_pairs() {
            let u = u0 + 0.5 * width * (node + 1.0);
            let (s, c) = (PI * u).sin_cos();
            let x = a + half * (1.0 - c);
            let w = half * PI * s * weight * 0.5 * width;
            let (value, scale) = g(x)?;
            sum += value * w;
            magnitude += scale.abs() * w;
        }
    }
    Ok((sum, magnitude))
}
