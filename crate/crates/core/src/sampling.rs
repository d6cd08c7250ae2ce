//! Seeded random series, inner-circle normalization, perturbations of the
//! extremal maps and a heuristic injectivity probe.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::means::u_closed;
use crate::quadrature::{winding_number, QuadratureConfig};
use crate::series::{extremal_map, HarmonicSeries, PolarPoint};

/// Parameters of [`random_series`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Largest mode index `N`.
    pub n_max: usize,
    /// Geometric bound on coefficient magnitudes: `|a[n]|, |b[n]| <= decay^|n|`.
    pub decay: f64,
    pub include_log: bool,
    pub include_const: bool,
}

impl SamplerConfig {
    pub const DEFAULT_DECAY: f64 = 0.6;

    pub fn new(seed: u64, n_max: usize) -> Self {
        Self {
            seed,
            n_max,
            decay: Self::DEFAULT_DECAY,
            include_log: false,
            include_const: false,
        }
    }

    #[must_use]
    pub fn with_decay(mut self, decay: f64) -> Self {
        self.decay = decay;
        self
    }

    #[must_use]
    pub fn with_log(mut self, on: bool) -> Self {
        self.include_log = on;
        self
    }

    #[must_use]
    pub fn with_const(mut self, on: bool) -> Self {
        self.include_const = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return Err(Error::ParameterDomain {
                name: "decay",
                value: self.decay,
                domain: "(0, 1)",
            });
        }
        if self.n_max == 0 {
            return Err(Error::Precondition("sampler needs N >= 1".into()));
        }
        Ok(())
    }
}

/// Deterministic generator for `(seed, stream)`; distinct streams are
/// independent, so parallel test cases can each take their own.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Complex number with modulus uniform in `[0, radius]` and uniform phase.
pub fn random_coefficient<R: RngExt + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.random_range(0.0..=1.0);
    Complex64::from_polar(r, rng.random_range(0.0..TAU))
}

/// Random series drawn from `rng` under the bounds of `cfg` (its seed is ignored).
pub fn random_series_from<R: RngExt + ?Sized>(rng: &mut R, cfg: &SamplerConfig) -> Result<HarmonicSeries> {
    cfg.validate()?;
    let mut h = HarmonicSeries::zero(cfg.n_max);
    let n = cfg.n_max as i64;
    for k in (-n..=n).filter(|&k| k != 0) {
        let radius = cfg.decay.powi(k.unsigned_abs() as i32);
        let a = random_coefficient(rng, radius);
        let b = random_coefficient(rng, radius);
        h = h.with_a(k, a).with_b(k, b);
    }
    if cfg.include_log {
        h = h.with_log(random_coefficient(rng, 1.0));
    }
    if cfg.include_const {
        h = h.with_const(random_coefficient(rng, 1.0));
    }
    Ok(h)
}

/// Random series, deterministic in `cfg`.
pub fn random_series(cfg: &SamplerConfig) -> Result<HarmonicSeries> {
    random_series_from(&mut stream_rng(cfg.seed, 0), cfg)
}

/// Sets `b0 = 0` and rescales so that `U(1) = 1`.
pub fn normalize_prop71(h: &HarmonicSeries) -> Result<HarmonicSeries> {
    let centered = h.clone().with_const(Complex64::new(0.0, 0.0));
    let u1 = u_closed(&centered).value(1.0);
    if !(u1.is_finite() && u1 > 0.0) {
        return Err(Error::Degenerate(format!(
            "U(1) = {u1} after removing the constant term"
        )));
    }
    Ok(centered.scale_rotate(Complex64::new(1.0 / u1.sqrt(), 0.0)))
}

/// `h^lambda` with `eps` added to `a[n]` (to `b0` for `n = 0`), optionally renormalized.
pub fn perturb_extremal(lambda: f64, n: i64, eps: Complex64, renormalize: bool) -> Result<HarmonicSeries> {
    let base = extremal_map(lambda)?;
    let h = if n == 0 {
        base.with_const(eps)
    } else {
        let current = base.a(n);
        base.with_a(n, current + eps)
    };
    if renormalize {
        normalize_prop71(&h)
    } else {
        Ok(h)
    }
}

/// `b0 + a0 log|z| + (alpha / (1 + lambda))(z + lambda / conj z) + (beta / (1 + lambda)) conj(z + lambda / conj z)`,
/// the series whose variance is annihilated by `L^lambda`.
pub fn equality_family(
    lambda: f64,
    a0: Complex64,
    b0: Complex64,
    alpha: Complex64,
    beta: Complex64,
) -> Result<HarmonicSeries> {
    let hl = extremal_map(lambda)?;
    let (a1, b1) = (hl.a(1), hl.b(1));
    // conj(z) is the z-bar^{1} term of mode -1; conj(lambda / conj z) = lambda / z is its z^{-1} term
    Ok(hl
        .scale_rotate(alpha)
        .with_a(-1, beta * b1)
        .with_b(-1, beta * a1)
        .with_log(a0)
        .with_const(b0))
}

/// Outcome of [`injectivity_probe`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InjectivityProbe {
    pub jacobian_min: f64,
    pub windings_ok: bool,
}

/// Samples the Jacobian on a `density x 4 density` polar grid of `A(1, R)`
/// (both boundary circles included) and the winding number on each grid circle.
pub fn injectivity_probe(
    h: &HarmonicSeries,
    outer: f64,
    density: usize,
    cfg: &QuadratureConfig,
) -> Result<InjectivityProbe> {
    if !(outer > 1.0) || density < 2 {
        return Err(Error::Precondition(format!(
            "need R > 1 and density >= 2, got R = {outer}, density = {density}"
        )));
    }
    let angles = 4 * density;
    let mut jacobian_min = f64::INFINITY;
    let mut windings_ok = true;
    for i in 0..density {
        let rho = 1.0 + (outer - 1.0) * i as f64 / (density - 1) as f64;
        for k in 0..angles {
            let p = PolarPoint::new(rho, TAU * k as f64 / angles as f64)?;
            jacobian_min = jacobian_min.min(h.jacobian(p)?);
        }
        windings_ok &= matches!(winding_number(h, rho, cfg), Ok(1));
    }
    Ok(InjectivityProbe {
        jacobian_min,
        windings_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::means::{is_class_d, u_mode, v_closed};
    use crate::quadrature::{circular_mean, quadratic_mean_numeric};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn deterministic_and_seed_dependent() {
        let cfg = SamplerConfig::new(42, 6).with_log(true).with_const(true);
        let a = random_series(&cfg).unwrap();
        let b = random_series(&cfg).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        let other = random_series(&SamplerConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn streams_differ() {
        let cfg = SamplerConfig::new(1, 3);
        let a = random_series_from(&mut stream_rng(1, 0), &cfg).unwrap();
        let b = random_series_from(&mut stream_rng(1, 1), &cfg).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, random_series(&cfg).unwrap());
    }

    #[test]
    fn magnitudes_respect_decay() {
        let cfg = SamplerConfig::new(7, 10).with_decay(0.5);
        for seed in 0..20 {
            let h = random_series(&SamplerConfig { seed, ..cfg }).unwrap();
            for (n, a, b) in h.modes() {
                let bound = 0.5f64.powi(n.unsigned_abs() as i32);
                assert!(a.norm() <= bound * (1.0 + 1e-15) && b.norm() <= bound * (1.0 + 1e-15));
            }
            assert!(h.a(10).norm() <= 2f64.powi(-10));
            assert_eq!(h.log_coeff(), c(0.0, 0.0));
        }
    }

    #[test]
    fn config_validation() {
        assert!(random_series(&SamplerConfig::new(1, 0)).is_err());
        assert!(random_series(&SamplerConfig::new(1, 2).with_decay(1.0)).is_err());
        assert!(random_series(&SamplerConfig::new(1, 2).with_decay(0.0)).is_err());
    }

    #[test]
    fn normalization() {
        let h1 = extremal_map(1.0).unwrap();
        let n1 = normalize_prop71(&h1).unwrap();
        for (n, a, b) in n1.modes() {
            assert_abs_diff_eq!((a - h1.a(n)).norm(), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!((b - h1.b(n)).norm(), 0.0, epsilon = 1e-15);
        }
        let two_z = HarmonicSeries::identity().scale_rotate(c(2.0, 0.0));
        assert_eq!(normalize_prop71(&two_z).unwrap().a(1), c(1.0, 0.0));

        let cfg = QuadratureConfig::default();
        for seed in 0..10 {
            let h = random_series(&SamplerConfig::new(seed, 5).with_log(true).with_const(true)).unwrap();
            let n = normalize_prop71(&h).unwrap();
            assert!(is_class_d(&n));
            assert_abs_diff_eq!(u_closed(&n).value(1.0), 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(quadratic_mean_numeric(&n, 1.0, &cfg).unwrap(), 1.0, epsilon = 1e-13);
            let mean = circular_mean(|p| n.evaluate(p).unwrap(), 1.0, &cfg).unwrap();
            assert!(mean.norm() < 1e-14);
        }
        assert!(matches!(
            normalize_prop71(&HarmonicSeries::constant(c(1.0, 0.0))),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn perturbations() {
        assert_eq!(perturb_extremal(0.4, 2, c(0.0, 0.0), false).unwrap().a(1), extremal_map(0.4).unwrap().a(1));
        let p = perturb_extremal(1.0, 2, c(1e-3, 0.0), true).unwrap();
        assert!(is_class_d(&p));
        assert_abs_diff_eq!(u_closed(&p).value(1.0), 1.0, epsilon = 1e-15);
        let q = perturb_extremal(1.0, 0, c(1e-3, 0.0), false).unwrap();
        assert!(!is_class_d(&q));
    }

    #[test]
    fn equality_family_variance() {
        let lambda = 0.3;
        let h = equality_family(lambda, c(0.5, 0.0), c(1.0, 1.0), c(0.0, 1.0), c(0.4, 0.0)).unwrap();
        // the variance is a multiple of the extremal quadratic mean
        let v = v_closed(&h);
        let base = u_mode(&extremal_map(lambda).unwrap(), 1).unwrap();
        let ratio = v.value(1.0) / base.value(1.0);
        for rho in [1.2, 2.0, 3.5] {
            assert_abs_diff_eq!(v.value(rho), ratio * base.value(rho), epsilon = 1e-13);
        }
    }

    #[test]
    fn injectivity_examples() {
        let cfg = QuadratureConfig::default();
        let p = injectivity_probe(&extremal_map(0.5).unwrap(), 2.0, 16, &cfg).unwrap();
        assert!(p.jacobian_min > 0.0 && p.windings_ok);
        let p = injectivity_probe(&extremal_map(1.0).unwrap(), 2.0, 16, &cfg).unwrap();
        assert!(p.jacobian_min.abs() < 1e-15 && p.windings_ok);
        let reflection = HarmonicSeries::zero(1).with_b(-1, c(1.0, 0.0));
        let p = injectivity_probe(&reflection, 2.0, 8, &cfg).unwrap();
        assert!(!p.windings_ok && p.jacobian_min < 0.0);
    }
}
