//! The radial operators `L^lambda`, their integral identities, and the
//! weighted functional `K^lambda`.

use crate::error::{Error, Result};
use crate::means::{initial_speed, is_class_d, lambda_from_speed, u_closed, v_closed, CLASS_TOL};
use crate::profile::RadialProfile;
use crate::quadrature::{try_radial_integrate_scaled, try_real_mean, QuadratureConfig};
use crate::series::{check_lambda, HarmonicSeries};

/// Largest `|U(1) - 1|` accepted as the inner-circle normalization.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// `L^lambda = d^2 + (3 lambda - rho^2) / (rho (rho^2 + lambda)) d - 8 lambda / (rho^2 + lambda)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaOperator {
    lambda: f64,
}

impl LambdaOperator {
    pub fn new(lambda: f64) -> Result<Self> {
        Ok(Self {
            lambda: check_lambda(lambda)?,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn shifted(&self, rho: f64) -> Result<f64> {
        let s = rho * rho + self.lambda;
        if rho > 0.0 && s > 0.0 {
            Ok(s)
        } else {
            Err(Error::SingularPoint {
                rho,
                lambda: self.lambda,
            })
        }
    }

    /// `(first-order coefficient, zeroth-order coefficient)` at `rho`.
    pub fn coefficients(&self, rho: f64) -> Result<(f64, f64)> {
        let s = self.shifted(rho)?;
        let l = self.lambda;
        Ok(((3.0 * l - rho * rho) / (rho * s), -8.0 * l / (s * s)))
    }

    /// `L^lambda[P](rho)` from the analytic derivatives of `P`.
    pub fn apply(&self, p: &RadialProfile, rho: f64) -> Result<f64> {
        Ok(self.apply_with_scale(p, rho)?.0)
    }

    /// `L^lambda[P](rho)` together with the sum of the absolute values of its three terms.
    pub fn apply_with_scale(&self, p: &RadialProfile, rho: f64) -> Result<(f64, f64)> {
        let (c1, c0) = self.coefficients(rho)?;
        let (v, d1, d2) = p.eval_all(rho);
        let terms = [d2, c1 * d1, c0 * v];
        Ok((terms.iter().sum(), terms.iter().map(|t| t.abs()).sum()))
    }

    /// Divergence form `((rho^2 + lambda) / rho^3) (rho^3 (P / (rho^2 + lambda))')'`
    /// by nested central differences of width `step`.
    pub fn apply_divergence_fd(&self, p: &RadialProfile, rho: f64, step: f64) -> Result<f64> {
        if !(step > 0.0 && rho - 2.0 * step > 0.0) {
            return Err(Error::Precondition(format!(
                "step {step} must be positive and smaller than rho / 2 = {}",
                rho / 2.0
            )));
        }
        let q = |x: f64| -> Result<f64> { Ok(p.value(x) / self.shifted(x)?) };
        let flux = |x: f64| -> Result<f64> {
            Ok(x.powi(3) * (q(x + step)? - q(x - step)?) / (2.0 * step))
        };
        let outer = (flux(rho + step)? - flux(rho - step)?) / (2.0 * step);
        Ok(self.shifted(rho)? / rho.powi(3) * outer)
    }
}

/// `L^lambda[P](rho)`.
pub fn l_apply(op: &LambdaOperator, p: &RadialProfile, rho: f64) -> Result<f64> {
    op.apply(p, rho)
}

/// `|divergence form by finite differences - L^lambda[P]|`; `O(step^2)`.
pub fn l_divergence_check(op: &LambdaOperator, p: &RadialProfile, rho: f64, step: f64) -> Result<f64> {
    Ok((op.apply_divergence_fd(p, rho, step)? - op.apply(p, rho)?).abs())
}

/// Residual of `L^lambda[U] = 2 mean[||Dh||^2 - (1/rho) d/drho(w |h|^2)]`,
/// `w = (rho^2 - lambda) / (rho^2 + lambda)`.
pub fn identity_uc3_residual(
    h: &HarmonicSeries,
    lambda: f64,
    rho: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let op = LambdaOperator::new(lambda)?;
    cfg.validate(h.order())?;
    let lhs = op.apply(&u_closed(h), rho)?;
    let s = op.shifted(rho)?;
    let w = (rho * rho - lambda) / s;
    let dw = 4.0 * lambda * rho / (s * s);
    let rhs = 2.0
        * try_real_mean(
            |p| {
                let v = h.evaluate(p)?;
                let d = h.derivatives(p)?;
                let flux = dw * v.norm_sqr() + 2.0 * w * (v.conj() * d.h_rho).re;
                Ok(h.grad_norm_sq(p)? - flux / rho)
            },
            rho,
            cfg,
        )?;
    Ok((lhs - rhs).abs())
}

/// Residual of
/// `L^lambda[U] = (2 / rho^2) mean[|h_theta|^2 - |h|^2 + (rho^2 + lambda)^2 |d/drho(rho h / (rho^2 + lambda))|^2]`.
pub fn identity_uc4_residual(
    h: &HarmonicSeries,
    lambda: f64,
    rho: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let op = LambdaOperator::new(lambda)?;
    cfg.validate(h.order())?;
    let lhs = op.apply(&u_closed(h), rho)?;
    let s = op.shifted(rho)?;
    let mean = try_real_mean(
        |p| {
            let v = h.evaluate(p)?;
            let d = h.derivatives(p)?;
            let g = d.h_rho * (rho / s) - v * ((rho * rho - lambda) / (s * s));
            Ok(d.h_theta.norm_sqr() - v.norm_sqr() + s * s * g.norm_sqr())
        },
        rho,
        cfg,
    )?;
    let rhs = 2.0 * mean / (rho * rho);
    Ok((lhs - rhs).abs())
}

/// Weight `rho (R^2 - rho^2) / (rho^2 + lambda)` of the functional `K^lambda`.
pub fn k_weight(outer: f64, lambda: f64, rho: f64) -> f64 {
    rho * (outer * outer - rho * rho) / (rho * rho + lambda)
}

fn check_outer(outer: f64) -> Result<f64> {
    if outer.is_finite() && outer > 1.0 {
        Ok(outer)
    } else {
        Err(Error::ParameterDomain {
            name: "R",
            value: outer,
            domain: "(1, inf)",
        })
    }
}

/// `K^lambda[P] = int_1^R k_weight L^lambda[P] drho` by radial quadrature.
pub fn k_functional(p: &RadialProfile, lambda: f64, outer: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let op = LambdaOperator::new(lambda)?;
    let outer = check_outer(outer)?;
    try_radial_integrate_scaled(
        |rho| {
            let w = k_weight(outer, lambda, rho);
            let (value, scale) = op.apply_with_scale(p, rho)?;
            Ok((w * value, w.abs() * scale))
        },
        1.0,
        outer,
        cfg,
    )
}

/// Endpoint evaluation of `K^lambda[P]`:
/// `2R^2/(R^2+lambda) P(R) - 2(lambda R^2 + 1)/(1+lambda)^2 P(1) - (R^2-1)/(1+lambda) P'(1)`.
pub fn k_endpoint_profile(p: &RadialProfile, lambda: f64, outer: f64) -> Result<f64> {
    let l = check_lambda(lambda)?;
    let r2 = check_outer(outer)?.powi(2);
    let (u1, du1, _) = p.eval_all(1.0);
    let ur = p.value(outer);
    Ok(2.0 * r2 / (r2 + l) * ur
        - 2.0 * (l * r2 + 1.0) / (1.0 + l).powi(2) * u1
        - (r2 - 1.0) / (1.0 + l) * du1)
}

/// `K^lambda[U]` by quadrature.
pub fn k_quadrature(h: &HarmonicSeries, lambda: f64, outer: f64, cfg: &QuadratureConfig) -> Result<f64> {
    k_functional(&u_closed(h), lambda, outer, cfg)
}

/// `K^lambda[U]` from the endpoint values of `U`.
pub fn k_endpoint(h: &HarmonicSeries, lambda: f64, outer: f64) -> Result<f64> {
    k_endpoint_profile(&u_closed(h), lambda, outer)
}

/// Minimum of `L^lambda[V]` over `grid`.
pub fn variance_subsolution_min(h: &HarmonicSeries, lambda: f64, grid: &[f64]) -> Result<f64> {
    let op = LambdaOperator::new(lambda)?;
    let v = v_closed(h);
    grid.iter()
        .try_fold(f64::INFINITY, |acc, &rho| Ok(acc.min(op.apply(&v, rho)?)))
}

/// `L^lambda[V] - (2 / rho^2) sum_{n != 0} (n^2 - 1) U_n`; the dropped term is a
/// mean of squares, so this is nonnegative.
pub fn variance_chain_gap(h: &HarmonicSeries, lambda: f64, rho: f64) -> Result<f64> {
    let op = LambdaOperator::new(lambda)?;
    let lv = op.apply(&v_closed(h), rho)?;
    let lower: f64 = h
        .mode_indices()
        .map(|n| ((n * n - 1) as f64) * h.mode_amplitude(n, rho).norm_sqr())
        .sum();
    Ok(lv - 2.0 * lower / (rho * rho))
}

/// `(sqrt(U(s)), (s^2 + lambda) / ((1 + lambda) s))` for a series normalized by
/// `b0 = 0`, `U(1) = 1`, with `lambda` taken from its initial speed.
pub fn mean0_bound_check(h: &HarmonicSeries, s: f64) -> Result<(f64, f64)> {
    if !(s.is_finite() && s >= 1.0) {
        return Err(Error::ParameterDomain {
            name: "s",
            value: s,
            domain: "[1, inf)",
        });
    }
    let u = u_closed(h);
    let u1 = u.value(1.0);
    if !is_class_d(h) || (u1 - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Precondition(format!(
            "series must satisfy b0 = 0 and U(1) = 1 (|b0| = {}, U(1) = {u1})",
            h.const_term().norm()
        )));
    }
    debug_assert!(h.const_term().norm() <= CLASS_TOL);
    let lambda = lambda_from_speed(initial_speed(h)?)?;
    let lhs = u.value(s).max(0.0).sqrt();
    let rhs = (s * s + lambda) / ((1.0 + lambda) * s);
    Ok((lhs, rhs))
}
