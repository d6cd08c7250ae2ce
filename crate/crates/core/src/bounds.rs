//! Scalar lower bounds for the outer mean radius, their gate conditions,
//! positivity certificates, and the structured bound verdict.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::means::{initial_speed, is_class_d, is_class_n, lambda_from_speed, mean_outer_radius, u_closed, u_mode, v_closed};
use crate::operators::k_functional;
use crate::quadrature::{dirichlet_energy, try_circular_mean, QuadratureConfig};
use crate::sampling::perturb_extremal;
use crate::series::{extremal_map, HarmonicSeries, PolarPoint};

/// Largest modulus `log R` covered by the unconditional bound.
pub const MAX_MODULUS: f64 = 1.5;
/// Acceptance slack for a measured radius against its bound.
pub const GATE_TOL: f64 = 1e-9;
/// Largest `|U(1) - 1|` for a series to count as normalized at the inner circle.
pub const GATE_NORMALIZATION_TOL: f64 = 1e-10;

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

/// `(R + 1/R) / 2 = cosh(log R)`.
pub fn nitsche_bound(outer: f64) -> f64 {
    0.5 * (outer + 1.0 / outer)
}

/// `1 + log^2(R) / (2 R^2)`.
pub fn weitsman_bound(outer: f64) -> f64 {
    1.0 + 0.5 * (outer.ln() / outer).powi(2)
}

/// `1 + log^2(R) / 2`.
pub fn kalaj_bound(outer: f64) -> f64 {
    1.0 + 0.5 * outer.ln().powi(2)
}

/// `log R <= 3/2`, with a few ulps of slack so that `R = e^{3/2}` qualifies.
pub fn condition_modulus(outer: f64) -> bool {
    outer.ln() <= MAX_MODULUS * (1.0 + 4.0 * f64::EPSILON)
}

/// `R^2 - 1 - (R^2 - lambda) log R`; the argument for restricted moduli needs it nonnegative.
pub fn condition_ass2(outer: f64, lambda: f64) -> f64 {
    let r2 = outer * outer;
    r2 - 1.0 - (r2 - lambda) * outer.ln()
}

/// `(R^2 - lambda) log(R / rho) + (R^2 - rho^2) lambda / rho^2`.
pub fn weight_re15(outer: f64, lambda: f64, rho: f64) -> f64 {
    let r2 = outer * outer;
    let p2 = rho * rho;
    (r2 - lambda) * (outer / rho).ln() + (r2 - p2) * lambda / p2
}

/// `4R^2(R^2-3) log^2 R + 8R^2(R^2-1) log R - (R^2-1)(R^4-1)`.
pub fn phi(outer: f64) -> f64 {
    let r2 = outer * outer;
    let l = outer.ln();
    4.0 * r2 * (r2 - 3.0) * l * l + 8.0 * r2 * (r2 - 1.0) * l - (r2 - 1.0) * (r2 * r2 - 1.0)
}

/// Closed form of `d^2/dR^2 (R^-4 phi(R))`.
pub fn phi_scaled_second_derivative(outer: f64) -> f64 {
    let r2 = outer * outer;
    let l = outer.ln();
    -2.0 / outer.powi(6)
        * (4.0 * r2 * r2 * l + 36.0 * r2 * (l * l - l) + r2 * (r2 * r2 - 11.0) + 10.0)
}

/// Coefficients `(A_n, B_n, C_n)` of the per-mode quadratic form.
pub fn coeffs_abc(n: i64, outer: f64) -> Result<(f64, f64, f64)> {
    if n == 0 {
        return Err(Error::Index { index: 0, order: 0 });
    }
    let outer = check_outer(outer)?;
    let r2 = outer * outer;
    let nf = n as f64;
    let base = (r2 - 3.0) * (r2 + 1.0);
    let a = 4.0 * outer.powf(2.0 * nf + 2.0) + base - 4.0 * nf * (r2 * r2 - 1.0);
    let b = 4.0 * outer.powf(2.0 - 2.0 * nf) + base;
    let c = -(r2 - 1.0) * (2.0 * nf * (r2 + 1.0) - r2 - 3.0);
    Ok((a, b, c))
}

/// `D(n, R) = A_n (R^2 - 3)(R^2 + 1) - C_n^2`, defined for `n >= 2`.
pub fn d_certificate(n: i64, outer: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Index { index: n, order: 0 });
    }
    let (a, _, c) = coeffs_abc(n, outer)?;
    let r2 = outer * outer;
    Ok(a * (r2 - 3.0) * (r2 + 1.0) - c * c)
}

/// Expanded polynomial form of [`d_certificate`].
pub fn d_certificate_expanded(n: i64, outer: f64) -> f64 {
    let r2 = outer * outer;
    let nf = n as f64;
    let n2 = nf * nf;
    4.0 * (outer.powf(2.0 * nf + 2.0) * (r2 * r2 - 2.0 * r2 - 3.0) - n2 * r2.powi(4)
        + (4.0 * nf - 2.0) * r2.powi(3)
        + 2.0 * n2 * r2 * r2
        + (6.0 - 4.0 * nf) * r2
        - n2)
}

/// Factored form `4(R^2 - 1)(R^8 - 5R^6 - 2R^4 + 6R^2 + 4)` of `D(2, R)`.
pub fn d_certificate_n2_factored(outer: f64) -> f64 {
    let r2 = outer * outer;
    4.0 * (r2 - 1.0) * (r2.powi(4) - 5.0 * r2.powi(3) - 2.0 * r2 * r2 + 6.0 * r2 + 4.0)
}

/// `|K^1[U_n] - (R^2 - 1)(n - 1)|a_n + b_n|^2 - (A|a|^2 + B|b|^2 + 2C Re(a conj b)) / (2(R^2 + 1))|`.
pub fn per_mode_identity_p10(h: &HarmonicSeries, n: i64, outer: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let (lhs, rhs) = per_mode_sides(h, n, outer, cfg)?;
    Ok((lhs - rhs).abs())
}

/// Both sides of the per-mode identity.
pub fn per_mode_sides(h: &HarmonicSeries, n: i64, outer: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let (ca, cb, cc) = coeffs_abc(n, outer)?;
    let (a, b) = (h.a(n), h.b(n));
    let r2 = outer * outer;
    let k = k_functional(&u_mode(h, n)?, 1.0, outer, cfg)?;
    let lhs = k - (r2 - 1.0) * (n - 1) as f64 * (a + b).norm_sqr();
    let rhs = (ca * a.norm_sqr() + cb * b.norm_sqr() + 2.0 * cc * (a * b.conj()).re) / (2.0 * (r2 + 1.0));
    Ok((lhs, rhs))
}

/// `sum_{n != 0} (n - 1) |a_n + b_n|^2`.
pub fn boundary_mode_sum(h: &HarmonicSeries) -> f64 {
    h.modes().map(|(n, a, b)| (n - 1) as f64 * (a + b).norm_sqr()).sum()
}

/// Residual of `Re((1/i) mean h-bar h_theta) - mean |h|^2 + |mean h|^2 = sum (n-1)|a_n + b_n|^2` on `C_1`.
pub fn boundary_identity_smoothh(h: &HarmonicSeries, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate(h.order())?;
    let flux = try_circular_mean(
        |p| Ok(h.evaluate(p)?.conj() * h.derivatives(p)?.h_theta),
        1.0,
        cfg,
    )?;
    let sq = try_circular_mean(|p| Ok(Complex64::new(h.evaluate(p)?.norm_sqr(), 0.0)), 1.0, cfg)?;
    let mean = try_circular_mean(|p| h.evaluate(p), 1.0, cfg)?;
    let lhs = (flux / Complex64::i()).re - sq.re + mean.norm_sqr();
    Ok((lhs - boundary_mode_sum(h)).abs())
}

/// `(K^1[V], (R^2 - 1) sum (n - 1)|a_n + b_n|^2)` for `R > e`.
pub fn lemma_lvest_check(h: &HarmonicSeries, outer: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let outer = check_outer(outer)?;
    if outer <= std::f64::consts::E {
        return Err(Error::Precondition(format!("need R > e, got {outer}")));
    }
    let lhs = k_functional(&v_closed(h), 1.0, outer, cfg)?;
    let rhs = (outer * outer - 1.0) * boundary_mode_sum(h);
    Ok((lhs, rhs))
}

/// Comparison of a conformal series against the round annulus it is defined on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchottkyReport {
    pub outer: f64,
    pub applicable: bool,
    pub reason: Option<String>,
    /// Largest `||h| - 1|` over the nodes of `C_1`.
    pub inner_deviation: f64,
    pub r_star: f64,
    /// `sum_{n != 0} |a_n|^2 (R^{2n} - 1)`, compared with `R^2 - 1`.
    pub mode_sum: f64,
    /// Image area `\iint |h'|^2` by quadrature (half the Dirichlet energy).
    pub area_quadrature: f64,
    /// `pi sum n |a_n|^2 (R^{2n} - 1)`.
    pub area_closed: f64,
    pub area_target: f64,
    pub radius_ok: bool,
    pub area_ok: bool,
}

/// Largest `||h| - 1|` accepted on the inner circle.
pub const SCHOTTKY_INNER_TOL: f64 = 1e-6;
/// Slack for the area comparison.
pub const SCHOTTKY_AREA_TOL: f64 = 1e-6;

pub fn schottky_check(h: &HarmonicSeries, outer: f64, cfg: &QuadratureConfig) -> Result<SchottkyReport> {
    let outer = check_outer(outer)?;
    cfg.validate(h.order())?;
    let inner_deviation = (0..cfg.angular_nodes)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / cfg.angular_nodes as f64;
            Ok((h.evaluate(PolarPoint::new(1.0, theta)?)?.norm() - 1.0).abs())
        })
        .try_fold(0.0f64, |acc, d: Result<f64>| Ok::<f64, Error>(acc.max(d?)))?;
    let reason = if h.modes().any(|(_, _, b)| b != Complex64::new(0.0, 0.0)) {
        Some("series has anti-analytic terms".to_string())
    } else if h.log_coeff() != Complex64::new(0.0, 0.0) || h.const_term() != Complex64::new(0.0, 0.0) {
        Some("series has a log or constant term".to_string())
    } else if inner_deviation > SCHOTTKY_INNER_TOL {
        Some(format!("|h| deviates from 1 on the inner circle by {inner_deviation}"))
    } else {
        None
    };
    let r2 = outer * outer;
    let r_star = mean_outer_radius(h, outer);
    let mode_sum: f64 = h
        .modes()
        .map(|(n, a, _)| a.norm_sqr() * (outer.powi(2 * n as i32) - 1.0))
        .sum();
    let area_closed = PI
        * h.modes()
            .map(|(n, a, _)| n as f64 * a.norm_sqr() * (outer.powi(2 * n as i32) - 1.0))
            .sum::<f64>();
    let area_quadrature = 0.5 * dirichlet_energy(h, 1.0, outer, cfg)?;
    let area_target = PI * (r2 - 1.0);
    Ok(SchottkyReport {
        outer,
        applicable: reason.is_none(),
        reason,
        inner_deviation,
        r_star,
        mode_sum,
        area_quadrature,
        area_closed,
        area_target,
        radius_ok: r_star >= outer - GATE_TOL,
        area_ok: area_quadrature >= area_target - SCHOTTKY_AREA_TOL,
    })
}

/// Which hypothesis supplied the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gate {
    /// Zero inner mean with nonnegative initial speed: `(R^2 + lambda) / ((1 + lambda) R)`.
    InitialSpeed,
    /// Zero inner mean: the Nitsche bound.
    ZeroInnerMean,
    /// Zero mean normal derivative: the Nitsche bound.
    ZeroNormalMean,
    /// Modulus at most 3/2: the Nitsche bound.
    RestrictedModulus,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

/// Verdict of [`theorem_gate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub outer: f64,
    pub modulus: f64,
    pub class_d: bool,
    pub class_n: bool,
    /// `U(1)`, which must be 1 for any bound to apply.
    pub inner_quadratic_mean: f64,
    pub initial_speed: Option<f64>,
    pub lambda: Option<f64>,
    pub gate: Gate,
    pub nitsche: f64,
    pub bound: f64,
    pub measured: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

/// Chooses the sharpest applicable lower bound for the mean outer radius of
/// `h` on `A(1, R)` and compares it with the measured value.
pub fn theorem_gate(h: &HarmonicSeries, outer: f64) -> Result<BoundReport> {
    let outer = check_outer(outer)?;
    let nitsche = nitsche_bound(outer);
    let measured = mean_outer_radius(h, outer);
    let u1 = u_closed(h).value(1.0);
    let (class_d, class_n) = (is_class_d(h), is_class_n(h));
    let normalized = (u1 - 1.0).abs() <= GATE_NORMALIZATION_TOL;
    let speed = if u1 > 0.0 { Some(initial_speed(h)?) } else { None };
    let lambda = speed.and_then(|s| lambda_from_speed(s).ok());

    let (gate, bound) = if !normalized {
        (Gate::None, nitsche)
    } else if let (true, Some(l)) = (class_d, lambda) {
        (Gate::InitialSpeed, (outer * outer + l) / ((1.0 + l) * outer))
    } else if class_d {
        (Gate::ZeroInnerMean, nitsche)
    } else if class_n {
        (Gate::ZeroNormalMean, nitsche)
    } else if condition_modulus(outer) {
        (Gate::RestrictedModulus, nitsche)
    } else {
        (Gate::None, nitsche)
    };
    let margin = measured - bound;
    let verdict = match gate {
        Gate::None => Verdict::NotApplicable,
        _ if margin >= -GATE_TOL => Verdict::Pass,
        _ => Verdict::Fail,
    };
    Ok(BoundReport {
        outer,
        modulus: outer.ln(),
        class_d,
        class_n,
        inner_quadratic_mean: u1,
        initial_speed: speed,
        lambda: if gate == Gate::InitialSpeed { lambda } else { None },
        gate,
        nitsche,
        bound,
        measured,
        margin,
        verdict,
    })
}

/// One perturbation of the critical map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeSample {
    pub eps: f64,
    /// Mean outer radius minus the critical value `(R + 1/R) / 2`.
    pub gap: f64,
    /// Margin over the initial-speed bound.
    pub speed_margin: f64,
    pub class_d: bool,
}

/// Second-order behaviour of the critical configuration under perturbation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub outer: f64,
    pub mode: i64,
    /// Unperturbed gap; zero up to rounding.
    pub base_gap: f64,
    pub samples: Vec<ProbeSample>,
    /// Least-squares slope of `log gap` against `log eps`.
    pub log_log_slope: f64,
    pub all_gaps_positive: bool,
    /// Whether perturbing the constant term (without renormalizing) leaves the zero-inner-mean class.
    pub const_perturbation_leaves_class: bool,
}

/// Perturbs `h^1` by `eps z^mode` for each `eps`, renormalizes at the inner
/// circle and measures the gap above the critical outer radius.
pub fn uniqueness_probe(outer: f64, mode: i64, eps: &[f64]) -> Result<UniquenessReport> {
    let outer = check_outer(outer)?;
    if mode == 0 || mode == 1 {
        return Err(Error::Precondition(format!(
            "perturbation mode must differ from 0 and 1, got {mode}"
        )));
    }
    let critical = nitsche_bound(outer);
    let base_gap = mean_outer_radius(&extremal_map(1.0)?, outer) - critical;
    let mut samples = Vec::with_capacity(eps.len());
    for &e in eps {
        let h = perturb_extremal(1.0, mode, Complex64::new(e, 0.0), true)?;
        let report = theorem_gate(&h, outer)?;
        samples.push(ProbeSample {
            eps: e,
            gap: report.measured - critical,
            speed_margin: report.margin,
            class_d: report.class_d,
        });
    }
    let all_gaps_positive = samples.iter().all(|s| s.gap > 0.0);
    let log_log_slope = if all_gaps_positive && samples.len() >= 2 {
        fit_slope(samples.iter().map(|s| (s.eps.ln(), s.gap.ln())))
    } else {
        f64::NAN
    };
    let shifted = perturb_extremal(1.0, 0, Complex64::new(eps.first().copied().unwrap_or(1e-3), 0.0), false)?;
    Ok(UniquenessReport {
        outer,
        mode,
        base_gap,
        samples,
        log_log_slope,
        all_gaps_positive,
        const_perturbation_leaves_class: !is_class_d(&shifted),
    })
}

fn fit_slope(points: impl Iterator<Item = (f64, f64)>) -> f64 {
    let pts: Vec<_> = points.collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// `n` log-spaced values from `lo` to `hi`.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{normalize_prop71, random_series, SamplerConfig};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::E;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn scalar_bound_examples() {
        assert_eq!(nitsche_bound(2.0), 1.25);
        assert_abs_diff_eq!(nitsche_bound(1.0 + 1e-9), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(nitsche_bound(E), 1.5430806348152437785, epsilon = 1e-15);
        assert_abs_diff_eq!(nitsche_bound(E), 1f64.cosh(), epsilon = 1e-15);
        assert_abs_diff_eq!(kalaj_bound(E), 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(weitsman_bound(E), 1.0676676416183063459, epsilon = 1e-15);
        assert_abs_diff_eq!(kalaj_bound(1.0 + 1e-9), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(weitsman_bound(1.0 + 1e-9), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn bound_ordering() {
        for i in 1..=2000 {
            let r = 1.0 + 19.0 * i as f64 / 2000.0;
            let (w, k, n) = (weitsman_bound(r), kalaj_bound(r), nitsche_bound(r));
            assert!(w < k && k < n, "R = {r}: {w} {k} {n}");
        }
    }

    #[test]
    fn gate_conditions() {
        assert!(condition_modulus(E));
        assert!(condition_modulus(1.5f64.exp()));
        assert!(!condition_modulus(5.0));
        assert_abs_diff_eq!(condition_ass2(E, 1.0), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(condition_ass2(2.0, 0.0), 0.22741127776021876233, epsilon = 1e-15);
        assert_abs_diff_eq!(condition_ass2(1.5, 1.0), 0.74316861486479452253, epsilon = 1e-15);
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight_re15(2.0, 0.4, 2.0), 0.0);
        assert!(weight_re15(3.0, 0.0, 1.5) > 0.0);
        assert_abs_diff_eq!(weight_re15(2.0, 1.0, 1.5), 1.6408239951331205601, epsilon = 1e-15);
    }

    #[test]
    fn phi_values() {
        assert_relative_eq!(phi(E), 164.95509105845763109, max_relative = 1e-13);
        let e4 = 4f64.exp();
        assert_relative_eq!(phi(E), 13.0 * e4 - 6f64.exp() - 19.0 * 2f64.exp() - 1.0, max_relative = 1e-13);
        assert_relative_eq!(phi(1.5f64.exp()), 8.0991261836573155192, max_relative = 1e-10);
    }

    #[test]
    fn phi_concavity_closed_form_matches_differences() {
        let g = |r: f64| phi(r) / r.powi(4);
        for r in [E, 3.2, 1.5f64.exp(), 6.0] {
            let s = 1e-3;
            let fd = (g(r + s) - 2.0 * g(r) + g(r - s)) / (s * s);
            assert_relative_eq!(phi_scaled_second_derivative(r), fd, max_relative = 1e-5);
            assert!(phi_scaled_second_derivative(r) < 0.0);
        }
    }

    #[test]
    fn coefficient_examples() {
        let (a, b, c2) = coeffs_abc(2, E).unwrap();
        let r2 = E * E;
        assert!(a > 0.0 && b > 0.0 && c2 < 0.0);
        assert_relative_eq!(a * (r2 - 3.0) * (r2 + 1.0) - c2 * c2, d_certificate(2, E).unwrap());
        let (a30, _, _) = coeffs_abc(30, 2.0).unwrap();
        assert_relative_eq!(a30, 4.0 * 2f64.powi(62), max_relative = 1e-15);
        for n in 2..20 {
            for r in [E, 3.0, 5.0] {
                assert!(coeffs_abc(n, r).unwrap().2 < 0.0);
            }
        }
        assert!(coeffs_abc(0, 2.0).is_err());
        assert!(coeffs_abc(2, 1.0).is_err());
    }

    #[test]
    fn d_certificate_forms() {
        assert_relative_eq!(d_certificate(2, E).unwrap(), 23076.045364407379394, max_relative = 1e-13);
        assert_relative_eq!(d_certificate(5, 3.0).unwrap(), 126957824.0, max_relative = 1e-13);
        for r in [E, 3.5, 7.0, 10.0] {
            assert_relative_eq!(d_certificate(2, r).unwrap(), d_certificate_n2_factored(r), max_relative = 1e-12);
            for n in 2..=50 {
                let d = d_certificate(n, r).unwrap();
                assert_relative_eq!(d, d_certificate_expanded(n, r), max_relative = 1e-9);
            }
        }
        assert!(d_certificate(1, 3.0).is_err());
    }

    #[test]
    fn d_certificate_convex_increasing_in_n() {
        for r in [E, 3.0, 4.5] {
            let d: Vec<f64> = (2..=30).map(|n| d_certificate(n, r).unwrap()).collect();
            for w in d.windows(3) {
                assert!(w[1] > w[0]);
                assert!(w[2] - 2.0 * w[1] + w[0] > 0.0);
            }
        }
    }

    #[test]
    fn per_mode_identity() {
        let cfg = QuadratureConfig::default();
        let h = HarmonicSeries::zero(3).with_a(3, c(0.3, 0.2)).with_b(3, c(-0.1, 0.25));
        let (lhs, rhs) = per_mode_sides(&h, 3, E, &cfg).unwrap();
        assert_relative_eq!(lhs, 87.240917549400100734, max_relative = 1e-10);
        assert_relative_eq!(rhs, 87.240917549400100734, max_relative = 1e-12);
        let zero = HarmonicSeries::zero(4);
        assert_eq!(per_mode_identity_p10(&zero, 2, E, &cfg).unwrap(), 0.0);
        let h = HarmonicSeries::zero(1).with_a(1, c(0.7, 0.1)).with_b(1, c(0.2, -0.3));
        assert!(per_mode_identity_p10(&h, 1, 2.5, &cfg).unwrap() < 1e-9);
        let h = HarmonicSeries::zero(2).with_a(-2, c(0.7, 0.1)).with_b(-2, c(0.2, -0.3));
        assert!(per_mode_identity_p10(&h, -2, 2.5, &cfg).unwrap() < 1e-9);
    }

    #[test]
    fn boundary_identity() {
        let cfg = QuadratureConfig::default();
        assert!(boundary_identity_smoothh(&HarmonicSeries::identity(), &cfg).unwrap() < 1e-15);
        assert!(boundary_identity_smoothh(&extremal_map(1.0).unwrap(), &cfg).unwrap() < 1e-15);
        for seed in 0..20 {
            let h = random_series(&SamplerConfig::new(seed, 7).with_log(true).with_const(true)).unwrap();
            assert!(boundary_identity_smoothh(&h, &cfg).unwrap() < 1e-12);
        }
    }

    #[test]
    fn lvest_examples() {
        let cfg = QuadratureConfig::default();
        let (l, r) = lemma_lvest_check(&extremal_map(1.0).unwrap(), 3.0, &cfg).unwrap();
        assert_abs_diff_eq!(l, 0.0, epsilon = 1e-10);
        assert_eq!(r, 0.0);
        let single = HarmonicSeries::zero(1).with_a(1, c(0.3, 0.4)).with_b(1, c(0.1, 0.0));
        let (l, r) = lemma_lvest_check(&single, 3.0, &cfg).unwrap();
        assert!(l >= r - 1e-6);
        assert!(lemma_lvest_check(&single, 2.0, &cfg).is_err());
    }

    #[test]
    fn schottky_examples() {
        let cfg = QuadratureConfig::default();
        let rot = HarmonicSeries::identity().scale_rotate(Complex64::from_polar(1.0, 1.1));
        let rep = schottky_check(&rot, 2.0, &cfg).unwrap();
        assert!(rep.applicable && rep.radius_ok && rep.area_ok);
        assert_abs_diff_eq!(rep.r_star, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rep.area_quadrature, 3.0 * PI, epsilon = 1e-9);
        assert_abs_diff_eq!(rep.mode_sum, 3.0, epsilon = 1e-14);

        let z2 = HarmonicSeries::zero(2).with_a(2, c(1.0, 0.0));
        let rep = schottky_check(&z2, 2.0, &cfg).unwrap();
        assert!(rep.applicable && rep.r_star > 2.0 && rep.area_quadrature > rep.area_target);
        assert_abs_diff_eq!(rep.area_quadrature, rep.area_closed, epsilon = 1e-9);

        let rep = schottky_check(&HarmonicSeries::identity().with_a(2, c(0.1, 0.0)), 2.0, &cfg).unwrap();
        assert!(!rep.applicable);
        let rep = schottky_check(&extremal_map(0.5).unwrap(), 2.0, &cfg).unwrap();
        assert!(!rep.applicable);
    }

    #[test]
    fn gate_examples() {
        let rep = theorem_gate(&extremal_map(1.0).unwrap(), 2.0).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert_eq!(rep.bound, 1.25);
        assert_abs_diff_eq!(rep.margin, 0.0, epsilon = 1e-15);

        let rep = theorem_gate(&extremal_map(0.6).unwrap(), 3.0).unwrap();
        assert_eq!((rep.gate, rep.verdict), (Gate::InitialSpeed, Verdict::Pass));
        assert_abs_diff_eq!(rep.bound, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rep.measured, 2.0, epsilon = 1e-14);

        let rep = theorem_gate(&HarmonicSeries::identity(), 5.0).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert_eq!(rep.nitsche, 2.6);
        assert_eq!(rep.measured, 5.0);

        // normalized, but neither class holds and the modulus exceeds 3/2
        let h = normalize_prop71(&HarmonicSeries::identity().with_log(c(0.2, 0.0)))
            .unwrap()
            .with_const(c(0.1, 0.0));
        let h = h.scale_rotate(c(1.0 / u_closed(&h).value(1.0).sqrt(), 0.0));
        let rep = theorem_gate(&h, 5.0).unwrap();
        assert_eq!((rep.gate, rep.verdict), (Gate::None, Verdict::NotApplicable));
        let rep = theorem_gate(&h, 2.0).unwrap();
        assert_eq!(rep.gate, Gate::RestrictedModulus);

        let rep = theorem_gate(&HarmonicSeries::identity().scale_rotate(c(2.0, 0.0)), 2.0).unwrap();
        assert_eq!(rep.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn gate_equality_for_rotated_extremals() {
        for lambda in [-0.7, 0.0, 0.45, 1.0] {
            let h = extremal_map(lambda).unwrap().scale_rotate(Complex64::from_polar(1.0, -2.0));
            for r in [1.5, E, 4.0] {
                let rep = theorem_gate(&h, r).unwrap();
                assert!(rep.margin.abs() < 1e-12, "lambda {lambda} R {r}: {}", rep.margin);
            }
        }
    }

    #[test]
    fn uniqueness_probe_gap_is_second_order() {
        let rep = uniqueness_probe(2.0, 2, &log_space(1e-4, 1e-2, 9)).unwrap();
        assert!(rep.base_gap.abs() < 1e-15);
        assert!(rep.all_gaps_positive);
        assert!((rep.log_log_slope - 2.0).abs() < 0.1, "slope {}", rep.log_log_slope);
        assert!(rep.const_perturbation_leaves_class);
        assert!(rep.samples.iter().all(|s| s.class_d && s.speed_margin >= -1e-12));
        assert!(uniqueness_probe(2.0, 1, &[1e-3]).is_err());
    }

    #[test]
    fn log_space_endpoints() {
        let v = log_space(1e-4, 1e-2, 3);
        assert_relative_eq!(v[1], 1e-3, max_relative = 1e-14);
        assert_relative_eq!(v[2], 1e-2, max_relative = 1e-14);
    }
}
