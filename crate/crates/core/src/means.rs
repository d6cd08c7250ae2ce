//! Closed-form circular means of a harmonic series.
//!
//! By orthogonality of the modes on every circle, the quadratic mean splits
//! as `U = sum_n U_n` with `U_n = |a[n] rho^n + b[n] rho^-n|^2` and
//! `U_0 = |a0 log rho + b0|^2`; the variance is the part with `n != 0`.

use crate::error::{Error, Result};
use crate::profile::{PowerLogTerm, ProfileLabel, RadialProfile};
use crate::series::HarmonicSeries;

/// Tolerance on `|b0|` and `|a0|` for the class predicates.
pub const CLASS_TOL: f64 = 1e-12;

fn mode_terms(h: &HarmonicSeries, n: i64) -> Vec<PowerLogTerm> {
    if n == 0 {
        let (a0, b0) = (h.log_coeff(), h.const_term());
        return vec![
            PowerLogTerm::new(a0.norm_sqr(), 0.0, 2),
            PowerLogTerm::new(2.0 * (a0 * b0.conj()).re, 0.0, 1),
            PowerLogTerm::new(b0.norm_sqr(), 0.0, 0),
        ];
    }
    let (a, b) = (h.a(n), h.b(n));
    let p = 2.0 * n as f64;
    vec![
        PowerLogTerm::new(a.norm_sqr(), p, 0),
        PowerLogTerm::new(b.norm_sqr(), -p, 0),
        PowerLogTerm::new(2.0 * (a * b.conj()).re, 0.0, 0),
    ]
}

/// Quadratic mean `U_n` of the single mode `h_n`.
pub fn u_mode(h: &HarmonicSeries, n: i64) -> Result<RadialProfile> {
    if n.unsigned_abs() as usize > h.order() {
        return Err(Error::Index {
            index: n,
            order: h.order(),
        });
    }
    Ok(RadialProfile::new(ProfileLabel::Mode(n), mode_terms(h, n)))
}

/// Quadratic mean `U(rho) = mean over C_rho of |h|^2`.
pub fn u_closed(h: &HarmonicSeries) -> RadialProfile {
    let mut terms = mode_terms(h, 0);
    for n in h.mode_indices() {
        terms.extend(mode_terms(h, n));
    }
    RadialProfile::new(ProfileLabel::QuadraticMean, terms)
}

/// Variance `V = U - |mean h|^2 = sum_{n != 0} U_n`.
pub fn v_closed(h: &HarmonicSeries) -> RadialProfile {
    let terms = h.mode_indices().flat_map(|n| mode_terms(h, n)).collect();
    RadialProfile::new(ProfileLabel::Variance, terms)
}

/// Termwise second derivative of the variance,
/// `(2 / rho^2) sum [n(2n-1)|a_n|^2 rho^2n + n(2n+1)|b_n|^2 rho^-2n]`.
pub fn variance_second_derivative(h: &HarmonicSeries, rho: f64) -> f64 {
    let sum: f64 = h
        .modes()
        .map(|(n, a, b)| {
            let nf = n as f64;
            let p = rho.powi(2 * n as i32);
            nf * (2.0 * nf - 1.0) * a.norm_sqr() * p + nf * (2.0 * nf + 1.0) * b.norm_sqr() / p
        })
        .sum();
    2.0 * sum / (rho * rho)
}

/// `(1/rho) d/drho (rho P')`, the radial Laplacian of a profile.
pub fn radial_laplacian(p: &RadialProfile, rho: f64) -> f64 {
    let (_, d1, d2) = p.eval_all(rho);
    d2 + d1 / rho
}

/// Limit of the circular means of `h` at the inner circle: `b0`.
pub fn inner_mean(h: &HarmonicSeries) -> num_complex::Complex64 {
    h.const_term()
}

/// Limit of the circular means of `h_rho` at the inner circle: `a0`.
pub fn normal_mean_coeff(h: &HarmonicSeries) -> num_complex::Complex64 {
    h.log_coeff()
}

/// Vanishing average on the inner circle.
pub fn is_class_d(h: &HarmonicSeries) -> bool {
    h.const_term().norm() <= CLASS_TOL
}

/// Vanishing average of the normal derivative.
pub fn is_class_n(h: &HarmonicSeries) -> bool {
    h.log_coeff().norm() <= CLASS_TOL
}

/// Speed of the evolution of circles at the inner circle,
/// `d/drho sqrt(U)` at `rho = 1`, i.e. `U'(1) / (2 sqrt(U(1)))`.
pub fn initial_speed(h: &HarmonicSeries) -> Result<f64> {
    let (u, du, _) = u_closed(h).eval_all(1.0);
    if u <= 0.0 {
        return Err(Error::Degenerate("U(1) = 0, inner circle collapses".into()));
    }
    Ok(du / (2.0 * u.sqrt()))
}

/// Extremal parameter matching an initial speed `s >= 0`: `lambda = (1 - s) / (1 + s)`.
pub fn lambda_from_speed(speed: f64) -> Result<f64> {
    if !(speed.is_finite() && speed >= 0.0) {
        return Err(Error::OutOfClass(format!(
            "initial speed {speed} is negative; the evolution must start with nonnegative speed"
        )));
    }
    crate::series::check_lambda((1.0 - speed) / (1.0 + speed))
}

/// Mean outer radius `sqrt(U(R))`.
pub fn mean_outer_radius(h: &HarmonicSeries, outer: f64) -> f64 {
    u_closed(h).value(outer).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{quadratic_mean_numeric, QuadratureConfig};
    use crate::sampling::{random_series, SamplerConfig};
    use crate::series::{extremal_map, lambda_from_radii};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn u_mode_examples() {
        let h1 = extremal_map(1.0).unwrap();
        let u1 = u_mode(&h1, 1).unwrap();
        for rho in [1.0f64, 1.4, 3.0] {
            let expect = ((rho * rho + 1.0) / (2.0 * rho)).powi(2);
            assert_abs_diff_eq!(u1.value(rho), expect, epsilon = 1e-14);
        }
        let k = HarmonicSeries::constant(c(0.6, -0.8));
        let u0 = u_mode(&k, 0).unwrap();
        for rho in [0.5, 1.0, 7.0] {
            assert_abs_diff_eq!(u0.value(rho), 1.0, epsilon = 1e-15);
            assert_eq!(u0.deriv1(rho), 0.0);
        }
        assert!(matches!(u_mode(&h1, 2), Err(Error::Index { .. })));
    }

    #[test]
    fn u_mode_matches_quadrature_of_single_mode() {
        let h = random_series(&SamplerConfig::new(11, 6)).unwrap();
        let cfg = QuadratureConfig::for_series(&h);
        for n in h.mode_indices() {
            let single = HarmonicSeries::zero(h.order()).with_a(n, h.a(n)).with_b(n, h.b(n));
            for rho in [1.0, 1.6, 2.2] {
                let q = quadratic_mean_numeric(&single, rho, &cfg).unwrap();
                let u = u_mode(&h, n).unwrap().value(rho);
                assert!((q - u).abs() <= 1e-13 * u.max(1.0), "n={n} rho={rho}: {q} vs {u}");
            }
        }
    }

    #[test]
    fn u_closed_examples() {
        let id = u_closed(&HarmonicSeries::identity());
        assert_abs_diff_eq!(id.value(2.5), 6.25, epsilon = 1e-14);
        for lambda in [-0.7, 0.2, 0.8] {
            let u = u_closed(&extremal_map(lambda).unwrap());
            for rho in [1.0f64, 1.9, 3.3] {
                let expect = ((rho * rho + lambda) / ((1.0 + lambda) * rho)).powi(2);
                assert_abs_diff_eq!(u.value(rho), expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn v_closed_examples() {
        let k = HarmonicSeries::constant(c(2.0, 1.0)).with_log(c(0.3, 0.0));
        let v = v_closed(&k);
        assert_eq!(v.eval_all(1.7), (0.0, 0.0, 0.0));
        let h1 = extremal_map(1.0).unwrap();
        for rho in [1.0, 2.0] {
            assert_eq!(v_closed(&h1).eval_all(rho), u_closed(&h1).eval_all(rho));
        }
        let h = random_series(&SamplerConfig::new(3, 5)).unwrap();
        for rho in [1.0, 1.5, 4.0] {
            assert!(v_closed(&h).deriv2(rho) > 0.0);
            let mean = h.mode_amplitude(0, rho).norm_sqr();
            assert_abs_diff_eq!(
                v_closed(&h).value(rho),
                u_closed(&h).value(rho) - mean,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn variance_second_derivative_termwise_agrees() {
        for seed in 0..20 {
            let h = random_series(&SamplerConfig::new(seed, 8)).unwrap();
            for rho in [1.0, 1.3, 2.0, 3.1] {
                let generic = v_closed(&h).deriv2(rho);
                let termwise = variance_second_derivative(&h, rho);
                assert!((generic - termwise).abs() <= 1e-12 * generic.abs().max(1.0));
            }
        }
    }

    #[test]
    fn inner_limits_and_classes() {
        let h1 = extremal_map(1.0).unwrap();
        assert_eq!((inner_mean(&h1), normal_mean_coeff(&h1)), (c(0.0, 0.0), c(0.0, 0.0)));
        let h = HarmonicSeries::identity().with_const(c(2.0, 1.0));
        assert_eq!(inner_mean(&h), c(2.0, 1.0));

        assert!(is_class_d(&h1) && is_class_n(&h1));
        let zlog = HarmonicSeries::identity().with_log(c(1.0, 0.0));
        assert_eq!((is_class_d(&zlog), is_class_n(&zlog)), (true, false));
        let zone = HarmonicSeries::identity().with_const(c(1.0, 0.0));
        assert_eq!((is_class_d(&zone), is_class_n(&zone)), (false, true));
    }

    #[test]
    fn inner_mean_is_the_limit_of_circular_means() {
        let cfg = QuadratureConfig::default();
        let h = random_series(&SamplerConfig::new(5, 4)).unwrap();
        for eps in [1e-2, 1e-4, 1e-6, 1e-8] {
            let m = crate::quadrature::try_circular_mean(|p| h.evaluate(p), 1.0 + eps, &cfg).unwrap();
            let err = (m - inner_mean(&h)).norm();
            assert!(err <= 2.0 * eps + 1e-15, "eps {eps}: {err}");
        }
    }

    #[test]
    fn initial_speed_examples() {
        for lambda in [-0.5, 0.0, 0.3, 1.0] {
            let s = initial_speed(&extremal_map(lambda).unwrap()).unwrap();
            assert_abs_diff_eq!(s, (1.0 - lambda) / (1.0 + lambda), epsilon = 1e-14);
        }
        assert_abs_diff_eq!(initial_speed(&HarmonicSeries::identity()).unwrap(), 1.0);
        assert!(matches!(
            initial_speed(&HarmonicSeries::zero(2)),
            Err(Error::Degenerate(_))
        ));
        assert!(lambda_from_speed(-0.1).is_err());
        assert_abs_diff_eq!(lambda_from_speed(0.0).unwrap(), 1.0);
    }

    #[test]
    fn mean_outer_radius_examples() {
        let h1 = extremal_map(1.0).unwrap();
        assert_abs_diff_eq!(mean_outer_radius(&h1, 2.0), 1.25, epsilon = 1e-15);
        assert_abs_diff_eq!(mean_outer_radius(&HarmonicSeries::identity(), 3.7), 3.7, epsilon = 1e-14);
        assert_abs_diff_eq!(mean_outer_radius(&extremal_map(0.6).unwrap(), 3.0), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn extremal_radius_inverts_lambda_from_radii() {
        for (r, lambda) in [(2.0, 1.0), (3.0, 0.6), (1.5, -0.4), (4.0, 0.05)] {
            let r_star = mean_outer_radius(&extremal_map(lambda).unwrap(), r);
            assert_abs_diff_eq!(lambda_from_radii(r, r_star).unwrap(), lambda, epsilon = 1e-12);
        }
    }
}
