use harmonic_annulus::bounds::{kalaj_bound, nitsche_bound, weight_re15, weitsman_bound};
use harmonic_annulus::means::{inner_mean, CLASS_TOL};
use harmonic_annulus::quadrature::quadratic_mean_numeric;
use harmonic_annulus::sampling::normalize_prop71;
use harmonic_annulus::{u_closed, v_closed, HarmonicSeries, PolarPoint, QuadratureConfig};
use num_complex::Complex64;
use proptest::prelude::*;

fn coeff(scale: f64) -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(move |(re, im)| Complex64::new(re * scale, im * scale))
}

/// Series of order 1..=6 with `|coef| <= 0.6^|n|` and log and constant terms.
fn series() -> impl Strategy<Value = HarmonicSeries> {
    (1usize..=6).prop_flat_map(|order| {
        let modes = (1..=order as i64)
            .flat_map(|n| [n, -n])
            .map(|n| (Just(n), coeff(0.6f64.powi(n.abs() as i32)), coeff(0.6f64.powi(n.abs() as i32))))
            .collect::<Vec<_>>();
        (modes, coeff(1.0), coeff(1.0)).prop_map(move |(modes, a0, b0)| {
            modes
                .into_iter()
                .fold(HarmonicSeries::zero(order), |h, (n, a, b)| h.with_a(n, a).with_b(n, b))
                .with_log(a0)
                .with_const(b0)
        })
    })
}

fn point() -> impl Strategy<Value = PolarPoint> {
    (1.05..2.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| PolarPoint::new(r, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn wirtinger_derivatives_agree_with_polar(h in series(), p in point()) {
        let d = h.derivatives(p).unwrap();
        let e = Complex64::from_polar(1.0, p.theta());
        let z = p.to_complex();
        let rho = e * d.h_z + e.conj() * d.h_zbar;
        let theta = Complex64::i() * (z * d.h_z - z.conj() * d.h_zbar);
        let scale = 1.0 + d.h_z.norm() + d.h_zbar.norm();
        prop_assert!((rho - d.h_rho).norm() < 1e-12 * scale);
        prop_assert!((theta - d.h_theta).norm() < 1e-12 * scale * p.rho());
    }

    #[test]
    fn discrete_laplacian_vanishes(h in series(), p in point()) {
        let step = 1e-3;
        let z = p.to_complex();
        let at = |dz: Complex64| {
            let w = z + dz;
            h.evaluate(PolarPoint::new(w.norm(), w.arg()).unwrap()).unwrap()
        };
        let lap = (at(Complex64::new(step, 0.0)) + at(Complex64::new(-step, 0.0))
            + at(Complex64::new(0.0, step)) + at(Complex64::new(0.0, -step))
            - 4.0 * at(Complex64::new(0.0, 0.0))) / (step * step);
        prop_assert!(lap.norm() < 1e-3, "laplacian {}", lap.norm());
    }

    #[test]
    fn closed_quadratic_mean_matches_quadrature(h in series(), rho in 1.0..2.0f64) {
        let closed = u_closed(&h).value(rho);
        let numeric = quadratic_mean_numeric(&h, rho, &QuadratureConfig::for_series(&h)).unwrap();
        prop_assert!((closed - numeric).abs() <= 1e-12 * closed.max(1.0));
        prop_assert!(v_closed(&h).value(rho) <= closed * (1.0 + 1e-14));
        prop_assert!(v_closed(&h).value(rho) >= -1e-14 * closed);
    }

    #[test]
    fn rotation_scales_quadratic_mean(h in series(), alpha in coeff(2.0), rho in 1.0..3.0f64) {
        let u = u_closed(&h).value(rho);
        let scaled = u_closed(&h.scale_rotate(alpha)).value(rho);
        prop_assert!((scaled - alpha.norm_sqr() * u).abs() <= 1e-12 * (1.0 + scaled));
    }

    #[test]
    fn normalization_centres_and_scales(h in series()) {
        prop_assume!(v_closed(&h).value(1.0) > 1e-6);
        let n = normalize_prop71(&h).unwrap();
        prop_assert!(inner_mean(&n).norm() <= CLASS_TOL);
        prop_assert!((u_closed(&n).value(1.0) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn json_round_trip_is_exact(h in series()) {
        let text = h.to_json().unwrap();
        let back = HarmonicSeries::from_json(&text).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn bounds_are_ordered(outer in 1.001..50.0f64) {
        prop_assert!(weitsman_bound(outer) < kalaj_bound(outer));
        prop_assert!(kalaj_bound(outer) < nitsche_bound(outer));
        prop_assert!(nitsche_bound(outer) < outer);
    }

    #[test]
    fn k_weight_is_nonnegative(outer in 1.001..10.0f64, lambda in -0.999..=1.0f64, frac in 0.0..=1.0f64) {
        let rho = 1.0 + (outer - 1.0) * frac;
        prop_assert!(weight_re15(outer, lambda, rho) >= -1e-12 * outer * outer);
    }
}
