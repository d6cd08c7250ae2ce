//! Closed-form radial profiles: finite sums of `c * rho^p * (log rho)^k`.

use serde::Serialize;

/// One term `coeff * rho^power * (log rho)^log_power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLogTerm {
    pub coeff: f64,
    pub power: f64,
    pub log_power: u32,
}

impl PowerLogTerm {
    pub fn new(coeff: f64, power: f64, log_power: u32) -> Self {
        Self {
            coeff,
            power,
            log_power,
        }
    }

    /// `(value, first derivative, second derivative)` at `rho`.
    fn eval(&self, rho: f64) -> (f64, f64, f64) {
        let (c, p, k) = (self.coeff, self.power, self.log_power as i32);
        let l = rho.ln();
        // L^j with L^(negative) treated as 0; powi(0) == 1 even for L == 0
        let lp = |j: i32| if j < 0 { 0.0 } else { l.powi(j) };
        let kf = f64::from(k);
        let base = rho.powf(p);
        let v = c * base * lp(k);
        let d1 = c * base / rho * (p * lp(k) + kf * lp(k - 1));
        let d2 = c * base / (rho * rho)
            * (p * (p - 1.0) * lp(k) + kf * (2.0 * p - 1.0) * lp(k - 1) + kf * (kf - 1.0) * lp(k - 2));
        (v, d1, d2)
    }
}

/// Which mean a profile represents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ProfileLabel {
    QuadraticMean,
    Variance,
    Mode(i64),
    Custom(String),
}

/// A real function of `rho > 0` with analytic first and second derivatives.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub label: ProfileLabel,
    terms: Vec<PowerLogTerm>,
}

impl RadialProfile {
    pub fn new(label: ProfileLabel, terms: Vec<PowerLogTerm>) -> Self {
        Self { label, terms }
    }

    /// `coeff * rho^power`.
    pub fn power(coeff: f64, power: f64) -> Self {
        Self::new(
            ProfileLabel::Custom(format!("{coeff} rho^{power}")),
            vec![PowerLogTerm::new(coeff, power, 0)],
        )
    }

    pub fn constant(value: f64) -> Self {
        Self::new(
            ProfileLabel::Custom(format!("{value}")),
            vec![PowerLogTerm::new(value, 0.0, 0)],
        )
    }

    pub fn terms(&self) -> &[PowerLogTerm] {
        &self.terms
    }

    /// Sum of two profiles, relabelled.
    #[must_use]
    pub fn plus(&self, other: &Self, label: ProfileLabel) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self { label, terms }
    }

    #[must_use]
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            label: self.label.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| PowerLogTerm::new(t.coeff * factor, t.power, t.log_power))
                .collect(),
        }
    }

    pub fn eval_all(&self, rho: f64) -> (f64, f64, f64) {
        self.terms.iter().fold((0.0, 0.0, 0.0), |acc, t| {
            let (v, d1, d2) = t.eval(rho);
            (acc.0 + v, acc.1 + d1, acc.2 + d2)
        })
    }

    pub fn value(&self, rho: f64) -> f64 {
        self.eval_all(rho).0
    }

    pub fn deriv1(&self, rho: f64) -> f64 {
        self.eval_all(rho).1
    }

    pub fn deriv2(&self, rho: f64) -> f64 {
        self.eval_all(rho).2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn derivatives_match_finite_differences() {
        let p = RadialProfile::new(
            ProfileLabel::Custom("mixed".into()),
            vec![
                PowerLogTerm::new(0.7, 3.0, 0),
                PowerLogTerm::new(-1.2, -2.0, 0),
                PowerLogTerm::new(0.4, 0.0, 2),
                PowerLogTerm::new(-0.9, 0.0, 1),
                PowerLogTerm::new(0.25, 1.5, 2),
                PowerLogTerm::new(2.0, 0.0, 0),
            ],
        );
        for rho in [0.6, 1.0, 1.3, 2.9] {
            let h = 1e-4;
            let fd1 = (p.value(rho + h) - p.value(rho - h)) / (2.0 * h);
            let fd2 = (p.value(rho + h) - 2.0 * p.value(rho) + p.value(rho - h)) / (h * h);
            assert_relative_eq!(p.deriv1(rho), fd1, max_relative = 1e-7, epsilon = 1e-8);
            assert_relative_eq!(p.deriv2(rho), fd2, max_relative = 1e-5, epsilon = 1e-6);
        }
    }

    #[test]
    fn log_terms_at_unit_radius() {
        // log^2 rho: value 0, slope 0, curvature 2 at rho = 1
        let p = RadialProfile::new(ProfileLabel::Custom("log2".into()), vec![PowerLogTerm::new(1.0, 0.0, 2)]);
        assert_eq!(p.eval_all(1.0), (0.0, 0.0, 2.0));
    }
}
