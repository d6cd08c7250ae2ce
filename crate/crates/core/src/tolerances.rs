//! Pass/fail thresholds used by the verification suites.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// `|L^lambda[U(h^lambda)]|`.
    pub annihilation: f64,
    /// Absolute residual of the two `L^lambda[U]` mean identities.
    pub identity: f64,
    /// `|K quadrature - K endpoint| / (1 + |K endpoint|)`.
    pub k_relative: f64,
    /// `|K^lambda[U(h^lambda)]|`.
    pub k_extremal: f64,
    /// Allowed negativity of `L^lambda[V]`.
    pub subsolution: f64,
    /// `|L^lambda[V]|` on the equality family.
    pub equality: f64,
    /// Allowed shortfall of the mean radius below the initial-speed bound.
    pub bound: f64,
    /// `|mean radius - bound|` for rotated extremal maps.
    pub bound_equality: f64,
    /// Per-mode quadratic form residual.
    pub per_mode: f64,
    /// Allowed shortfall in the variance functional inequality.
    pub lvest: f64,
    /// Inner boundary identity residual.
    pub boundary: f64,
    /// `|enclosed area near C_1 - pi|`.
    pub area_limit: f64,
    /// Allowed shortfall of the conformal outer radius below `R`.
    pub schottky_radius: f64,
    /// Allowed shortfall of the conformal image area below `pi (R^2 - 1)`.
    pub schottky_area: f64,
    /// Margin of the critical map against the Nitsche bound.
    pub critical_margin: f64,
    /// Relative agreement of the certificate's closed forms.
    pub d_relative: f64,
    /// Relative residual of the energy identity.
    pub energy_relative: f64,
    /// Closed-form means against quadrature.
    pub oracle: f64,
    /// `|log-log slope - 2|` of the uniqueness gap.
    pub slope: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            annihilation: 1e-9,
            identity: 1e-9,
            k_relative: 1e-6,
            k_extremal: 1e-8,
            subsolution: 1e-10,
            equality: 1e-11,
            bound: 1e-10,
            bound_equality: 1e-12,
            per_mode: 1e-6,
            lvest: 1e-6,
            boundary: 1e-10,
            area_limit: 1e-8,
            schottky_radius: 1e-9,
            schottky_area: 1e-6,
            critical_margin: 1e-12,
            d_relative: 1e-6,
            energy_relative: 1e-8,
            oracle: 1e-12,
            slope: 0.1,
        }
    }
}

impl Tolerances {
    /// Every threshold must be a positive finite number.
    pub fn validate(&self) -> crate::Result<()> {
        let all = serde_json::to_value(self)?;
        for (name, v) in all.as_object().into_iter().flatten() {
            let x = v.as_f64().unwrap_or(f64::NAN);
            if !(x.is_finite() && x > 0.0) {
                return Err(crate::Error::Precondition(format!(
                    "tolerance {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_round_trip() {
        let t = Tolerances::default();
        t.validate().unwrap();
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<Tolerances>(&text).unwrap(), t);
        let partial: Tolerances = serde_json::from_str(r#"{"identity": 1e-7}"#).unwrap();
        assert_eq!(partial.identity, 1e-7);
        assert_eq!(partial.k_relative, 1e-6);
    }

    #[test]
    fn rejects_nonpositive() {
        let t = Tolerances {
            bound: 0.0,
            ..Tolerances::default()
        };
        assert!(t.validate().is_err());
        assert!(serde_json::from_str::<Tolerances>(r#"{"nope": 1}"#).is_err());
    }
}
