//! Truncated Laurent-log series of complex harmonic functions on round
//! annuli `A(1, R)`, with closed-form circular means, the radial operators
//! `L^lambda`, and numerical checks of the sharp lower bounds for the outer
//! mean radius of harmonic maps between annuli.
//!
//! A series is
//! `h(z) = a0 log|z| + b0 + sum_{0 < |n| <= N} (a[n] z^n + b[n] conj(z)^-n)`,
//! and every finite truncation is treated as the exact object under test.

pub mod bounds;
pub mod error;
pub mod means;
pub mod operators;
pub mod profile;
pub mod quadrature;
pub mod sampling;
pub mod series;
pub mod tolerances;
pub mod verify;

pub use bounds::{theorem_gate, BoundReport, Gate, Verdict};
pub use error::{Error, Result};
pub use means::{u_closed, u_mode, v_closed};
pub use operators::LambdaOperator;
pub use profile::{ProfileLabel, RadialProfile};
pub use quadrature::QuadratureConfig;
pub use sampling::SamplerConfig;
pub use series::{extremal_map, lambda_from_radii, Annulus, HarmonicSeries, PolarPoint};
pub use tolerances::Tolerances;
pub use verify::{run_suite, Suite, VerificationReport};
