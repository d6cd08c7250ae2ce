//! Truncated Laurent-log series of complex harmonic functions on an annulus.
//!
//! A harmonic function on `A(1, R)` is stored through its orthogonal
//! decomposition
//!
//! ```text
//! h(z) = a0 log|z| + b0 + sum_{0 < |n| <= N} (a[n] z^n + b[n] conj(z)^(-n))
//! ```
//!
//! On the circle `|z| = rho` the `n`-th mode is `(a[n] rho^n + b[n] rho^-n) e^{i n theta}`,
//! so every mode is a pure angular frequency and the modes are orthogonal on
//! each circle. The truncated series is treated as the exact object: all the
//! mean-value identities downstream are linear or quadratic in the modes.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible extremal parameter; keeps `1 / (1 + lambda)` bounded.
pub const LAMBDA_FLOOR: f64 = -1.0 + 1e-9;

/// Relative agreement required between the two algebraic forms of the
/// Jacobian and of the Hilbert-Schmidt norm.
pub const WIRTINGER_REL_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn check_lambda(lambda: f64) -> Result<f64> {
    if lambda.is_finite() && lambda > LAMBDA_FLOOR && lambda <= 1.0 {
        Ok(lambda)
    } else {
        Err(Error::ParameterDomain {
            name: "lambda",
            value: lambda,
            domain: "(-1, 1]",
        })
    }
}

/// Round annulus `A(1, R)`; the inner radius is fixed at one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus {
    outer: f64,
}

impl Annulus {
    pub fn new(outer: f64) -> Result<Self> {
        if outer.is_finite() && outer > 1.0 {
            Ok(Self { outer })
        } else {
            Err(Error::ParameterDomain {
                name: "R",
                value: outer,
                domain: "(1, inf)",
            })
        }
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    /// Conformal modulus `log R`.
    pub fn modulus(&self) -> f64 {
        self.outer.ln()
    }
}

/// A point `rho e^{i theta}` of the punctured plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    rho: f64,
    theta: f64,
}

impl PolarPoint {
    /// Builds a point; `theta` is reduced into `[0, 2 pi)`.
    pub fn new(rho: f64, theta: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::ParameterDomain {
                name: "rho",
                value: rho,
                domain: "(0, inf)",
            });
        }
        if !theta.is_finite() {
            return Err(Error::ParameterDomain {
                name: "theta",
                value: theta,
                domain: "finite reals",
            });
        }
        let mut theta = theta.rem_euclid(TAU);
        if theta >= TAU {
            theta = 0.0;
        }
        Ok(Self { rho, theta })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.rho, self.theta)
    }
}

/// Polar and Wirtinger first derivatives of `h` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub h_rho: Complex64,
    pub h_theta: Complex64,
    pub h_z: Complex64,
    pub h_zbar: Complex64,
}

/// Truncated decomposition `h = sum_n h_n` with log and constant terms.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSeries {
    order: usize,
    // index i <-> n = i + 1
    a_pos: Vec<Complex64>,
    b_pos: Vec<Complex64>,
    // index i <-> n = -(i + 1)
    a_neg: Vec<Complex64>,
    b_neg: Vec<Complex64>,
    a0: Complex64,
    b0: Complex64,
}

impl HarmonicSeries {
    /// The zero function with room for modes `1 <= |n| <= order`.
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            a_pos: vec![ZERO; order],
            b_pos: vec![ZERO; order],
            a_neg: vec![ZERO; order],
            b_neg: vec![ZERO; order],
            a0: ZERO,
            b0: ZERO,
        }
    }

    /// `h(z) = z`.
    pub fn identity() -> Self {
        Self::zero(1).with_a(1, Complex64::new(1.0, 0.0))
    }

    /// The constant map `h = c`.
    pub fn constant(c: Complex64) -> Self {
        Self::zero(0).with_const(c)
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.order
    }

    fn slot(&self, n: i64) -> Option<usize> {
        let k = n.unsigned_abs() as usize;
        if n == 0 || k > self.order {
            None
        } else {
            Some(k - 1)
        }
    }

    /// Coefficient of `z^n`; zero outside `1 <= |n| <= N`.
    pub fn a(&self, n: i64) -> Complex64 {
        match self.slot(n) {
            Some(i) if n > 0 => self.a_pos[i],
            Some(i) => self.a_neg[i],
            None => ZERO,
        }
    }

    /// Coefficient of `conj(z)^(-n)`; zero outside `1 <= |n| <= N`.
    pub fn b(&self, n: i64) -> Complex64 {
        match self.slot(n) {
            Some(i) if n > 0 => self.b_pos[i],
            Some(i) => self.b_neg[i],
            None => ZERO,
        }
    }

    /// Coefficient of `log|z|`.
    pub fn log_coeff(&self) -> Complex64 {
        self.a0
    }

    /// Constant term.
    pub fn const_term(&self) -> Complex64 {
        self.b0
    }

    fn grow(&mut self, order: usize) {
        if order > self.order {
            self.order = order;
            for v in [
                &mut self.a_pos,
                &mut self.b_pos,
                &mut self.a_neg,
                &mut self.b_neg,
            ] {
                v.resize(order, ZERO);
            }
        }
    }

    /// Sets `a[n]`, growing the truncation order if needed.
    ///
    /// Panics when `n == 0`; the log coefficient has its own setter.
    #[must_use]
    pub fn with_a(mut self, n: i64, value: Complex64) -> Self {
        assert!(n != 0, "a[0] is the log coefficient, use with_log");
        let k = n.unsigned_abs() as usize;
        self.grow(k);
        if n > 0 {
            self.a_pos[k - 1] = value;
        } else {
            self.a_neg[k - 1] = value;
        }
        self
    }

    /// Sets `b[n]`, growing the truncation order if needed.
    #[must_use]
    pub fn with_b(mut self, n: i64, value: Complex64) -> Self {
        assert!(n != 0, "b[0] is the constant term, use with_const");
        let k = n.unsigned_abs() as usize;
        self.grow(k);
        if n > 0 {
            self.b_pos[k - 1] = value;
        } else {
            self.b_neg[k - 1] = value;
        }
        self
    }

    #[must_use]
    pub fn with_log(mut self, value: Complex64) -> Self {
        self.a0 = value;
        self
    }

    #[must_use]
    pub fn with_const(mut self, value: Complex64) -> Self {
        self.b0 = value;
        self
    }

    /// Nonzero mode indices in the order `-N, ..., -1, 1, ..., N`.
    pub fn mode_indices(&self) -> impl Iterator<Item = i64> {
        let n = self.order as i64;
        (-n..=n).filter(|&k| k != 0)
    }

    /// `(n, a[n], b[n])` for every nonzero mode index.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64, Complex64)> + '_ {
        self.mode_indices().map(move |n| (n, self.a(n), self.b(n)))
    }

    /// Whether every coefficient is a finite complex number.
    pub fn is_finite(&self) -> bool {
        self.coefficients().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    fn coefficients(&self) -> impl Iterator<Item = &Complex64> {
        self.a_pos
            .iter()
            .chain(&self.b_pos)
            .chain(&self.a_neg)
            .chain(&self.b_neg)
            .chain([&self.a0, &self.b0])
    }

    /// Radial factor of mode `n`: `a[n] rho^n + b[n] rho^-n`, or
    /// `a0 log rho + b0` for `n = 0`.
    pub fn mode_amplitude(&self, n: i64, rho: f64) -> Complex64 {
        if n == 0 {
            return self.a0 * rho.ln() + self.b0;
        }
        let p = rho.powi(n as i32);
        self.a(n) * p + self.b(n) / p
    }

    /// `d/drho` of [`Self::mode_amplitude`].
    pub fn mode_amplitude_deriv(&self, n: i64, rho: f64) -> Complex64 {
        if n == 0 {
            return self.a0 / rho;
        }
        let p = rho.powi(n as i32);
        let nf = n as f64;
        (self.a(n) * p - self.b(n) / p) * (nf / rho)
    }

    fn finite(value: Complex64, what: &'static str) -> Result<Complex64> {
        if value.re.is_finite() && value.im.is_finite() {
            Ok(value)
        } else {
            Err(Error::NumericOverflow(what))
        }
    }

    /// `h(rho e^{i theta})`.
    pub fn evaluate(&self, p: PolarPoint) -> Result<Complex64> {
        let rho = p.rho();
        let mut sum = self.mode_amplitude(0, rho);
        for n in self.mode_indices() {
            let phase = Complex64::from_polar(1.0, n as f64 * p.theta());
            sum += self.mode_amplitude(n, rho) * phase;
        }
        Self::finite(sum, "evaluate")
    }

    /// Termwise `h_rho`, `h_theta` and the Wirtinger derivatives built from them.
    pub fn derivatives(&self, p: PolarPoint) -> Result<Derivatives> {
        let (rho, theta) = (p.rho(), p.theta());
        let mut h_rho = self.mode_amplitude_deriv(0, rho);
        let mut h_theta = ZERO;
        for n in self.mode_indices() {
            let phase = Complex64::from_polar(1.0, n as f64 * theta);
            h_rho += self.mode_amplitude_deriv(n, rho) * phase;
            h_theta += I * (n as f64) * self.mode_amplitude(n, rho) * phase;
        }
        let h_rho = Self::finite(h_rho, "h_rho")?;
        let h_theta = Self::finite(h_theta, "h_theta")?;
        let rot = Complex64::from_polar(0.5, -theta);
        let h_z = rot * (h_rho - I * h_theta / rho);
        let h_zbar = rot.conj() * (h_rho + I * h_theta / rho);
        Ok(Derivatives {
            h_rho,
            h_theta,
            h_z,
            h_zbar,
        })
    }

    /// Jacobian determinant `|h_z|^2 - |h_zbar|^2`, cross-checked against
    /// `Im(conj(h_rho) h_theta) / rho`.
    pub fn jacobian(&self, p: PolarPoint) -> Result<f64> {
        let d = self.derivatives(p)?;
        let (zz, zb) = (d.h_z.norm_sqr(), d.h_zbar.norm_sqr());
        let wirtinger = zz - zb;
        let polar = (d.h_rho.conj() * d.h_theta).im / p.rho();
        agree("jacobian", wirtinger, polar, zz + zb)?;
        Ok(wirtinger)
    }

    /// `|h_rho|^2 + rho^-2 |h_theta|^2`, cross-checked against `2(|h_z|^2 + |h_zbar|^2)`.
    pub fn grad_norm_sq(&self, p: PolarPoint) -> Result<f64> {
        let d = self.derivatives(p)?;
        let polar = d.h_rho.norm_sqr() + d.h_theta.norm_sqr() / (p.rho() * p.rho());
        let wirtinger = 2.0 * (d.h_z.norm_sqr() + d.h_zbar.norm_sqr());
        agree("grad_norm_sq", polar, wirtinger, polar.max(wirtinger))?;
        Ok(polar)
    }

    /// `alpha h`.
    #[must_use]
    pub fn scale_rotate(&self, alpha: Complex64) -> Self {
        let scale = |v: &[Complex64]| v.iter().map(|c| c * alpha).collect::<Vec<_>>();
        Self {
            order: self.order,
            a_pos: scale(&self.a_pos),
            b_pos: scale(&self.b_pos),
            a_neg: scale(&self.a_neg),
            b_neg: scale(&self.b_neg),
            a0: self.a0 * alpha,
            b0: self.b0 * alpha,
        }
    }

    /// Reads the series JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SeriesDocument = serde_json::from_str(text)?;
        doc.try_into()
    }

    /// Writes the series JSON document (pretty-printed, shortest round-trip floats).
    pub fn to_json(&self) -> Result<String> {
        if !self.is_finite() {
            return Err(Error::NumericOverflow("series coefficients"));
        }
        Ok(serde_json::to_string_pretty(&SeriesDocument::from(self))?)
    }
}

fn agree(what: &'static str, first: f64, second: f64, scale: f64) -> Result<()> {
    let scale = scale.abs().max(f64::MIN_POSITIVE);
    if (first - second).abs() <= WIRTINGER_REL_TOL * scale {
        Ok(())
    } else {
        Err(Error::InternalInconsistency {
            what,
            first,
            second,
        })
    }
}

/// `h^lambda(z) = (z + lambda / conj(z)) / (1 + lambda)`, `-1 < lambda <= 1`.
pub fn extremal_map(lambda: f64) -> Result<HarmonicSeries> {
    let lambda = check_lambda(lambda)?;
    let s = 1.0 / (1.0 + lambda);
    Ok(HarmonicSeries::zero(1)
        .with_a(1, Complex64::new(s, 0.0))
        .with_b(1, Complex64::new(lambda * s, 0.0)))
}

/// Parameter of the extremal map of `A(1, R)` whose outer mean radius is `r_star`.
pub fn lambda_from_radii(outer: f64, r_star: f64) -> Result<f64> {
    let annulus = Annulus::new(outer)?;
    let r = annulus.outer();
    if !r_star.is_finite() {
        return Err(Error::ParameterDomain {
            name: "R_star",
            value: r_star,
            domain: "finite reals",
        });
    }
    let critical = crate::bounds::nitsche_bound(r);
    if r_star < critical * (1.0 - 1e-12) {
        return Err(Error::OutOfRange(format!(
            "R_star = {r_star} is below the critical value {critical} for R = {r}"
        )));
    }
    let lambda = ((r * r - r * r_star) / (r * r_star - 1.0)).min(1.0);
    check_lambda(lambda)
}

type Pair = [f64; 2];

fn pair(c: &Complex64) -> Pair {
    [c.re, c.im]
}

/// On-disk layout of a series.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesDocument {
    #[serde(rename = "N")]
    order: usize,
    #[serde(default)]
    a_pos: Vec<Pair>,
    #[serde(default)]
    b_pos: Vec<Pair>,
    #[serde(default)]
    a_neg: Vec<Pair>,
    #[serde(default)]
    b_neg: Vec<Pair>,
    #[serde(default)]
    a0: Pair,
    #[serde(default)]
    b0: Pair,
}

impl From<&HarmonicSeries> for SeriesDocument {
    fn from(h: &HarmonicSeries) -> Self {
        let conv = |v: &[Complex64]| v.iter().map(pair).collect();
        Self {
            order: h.order,
            a_pos: conv(&h.a_pos),
            b_pos: conv(&h.b_pos),
            a_neg: conv(&h.a_neg),
            b_neg: conv(&h.b_neg),
            a0: pair(&h.a0),
            b0: pair(&h.b0),
        }
    }
}

impl TryFrom<SeriesDocument> for HarmonicSeries {
    type Error = Error;

    fn try_from(doc: SeriesDocument) -> Result<Self> {
        let order = doc.order;
        // arrays shorter than N are zero-padded
        let conv = |name: &str, v: Vec<Pair>| -> Result<Vec<Complex64>> {
            if v.len() > order {
                return Err(Error::InvalidSeries(format!(
                    "{name} has {} entries but N = {order}",
                    v.len()
                )));
            }
            let mut out: Vec<Complex64> = v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
            out.resize(order, ZERO);
            Ok(out)
        };
        let h = Self {
            order,
            a_pos: conv("a_pos", doc.a_pos)?,
            b_pos: conv("b_pos", doc.b_pos)?,
            a_neg: conv("a_neg", doc.a_neg)?,
            b_neg: conv("b_neg", doc.b_neg)?,
            a0: Complex64::new(doc.a0[0], doc.a0[1]),
            b0: Complex64::new(doc.b0[0], doc.b0[1]),
        };
        if !h.is_finite() {
            return Err(Error::InvalidSeries("non-finite coefficient".into()));
        }
        Ok(h)
    }
}
