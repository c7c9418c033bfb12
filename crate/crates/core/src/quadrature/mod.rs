//! Real-line integrals of squared spectral amplitudes.
//!
//! The adaptive route maps the real line onto `(-π/2, π/2)` with `k = c + s·tan θ`, which
//! turns the `dk⁻²` tails into a bounded integrand, then bisects Gauss–Kronrod panels by
//! largest error. Panels are seeded at the images of each spectrum's feature points so
//! narrow peaks are never straddled by one panel.
//!
//! The residue route in [`residue`] is an exact, independent check for rational spectra.

mod kronrod;
pub mod residue;

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::SpectralFunction;

pub use residue::{integrate_abs2_residues, RationalSpectrum, MAX_ORACLE_MULTIPLICITY};

/// Absolute tolerance used when the caller does not pick one.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Something whose squared modulus can be integrated over the real line.
pub trait Spectrum {
    fn amplitude(&self, k: f64) -> Result<Complex64>;

    /// Centre of the tangent map.
    fn center(&self) -> f64;

    /// Scale of the tangent map, roughly the width of the dominant feature.
    fn width(&self) -> f64;

    /// Absolute wavenumbers that should start a new panel.
    fn features(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl<S: Spectrum + ?Sized> Spectrum for &S {
    fn amplitude(&self, k: f64) -> Result<Complex64> {
        (**self).amplitude(k)
    }
    fn center(&self) -> f64 {
        (**self).center()
    }
    fn width(&self) -> f64 {
        (**self).width()
    }
    fn features(&self) -> Vec<f64> {
        (**self).features()
    }
}

/// Adapter turning a closure into a [`Spectrum`].
pub struct FnSpectrum<F> {
    f: F,
    center: f64,
    width: f64,
    features: Vec<f64>,
}

impl<F> FnSpectrum<F>
where
    F: Fn(f64) -> Result<Complex64>,
{
    pub fn new(f: F, center: f64, width: f64) -> Self {
        FnSpectrum {
            f,
            center,
            width,
            features: Vec::new(),
        }
    }

    pub fn with_features(mut self, features: Vec<f64>) -> Self {
        self.features = features;
        self
    }
}

impl<F> Spectrum for FnSpectrum<F>
where
    F: Fn(f64) -> Result<Complex64>,
{
    fn amplitude(&self, k: f64) -> Result<Complex64> {
        (self.f)(k)
    }
    fn center(&self) -> f64 {
        self.center
    }
    fn width(&self) -> f64 {
        self.width
    }
    fn features(&self) -> Vec<f64> {
        self.features.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Adaptive Gauss–Kronrod integration of `|f|²` with tangent-mapped tails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    /// Absolute target for the summed error estimate.
    pub tolerance: f64,
    pub max_panels: usize,
    /// Overrides the spectrum's own map scale.
    pub map_scale: Option<f64>,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature::new(DEFAULT_TOLERANCE)
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl Quadrature {
    pub fn new(tolerance: f64) -> Self {
        Quadrature {
            tolerance,
            max_panels: 20_000,
            map_scale: None,
        }
    }

    pub fn with_map_scale(mut self, scale: f64) -> Self {
        self.map_scale = Some(scale);
        self
    }

    /// `∫ |f(k)|² dk` over the whole real line.
    pub fn integrate_abs2<S: Spectrum + ?Sized>(&self, f: &S) -> Result<QuadratureResult> {
        self.integrate_mapped(f, -FRAC_PI_2, FRAC_PI_2)
    }

    /// `∫ |f(k)|² dk` over `[a, b]`; infinite endpoints are allowed.
    pub fn integrate_abs2_between<S: Spectrum + ?Sized>(
        &self,
        f: &S,
        a: f64,
        b: f64,
    ) -> Result<QuadratureResult> {
        if a.is_nan() || b.is_nan() || a >= b {
            return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
        }
        let (c, s) = self.map(f)?;
        self.integrate_mapped(f, ((a - c) / s).atan(), ((b - c) / s).atan())
    }

    fn map<S: Spectrum + ?Sized>(&self, f: &S) -> Result<(f64, f64)> {
        let s = self.map_scale.unwrap_or_else(|| f.width());
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Domain(format!("map scale must be positive, got {s}")));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Domain(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok((f.center(), s))
    }

    fn integrate_mapped<S: Spectrum + ?Sized>(
        &self,
        f: &S,
        lo: f64,
        hi: f64,
    ) -> Result<QuadratureResult> {
        let (c, s) = self.map(f)?;
        let integrand = |theta: f64| -> Result<f64> {
            let cos = theta.cos();
            let amp = f.amplitude(c + s * theta.tan())?;
            Ok(amp.norm_sqr() * s / (cos * cos))
        };

        let mut cuts: Vec<f64> = f
            .features()
            .into_iter()
            .filter(|k| k.is_finite())
            .map(|k| ((k - c) / s).atan())
            .filter(|&t| t > lo && t < hi)
            .collect();
        cuts.push(lo);
        cuts.push(hi);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|b, a| (*b - *a).abs() <= 1e-12);

        let mut evaluations = 0;
        let mut panels = Vec::with_capacity(cuts.len() * 8);
        for w in cuts.windows(2) {
            let (value, error) = kronrod::gk21(&integrand, w[0], w[1])?;
            evaluations += kronrod::POINTS;
            panels.push(Panel {
                lo: w[0],
                hi: w[1],
                value,
                error,
            });
        }

        loop {
            let total_error: f64 = panels.iter().map(|p| p.error).sum();
            if total_error <= self.tolerance {
                break;
            }
            if panels.len() >= self.max_panels {
                let (value, error_estimate) = summarize(&mut panels);
                return Err(Error::Accuracy {
                    best: value,
                    error_estimate,
                    tolerance: self.tolerance,
                });
            }
            let worst = panels
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.error.total_cmp(&b.1.error).then(b.0.cmp(&a.0)))
                .map(|(i, _)| i)
                .expect("at least one panel");
            let Panel { lo, hi, .. } = panels[worst];
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                // cannot bisect further in double precision
                let (value, error_estimate) = summarize(&mut panels);
                return Err(Error::Accuracy {
                    best: value,
                    error_estimate,
                    tolerance: self.tolerance,
                });
            }
            let (v1, e1) = kronrod::gk21(&integrand, lo, mid)?;
            let (v2, e2) = kronrod::gk21(&integrand, mid, hi)?;
            evaluations += 2 * kronrod::POINTS;
            panels[worst] = Panel {
                lo,
                hi: mid,
                value: v1,
                error: e1,
            };
            panels.push(Panel {
                lo: mid,
                hi,
                value: v2,
                error: e2,
            });
        }

        let (value, error_estimate) = summarize(&mut panels);
        Ok(QuadratureResult {
            value: value.max(0.0),
            error_estimate,
            evaluations,
        })
    }
}

/// Sums panels in ascending order of position, so the result does not depend on the
/// refinement history.
fn summarize(panels: &mut [Panel]) -> (f64, f64) {
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    panels
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

/// `∫ |f(k)|² dk` over ℝ at absolute tolerance `tol`.
pub fn integrate_abs2<S: Spectrum + ?Sized>(f: &S, tol: f64) -> Result<QuadratureResult> {
    Quadrature::new(tol).integrate_abs2(f)
}

/// Rescales `f` to unit norm, recording the divisor.
pub fn normalize(f: SpectralFunction, tol: f64) -> Result<SpectralFunction> {
    let raw = f.unnormalized();
    let result = integrate_abs2(&raw, tol)?;
    if !(result.value > 0.0) || result.value <= result.error_estimate {
        return Err(Error::DegenerateSpectrum(format!(
            "norm² = {} (error {:e}) for factors {:?}",
            result.value,
            result.error_estimate,
            raw.factors()
        )));
    }
    Ok(raw.with_norm(result.value.sqrt()))
}
