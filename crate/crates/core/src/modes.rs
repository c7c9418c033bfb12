//! Normal modes of a one-sided leaky cavity and quasi-mode extraction.
//!
//! The left mirror at `x = 0` is perfect, the right mirror at `x = l` has reflection `r`
//! and transmission `t`. Inside the cavity a mode is `I(k) sin(kx)`, outside it is
//! `e^{-ikx} + R(k) e^{ikx}`. For a good cavity `|I(k)|` is sharply peaked and close to a
//! complex Lorentzian; this module measures how close.
//!
//! Nothing here feeds the protocol: `k_c` and κ are inputs there.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default `|t|` below which a cavity counts as good.
pub const GOOD_CAVITY_THRESHOLD: f64 = 0.2;

/// Samples per half free spectral range when bracketing a peak.
const BRACKET_SAMPLES: usize = 1001;

/// Samples across the `±3κ` fit window.
const FIT_SAMPLES: usize = 601;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorCavity {
    r: Complex64,
    t: Complex64,
    length: f64,
    good_cavity_threshold: f64,
}

impl MirrorCavity {
    pub fn new(r: Complex64, t: Complex64, length: f64) -> Result<Self> {
        if !(r.norm() < 1.0) {
            return Err(Error::Domain(format!("|r| must be below 1, got {}", r.norm())));
        }
        if !(t.norm() > 0.0 && t.norm().is_finite()) {
            return Err(Error::Domain(format!("|t| must be positive, got {}", t.norm())));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Domain(format!("length must be positive, got {length}")));
        }
        Ok(MirrorCavity {
            r,
            t,
            length,
            good_cavity_threshold: GOOD_CAVITY_THRESHOLD,
        })
    }

    /// Real `r` with `t = i·sqrt(1 - r²)`.
    pub fn lossless(r: f64, length: f64) -> Result<Self> {
        let t = I * (1.0 - r * r).max(0.0).sqrt();
        Self::new(Complex64::new(r, 0.0), t, length)
    }

    pub fn with_good_cavity_threshold(mut self, threshold: f64) -> Self {
        self.good_cavity_threshold = threshold;
        self
    }

    pub fn r(&self) -> Complex64 {
        self.r
    }

    pub fn t(&self) -> Complex64 {
        self.t
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn is_good_cavity(&self) -> bool {
        self.t.norm() < self.good_cavity_threshold
    }

    /// Spacing `π / l` between neighbouring quasi-modes.
    pub fn free_spectral_range(&self) -> f64 {
        PI / self.length
    }

    /// `(I(k), R(k))`.
    pub fn mode_amplitudes(&self, k: f64) -> (Complex64, Complex64) {
        let phase = Complex64::from_polar(1.0, 2.0 * k * self.length);
        let den = 1.0 + self.r * phase;
        let inside = -2.0 * I * self.t / den;
        let outside = (-self.r - self.t + self.r * phase.conj()) / den;
        (inside, outside)
    }

    fn abs_inside(&self, k: f64) -> f64 {
        self.mode_amplitudes(k).0.norm()
    }

    /// Location of the maximum of `|I(k)|` within half a free spectral range of `k_guess`.
    pub fn find_peak(&self, k_guess: f64) -> Result<f64> {
        let half = 0.5 * self.free_spectral_range();
        let step = 2.0 * half / (BRACKET_SAMPLES - 1) as f64;
        let samples: Vec<f64> = (0..BRACKET_SAMPLES)
            .map(|i| self.abs_inside(k_guess - half + i as f64 * step))
            .collect();
        let best = samples
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("non-empty sample set");
        if best == 0 || best == BRACKET_SAMPLES - 1 {
            return Err(Error::Search(format!(
                "no interior maximum of |I(k)| within {half} of k = {k_guess}"
            )));
        }
        let lo = k_guess - half + (best - 1) as f64 * step;
        let hi = lo + 2.0 * step;
        Ok(golden_max(|k| self.abs_inside(k), lo, hi, 1e-12))
    }

    /// Full width of `|I(k)|²` at half its maximum around the peak `k_c`.
    pub fn half_max_width(&self, k_c: f64) -> Result<f64> {
        let half_max = 0.5 * self.abs_inside(k_c).powi(2);
        let reach = 0.5 * self.free_spectral_range();
        let crossing = |direction: f64| -> Result<f64> {
            let (mut inner, mut outer) = (0.0, reach);
            if self.abs_inside(k_c + direction * outer).powi(2) > half_max {
                return Err(Error::Search(
                    "|I(k)|² never drops to half maximum; cavity too leaky".into(),
                ));
            }
            for _ in 0..200 {
                let mid = 0.5 * (inner + outer);
                if mid <= inner || mid >= outer {
                    break;
                }
                if self.abs_inside(k_c + direction * mid).powi(2) > half_max {
                    inner = mid;
                } else {
                    outer = mid;
                }
            }
            Ok(0.5 * (inner + outer))
        };
        Ok(crossing(1.0)? + crossing(-1.0)?)
    }

    /// Locates the quasi-mode nearest `k_guess` and fits `A / |k - k_c + iκ/2|` to `|I(k)|`.
    pub fn find_quasimode(&self, k_guess: f64) -> Result<QuasiMode> {
        if !self.is_good_cavity() {
            return Err(Error::Domain(format!(
                "|t| = {} is not below the good-cavity threshold {}",
                self.t.norm(),
                self.good_cavity_threshold
            )));
        }
        let k_c = self.find_peak(k_guess)?;
        let half_max_width = self.half_max_width(k_c)?;

        let mut kappa = half_max_width;
        let mut fit = LorentzFit::default();
        // The window depends on the fitted width; two passes settle it.
        for _ in 0..3 {
            let window = 3.0 * kappa;
            let ks: Vec<f64> = (0..FIT_SAMPLES)
                .map(|i| k_c - window + 2.0 * window * i as f64 / (FIT_SAMPLES - 1) as f64)
                .collect();
            let data: Vec<f64> = ks.iter().map(|&k| self.abs_inside(k)).collect();
            let sse = |kappa: f64| LorentzFit::at(&ks, &data, k_c, kappa).sse;
            let best = golden_max(|x| -sse(x), kappa / 3.0, 3.0 * kappa, 1e-12);
            fit = LorentzFit::at(&ks, &data, k_c, best);
            kappa = best;
        }

        Ok(QuasiMode {
            k_c,
            kappa_fit: kappa,
            amplitude: fit.amplitude,
            fit_residual: fit.relative_residual,
            half_max_width,
        })
    }
}

/// A fitted quasi-mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiMode {
    pub k_c: f64,
    /// Fitted full width κ.
    pub kappa_fit: f64,
    /// Fitted `A` in `A / |k - k_c + iκ/2|`.
    pub amplitude: f64,
    /// Relative L2 deviation of `|I|` from the fit over `|k - k_c| ≤ 3κ`.
    pub fit_residual: f64,
    /// Directly measured full width at half maximum of `|I|²`.
    pub half_max_width: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct LorentzFit {
    amplitude: f64,
    sse: f64,
    relative_residual: f64,
}

impl LorentzFit {
    /// Least squares in `A` for fixed `kappa` (linear, closed form).
    fn at(ks: &[f64], data: &[f64], k_c: f64, kappa: f64) -> Self {
        let shape: Vec<f64> = ks
            .iter()
            .map(|&k| 1.0 / Complex64::new(k - k_c, kappa / 2.0).norm())
            .collect();
        let num: f64 = shape.iter().zip(data).map(|(s, d)| s * d).sum();
        let den: f64 = shape.iter().map(|s| s * s).sum();
        let amplitude = num / den;
        let sse: f64 = shape
            .iter()
            .zip(data)
            .map(|(s, d)| (d - amplitude * s).powi(2))
            .sum();
        let norm: f64 = data.iter().map(|d| d * d).sum();
        LorentzFit {
            amplitude,
            sse,
            relative_residual: (sse / norm).sqrt(),
        }
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, rel_tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= rel_tol * (a.abs() + b.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
