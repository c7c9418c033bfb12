//! System parameters and closed-form spectral quantities.
//!
//! All frequencies are in the same units (c = ħ = 1) and every evaluator takes an
//! absolute wavenumber `k`; the offset `dk = k - k_c` is formed internally.
//!
//! The two transfer families are
//!
//! ```text
//! D_L = [(dk - δ)(dk + iκ/2) - λ_R²] / [(dk - ω+)(dk - ω-)]
//! D_R = √2 λ_L λ_R / [(dk - ω+)(dk - ω-)]
//! C_L = [(dk - δ)(dk² + κ²/4) - dk (λ_R² + 2λ_L²) + iκ(λ_R² - 2λ_L²)/2] / [(dk - iκ/2)(dk - ω+)(dk - ω-)]
//! C_R = √2 iκ λ_L λ_R / [(dk - iκ/2)(dk - ω+)(dk - ω-)]
//! ```
//!
//! `D` applies to a photon that starts inside the cavity, `C` to a photon injected
//! from outside. `|C_L|² + |C_R|² = 1` pointwise.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex spectral amplitude.
pub type ComplexAmplitude = Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative guard distance for real-axis evaluation near a pole.
const POLE_GUARD: f64 = 1e-14;

/// Tolerance, relative to the parameter scale, on the sign of `Im ω±`.
const POLE_SIGN_TOL: f64 = 1e-12;

/// Cavity and atom parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    /// Cavity leakage rate κ.
    pub kappa: f64,
    /// Quasi-mode frequency.
    pub k_c: f64,
    /// Atomic detuning `ω_e - k_c`.
    pub delta_e: f64,
    /// Coupling strength of the `|L> <-> |e>` transition.
    pub lambda_l: f64,
    /// Coupling strength of the `|R> <-> |e>` transition.
    pub lambda_r: f64,
}

impl SystemParams {
    pub fn new(kappa: f64, k_c: f64, delta_e: f64, lambda_l: f64, lambda_r: f64) -> Result<Self> {
        let params = SystemParams {
            kappa,
            k_c,
            delta_e,
            lambda_l,
            lambda_r,
        };
        params.validate()?;
        Ok(params)
    }

    /// Resonant parameters at the optimal coupling ratio `λ_R = √2 λ_L`.
    pub fn optimal(kappa: f64, lambda_l: f64) -> Result<Self> {
        Self::new(kappa, 0.0, 0.0, lambda_l, SQRT_2 * lambda_l)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("kappa", self.kappa),
            ("k_c", self.k_c),
            ("delta_e", self.delta_e),
            ("lambda_l", self.lambda_l),
            ("lambda_r", self.lambda_r),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::invalid(name, format!("must be finite, got {value}")));
            }
        }
        if self.kappa <= 0.0 {
            return Err(Error::invalid("kappa", format!("must be positive, got {}", self.kappa)));
        }
        if self.lambda_l < 0.0 {
            return Err(Error::invalid("lambda_l", "must be non-negative"));
        }
        if self.lambda_r < 0.0 {
            return Err(Error::invalid("lambda_r", "must be non-negative"));
        }
        Ok(())
    }

    /// `2λ_L² + λ_R²`, the total coupling entering the Rabi splitting.
    pub fn coupling_sum(&self) -> f64 {
        2.0 * self.lambda_l * self.lambda_l + self.lambda_r * self.lambda_r
    }

    /// True when both transitions couple, so the right-polarized branch is reachable.
    pub fn can_entangle(&self) -> bool {
        self.lambda_l > 0.0 && self.lambda_r > 0.0
    }

    pub fn is_optimal(&self) -> bool {
        self.delta_e == 0.0 && self.lambda_r == SQRT_2 * self.lambda_l
    }

    /// Characteristic frequency scale used by tolerances and guards.
    pub fn scale(&self) -> f64 {
        self.kappa
            .max(self.lambda_l)
            .max(self.lambda_r)
            .max(self.delta_e.abs())
            .max(1.0)
    }

    /// Copy with every frequency multiplied by `s` (`k_c` is kept).
    pub fn scaled(&self, s: f64) -> Self {
        SystemParams {
            kappa: self.kappa * s,
            k_c: self.k_c,
            delta_e: self.delta_e * s,
            lambda_l: self.lambda_l * s,
            lambda_r: self.lambda_r * s,
        }
    }
}

impl Default for SystemParams {
    /// The resonant optimal case with `λ_L = 2.5κ`, `κ = 1`.
    fn default() -> Self {
        SystemParams {
            kappa: 1.0,
            k_c: 0.0,
            delta_e: 0.0,
            lambda_l: 2.5,
            lambda_r: 2.5 * SQRT_2,
        }
    }
}

/// Photon polarization / atomic ground state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    L,
    R,
}

/// The complex Rabi frequencies, the common pole pair of every transfer coefficient.
///
/// `omega_plus` takes the `+` sign in front of the principal square root. Only the
/// unordered pair enters downstream formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiPoles {
    pub omega_plus: Complex64,
    pub omega_minus: Complex64,
}

impl RabiPoles {
    /// Relative residuals of the sum and product identities
    /// `ω+ + ω- = δ - iκ/2`, `ω+ ω- = -iδκ/2 - (2λ_L² + λ_R²)`.
    pub fn vieta_residuals(&self, params: &SystemParams) -> (f64, f64) {
        let sum = Complex64::new(params.delta_e, -params.kappa / 2.0);
        let product = Complex64::new(
            -params.coupling_sum(),
            -params.delta_e * params.kappa / 2.0,
        );
        let rel = |got: Complex64, want: Complex64| {
            (got - want).norm() / want.norm().max(params.scale())
        };
        (
            rel(self.omega_plus + self.omega_minus, sum),
            rel(self.omega_plus * self.omega_minus, product),
        )
    }

    pub fn as_array(&self) -> [Complex64; 2] {
        [self.omega_plus, self.omega_minus]
    }
}

/// Complex Rabi frequencies `ω± = (δ - iκ/2)/2 ± sqrt(((δ + iκ/2)/2)² + 2λ_L² + λ_R²)`.
pub fn rabi_poles(params: &SystemParams) -> Result<RabiPoles> {
    params.validate()?;
    let half_kappa = Complex64::new(0.0, params.kappa / 2.0);
    let centre = (params.delta_e - half_kappa) / 2.0;
    let shifted = (params.delta_e + half_kappa) / 2.0;
    let root = (shifted * shifted + params.coupling_sum()).sqrt();
    let poles = RabiPoles {
        omega_plus: centre + root,
        omega_minus: centre - root,
    };
    for w in poles.as_array() {
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::ParameterRange(format!(
                "Rabi frequency overflowed for {params:?}"
            )));
        }
        if w.im > POLE_SIGN_TOL * params.scale() {
            return Err(Error::ParameterRange(format!(
                "Rabi frequency {w} lies in the upper half plane"
            )));
        }
    }
    Ok(poles)
}

/// Frequency-dependent dipole coupling `g_μ(k) = sqrt(κ/2π) λ_μ / (k - k_c + iκ/2)`.
pub fn coupling_g(k: f64, mu: Polarization, params: &SystemParams) -> ComplexAmplitude {
    let lambda = match mu {
        Polarization::L => params.lambda_l,
        Polarization::R => params.lambda_r,
    };
    cavity_spectrum(k, params) * lambda
}

/// Spectral function of a photon initially confined in the quasi-mode.
pub fn cavity_spectrum(k: f64, params: &SystemParams) -> ComplexAmplitude {
    lorentzian(k - params.k_c, params.kappa)
}

/// Unit-norm complex Lorentzian of width `kappa_in` centred on `k_c`.
pub fn input_spectrum(k: f64, kappa_in: f64, params: &SystemParams) -> Result<ComplexAmplitude> {
    if !(kappa_in > 0.0 && kappa_in.is_finite()) {
        return Err(Error::Domain(format!(
            "input linewidth must be positive and finite, got {kappa_in}"
        )));
    }
    Ok(lorentzian(k - params.k_c, kappa_in))
}

pub(crate) fn lorentzian(dk: f64, width: f64) -> Complex64 {
    (width / (2.0 * PI)).sqrt() / Complex64::new(dk, width / 2.0)
}

/// First-round (`D`) transfer coefficients `(D_L, D_R)` at absolute wavenumber `k`.
pub fn transfer_d(k: f64, params: &SystemParams) -> Result<(ComplexAmplitude, ComplexAmplitude)> {
    Transfer::new(params)?.d(k)
}

/// Scattering-round (`C`) transfer coefficients `(C_L, C_R)` at absolute wavenumber `k`.
pub fn transfer_c(k: f64, params: &SystemParams) -> Result<(ComplexAmplitude, ComplexAmplitude)> {
    Transfer::new(params)?.c(k)
}

/// Validated parameters with the Rabi poles precomputed, for repeated evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transfer {
    params: SystemParams,
    poles: RabiPoles,
    guard: f64,
    /// `2λ_L² + λ_R² == 0`: every coefficient is trivial.
    uncoupled: bool,
}

impl Transfer {
    pub fn new(params: &SystemParams) -> Result<Self> {
        let poles = rabi_poles(params)?;
        Ok(Transfer {
            params: *params,
            poles,
            guard: POLE_GUARD * params.scale(),
            uncoupled: params.coupling_sum() == 0.0,
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn poles(&self) -> &RabiPoles {
        &self.poles
    }

    /// `(dk - ω+)(dk - ω-)`, checking the distance to each pole.
    fn rabi_denominator(&self, dk: f64) -> Result<Complex64> {
        let mut product = Complex64::new(1.0, 0.0);
        for w in self.poles.as_array() {
            let factor = dk - w;
            let distance = factor.norm();
            if distance < self.guard {
                return Err(Error::PoleProximity {
                    dk,
                    pole: w.to_string(),
                    distance,
                });
            }
            product *= factor;
        }
        Ok(product)
    }

    /// `(D_L, D_R)` at absolute wavenumber `k`.
    pub fn d(&self, k: f64) -> Result<(Complex64, Complex64)> {
        if self.uncoupled {
            return Ok((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
        }
        let p = &self.params;
        let dk = k - p.k_c;
        let den = self.rabi_denominator(dk)?;
        let num_l = (dk - p.delta_e) * Complex64::new(dk, p.kappa / 2.0) - p.lambda_r * p.lambda_r;
        let num_r = SQRT_2 * p.lambda_l * p.lambda_r;
        Ok((num_l / den, num_r / den))
    }

    /// `(C_L, C_R)` at absolute wavenumber `k`.
    pub fn c(&self, k: f64) -> Result<(Complex64, Complex64)> {
        if self.uncoupled {
            return Ok((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
        }
        let p = &self.params;
        let dk = k - p.k_c;
        let den = self.rabi_denominator(dk)? * Complex64::new(dk, -p.kappa / 2.0);
        let (ll, rr) = (p.lambda_l * p.lambda_l, p.lambda_r * p.lambda_r);
        let num_l = Complex64::new(
            (dk - p.delta_e) * (dk * dk + p.kappa * p.kappa / 4.0) - dk * (rr + 2.0 * ll),
            p.kappa * (rr - 2.0 * ll) / 2.0,
        );
        let num_r = I * (SQRT_2 * p.kappa * p.lambda_l * p.lambda_r);
        Ok((num_l / den, num_r / den))
    }

    /// Output amplitudes `(f C_L, -f C_R)` of a scattering round for input amplitude `f`.
    ///
    /// The minus sign on the entangled branch is a global phase of that branch.
    pub fn scatter(&self, k: f64, input: Complex64) -> Result<(Complex64, Complex64)> {
        let (cl, cr) = self.c(k)?;
        Ok((input * cl, -input * cr))
    }
}
