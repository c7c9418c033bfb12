//! Single-photon spectral functions kept in lazy factored form.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{lorentzian, SystemParams, Transfer};
use crate::quadrature::residue::{poly_mul, poly_pow};
use crate::quadrature::{RationalSpectrum, Spectrum};

/// One closed-form factor of a spectral function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Factor {
    /// Quasi-mode photon `f_c`, width κ.
    CavityLorentzian,
    /// Externally prepared Lorentzian of width `kappa_in`.
    InputLorentzian { kappa_in: f64 },
    DL,
    DR,
    CL,
    CR,
    /// `C_L` raised to a non-negative integer power.
    CLPower(u32),
    Constant(Complex64),
}

impl Factor {
    /// Number of poles (with multiplicity) this factor contributes.
    pub fn pole_count(&self) -> u32 {
        match self {
            Factor::CavityLorentzian | Factor::InputLorentzian { .. } => 1,
            Factor::DL | Factor::DR => 2,
            Factor::CL | Factor::CR => 3,
            Factor::CLPower(m) => 3 * m,
            Factor::Constant(_) => 0,
        }
    }
}

/// `f(k) = Π factors(k) / norm`.
///
/// Construction leaves `norm = 1`; [`crate::quadrature::normalize`] fixes the divisor so
/// that `∫ |f|² dk = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    factors: Vec<Factor>,
    params: SystemParams,
    transfer: Transfer,
    norm: f64,
    normalized: bool,
}

impl SpectralFunction {
    pub fn new(params: SystemParams, factors: Vec<Factor>) -> Result<Self> {
        for factor in &factors {
            match *factor {
                Factor::InputLorentzian { kappa_in } if !(kappa_in > 0.0 && kappa_in.is_finite()) => {
                    return Err(Error::Domain(format!(
                        "input linewidth must be positive and finite, got {kappa_in}"
                    )));
                }
                Factor::Constant(c) if !(c.re.is_finite() && c.im.is_finite()) => {
                    return Err(Error::Domain(format!("non-finite constant factor {c}")));
                }
                _ => {}
            }
        }
        Ok(SpectralFunction {
            transfer: Transfer::new(&params)?,
            factors,
            params,
            norm: 1.0,
            normalized: false,
        })
    }

    /// The quasi-mode photon `f_c` (already of unit norm).
    pub fn cavity(params: SystemParams) -> Result<Self> {
        let mut f = Self::new(params, vec![Factor::CavityLorentzian])?;
        f.normalized = true;
        Ok(f)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    /// Divisor applied to the raw product.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Same factors with an extra one appended; the normalization divisor is kept.
    pub fn times(&self, factor: Factor) -> Result<Self> {
        let mut factors = self.factors.clone();
        factors.push(factor);
        Ok(SpectralFunction {
            norm: self.norm,
            ..Self::new(self.params, factors)?
        })
    }

    pub(crate) fn unnormalized(&self) -> Self {
        SpectralFunction {
            norm: 1.0,
            normalized: false,
            ..self.clone()
        }
    }

    pub(crate) fn with_norm(self, norm: f64) -> Self {
        SpectralFunction {
            norm,
            normalized: true,
            ..self
        }
    }

    pub fn pole_count(&self) -> u32 {
        self.factors.iter().map(Factor::pole_count).sum()
    }

    /// `f(k)` at absolute wavenumber `k`.
    pub fn eval(&self, k: f64) -> Result<Complex64> {
        let dk = k - self.params.k_c;
        let mut d = None;
        let mut c = None;
        let mut value = Complex64::new(1.0 / self.norm, 0.0);
        for factor in &self.factors {
            value *= match *factor {
                Factor::CavityLorentzian => lorentzian(dk, self.params.kappa),
                Factor::InputLorentzian { kappa_in } => lorentzian(dk, kappa_in),
                Factor::DL => cached(&mut d, || self.transfer.d(k))?.0,
                Factor::DR => cached(&mut d, || self.transfer.d(k))?.1,
                Factor::CL => cached(&mut c, || self.transfer.c(k))?.0,
                Factor::CR => cached(&mut c, || self.transfer.c(k))?.1,
                Factor::CLPower(m) => cached(&mut c, || self.transfer.c(k))?.0.powu(m),
                Factor::Constant(z) => z,
            };
        }
        Ok(value)
    }

    /// `|f(k)|²` sampled at each point of `grid`.
    pub fn density(&self, grid: &[f64]) -> Result<Vec<f64>> {
        grid.iter().map(|&k| Ok(self.eval(k)?.norm_sqr())).collect()
    }

    /// Exact rational form in the offset variable `k - k_c`, for the residue oracle.
    pub fn to_rational(&self) -> Result<RationalSpectrum> {
        let p = &self.params;
        let one = Complex64::new(1.0, 0.0);
        let uncoupled = p.coupling_sum() == 0.0;
        let w = self.transfer.poles();
        let upper = Complex64::new(0.0, p.kappa / 2.0);
        let (ll, rr) = (p.lambda_l * p.lambda_l, p.lambda_r * p.lambda_r);

        let d_left_num = vec![
            Complex64::new(-rr, -p.delta_e * p.kappa / 2.0),
            Complex64::new(-p.delta_e, p.kappa / 2.0),
            one,
        ];
        let c_left_num = vec![
            Complex64::new(-p.delta_e * p.kappa * p.kappa / 4.0, p.kappa * (rr - 2.0 * ll) / 2.0),
            Complex64::new(p.kappa * p.kappa / 4.0 - rr - 2.0 * ll, 0.0),
            Complex64::new(-p.delta_e, 0.0),
            one,
        ];

        let mut poles = Vec::new();
        let mut numerator = vec![one];
        let mut prefactor = one / self.norm;
        for factor in &self.factors {
            match *factor {
                Factor::CavityLorentzian => {
                    prefactor *= (p.kappa / (2.0 * PI)).sqrt();
                    poles.push((-upper, 1));
                }
                Factor::InputLorentzian { kappa_in } => {
                    prefactor *= (kappa_in / (2.0 * PI)).sqrt();
                    poles.push((Complex64::new(0.0, -kappa_in / 2.0), 1));
                }
                Factor::Constant(z) => prefactor *= z,
                _ if uncoupled => {
                    if matches!(factor, Factor::DR | Factor::CR) {
                        prefactor = Complex64::new(0.0, 0.0);
                    }
                }
                Factor::DL => {
                    numerator = poly_mul(&numerator, &d_left_num);
                    poles.extend([(w.omega_plus, 1), (w.omega_minus, 1)]);
                }
                Factor::DR => {
                    prefactor *= SQRT_2 * p.lambda_l * p.lambda_r;
                    poles.extend([(w.omega_plus, 1), (w.omega_minus, 1)]);
                }
                Factor::CL | Factor::CLPower(_) => {
                    let m = match *factor {
                        Factor::CLPower(m) => m,
                        _ => 1,
                    };
                    numerator = poly_mul(&numerator, &poly_pow(&c_left_num, m));
                    poles.extend([(upper, m), (w.omega_plus, m), (w.omega_minus, m)]);
                }
                Factor::CR => {
                    prefactor *= Complex64::new(0.0, SQRT_2 * p.kappa * p.lambda_l * p.lambda_r);
                    poles.extend([(upper, 1), (w.omega_plus, 1), (w.omega_minus, 1)]);
                }
            }
        }
        RationalSpectrum::new(poles, numerator, prefactor)
    }
}

fn cached<F>(slot: &mut Option<(Complex64, Complex64)>, f: F) -> Result<(Complex64, Complex64)>
where
    F: FnOnce() -> Result<(Complex64, Complex64)>,
{
    if let Some(v) = slot {
        return Ok(*v);
    }
    let v = f()?;
    *slot = Some(v);
    Ok(v)
}

impl Spectrum for SpectralFunction {
    fn amplitude(&self, k: f64) -> Result<Complex64> {
        self.eval(k)
    }

    fn center(&self) -> f64 {
        self.params.k_c
    }

    /// Narrowest Lorentzian width present, else κ.
    fn width(&self) -> f64 {
        self.factors
            .iter()
            .filter_map(|f| match *f {
                Factor::CavityLorentzian => Some(self.params.kappa),
                Factor::InputLorentzian { kappa_in } => Some(kappa_in),
                _ => None,
            })
            .fold(f64::INFINITY, f64::min)
            .min(self.params.kappa)
    }

    fn features(&self) -> Vec<f64> {
        let p = &self.params;
        let mut points = vec![p.k_c];
        let mut half_width = |w: f64| {
            points.extend([p.k_c - w / 2.0, p.k_c + w / 2.0]);
        };
        let mut has_transfer = false;
        for factor in &self.factors {
            match *factor {
                Factor::CavityLorentzian => half_width(p.kappa),
                Factor::InputLorentzian { kappa_in } => {
                    half_width(kappa_in);
                    half_width(10.0 * kappa_in);
                }
                Factor::Constant(_) => {}
                _ => has_transfer = true,
            }
        }
        if has_transfer {
            points.extend([p.k_c - p.kappa / 2.0, p.k_c + p.kappa / 2.0]);
            for w in self.transfer.poles().as_array() {
                let centre = p.k_c + w.re;
                let half = w.im.abs().max(1e-3 * p.kappa);
                points.extend([centre - half, centre, centre + half]);
            }
        }
        points
    }
}
