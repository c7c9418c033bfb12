//! Exact real-line integrals of `|s(x)|²` for rational `s` by the residue theorem.
//!
//! `|s(x)|² = s(x) s̄(x)` where `s̄` has conjugated coefficients and poles. The product
//! is rational with no real poles, so its integral over ℝ is `2πi` times the sum of the
//! residues in the upper half plane. Residues at poles of order `m` are read off as the
//! `(m-1)`-th Taylor coefficient of the regular part, built from shifted polynomials and
//! binomial series, which avoids repeated numerical differentiation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest total pole multiplicity the oracle accepts.
pub const MAX_ORACLE_MULTIPLICITY: u32 = 12;

/// `prefactor · numerator(x) / Π (x - p)^m` in the offset variable `x = k - k_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSpectrum {
    poles: Vec<(Complex64, u32)>,
    numerator: Vec<Complex64>,
    prefactor: Complex64,
}

impl RationalSpectrum {
    /// Builds a spectrum, merging coincident poles.
    ///
    /// `numerator` holds coefficients in ascending powers.
    pub fn new(
        poles: impl IntoIterator<Item = (Complex64, u32)>,
        numerator: Vec<Complex64>,
        prefactor: Complex64,
    ) -> Result<Self> {
        let mut merged = Vec::new();
        for (p, m) in poles {
            if m > 0 {
                push_pole(&mut merged, p, m);
            }
        }
        let scale = pole_scale(&merged);
        if let Some((p, _)) = merged.iter().find(|(p, _)| p.im.abs() <= 1e-14 * scale) {
            return Err(Error::Domain(format!("pole {p} lies on the real axis")));
        }
        let numerator = trim(numerator);
        let total: u32 = merged.iter().map(|(_, m)| m).sum();
        let degree = numerator.len().saturating_sub(1) as u32;
        if !numerator.is_empty() && degree + 1 > total {
            return Err(Error::Domain(format!(
                "numerator degree {degree} needs at least {} poles, have {total}",
                degree + 1
            )));
        }
        Ok(RationalSpectrum {
            poles: merged,
            numerator,
            prefactor,
        })
    }

    pub fn poles(&self) -> &[(Complex64, u32)] {
        &self.poles
    }

    pub fn numerator(&self) -> &[Complex64] {
        &self.numerator
    }

    pub fn prefactor(&self) -> Complex64 {
        self.prefactor
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.poles.iter().map(|(_, m)| m).sum()
    }

    /// Same function times `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        RationalSpectrum {
            prefactor: self.prefactor * c,
            ..self.clone()
        }
    }

    /// Pointwise product.
    pub fn product(&self, other: &RationalSpectrum) -> Result<Self> {
        RationalSpectrum::new(
            self.poles.iter().chain(other.poles.iter()).copied(),
            poly_mul(&self.numerator, &other.numerator),
            self.prefactor * other.prefactor,
        )
    }

    pub fn value(&self, x: f64) -> Complex64 {
        let z = Complex64::new(x, 0.0);
        let mut v = self.prefactor * poly_eval(&self.numerator, z);
        for &(p, m) in &self.poles {
            v /= (z - p).powu(m);
        }
        v
    }

    fn is_zero(&self) -> bool {
        self.prefactor == Complex64::new(0.0, 0.0) || self.numerator.is_empty()
    }
}

fn pole_scale(poles: &[(Complex64, u32)]) -> f64 {
    poles.iter().map(|(p, _)| p.norm()).fold(1.0, f64::max)
}

fn push_pole(poles: &mut Vec<(Complex64, u32)>, p: Complex64, m: u32) {
    let tol = 1e-12 * p.norm().max(1.0);
    match poles.iter_mut().find(|(q, _)| (*q - p).norm() <= tol) {
        Some(entry) => entry.1 += m,
        None => poles.push((p, m)),
    }
}

fn trim(mut coeffs: Vec<Complex64>) -> Vec<Complex64> {
    while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
        coeffs.pop();
    }
    coeffs
}

pub(crate) fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn poly_pow(a: &[Complex64], n: u32) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..n {
        out = poly_mul(&out, a);
    }
    out
}

fn poly_eval(a: &[Complex64], z: Complex64) -> Complex64 {
    a.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Coefficients of `P(z0 + h)` in powers of `h`, up to `h^order`.
fn taylor_shift(a: &[Complex64], z0: Complex64, order: usize) -> Vec<Complex64> {
    // Repeated synthetic division by (z - z0).
    let mut work = a.to_vec();
    let mut out = Vec::with_capacity(order + 1);
    for _ in 0..=order {
        if work.is_empty() {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let n = work.len();
        for i in (0..n - 1).rev() {
            let carry = work[i + 1] * z0;
            work[i] += carry;
        }
        out.push(work[0]);
        work.remove(0);
    }
    out
}

fn series_mul(a: &[Complex64], b: &[Complex64], order: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        // exact: acc * (n - i) is divisible by (i + 1)
        acc = acc * (n - i) / (i + 1);
    }
    acc as f64
}

/// `(z0 + h - q)^(-m)` as a power series in `h`, up to `h^order`.
fn inverse_power_series(z0: Complex64, q: Complex64, m: u32, order: usize) -> Vec<Complex64> {
    let d = z0 - q;
    let inv = d.inv();
    let mut out = Vec::with_capacity(order + 1);
    let mut term = inv.powu(m);
    for j in 0..=order as u64 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        out.push(term * sign * binomial(m as u64 + j - 1, j));
        term *= inv;
    }
    out
}

/// Exact `∫ |s(x)|² dx` over the real line.
pub fn integrate_abs2_residues(s: &RationalSpectrum) -> Result<f64> {
    let total = s.total_multiplicity();
    if total > MAX_ORACLE_MULTIPLICITY {
        return Err(Error::OracleUnavailable(format!(
            "total pole multiplicity {total} exceeds {MAX_ORACLE_MULTIPLICITY}"
        )));
    }
    if s.is_zero() {
        return Ok(0.0);
    }
    if total == 0 {
        return Err(Error::Domain("a non-zero polynomial is not square integrable".into()));
    }

    // Poles of s · s̄.
    let mut poles: Vec<(Complex64, u32)> = Vec::new();
    for &(p, m) in &s.poles {
        push_pole(&mut poles, p, m);
        push_pole(&mut poles, p.conj(), m);
    }
    let numerator = &s.numerator;
    let conj_numerator: Vec<Complex64> = numerator.iter().map(|c| c.conj()).collect();
    let weight = s.prefactor.norm_sqr();

    let mut sum = Complex64::new(0.0, 0.0);
    for (idx, &(z0, m)) in poles.iter().enumerate() {
        if z0.im <= 0.0 {
            continue;
        }
        let order = (m - 1) as usize;
        let mut series = series_mul(
            &taylor_shift(numerator, z0, order),
            &taylor_shift(&conj_numerator, z0, order),
            order,
        );
        for (jdx, &(q, mq)) in poles.iter().enumerate() {
            if jdx != idx {
                series = series_mul(&series, &inverse_power_series(z0, q, mq, order), order);
            }
        }
        sum += series[order];
    }
    let value = (Complex64::new(0.0, 2.0 * PI) * sum).re * weight;
    Ok(value)
}
