//! The feedback protocol: a left-polarized output photon is re-injected until a
//! right-polarized photon heralds entanglement.
//!
//! With `L_m = ∫ |C_L^(m-1) D_L f_c|² dk` the probability that the first `m` rounds all
//! returned a left-polarized photon, round probabilities are
//!
//! ```text
//! p_1 = ∫ |D_R f_c|²,    p_n = ∫ |C_R C_L^(n-2) D_L f_c|²   (n ≥ 2)
//! ```
//!
//! and unitarity of `(C_L, C_R)` telescopes the cumulative success to `P_N = 1 - L_N`.
//! Every quantity is a deterministic integral; no measurement outcomes are sampled.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::quadrature::{normalize, Quadrature, DEFAULT_TOLERANCE, MAX_ORACLE_MULTIPLICITY};
use crate::spectrum::{Factor, SpectralFunction};

/// Tolerance used for integrands too singular for the residue oracle.
pub const LARGE_ROUND_TOLERANCE: f64 = 1e-12;

/// Allowed disagreement between the summed and telescoped cumulative probability.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-7;

/// Which transfer family governs a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RoundKind {
    /// The photon starts inside the cavity: `D` coefficients.
    FirstRoundCavity,
    /// The photon is injected from outside: `C` coefficients.
    ScatteringRound,
}

impl RoundKind {
    pub fn for_round(n: usize) -> Self {
        if n <= 1 {
            RoundKind::FirstRoundCavity
        } else {
            RoundKind::ScatteringRound
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundRecord {
    pub n: usize,
    pub kind: RoundKind,
    /// Probability that entanglement is first heralded in round `n`.
    pub p_r: f64,
    /// Probability that rounds `1..=n` all emitted a left-polarized photon.
    pub p_l_cumulative: f64,
    /// Probability of entanglement within the first `n` rounds (running sum of `p_r`).
    pub p_r_cumulative: f64,
}

/// `|f_n(k)|²` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub n: usize,
    pub k: Vec<f64>,
    pub density: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeedbackTrace {
    pub params: SystemParams,
    pub rounds: Vec<RoundRecord>,
    pub snapshots: Vec<Snapshot>,
    /// False when one transition is decoupled: the protocol can never succeed.
    pub terminating: bool,
}

impl FeedbackTrace {
    /// `|P_n - (1 - L_n)|` for every recorded round.
    pub fn telescoping_residuals(&self) -> Vec<f64> {
        self.rounds
            .iter()
            .map(|r| (r.p_r_cumulative - (1.0 - r.p_l_cumulative)).abs())
            .collect()
    }

    pub fn cumulative(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.p_r_cumulative).collect()
    }
}

/// Overall success after `rounds` independent attempts with constant success `p`.
pub fn constant_p_baseline(p: f64, rounds: u32) -> f64 {
    1.0 - (1.0 - p).powi(rounds as i32)
}

/// Evaluates round probabilities for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackEngine {
    params: SystemParams,
    tolerance: f64,
}

impl FeedbackEngine {
    pub fn new(params: SystemParams) -> Result<Self> {
        params.validate()?;
        Ok(FeedbackEngine {
            params,
            tolerance: DEFAULT_TOLERANCE,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::Domain(format!("tolerance must be positive, got {tolerance}")));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    fn spectrum(&self, factors: Vec<Factor>) -> Result<SpectralFunction> {
        SpectralFunction::new(self.params, factors)
    }

    /// `∫ |f|²`, tightening the tolerance where the oracle cannot vouch for the result.
    fn integrate(&self, f: &SpectralFunction) -> Result<f64> {
        let tol = if f.pole_count() > MAX_ORACLE_MULTIPLICITY {
            self.tolerance.min(LARGE_ROUND_TOLERANCE)
        } else {
            self.tolerance
        };
        Ok(Quadrature::new(tol).integrate_abs2(f)?.value)
    }

    /// `C_L^(m-1) D_L f_c`, the unnormalized left-polarized amplitude after `m` rounds.
    pub fn left_amplitude(&self, m: usize) -> Result<SpectralFunction> {
        if m == 0 {
            return Err(Error::Domain("round index starts at 1".into()));
        }
        let mut factors = vec![Factor::CavityLorentzian, Factor::DL];
        if m > 1 {
            factors.push(Factor::CLPower((m - 1) as u32));
        }
        self.spectrum(factors)
    }

    /// `L_m`, the probability that rounds `1..=m` all emitted a left-polarized photon.
    pub fn left_survival(&self, m: usize) -> Result<f64> {
        self.integrate(&self.left_amplitude(m)?)
    }

    /// `(p_1^R, p_1^L)` for a cavity photon.
    pub fn first_round_prob(&self) -> Result<(f64, f64)> {
        let right = self.integrate(&self.spectrum(vec![Factor::CavityLorentzian, Factor::DR])?)?;
        let left = self.left_survival(1)?;
        Ok((right, left))
    }

    /// Normalized spectrum `f_n` of the left-polarized photon after `n` rounds.
    pub fn spectral_after_n(&self, n: usize) -> Result<SpectralFunction> {
        normalize(self.left_amplitude(n)?, self.tolerance)
    }

    /// `p_n^R = ∫ |C_R C_L^(n-2) D_L f_c|²` for `n ≥ 2`.
    pub fn round_prob(&self, n: usize) -> Result<f64> {
        if n < 2 {
            return Err(Error::Domain(format!(
                "round_prob covers re-injected rounds n >= 2, got {n}"
            )));
        }
        let f = self.left_amplitude(n - 1)?.times(Factor::CR)?;
        self.integrate(&f)
    }

    /// `p_n^R` through the normalized previous spectrum: `L_(n-1) · ∫ |C_R f_(n-1)|²`.
    pub fn round_prob_factored(&self, n: usize) -> Result<f64> {
        if n < 2 {
            return Err(Error::Domain(format!(
                "round_prob covers re-injected rounds n >= 2, got {n}"
            )));
        }
        let survival = self.left_survival(n - 1)?;
        let previous = self.spectral_after_n(n - 1)?;
        let conditional = self.integrate(&previous.times(Factor::CR)?)?;
        Ok(survival * conditional)
    }

    /// `P_N^R = 1 - L_N`, after checking it against the direct sum of round probabilities.
    pub fn cumulative_prob(&self, rounds: usize) -> Result<f64> {
        if rounds == 0 {
            return Err(Error::Domain("at least one round is required".into()));
        }
        let (p1, _) = self.first_round_prob()?;
        let mut direct = p1;
        for n in 2..=rounds {
            direct += self.round_prob(n)?;
        }
        let closed = 1.0 - self.left_survival(rounds)?;
        let diff = (direct - closed).abs();
        if diff > CONSISTENCY_TOLERANCE {
            return Err(Error::Consistency {
                direct,
                closed,
                diff,
            });
        }
        Ok(closed)
    }

    /// Per-round record for rounds `1..=rounds`.
    pub fn trace(&self, rounds: usize) -> Result<FeedbackTrace> {
        self.trace_with_snapshots(rounds, &[], &[])
    }

    /// As [`trace`](Self::trace), also sampling `|f_n|²` on `grid` for each `n` in `snapshot_rounds`.
    pub fn trace_with_snapshots(
        &self,
        rounds: usize,
        grid: &[f64],
        snapshot_rounds: &[usize],
    ) -> Result<FeedbackTrace> {
        if rounds == 0 {
            return Err(Error::Domain("at least one round is required".into()));
        }
        let (p1, l1) = self.first_round_prob()?;
        let mut records = vec![RoundRecord {
            n: 1,
            kind: RoundKind::FirstRoundCavity,
            p_r: p1,
            p_l_cumulative: l1,
            p_r_cumulative: p1,
        }];
        for n in 2..=rounds {
            let p_r = self.round_prob(n)?;
            let previous = records[n - 2].p_r_cumulative;
            records.push(RoundRecord {
                n,
                kind: RoundKind::ScatteringRound,
                p_r,
                p_l_cumulative: self.left_survival(n)?,
                p_r_cumulative: previous + p_r,
            });
        }
        let snapshots = snapshot_rounds
            .iter()
            .map(|&n| {
                let f = self.spectral_after_n(n)?;
                Ok(Snapshot {
                    n,
                    k: grid.to_vec(),
                    density: f.density(grid)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FeedbackTrace {
            params: self.params,
            rounds: records,
            snapshots,
            terminating: self.params.can_entangle(),
        })
    }

    /// Smallest `N ≤ max_rounds` with `P_N^R ≥ target`.
    ///
    /// Fails with [`Error::NonTerminating`] when one transition is decoupled, since no
    /// number of rounds can then succeed.
    pub fn rounds_to_reach(&self, target: f64, max_rounds: usize) -> Result<Option<usize>> {
        if !self.params.can_entangle() {
            return Err(Error::NonTerminating(format!(
                "lambda_l = {}, lambda_r = {}: the right-polarized branch is never populated",
                self.params.lambda_l, self.params.lambda_r
            )));
        }
        for n in 1..=max_rounds {
            if 1.0 - self.left_survival(n)? >= target {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// Success probability of one scattering round for a Lorentzian input of width `kappa_in`.
    pub fn single_trial_prob(&self, kappa_in: f64) -> Result<f64> {
        let f = self.spectrum(vec![Factor::InputLorentzian { kappa_in }, Factor::CR])?;
        self.integrate(&f)
    }

    /// Same input photon treated with the cavity-photon (`D`) coefficients.
    ///
    /// Equals `p_1^R` at `kappa_in = κ`; kept for comparison with [`single_trial_prob`](Self::single_trial_prob).
    pub fn single_trial_prob_cavity(&self, kappa_in: f64) -> Result<f64> {
        let f = self.spectrum(vec![Factor::InputLorentzian { kappa_in }, Factor::DR])?;
        self.integrate(&f)
    }

    /// Amplitudes `(left, right)` emitted in round `n` at wavenumber `k`, before normalization.
    pub fn output_amplitudes(&self, n: usize, k: f64) -> Result<(Complex64, Complex64)> {
        if n == 1 {
            let f = self.spectrum(vec![Factor::CavityLorentzian])?;
            let (dl, dr) = crate::model::transfer_d(k, &self.params)?;
            let fc = f.eval(k)?;
            return Ok((fc * dl, fc * dr));
        }
        let input = self.left_amplitude(n - 1)?.eval(k)?;
        crate::model::Transfer::new(&self.params)?.scatter(k, input)
    }
}
