use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::modes::{MirrorCavity, GOOD_CAVITY_THRESHOLD};
use crate::quadrature::DEFAULT_TOLERANCE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// |D_L|², |D_R|², |C_L|², |C_R|² over the frequency grid.
    Fig2,
    /// Normalized spectra |f_c|², |f_1|², |f_2|², |f_10|².
    Fig3,
    /// Cumulative success versus number of rounds.
    Fig4,
    /// Single-trial success versus input linewidth.
    Fig5,
    /// First-round, cumulative and single-trial success versus coupling.
    Sweep,
    /// Leaky-cavity normal modes and quasi-mode fit.
    Modes,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Scenario::Fig2 => "fig2",
            Scenario::Fig3 => "fig3",
            Scenario::Fig4 => "fig4",
            Scenario::Fig5 => "fig5",
            Scenario::Sweep => "sweep",
            Scenario::Modes => "modes",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub k_min: f64,
    pub k_max: f64,
    pub samples: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let span = self.k_max - self.k_min;
        let last = (self.samples - 1) as f64;
        (0..self.samples)
            .map(|i| self.k_min + span * i as f64 / last)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

/// Mirror description for the `modes` scenario. `t` defaults to the lossless-style
/// `i·sqrt(1 - r²)` for real `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityConfig {
    pub r: [f64; 2],
    #[serde(default)]
    pub t: Option<[f64; 2]>,
    pub length: f64,
    #[serde(default)]
    pub k_guess: Option<f64>,
    #[serde(default)]
    pub good_cavity_threshold: Option<f64>,
}

impl Default for CavityConfig {
    fn default() -> Self {
        CavityConfig {
            r: [0.99, 0.0],
            t: None,
            length: 1.0,
            k_guess: None,
            good_cavity_threshold: None,
        }
    }
}

/// Scenario configuration as read from JSON; every field is optional.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Option<Scenario>,
    pub params: Option<SystemParams>,
    pub grid: Option<Grid>,
    pub rounds: Option<usize>,
    /// Input linewidths as ratios `κ_in / κ`.
    pub kappa_in_grid: Option<Vec<f64>>,
    /// Couplings `λ_L / κ` at the optimal ratio, for fig4, fig5 and sweep.
    pub lambda_ratios: Option<Vec<f64>>,
    /// Rounds whose spectra fig3 samples.
    pub snapshot_rounds: Option<Vec<usize>>,
    pub tolerance: Option<f64>,
    pub output: Option<OutputConfig>,
    pub cavity: Option<CavityConfig>,
}

/// Fully resolved configuration; echoed verbatim into every output's metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolvedConfig {
    pub scenario: Scenario,
    pub params: SystemParams,
    pub grid: Grid,
    pub rounds: usize,
    pub kappa_in_grid: Vec<f64>,
    pub lambda_ratios: Vec<f64>,
    pub snapshot_rounds: Vec<usize>,
    pub tolerance: f64,
    pub format: OutputFormat,
    pub cavity: ResolvedCavity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolvedCavity {
    pub r: [f64; 2],
    pub t: [f64; 2],
    pub length: f64,
    pub k_guess: f64,
    pub good_cavity_threshold: f64,
}

impl ResolvedCavity {
    pub fn mirror(&self) -> Result<MirrorCavity> {
        Ok(MirrorCavity::new(
            Complex64::new(self.r[0], self.r[1]),
            Complex64::new(self.t[0], self.t[1]),
            self.length,
        )?
        .with_good_cavity_threshold(self.good_cavity_threshold))
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect()
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Applies defaults for `scenario` and validates everything.
    pub fn resolve(&self, scenario: Scenario) -> Result<ResolvedConfig> {
        if let Some(declared) = self.scenario {
            if declared != scenario {
                return Err(Error::Config(format!(
                    "config declares scenario {declared} but {scenario} was requested"
                )));
            }
        }
        let params = self.params.unwrap_or_default();
        params
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;

        let cavity = self.resolve_cavity()?;
        let grid = match (self.grid, scenario) {
            (Some(grid), _) => grid,
            (None, Scenario::Modes) => Grid {
                k_min: 0.0,
                k_max: 2.0 * PI / cavity.length,
                samples: 4001,
            },
            (None, _) => Grid {
                k_min: params.k_c - 8.0 * params.kappa,
                k_max: params.k_c + 8.0 * params.kappa,
                samples: 2001,
            },
        };
        if grid.samples < 2 {
            return Err(Error::Config("grid.samples must be at least 2".into()));
        }
        if !(grid.k_min < grid.k_max) || !grid.k_min.is_finite() || !grid.k_max.is_finite() {
            return Err(Error::Config("grid requires finite k_min < k_max".into()));
        }

        let rounds = self.rounds.unwrap_or(100);
        if rounds < 1 {
            return Err(Error::Config("rounds must be at least 1".into()));
        }
        if scenario == Scenario::Fig4 && rounds < 10 {
            return Err(Error::Config("fig4 needs rounds >= 10".into()));
        }

        let kappa_in_grid = self
            .kappa_in_grid
            .clone()
            .unwrap_or_else(|| log_space(1e-3, 10.0, 41));
        if kappa_in_grid.is_empty() || kappa_in_grid.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(Error::Config("kappa_in_grid must hold positive ratios".into()));
        }

        let lambda_ratios = self.lambda_ratios.clone().unwrap_or_else(|| match scenario {
            Scenario::Fig4 => vec![2.5, 25.0],
            Scenario::Fig5 => vec![0.1, 0.5, 2.5],
            _ => vec![0.1, 0.25, 0.5, 1.0, 2.5, 5.0, 10.0, 25.0],
        });
        if lambda_ratios.is_empty() || lambda_ratios.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(Error::Config("lambda_ratios must hold positive values".into()));
        }

        let snapshot_rounds = self.snapshot_rounds.clone().unwrap_or_else(|| vec![1, 2, 10]);
        if snapshot_rounds.contains(&0) {
            return Err(Error::Config("snapshot_rounds start at 1".into()));
        }

        let tolerance = self.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::Config("tolerance must be positive".into()));
        }

        let format = self
            .output
            .as_ref()
            .and_then(|o| o.format)
            .unwrap_or_default();

        Ok(ResolvedConfig {
            scenario,
            params,
            grid,
            rounds,
            kappa_in_grid,
            lambda_ratios,
            snapshot_rounds,
            tolerance,
            format,
            cavity,
        })
    }

    fn resolve_cavity(&self) -> Result<ResolvedCavity> {
        let c = self.cavity.unwrap_or_default();
        let t = match c.t {
            Some(t) => t,
            None if c.r[1] == 0.0 && c.r[0].abs() < 1.0 => [0.0, (1.0 - c.r[0] * c.r[0]).sqrt()],
            None => {
                return Err(Error::Config(
                    "cavity.t is required unless r is real with |r| < 1".into(),
                ))
            }
        };
        let resolved = ResolvedCavity {
            r: c.r,
            t,
            length: c.length,
            // first quasi-mode of a real positive r sits at e^{2ikl} = -1
            k_guess: c.k_guess.unwrap_or(PI / (2.0 * c.length)),
            good_cavity_threshold: c.good_cavity_threshold.unwrap_or(GOOD_CAVITY_THRESHOLD),
        };
        resolved.mirror().map_err(|e| Error::Config(e.to_string()))?;
        Ok(resolved)
    }
}

impl ResolvedConfig {
    /// Parameters at coupling `λ_L = ratio·κ` with `λ_R = √2 λ_L`.
    pub fn optimal_params(&self, ratio: f64) -> SystemParams {
        let lambda_l = ratio * self.params.kappa;
        SystemParams {
            lambda_l,
            lambda_r: SQRT_2 * lambda_l,
            ..self.params
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let r = ScenarioConfig::default().resolve(Scenario::Fig2).unwrap();
        assert_eq!(r.grid.samples, 2001);
        assert_eq!(r.grid.k_min, -8.0);
        assert_eq!(r.params, SystemParams::default());
        assert_eq!(r.rounds, 100);
        assert_eq!(r.tolerance, DEFAULT_TOLERANCE);
        assert_eq!(r.kappa_in_grid.len(), 41);
        assert!((r.kappa_in_grid[0] - 1e-3).abs() < 1e-18);
        let g = r.grid.points();
        assert_eq!(g[1000], 0.0);
        assert_eq!(*g.last().unwrap(), 8.0);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ScenarioConfig::from_json(r#"{"roundz": 3}"#).is_err());
        assert!(ScenarioConfig::from_json(r#"{"params": {"kappa": 1, "k_c": 0, "delta_e": 0, "lambda_l": 1, "lambda_r": 1, "x": 2}}"#).is_err());
        assert!(ScenarioConfig::from_json(r#"{"rounds": 3, "tolerance": 1e-9}"#).is_ok());
    }

    #[test]
    fn invalid_values_rejected() {
        let bad = [
            r#"{"grid": {"k_min": 1, "k_max": 0, "samples": 10}}"#,
            r#"{"grid": {"k_min": 0, "k_max": 1, "samples": 1}}"#,
            r#"{"rounds": 0}"#,
            r#"{"tolerance": 0}"#,
            r#"{"kappa_in_grid": [0.1, -1]}"#,
            r#"{"params": {"kappa": 0, "k_c": 0, "delta_e": 0, "lambda_l": 1, "lambda_r": 1}}"#,
            r#"{"scenario": "fig3"}"#,
            r#"{"cavity": {"r": [1.2, 0], "length": 1}}"#,
        ];
        for text in bad {
            let cfg = ScenarioConfig::from_json(text).unwrap();
            assert!(matches!(cfg.resolve(Scenario::Fig2), Err(Error::Config(_))), "{text}");
        }
        let short = ScenarioConfig::from_json(r#"{"rounds": 5}"#).unwrap();
        assert!(short.resolve(Scenario::Fig4).is_err());
    }

    #[test]
    fn lossless_cavity_default() {
        let r = ScenarioConfig::default().resolve(Scenario::Modes).unwrap();
        let t = (1.0f64 - 0.99 * 0.99).sqrt();
        assert_eq!(r.cavity.t, [0.0, t]);
        assert!((r.grid.k_max - 2.0 * PI).abs() < 1e-15);
    }
}
