//! Single-photon feedback entanglement of two Λ-atoms in a one-sided leaky cavity.
//!
//! A left-polarized photon interacts with two Λ-atoms sharing a cavity quasi-mode. A
//! right-polarized output heralds a maximally entangled atom pair; a left-polarized
//! output is fed back into the cavity for another round. Every round reshapes the
//! photon's spectrum, so the per-round success probability is not constant.
//!
//! - [`model`]: parameters, Rabi poles and the closed-form transfer coefficients.
//! - [`spectrum`]: spectral functions as lazy products of closed-form factors.
//! - [`quadrature`]: adaptive real-line integration plus an exact residue oracle.
//! - [`feedback`]: round probabilities, cumulative success and input-linewidth sweeps.
//! - [`modes`]: normal modes of the leaky cavity and quasi-mode extraction.
//! - [`scenario`]: figure-data scenarios with CSV/JSON output, used by the binary.

pub mod error;
pub mod feedback;
pub mod model;
pub mod modes;
pub mod quadrature;
pub mod scenario;
pub mod spectrum;

pub use error::{Error, Result};
pub use feedback::{constant_p_baseline, FeedbackEngine, FeedbackTrace, RoundKind, RoundRecord};
pub use model::{
    cavity_spectrum, coupling_g, input_spectrum, rabi_poles, transfer_c, transfer_d,
    ComplexAmplitude, Polarization, RabiPoles, SystemParams, Transfer,
};
pub use modes::{MirrorCavity, QuasiMode};
pub use quadrature::{
    integrate_abs2, integrate_abs2_residues, normalize, Quadrature, QuadratureResult,
    RationalSpectrum, Spectrum,
};
pub use spectrum::{Factor, SpectralFunction};
