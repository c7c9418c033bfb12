use cqed_feedback::{Error, MirrorCavity};
use num_complex::Complex64;
use std::f64::consts::PI;

#[test]
fn adjacent_modes_are_one_free_spectral_range_apart() {
    for l in [1.0, 2.5] {
        let c = MirrorCavity::lossless(0.99, l).unwrap();
        let fsr = c.free_spectral_range();
        assert!((fsr - PI / l).abs() < 1e-15);
        let a = c.find_peak(PI / (2.0 * l)).unwrap();
        let b = c.find_peak(PI / (2.0 * l) + fsr).unwrap();
        assert!(((b - a) - fsr).abs() < 1e-9, "l={l}: spacing {}", b - a);
    }
}

#[test]
fn r099_fits_a_single_lorentzian() {
    let q = MirrorCavity::lossless(0.99, 1.0).unwrap().find_quasimode(1.5).unwrap();
    assert!(q.fit_residual < 0.02);
    assert!((q.kappa_fit - q.half_max_width).abs() / q.half_max_width < 0.05);
    assert!((q.k_c - PI / 2.0).abs() < 1e-8);
}

#[test]
fn better_mirror_gives_narrower_cleaner_mode() {
    let q1 = MirrorCavity::lossless(0.99, 1.0).unwrap().find_quasimode(1.5).unwrap();
    let q2 = MirrorCavity::lossless(0.999, 1.0).unwrap().find_quasimode(1.5).unwrap();
    assert!(q2.kappa_fit < q1.kappa_fit);
    assert!(q2.fit_residual < q1.fit_residual);
}

#[test]
fn peak_height_matches_closed_form() {
    let c = MirrorCavity::lossless(0.95, 1.0).unwrap();
    let k = c.find_peak(1.5).unwrap();
    let (inside, _) = c.mode_amplitudes(k);
    let expected = 2.0 * c.t().norm() / (1.0 - c.r().norm());
    assert!((inside.norm() - expected).abs() < 1e-9 * expected);
}

#[test]
fn bad_cavity_and_bad_mirror_are_rejected() {
    let leaky = MirrorCavity::lossless(0.5, 1.0).unwrap();
    assert!(!leaky.is_good_cavity());
    assert!(matches!(leaky.find_quasimode(1.5), Err(Error::Domain(_))));
    let one = Complex64::new(1.0, 0.0);
    assert!(MirrorCavity::new(one, Complex64::new(0.0, 0.1), 1.0).is_err());
    assert!(MirrorCavity::new(Complex64::new(0.9, 0.0), Complex64::new(0.0, 0.0), 1.0).is_err());
    assert!(MirrorCavity::lossless(0.9, 0.0).is_err());
}

#[test]
fn no_back_reflection_means_no_feedback() {
    let t = Complex64::new(0.0, 0.8);
    let c = MirrorCavity::new(Complex64::new(0.0, 0.0), t, 1.0).unwrap();
    for k in [0.0, 0.4, 2.2] {
        let (inside, outside) = c.mode_amplitudes(k);
        assert!((inside - Complex64::new(0.0, -2.0) * t).norm() < 1e-15);
        assert!((outside + t).norm() < 1e-15);
    }
}

#[test]
fn amplitudes_are_periodic_in_free_spectral_range() {
    let c = MirrorCavity::lossless(0.97, 1.3).unwrap();
    let fsr = c.free_spectral_range();
    for k in [0.05, 0.9, 1.7] {
        let (a, _) = c.mode_amplitudes(k);
        let (b, _) = c.mode_amplitudes(k + 3.0 * fsr);
        assert!((a.norm() - b.norm()).abs() < 1e-10 * a.norm());
    }
}
