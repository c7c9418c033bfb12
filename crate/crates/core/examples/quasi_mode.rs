//! Extracts the quasi-mode of a leaky planar cavity and checks the Lorentzian picture.

use cqed_feedback::MirrorCavity;
use std::f64::consts::PI;

fn main() -> cqed_feedback::Result<()> {
    println!("{:>7} {:>12} {:>12} {:>12} {:>10}", "r", "k_c", "kappa_fit", "FWHM", "residual");
    for r in [0.985, 0.99, 0.995, 0.999] {
        let cavity = MirrorCavity::lossless(r, 1.0)?;
        let mode = cavity.find_quasimode(PI / 2.0)?;
        println!(
            "{r:>7} {:>12.9} {:>12.6e} {:>12.6e} {:>10.2e}",
            mode.k_c, mode.kappa_fit, mode.half_max_width, mode.fit_residual
        );
    }

    let cavity = MirrorCavity::lossless(0.99, 1.0)?;
    let a = cavity.find_peak(PI / 2.0)?;
    let b = cavity.find_peak(PI / 2.0 + cavity.free_spectral_range())?;
    println!("\nmode spacing {:.12} (pi/l = {:.12})", b - a, PI);

    match MirrorCavity::lossless(0.3, 1.0)?.find_quasimode(PI / 2.0) {
        Ok(_) => println!("r = 0.3 unexpectedly accepted"),
        Err(e) => println!("r = 0.3: {e}"),
    }
    Ok(())
}
