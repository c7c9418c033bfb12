//! How the left-polarized photon's spectrum is reshaped round after round.
//!
//! Each failed round carves a hole at the resonance, leaving weight in the Rabi
//! sidebands where the atoms barely act, which is why success saturates.

use cqed_feedback::{FeedbackEngine, SpectralFunction, SystemParams};

fn main() -> cqed_feedback::Result<()> {
    let params = SystemParams::optimal(1.0, 2.5)?;
    let engine = FeedbackEngine::new(params)?;
    let grid: Vec<f64> = (0..=32).map(|i| -8.0 + 0.5 * i as f64).collect();

    let mut columns = vec![("f_c".to_string(), SpectralFunction::cavity(params)?.density(&grid)?)];
    for n in [1, 2, 5, 20] {
        columns.push((format!("f_{n}"), engine.spectral_after_n(n)?.density(&grid)?));
    }

    print!("{:>6}", "dk");
    for (name, _) in &columns {
        print!(" {name:>10}");
    }
    println!();
    for (i, k) in grid.iter().enumerate() {
        print!("{:>6.1}", k - params.k_c);
        for (_, density) in &columns {
            print!(" {:>10.5}", density[i]);
        }
        println!();
    }
    Ok(())
}
