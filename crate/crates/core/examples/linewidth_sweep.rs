//! Single-trial success against the linewidth of an externally injected photon.
//!
//! Narrow photons sit entirely on resonance, where `|C_R| = 1`.

use cqed_feedback::scenario::log_space;
use cqed_feedback::{FeedbackEngine, SystemParams};

fn main() -> cqed_feedback::Result<()> {
    let ratios = [0.1, 0.5, 2.5];
    let engines = ratios
        .iter()
        .map(|&l| FeedbackEngine::new(SystemParams::optimal(1.0, l)?))
        .collect::<cqed_feedback::Result<Vec<_>>>()?;

    print!("{:>12}", "kappa_in");
    for l in ratios {
        print!(" {:>14}", format!("lambda_L={l}"));
    }
    println!();
    for kappa_in in log_space(1e-3, 10.0, 17) {
        print!("{kappa_in:>12.4e}");
        for e in &engines {
            print!(" {:>14.8}", e.single_trial_prob(kappa_in)?);
        }
        println!();
    }
    Ok(())
}
