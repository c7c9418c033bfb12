//! First-round success probability of a cavity photon as the coupling grows.
//!
//! In the strong-coupling limit the right-polarized branch takes exactly half.

use cqed_feedback::{FeedbackEngine, SystemParams};

fn main() -> cqed_feedback::Result<()> {
    println!("{:>10} {:>12} {:>12} {:>10}", "lambda_L", "p1_R", "p1_L", "sum-1");
    for lambda_l in [0.1, 0.25, 0.5, 1.0, 2.5, 10.0, 25.0, 250.0] {
        let engine = FeedbackEngine::new(SystemParams::optimal(1.0, lambda_l)?)?;
        let (right, left) = engine.first_round_prob()?;
        println!("{lambda_l:>10} {right:>12.8} {left:>12.8} {:>10.1e}", right + left - 1.0);
    }

    // Away from the optimal ratio the first round does worse.
    let detuned = SystemParams::new(1.0, 0.0, 1.5, 2.5, 2.5)?;
    let (right, _) = FeedbackEngine::new(detuned)?.first_round_prob()?;
    println!("\ndetuned (delta_e = 1.5, lambda_R = lambda_L = 2.5): p1_R = {right:.6}");
    Ok(())
}
