//! Cumulative success over many feedback rounds versus a constant-1/2 baseline.

use cqed_feedback::{constant_p_baseline, FeedbackEngine, SystemParams};

fn main() -> cqed_feedback::Result<()> {
    let rounds = 100;
    let engine = FeedbackEngine::new(SystemParams::optimal(1.0, 2.5)?)?;
    let trace = engine.trace(rounds)?;

    println!("{:>4} {:>12} {:>12} {:>12}", "N", "p_N", "P_N", "1-(1/2)^N");
    for r in trace.rounds.iter().filter(|r| r.n <= 10 || r.n % 10 == 0) {
        println!(
            "{:>4} {:>12.8} {:>12.8} {:>12.8}",
            r.n,
            r.p_r,
            r.p_r_cumulative,
            constant_p_baseline(0.5, r.n as u32)
        );
    }
    let worst = trace.telescoping_residuals().into_iter().fold(0.0, f64::max);
    println!("\nmax |sum p_n - (1 - L_N)| = {worst:.1e}");
    if let Some(n) = engine.rounds_to_reach(0.9, 1000)? {
        println!("rounds needed for P_N >= 0.9: {n}");
    }
    Ok(())
}
