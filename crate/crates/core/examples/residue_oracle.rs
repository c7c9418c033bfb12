//! Cross-checks adaptive quadrature against exact residue sums.

use cqed_feedback::{integrate_abs2_residues, Factor, Quadrature, SpectralFunction, SystemParams};

fn main() -> cqed_feedback::Result<()> {
    let params = SystemParams::optimal(1.0, 2.5)?;
    let quad = Quadrature::new(1e-13);
    println!("{:>6} {:>6} {:>20} {:>20} {:>10} {:>6}", "round", "poles", "quadrature", "residues", "rel diff", "evals");
    for n in 2..=6u32 {
        let mut factors = vec![Factor::CavityLorentzian, Factor::DL, Factor::CR];
        if n > 2 {
            factors.push(Factor::CLPower(n - 2));
        }
        let f = SpectralFunction::new(params, factors)?;
        let q = quad.integrate_abs2(&f)?;
        match f.to_rational().and_then(|r| integrate_abs2_residues(&r)) {
            Ok(exact) => println!(
                "{n:>6} {:>6} {:>20.15} {exact:>20.15} {:>10.1e} {:>6}",
                f.pole_count(),
                q.value,
                ((q.value - exact) / exact).abs(),
                q.evaluations
            ),
            Err(e) => println!("{n:>6} {:>6} {:>20.15} {:>20} ({e})", f.pole_count(), q.value, "-"),
        }
    }
    Ok(())
}
