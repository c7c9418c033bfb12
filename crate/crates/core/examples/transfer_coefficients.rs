//! Tabulates the cavity-photon (`D`) and scattering (`C`) transfer coefficients across
//! the resonance, together with the Rabi poles that shape them.
//!
//! ```text
//! cargo run --example transfer_coefficients -- 2.5
//! ```

use cqed_feedback::{rabi_poles, transfer_c, transfer_d, SystemParams};

fn main() -> cqed_feedback::Result<()> {
    let lambda_l: f64 = std::env::args().nth(1).map_or(2.5, |s| s.parse().expect("lambda_l/kappa"));
    let params = SystemParams::optimal(1.0, lambda_l)?;
    let poles = rabi_poles(&params)?;
    println!("lambda_L = {lambda_l}, lambda_R = {:.4}", params.lambda_r);
    println!("omega+ = {:.6}, omega- = {:.6}\n", poles.omega_plus, poles.omega_minus);

    println!("{:>6} {:>10} {:>10} {:>10} {:>10} {:>12}", "dk", "|D_L|^2", "|D_R|^2", "|C_L|^2", "|C_R|^2", "unitarity");
    for i in -12..=12 {
        let dk = i as f64 * 0.5;
        let (dl, dr) = transfer_d(params.k_c + dk, &params)?;
        let (cl, cr) = transfer_c(params.k_c + dk, &params)?;
        let u = cl.norm_sqr() + cr.norm_sqr() - 1.0;
        println!(
            "{dk:>6.1} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {u:>12.1e}",
            dl.norm_sqr(),
            dr.norm_sqr(),
            cl.norm_sqr(),
            cr.norm_sqr()
        );
    }
    Ok(())
}
