//! Gamma, Mittag-Leffler and multinomial Mittag-Leffler values.

use gfc::specfun::{gamma, mittag_leffler, multinomial_ml, MLParams, MultiMLParams};

fn main() -> gfc::Result<()> {
    for x in [0.5, 1.2, 4.0, -1.5] {
        println!("Γ({x}) = {:.15}", gamma(x)?);
    }
    println!("Γ(0) -> {}", gamma(0.0).unwrap_err());

    let e = MLParams::new(1.0, 1.0)?;
    println!("E_1,1(1) = {:.15}  (e = {:.15})", mittag_leffler(&e, 1.0)?, 1f64.exp());
    let half = MLParams::new(0.5, 0.5)?;
    for z in [0.0, 0.8, 1.0, -1.0] {
        println!("E_0.5,0.5({z}) = {:.15}", mittag_leffler(&half, z)?);
    }
    let thin = MLParams::new(0.2, 0.2)?;
    println!("E_0.2,0.2(-2.5) -> {}", mittag_leffler(&thin, -2.5).unwrap_err());

    // Σ over (l1, l2) of (l1+l2)!/(l1! l2!) z1^l1 z2^l2 / Γ(β + α1 l1 + α2 l2)
    let p = MultiMLParams::new(vec![0.375, 0.75], 0.0, 400)?;
    let (lambda, x) = (0.5_f64, 1.0_f64);
    let v = multinomial_ml(&p, &[lambda * x.powf(0.375), lambda * x.powf(0.75)])?;
    println!("E_(0.375,0.75),0(0.5, 0.5) = {v:.15}");
    Ok(())
}
