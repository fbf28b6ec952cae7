//! Sonine pairs from the catalog and the check (κ * k)(x) = 1.

use gfc::convops::ConvConfig;
use gfc::grammar::parse_kernel;
use gfc::kernels::{associated_kernel, sonine_check_with, SoninePair};

fn main() -> gfc::Result<()> {
    let cfg = ConvConfig::default();
    for text in ["h:0.25", "h:0.5", "h:0.75", "sum:1*h:0.625+1*h:0.375", "mlk:0.25,0.625", "h1"] {
        let kappa = parse_kernel(text)?;
        let mut pair = SoninePair::from_catalog(kappa)?;
        let report = sonine_check_with(&mut pair, 20, &cfg)?;
        println!("{:<48} max |κ*k - 1| = {:.2e}", pair.to_string(), report.residual_max);
    }

    // not a pair: h_0.5 * h_0.6 = h_1.1
    let mut wrong = SoninePair::new(parse_kernel("h:0.5")?, parse_kernel("h:0.6")?);
    let report = sonine_check_with(&mut wrong, 20, &cfg)?;
    println!("{:<48} max |κ*k - 1| = {:.2e}", wrong.to_string(), report.residual_max);

    match associated_kernel(&parse_kernel("sum:1*h:0.3+2*h:0.6")?) {
        Ok(k) => println!("partner: {k}"),
        Err(e) => println!("sum:1*h:0.3+2*h:0.6 -> {e}"),
    }
    Ok(())
}
