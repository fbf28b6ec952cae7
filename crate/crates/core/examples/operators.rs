//! General fractional integrals and derivatives: Riemann-Liouville and
//! Caputo type, sequential and n-fold forms, and the extended kernels.

use gfc::convops::{apply_gfd_with, apply_gfi_with, ConvConfig, OperatorForm, OperatorRequest, SingularFunction};
use gfc::kernels::KernelSpec;

fn main() -> gfc::Result<()> {
    let cfg = ConvConfig::default();
    let x = 1.0;
    let f = SingularFunction::from_power_terms(&[(3.0, 1.0), (1.0, 2.0)], &cfg)?;
    println!("f = 3 + x, f({x}) = {}", f.eval(x)?);

    let half = KernelSpec::PowerLaw(0.5);
    println!("I^0.5 f({x})       = {:.12}", apply_gfi_with(&half, 1, &f, x, &cfg)?);
    println!("I^0.5 I^0.5 f({x}) = {:.12}  (∫ f = {:.12})", apply_gfi_with(&half, 2, &f, x, &cfg)?, 3.0 * x + 0.5 * x * x);

    let rl = OperatorRequest::rl(half.clone(), 1);
    let caputo = OperatorRequest::caputo(half.clone(), 1);
    println!("RL     D^0.5 f({x}) = {:.12}", apply_gfd_with(&rl, &f, x, &cfg)?);
    println!("Caputo D^0.5 f({x}) = {:.12}", apply_gfd_with(&caputo, &f, x, &cfg)?);

    let e = SingularFunction::exp(1.0, &cfg)?;
    let seq = OperatorRequest::caputo(half.clone(), 2);
    let alt = seq.clone().with_form(OperatorForm::NfoldAlt);
    println!(
        "Caputo D^0.5 D^0.5 e^x at {x}: sequential {:.12}, n-fold {:.12}",
        apply_gfd_with(&seq, &e, x, &cfg)?,
        apply_gfd_with(&alt, &e, x, &cfg)?
    );

    // k = h_1 turns the derivatives into f itself and f - f(0)
    let h1 = KernelSpec::ExtendedH1;
    println!("RL     D_(h1) f({x}) = {}", apply_gfd_with(&OperatorRequest::rl(h1.clone(), 1), &f, x, &cfg)?);
    println!("Caputo D_(h1) f({x}) = {}", apply_gfd_with(&OperatorRequest::caputo(h1, 1), &f, x, &cfg)?);

    let singular = SingularFunction::power(0.3, &cfg)?;
    match apply_gfd_with(&caputo, &singular, x, &cfg) {
        Ok(v) => println!("Caputo of h_0.3: {v}"),
        Err(e) => println!("Caputo of h_0.3 -> [{}] {e}", e.code()),
    }
    Ok(())
}
